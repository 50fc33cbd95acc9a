#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "slicelab/errors.hpp"
#include "slicelab/types.hpp"

namespace slicelab {

struct ConsParams {
    double delta;
    double rho;

    ConsParams(double d, double r) : delta(d), rho(r) {
        if (!(d > 0 && d < 1 && r > 0 && r < 1))
            throw ParameterError("ConsParams: delta, rho must lie in (0,1)");
    }
};

struct ConsResult {
    bool member = false;
    double lambda = 0;  // witness center, defined when member
};

/// Almost-constant membership: does some lambda capture at least (1-delta)n
/// coordinates within rho/sqrt(n)? Decided exactly by sliding a closed window
/// of width 2 rho/sqrt(n) over the sorted coordinates. Ties between maximal
/// windows break toward smaller lambda; the witness is the midrange of the
/// captured group.
inline ConsResult cons_membership(const UnitVector& x, const ConsParams& params) {
    const int n = x.dim();
    const double w = 2 * params.rho / std::sqrt(double(n));
    std::vector<double> s = x.coords;
    std::sort(s.begin(), s.end());

    int best_count = 0;
    double best_lambda = 0;
    size_t j = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (j < i) j = i;
        while (j < s.size() && s[j] - s[i] <= w) ++j;
        int count = static_cast<int>(j - i);
        if (count > best_count) {
            best_count = count;
            best_lambda = (s[i] + s[j - 1]) / 2;
        }
    }

    ConsResult r;
    r.member = best_count >= (1 - params.delta) * n;
    if (r.member) r.lambda = best_lambda;
    return r;
}

/// Smallest i with |x - e_i|_2 <= delta, or nothing. For unit x the distance
/// squared is 2 - 2 x_i.
inline std::optional<int> coord_membership(const UnitVector& x, double delta) {
    const double thresh = 1 - delta * delta / 2;
    for (int i = 0; i < x.dim(); ++i)
        if (x[static_cast<size_t>(i)] >= thresh) return i;
    return std::nullopt;
}

/// Constructive certificate that a non-almost-constant vector splits into two
/// linearly sized coordinate classes at scale 1/sqrt(n): either a small class
/// and a separated larger-magnitude class (case P) or two sign classes
/// (case Q).
struct DecompositionWitness {
    enum class Case { P, Q, AlmostConstant } witness_case = Case::AlmostConstant;
    double kappa = 0;
    double kappa_prime = 0;
    double nu = 0;
    double nu_prime = 0;  // case P only
    std::vector<int> index_set_1;
    std::vector<int> index_set_2;
    std::vector<double> kappa_grid;  // candidate levels examined for this call
    double lambda = 0;               // case AlmostConstant only

    void verify(const UnitVector& x) const {
        const double rt = std::sqrt(double(x.dim()));
        const double min_size = nu * x.dim();
        if (witness_case == Case::AlmostConstant) return;
        if (static_cast<double>(index_set_1.size()) < min_size ||
            static_cast<double>(index_set_2.size()) < min_size)
            throw std::logic_error("DecompositionWitness: index set below nu*n");
        if (witness_case == Case::P) {
            for (int i : index_set_1)
                if (!(std::abs(x[static_cast<size_t>(i)]) <= kappa / rt))
                    throw std::logic_error("DecompositionWitness: P small-class violation");
            for (int i : index_set_2) {
                double v = std::abs(x[static_cast<size_t>(i)]);
                if (!((kappa + nu_prime) / rt < v && v <= kappa_prime / rt))
                    throw std::logic_error("DecompositionWitness: P large-class violation");
            }
        } else {
            for (int i : index_set_1) {
                double v = x[static_cast<size_t>(i)];
                if (!(kappa / rt < v && v < kappa_prime / rt))
                    throw std::logic_error("DecompositionWitness: Q positive-class violation");
            }
            for (int i : index_set_2) {
                double v = x[static_cast<size_t>(i)];
                if (!(-kappa_prime / rt < v && v < -kappa / rt))
                    throw std::logic_error("DecompositionWitness: Q negative-class violation");
            }
        }
    }
};

/// Case split of the decomposition, implemented literally from the proof:
/// I_0 = {i : |x_i| <= 4/sqrt(delta n)}, the small-coordinate count against
/// delta n/16, and the interval decomposition of [0, 4/sqrt(delta n)] into
/// steps of rho/(10 sqrt(n)). The witness parameters come from the data and
/// are verified before returning.
inline DecompositionWitness nonconstant_decompose(const UnitVector& x,
                                                  const ConsParams& params) {
    if (!(params.delta < 0.25 && params.rho < 0.25))
        throw ParameterError("nonconstant_decompose: delta, rho must lie in (0,1/4)");

    DecompositionWitness w;
    ConsResult cons = cons_membership(x, params);
    if (cons.member) {
        w.witness_case = DecompositionWitness::Case::AlmostConstant;
        w.lambda = cons.lambda;
        return w;
    }

    const int n = x.dim();
    const double rt = std::sqrt(double(n));
    const double delta = params.delta;
    const double rho = params.rho;
    const double big = 4 / std::sqrt(delta * n);      // I_0 cutoff (absolute scale)
    const double step = rho / (10 * rt);              // interval width (absolute scale)
    w.kappa_grid = {rho / 20, rho / 10, 4 / std::sqrt(delta), 8 / std::sqrt(delta)};

    std::vector<int> small_abs, pos, neg;
    for (int i = 0; i < n; ++i) {
        double v = x[static_cast<size_t>(i)];
        if (std::abs(v) > big) continue;  // outside I_0
        if (std::abs(v) < step)
            small_abs.push_back(i);
        else if (v > 0)
            pos.push_back(i);
        else
            neg.push_back(i);
    }
    const double cell = delta * n / 16;

    if (static_cast<double>(small_abs.size()) >= cell) {
        // Case I: a linear mass of near-zero coordinates. All coordinates at
        // least rho/sqrt(n) in magnitude but inside I_0 form the far class.
        w.witness_case = DecompositionWitness::Case::P;
        w.kappa = rho / 10;
        w.kappa_prime = 4 / std::sqrt(delta);
        w.nu = delta / 16;
        w.nu_prime = 0.8 * rho;
        w.index_set_1 = small_abs;
        for (int i = 0; i < n; ++i) {
            double v = std::abs(x[static_cast<size_t>(i)]);
            if (v >= rho / rt && v <= big) w.index_set_2.push_back(i);
        }
        w.verify(x);
        return w;
    }

    if (static_cast<double>(pos.size()) >= cell && static_cast<double>(neg.size()) >= cell) {
        // Case II: two sign classes of linear size.
        w.witness_case = DecompositionWitness::Case::Q;
        w.kappa = rho / 20;
        w.kappa_prime = 8 / std::sqrt(delta);
        w.nu = delta / 16;
        w.index_set_1 = pos;
        w.index_set_2 = neg;
        w.verify(x);
        return w;
    }

    // Case III: almost all of I_0 lies on one side. Work on that side's
    // interval decomposition.
    const bool positive_side = pos.size() >= neg.size();
    const double sign = positive_side ? 1.0 : -1.0;

    auto cum_count = [&](int ell) {
        // #{i : sign * x_i in [0, ell * step)}
        int c = 0;
        for (int i = 0; i < n; ++i) {
            double v = sign * x[static_cast<size_t>(i)];
            if (v >= 0 && v < ell * step) ++c;
        }
        return c;
    };
    const int levels = static_cast<int>(std::ceil(big / step)) + 1;
    int ell0 = levels;
    for (int ell = 1; ell <= levels; ++ell) {
        if (static_cast<double>(cum_count(ell)) >= cell) {
            ell0 = ell;
            break;
        }
    }

    w.witness_case = DecompositionWitness::Case::P;
    w.kappa = ell0 * rho / 10;
    w.kappa_prime = 4 / std::sqrt(delta);
    w.nu = delta / 16;
    w.nu_prime = rho / 5;
    w.kappa_grid.push_back(w.kappa);
    for (int i = 0; i < n; ++i) {
        double v = sign * x[static_cast<size_t>(i)];
        if (v >= 0 && v < ell0 * step) w.index_set_1.push_back(i);
        if (v > (ell0 + 2) * step && std::abs(v) <= big) w.index_set_2.push_back(i);
    }
    w.verify(x);
    return w;
}

}  // namespace slicelab
