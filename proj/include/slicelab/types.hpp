#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slicelab/errors.hpp"
#include "slicelab/rational.hpp"

namespace slicelab {

using RealVector = std::vector<double>;

/// Dense row-major matrix with entries in {0,1}.
struct Matrix01 {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<std::uint8_t> entries;

    Matrix01() = default;
    Matrix01(int rows, int cols)
        : n_rows(rows), n_cols(cols), entries(static_cast<size_t>(rows) * cols, 0) {}

    std::uint8_t& at(int i, int j) { return entries[static_cast<size_t>(i) * n_cols + j]; }
    std::uint8_t at(int i, int j) const { return entries[static_cast<size_t>(i) * n_cols + j]; }

    bool valid() const {
        if (entries.size() != static_cast<size_t>(n_rows) * n_cols) return false;
        for (auto e : entries)
            if (e > 1) return false;
        return true;
    }

    RealVector row(int i) const {
        RealVector r(n_cols);
        for (int j = 0; j < n_cols; ++j) r[j] = at(i, j);
        return r;
    }
};

inline double norm2(const RealVector& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

/// Unit vector on the sphere; construction enforces |norm - 1| <= tol.
struct UnitVector {
    RealVector coords;

    explicit UnitVector(RealVector c, double tol = 1e-12) : coords(std::move(c)) {
        double n = norm2(coords);
        if (std::abs(n - 1.0) > tol)
            throw ParameterError("UnitVector: norm deviates from 1 by " +
                                 std::to_string(std::abs(n - 1.0)));
    }

    int dim() const { return static_cast<int>(coords.size()); }
    double operator[](size_t i) const { return coords[i]; }
};

/// Normalizes a nonzero vector onto the sphere.
inline UnitVector make_unit(RealVector x) {
    double n = norm2(x);
    if (n == 0) throw ParameterError("make_unit: zero vector");
    for (double& v : x) v /= n;
    return UnitVector(std::move(x));
}

/// Nonnegative l1-normalized function on a contiguous integer range
/// [support_offset, support_offset + masses.size()). Mass is either exact
/// rational (oracle identities) or double (large-scale evaluation); the
/// template parameter is the mode flag.
template <class Mass>
struct Density {
    std::int64_t support_offset = 0;
    std::vector<Mass> masses;
    std::optional<double> lipschitz_eta;

    Mass at(std::int64_t t) const {
        std::int64_t i = t - support_offset;
        if (i < 0 || i >= static_cast<std::int64_t>(masses.size())) return Mass(0);
        return masses[static_cast<size_t>(i)];
    }

    Mass total_mass() const {
        Mass s(0);
        for (const Mass& m : masses) s += m;
        return s;
    }
};

using DensityQ = Density<Rational>;
using DensityD = Density<double>;

inline bool unit_mass(const DensityQ& f) { return f.total_mass() == 1; }
inline bool unit_mass(const DensityD& f, double tol = 1e-12) {
    return std::abs(f.total_mass() - 1.0) <= tol;
}

/// Checks |log2 f(t+1) - log2 f(t)| <= eta across the stored support.
/// All stored masses must be strictly positive for the check to make sense.
inline bool is_log_lipschitz(const DensityD& f, double eta, double slack = 1e-9) {
    for (size_t i = 0; i + 1 < f.masses.size(); ++i) {
        if (f.masses[i] <= 0 || f.masses[i + 1] <= 0) return false;
        double d = std::abs(std::log2(f.masses[i + 1]) - std::log2(f.masses[i]));
        if (d > eta * (1 + slack) + 1e-12) return false;
    }
    return true;
}

/// f(t) = 2^{-|t|/sqrt(n)} / iota on [-halfwidth, halfwidth], normalized so the
/// stored masses sum to one. Log-Lipschitz with eta = 1/sqrt(n).
inline DensityD exp_decay_density(int n, std::int64_t halfwidth) {
    DensityD f;
    f.support_offset = -halfwidth;
    f.masses.resize(static_cast<size_t>(2 * halfwidth + 1));
    double iota = 0;
    for (std::int64_t t = -halfwidth; t <= halfwidth; ++t) {
        double v = std::exp2(-static_cast<double>(iabs(t)) / std::sqrt(double(n)));
        f.masses[static_cast<size_t>(t + halfwidth)] = v;
        iota += v;
    }
    for (double& m : f.masses) m /= iota;
    f.lipschitz_eta = 1.0 / std::sqrt(double(n));
    return f;
}

/// Distribution of the Boolean coefficient vector b in sums of the form
/// sum_i b_i x_i: independent Ber(p) bits, the uniform slice of weight m, or
/// iid bits conditioned on total weight in [pn - gamma n, pn + gamma n].
struct WeightModel {
    enum class Kind { IidBernoulli, Slice, SliceWindow };

    Kind kind = Kind::IidBernoulli;
    double p = 0.5;    // IidBernoulli, SliceWindow
    int m = 0;         // Slice
    double gamma = 0;  // SliceWindow

    static WeightModel iid(double p) {
        if (!(p > 0 && p < 1)) throw ParameterError("WeightModel: p must be in (0,1)");
        WeightModel w;
        w.kind = Kind::IidBernoulli;
        w.p = p;
        return w;
    }
    static WeightModel slice(int m) {
        if (m < 0) throw ParameterError("WeightModel: m must be >= 0");
        WeightModel w;
        w.kind = Kind::Slice;
        w.m = m;
        return w;
    }
    static WeightModel slice_window(double p, double gamma) {
        if (!(p > 0 && p < 1)) throw ParameterError("WeightModel: p must be in (0,1)");
        // gamma = p (the full window) is allowed as a boundary case.
        if (!(gamma > 0 && gamma <= p))
            throw ParameterError("WeightModel: gamma must be in (0,p]");
        WeightModel w;
        w.kind = Kind::SliceWindow;
        w.p = p;
        w.gamma = gamma;
        return w;
    }

    /// Integer weights m admitted by the model for dimension n.
    std::pair<int, int> weight_range(int n) const {
        switch (kind) {
            case Kind::IidBernoulli:
                return {0, n};
            case Kind::Slice:
                if (m > n) throw ParameterError("WeightModel: m exceeds n");
                return {m, m};
            case Kind::SliceWindow: {
                double lo = p * n - gamma * n, hi = p * n + gamma * n;
                int mlo = std::max(0, static_cast<int>(std::ceil(lo - 1e-12)));
                int mhi = std::min(n, static_cast<int>(std::floor(hi + 1e-12)));
                if (mlo > mhi)
                    throw ParameterError("WeightModel: empty slice window for n=" +
                                         std::to_string(n));
                return {mlo, mhi};
            }
        }
        return {0, n};
    }

    std::string describe() const {
        switch (kind) {
            case Kind::IidBernoulli:
                return "iid(p=" + std::to_string(p) + ")";
            case Kind::Slice:
                return "slice(m=" + std::to_string(m) + ")";
            case Kind::SliceWindow:
                return "window(p=" + std::to_string(p) + ",gamma=" + std::to_string(gamma) + ")";
        }
        return "?";
    }

    bool operator==(const WeightModel&) const = default;
};

struct Tolerances {
    double rank_zero_tol = 1e-8;
    double unit_norm_tol = 1e-12;
    double ci_z = 3.0;

    bool operator==(const Tolerances&) const = default;
};

// Knobs standing in for the absolute constants the statements leave
// unspecified. Fitted or reported, never treated as ground truth.
struct ConstantsConfig {
    double c_lkr = 1.0;        // constant in the Kolmogorov-Levy-Rogozin bound
    double l_threshold = 8.0;  // L in the threshold function scans
    double c_round_upper = 5.0;  // C in the rounding clauses (R2)/(R4)
    double c_round_lower = 0.05; // c in the rounding clause (R3), in (0,1]
    double k_opnorm = 2.0;       // operator-norm normalization for experiments
    Tolerances tolerances;

    bool operator==(const ConstantsConfig&) const = default;

    void validate() const {
        if (!(c_lkr > 0) || !(l_threshold > 0) || !(c_round_upper > 0) || !(k_opnorm > 0))
            throw ParameterError("ConstantsConfig: constants must be positive");
        if (!(c_round_lower > 0 && c_round_lower <= 1))
            throw ParameterError("ConstantsConfig: c_round_lower must be in (0,1]");
    }
};

/// One-dimensional anticoncentration value: the largest probability mass any
/// closed window of the given radius can capture.
struct ConcentrationEstimate {
    double value = 0;
    double radius = 0;
    enum class Method { Exact, Mc } method = Method::Exact;
    std::int64_t trials = 0;
    double ci_halfwidth = 0;
    WeightModel model;
};

}  // namespace slicelab
