#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "slicelab/admissible.hpp"
#include "slicelab/anticoncentration.hpp"
#include "slicelab/errors.hpp"
#include "slicelab/rational.hpp"
#include "slicelab/rng.hpp"
#include "slicelab/types.hpp"

namespace slicelab {

/// Literal slice average
///   f_{A,s,l}(t) = C(l,s)^{-1} sum_{v in {0,1}^l_s} f(t + v_1 X_1 + ... + v_l X_l).
/// Exact in rational mode. Cost C(l,s) function evaluations; refuses past 1e7.
template <class Mass>
Mass eval_f_direct(const Density<Mass>& f, const LatticePoint& x, int s, int ell,
                   std::int64_t t) {
    if (s < 0 || s > ell || ell > static_cast<int>(x.size()))
        throw ParameterError("eval_f_direct: need 0 <= s <= ell <= dim(X)");
    BigInt combos = binomial(unsigned(ell), unsigned(s));
    if (combos > 10000000)
        throw BudgetError("eval_f_direct: C(" + std::to_string(ell) + "," + std::to_string(s) +
                          ") = " + combos.str() + " exceeds the 1e7 budget");
    Mass total(0);
    if (s == 0) {
        total = f.at(t);
        return total;
    }
    std::vector<int> c(static_cast<size_t>(s));
    std::int64_t sum = 0;
    for (int i = 0; i < s; ++i) {
        c[static_cast<size_t>(i)] = i;
        sum += x[static_cast<size_t>(i)];
    }
    for (;;) {
        total += f.at(t + sum);
        int i = s - 1;
        while (i >= 0 && c[static_cast<size_t>(i)] == ell - s + i) --i;
        if (i < 0) break;
        sum -= x[static_cast<size_t>(c[static_cast<size_t>(i)])];
        c[static_cast<size_t>(i)]++;
        sum += x[static_cast<size_t>(c[static_cast<size_t>(i)])];
        for (int j = i + 1; j < s; ++j) {
            sum -= x[static_cast<size_t>(c[static_cast<size_t>(j)])];
            c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
            sum += x[static_cast<size_t>(c[static_cast<size_t>(j)])];
        }
    }
    if constexpr (std::is_same_v<Mass, Rational>) {
        return total / Rational(combos);
    } else {
        return total / static_cast<double>(combos);
    }
}

/// Dynamic program over the recursion
///   f_{A,s,l}(t) = (1 - s/l) f_{A,s,l-1}(t) + (s/l) f_{A,s-1,l-1}(t + X_l),
/// memoizing sparse supports for every (s', l') below the target. Terms with
/// coefficient zero are never evaluated.
template <class Mass>
class SmoothingTable {
public:
    SmoothingTable(const Density<Mass>& f, const LatticePoint& x, int s_max, int ell_max)
        : s_max_(s_max), ell_max_(ell_max) {
        if (s_max < 0 || s_max > ell_max || ell_max > static_cast<int>(x.size()))
            throw ParameterError("SmoothingTable: need 0 <= s <= ell <= dim(X)");
        table_.resize(static_cast<size_t>(ell_max + 1));
        std::map<std::int64_t, Mass> base;
        for (size_t i = 0; i < f.masses.size(); ++i) {
            if (f.masses[i] != Mass(0))
                base[f.support_offset + static_cast<std::int64_t>(i)] = f.masses[i];
        }
        table_[0].push_back(base);  // f_{A,0,0} = f
        for (int ell = 1; ell <= ell_max; ++ell) {
            const std::int64_t xl = x[static_cast<size_t>(ell - 1)];
            int s_hi = std::min(ell, s_max);
            table_[static_cast<size_t>(ell)].resize(static_cast<size_t>(s_hi) + 1);
            for (int s = 0; s <= s_hi; ++s) {
                std::map<std::int64_t, Mass>& out = table_[static_cast<size_t>(ell)][static_cast<size_t>(s)];
                Mass c_keep = coeff(ell - s, ell);
                Mass c_step = coeff(s, ell);
                if (s < ell) {
                    for (const auto& [t, v] : level(ell - 1, s)) {
                        if (v != Mass(0)) out[t] += c_keep * v;
                    }
                }
                if (s > 0) {
                    for (const auto& [t, v] : level(ell - 1, s - 1)) {
                        if (v != Mass(0)) out[t - xl] += c_step * v;
                    }
                }
            }
        }
    }

    Mass value(int s, int ell, std::int64_t t) const {
        const auto& m = level(ell, s);
        auto it = m.find(t);
        return it == m.end() ? Mass(0) : it->second;
    }

    int s_max() const { return s_max_; }
    int ell_max() const { return ell_max_; }

private:
    static Mass coeff(int num, int den) {
        if constexpr (std::is_same_v<Mass, Rational>) {
            return Rational(num, den);
        } else {
            return static_cast<double>(num) / static_cast<double>(den);
        }
    }

    const std::map<std::int64_t, Mass>& level(int ell, int s) const {
        if (ell < 0 || ell > ell_max_ || s < 0 || s > ell)
            throw ParameterError("SmoothingTable: (s,ell) out of range");
        if (ell == 0) return table_[0][0];
        if (s >= static_cast<int>(table_[static_cast<size_t>(ell)].size()))
            throw ParameterError("SmoothingTable: s exceeds the built range");
        return table_[static_cast<size_t>(ell)][static_cast<size_t>(s)];
    }

    int s_max_;
    int ell_max_;
    // table_[ell][s] = sparse support of f_{A,s,ell}; ell = 0 stores only f.
    std::vector<std::vector<std::map<std::int64_t, Mass>>> table_;
};

/// Greedy trace through the recursion at a point: averaging sequence (t_i),
/// step record (w_i), and value trace (h_i) with h_0 >= h_1 >= ... >= h_ell.
struct StepRecord {
    int ell = 0;
    int s = 0;
    std::vector<std::int64_t> t_seq;       // t_0 .. t_ell
    std::vector<std::uint8_t> w_seq;       // w_1 .. w_ell
    std::vector<Rational> h_seq;           // h_0 .. h_ell

    int weight_prefix(int i) const {  // W_i = w_1 + ... + w_i
        int w = 0;
        for (int j = 0; j < i; ++j) w += w_seq[static_cast<size_t>(j)];
        return w;
    }
};

/// Builds the step record of Definition "step record / averaging sequence":
/// at each level the branch whose term has positive coefficient and value at
/// least h_i is followed, checking the keep-branch first.
inline StepRecord build_step_record(const SmoothingTable<Rational>& table, const LatticePoint& x,
                                    int s, int ell, std::int64_t t) {
    StepRecord rec;
    rec.ell = ell;
    rec.s = s;
    rec.t_seq.assign(static_cast<size_t>(ell) + 1, 0);
    rec.w_seq.assign(static_cast<size_t>(ell), 0);
    rec.h_seq.assign(static_cast<size_t>(ell) + 1, Rational(0));

    Rational h = table.value(s, ell, t);
    if (h == 0) throw ParameterError("build_step_record: f_{A,s,ell}(t) must be positive");

    int cur_s = s;
    std::int64_t cur_t = t;
    rec.t_seq[static_cast<size_t>(ell)] = t;
    rec.h_seq[static_cast<size_t>(ell)] = h;
    for (int i = ell; i >= 1; --i) {
        const std::int64_t xi = x[static_cast<size_t>(i - 1)];
        const Rational hi = rec.h_seq[static_cast<size_t>(i)];
        bool take_former = false;
        if (cur_s < i) {  // keep-branch coefficient (1 - s/i) positive
            if (table.value(cur_s, i - 1, cur_t) >= hi) take_former = true;
        }
        if (!take_former) {
            if (!(cur_s > 0 && table.value(cur_s - 1, i - 1, cur_t + xi) >= hi))
                throw std::logic_error("build_step_record: neither branch dominates");
        }
        const int w = take_former ? 0 : 1;
        rec.w_seq[static_cast<size_t>(i - 1)] = static_cast<std::uint8_t>(w);
        cur_t += w * xi;
        cur_s -= w;
        rec.t_seq[static_cast<size_t>(i - 1)] = cur_t;
        rec.h_seq[static_cast<size_t>(i - 1)] = table.value(cur_s, i - 1, cur_t);
    }
    return rec;
}

inline StepRecord build_step_record(const DensityQ& f, const LatticePoint& x, int s, int ell,
                                    std::int64_t t) {
    SmoothingTable<Rational> table(f, x, s, ell);
    return build_step_record(table, x, s, ell, t);
}

/// Both sides of the exact identity
///   prod_i (1 - Wbar_i)^{1-w_i} Wbar_i^{w_i} = C(ell, s)^{-1};
/// each side equals the probability that a uniform point of the slice
/// reproduces the step record.
inline std::pair<Rational, Rational> product_identity_check(const StepRecord& rec) {
    Rational lhs = 1;
    int w_sum = 0;
    for (int i = 1; i <= rec.ell; ++i) {
        w_sum += rec.w_seq[static_cast<size_t>(i - 1)];
        Rational wbar(w_sum, i);
        lhs *= rec.w_seq[static_cast<size_t>(i - 1)] ? wbar : 1 - wbar;
    }
    Rational rhs = Rational(1) / Rational(binomial(unsigned(rec.ell), unsigned(rec.s)));
    return {lhs, rhs};
}

struct StepFlags {
    bool robust = false;
    bool drop = false;
};

/// Per-step classification: step i is lambda-robust when Wbar_i lies in
/// (lambda, 1-lambda); it is an R-drop when all four probes
/// f_{A, W_i - y, i-1}(t_{i-1} + z X_i), y in {0,1}, z in {-1,1}, fall to
/// R/(N sqrt(n)) or below. Probes with out-of-range weight (W_i - y < 0 or
/// > i-1) vanish identically and count as small.
inline std::vector<StepFlags> classify_steps(const StepRecord& rec,
                                             const SmoothingTable<Rational>& table,
                                             const LatticePoint& x, double lambda, double r_drop,
                                             std::int64_t n_scale, int ambient_n) {
    std::vector<StepFlags> flags(static_cast<size_t>(rec.ell));
    const double thresh =
        r_drop / (static_cast<double>(n_scale) * std::sqrt(static_cast<double>(ambient_n)));
    int w_sum = 0;
    for (int i = 1; i <= rec.ell; ++i) {
        w_sum += rec.w_seq[static_cast<size_t>(i - 1)];
        StepFlags& f = flags[static_cast<size_t>(i - 1)];
        double wbar = static_cast<double>(w_sum) / i;
        f.robust = wbar > lambda && wbar < 1 - lambda;
        f.drop = true;
        const std::int64_t xi = x[static_cast<size_t>(i - 1)];
        const std::int64_t t_prev = rec.t_seq[static_cast<size_t>(i - 1)];
        for (int y = 0; y <= 1 && f.drop; ++y) {
            int sp = w_sum - y;
            if (sp < 0 || sp > i - 1) continue;  // vanishing probe
            for (int z = -1; z <= 1 && f.drop; z += 2) {
                if (to_double(table.value(sp, i - 1, t_prev + z * xi)) > thresh) f.drop = false;
            }
        }
    }
    return flags;
}

/// One sampled point of the admissible-set density experiment.
struct InversionSample {
    std::int64_t sample_id = 0;
    double levy_value = 0;
    ConcentrationEstimate::Method method = ConcentrationEstimate::Method::Exact;
    bool exceeds = false;
};

struct InversionResult {
    double fraction = 0;
    double ci_halfwidth = 0;
    double threshold = 0;  // L / N
    std::vector<InversionSample> samples;
};

/// Estimates |{x in A : L_{p,gamma}(sum b_i x_i, sqrt(n)) >= L/N}| / |A| by
/// sampling uniform points of A. The conditional Levy value is exact while
/// the slice-window enumeration fits the budget, Monte Carlo past it.
inline InversionResult inversion_experiment(const AdmissibleSet& a, double p, double gamma,
                                            double levy_slope, std::int64_t samples,
                                            RandomSource& rng, double ci_z = 3.0,
                                            double exact_budget = 2e6,
                                            std::int64_t mc_trials = 100000) {
    InversionResult res;
    res.threshold = levy_slope / static_cast<double>(a.N);
    const double radius = std::sqrt(static_cast<double>(a.n));
    const WeightModel model = WeightModel::slice_window(p, gamma);
    std::int64_t hits = 0;
    for (std::int64_t id = 0; id < samples; ++id) {
        LatticePoint pt = sample_admissible_point(a, rng);
        RealVector x(pt.begin(), pt.end());
        InversionSample s;
        s.sample_id = id;
        try {
            AtomSet atoms = build_atoms(x, model, exact_budget);
            s.levy_value = levy_exact(atoms, radius).value;
            s.method = ConcentrationEstimate::Method::Exact;
        } catch (const BudgetError&) {
            s.levy_value = levy_mc(x, radius, model, mc_trials, rng, ci_z).value;
            s.method = ConcentrationEstimate::Method::Mc;
        }
        s.exceeds = s.levy_value >= res.threshold;
        if (s.exceeds) ++hits;
        res.samples.push_back(s);
    }
    res.fraction = samples > 0 ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
    res.ci_halfwidth =
        samples > 0
            ? ci_z * std::sqrt(std::max(res.fraction * (1 - res.fraction),
                                        1.0 / static_cast<double>(samples)) /
                               static_cast<double>(samples))
            : 0.0;
    return res;
}

}  // namespace slicelab
