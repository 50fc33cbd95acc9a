#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

#include "slicelab/errors.hpp"
#include "slicelab/rational.hpp"
#include "slicelab/rng.hpp"
#include "slicelab/sampling.hpp"
#include "slicelab/types.hpp"

namespace slicelab {

/// Exact law of sum_i b_i x_i under a weight model: sorted atom values with
/// duplicates merged within 1e-12, masses summing to one.
struct AtomSet {
    std::vector<double> values;
    std::vector<double> masses;
    WeightModel model;
    int n = 0;

    double max_mass() const {
        double m = 0;
        for (double v : masses) m = std::max(m, v);
        return m;
    }

    double min_value() const { return values.empty() ? 0 : values.front(); }
    double max_value() const { return values.empty() ? 0 : values.back(); }

    /// Two-column text export (value mass), one atom per line.
    void write(std::ostream& os) const {
        os.precision(17);
        for (size_t i = 0; i < values.size(); ++i)
            os << values[i] << ' ' << masses[i] << '\n';
    }
};

namespace detail {

inline void sort_merge_atoms(std::vector<std::pair<double, double>>& raw, AtomSet& out,
                             double merge_tol = 1e-12) {
    std::sort(raw.begin(), raw.end());
    out.values.clear();
    out.masses.clear();
    size_t i = 0;
    while (i < raw.size()) {
        double v = raw[i].first;
        long double m = 0;
        size_t j = i;
        while (j < raw.size() && raw[j].first - v <= merge_tol) {
            m += raw[j].second;
            ++j;
        }
        out.values.push_back(v);
        out.masses.push_back(static_cast<double>(m));
        i = j;
    }
}

/// Appends (sum, mass) pairs for every vector of {0,1}^n_m, via lexicographic
/// enumeration with incremental sums. The running sum is refreshed
/// periodically to keep floating-point drift below the merge tolerance.
inline void enumerate_slice_sums(const RealVector& x, int m, double mass_each,
                                 std::vector<std::pair<double, double>>& out) {
    const int n = static_cast<int>(x.size());
    if (m == 0) {
        out.emplace_back(0.0, mass_each);
        return;
    }
    std::vector<int> c(static_cast<size_t>(m));
    double sum = 0;
    for (int i = 0; i < m; ++i) {
        c[static_cast<size_t>(i)] = i;
        sum += x[static_cast<size_t>(i)];
    }
    std::uint64_t steps = 0;
    for (;;) {
        out.emplace_back(sum, mass_each);
        int i = m - 1;
        while (i >= 0 && c[static_cast<size_t>(i)] == n - m + i) --i;
        if (i < 0) break;
        sum -= x[static_cast<size_t>(c[static_cast<size_t>(i)])];
        c[static_cast<size_t>(i)]++;
        sum += x[static_cast<size_t>(c[static_cast<size_t>(i)])];
        for (int j = i + 1; j < m; ++j) {
            sum -= x[static_cast<size_t>(c[static_cast<size_t>(j)])];
            c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
            sum += x[static_cast<size_t>(c[static_cast<size_t>(j)])];
        }
        if ((++steps & 0xffffu) == 0) {
            sum = 0;
            for (int j = 0; j < m; ++j) sum += x[static_cast<size_t>(c[static_cast<size_t>(j)])];
        }
    }
}

inline double slice_count_total(int n, int mlo, int mhi) {
    double total = 0;
    for (int m = mlo; m <= mhi; ++m)
        total += static_cast<double>(binomial(unsigned(n), unsigned(m)));
    return total;
}

}  // namespace detail

/// Enumerates the exact law of sum_i b_i x_i. Budgets: 2^n subsets (n <= 26)
/// for the iid model, at most `max_enumerated` slice vectors otherwise.
/// Slice-window atoms carry weight p^m (1-p)^{n-m} per weight-m vector,
/// renormalized over the window.
inline AtomSet build_atoms(const RealVector& x, const WeightModel& model,
                           double max_enumerated = 1e8) {
    const int n = static_cast<int>(x.size());
    AtomSet atoms;
    atoms.model = model;
    atoms.n = n;
    std::vector<std::pair<double, double>> raw;

    switch (model.kind) {
        case WeightModel::Kind::IidBernoulli: {
            if (n > 26 || std::ldexp(1.0, n) > max_enumerated)
                throw BudgetError("build_atoms: iid model needs 2^" + std::to_string(n) +
                                  " subset sums; budget is min(2^26, " +
                                  std::to_string(max_enumerated) + ")");
            std::vector<double> mass_by_weight(static_cast<size_t>(n) + 1);
            for (int k = 0; k <= n; ++k)
                mass_by_weight[static_cast<size_t>(k)] =
                    std::pow(model.p, k) * std::pow(1 - model.p, n - k);
            raw.reserve(size_t(1) << n);
            double sum = 0;
            int ones = 0;
            std::uint64_t mask = 0;
            const std::uint64_t total = 1ull << n;
            raw.emplace_back(0.0, mass_by_weight[0]);
            for (std::uint64_t k = 1; k < total; ++k) {
                int bit = __builtin_ctzll(k);
                if (mask & (1ull << bit)) {
                    sum -= x[static_cast<size_t>(bit)];
                    --ones;
                } else {
                    sum += x[static_cast<size_t>(bit)];
                    ++ones;
                }
                mask ^= 1ull << bit;
                if ((k & 0xffffu) == 0) {
                    sum = 0;
                    for (int b = 0; b < n; ++b)
                        if (mask & (1ull << b)) sum += x[static_cast<size_t>(b)];
                }
                raw.emplace_back(sum, mass_by_weight[static_cast<size_t>(ones)]);
            }
            break;
        }
        case WeightModel::Kind::Slice: {
            auto [mlo, mhi] = model.weight_range(n);
            double count = detail::slice_count_total(n, mlo, mhi);
            if (count > max_enumerated)
                throw BudgetError("build_atoms: slice enumeration needs " +
                                  std::to_string(count) + " vectors; budget " +
                                  std::to_string(max_enumerated));
            raw.reserve(static_cast<size_t>(count));
            detail::enumerate_slice_sums(x, model.m, 1.0 / count, raw);
            break;
        }
        case WeightModel::Kind::SliceWindow: {
            auto [mlo, mhi] = model.weight_range(n);
            double count = detail::slice_count_total(n, mlo, mhi);
            if (count > max_enumerated)
                throw BudgetError("build_atoms: slice-window enumeration needs " +
                                  std::to_string(count) + " vectors; budget " +
                                  std::to_string(max_enumerated));
            long double z = 0;
            for (int m = mlo; m <= mhi; ++m)
                z += static_cast<double>(binomial(unsigned(n), unsigned(m))) *
                     std::pow(model.p, m) * std::pow(1 - model.p, n - m);
            raw.reserve(static_cast<size_t>(count));
            for (int m = mlo; m <= mhi; ++m) {
                double w = std::pow(model.p, m) * std::pow(1 - model.p, n - m) /
                           static_cast<double>(z);
                detail::enumerate_slice_sums(x, m, w, raw);
            }
            break;
        }
    }

    detail::sort_merge_atoms(raw, atoms);
    return atoms;
}

namespace detail {

inline std::vector<long double> prefix_masses(const std::vector<double>& masses) {
    std::vector<long double> p(masses.size() + 1, 0.0L);
    for (size_t i = 0; i < masses.size(); ++i) p[i + 1] = p[i] + masses[i];
    return p;
}

/// Largest mass captured by a closed window of width 2r over sorted values.
/// The sup over centers is attained with the window's left edge on an atom.
inline double max_window_mass(const std::vector<double>& values,
                              const std::vector<long double>& prefix, double r) {
    double best = 0;
    size_t j = 0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (j < i) j = i;
        while (j < values.size() && values[j] <= values[i] + 2 * r) ++j;
        best = std::max(best, static_cast<double>(prefix[j] - prefix[i]));
    }
    return best;
}

}  // namespace detail

/// Levy concentration function L(xi, r) = sup_z P[|xi - z| <= r], exact over
/// the atom set.
inline ConcentrationEstimate levy_exact(const AtomSet& atoms, double r) {
    if (r < 0) throw ParameterError("levy_exact: radius must be >= 0");
    ConcentrationEstimate e;
    e.radius = r;
    e.method = ConcentrationEstimate::Method::Exact;
    e.model = atoms.model;
    auto prefix = detail::prefix_masses(atoms.masses);
    e.value = std::min(1.0, detail::max_window_mass(atoms.values, prefix, r));
    return e;
}

/// Draws one coefficient vector of the model into `bits`.
inline void sample_weight_vector(std::uint8_t* bits, int n, const WeightModel& model,
                                 RandomSource& rng, std::vector<int>& scratch) {
    switch (model.kind) {
        case WeightModel::Kind::IidBernoulli:
            fill_bernoulli(bits, n, model.p, rng);
            break;
        case WeightModel::Kind::Slice:
            fill_slice(bits, n, model.m, rng, scratch);
            break;
        case WeightModel::Kind::SliceWindow:
            fill_slice_window(bits, n, model, rng);
            break;
    }
}

/// Monte Carlo estimate of the Levy concentration function: the maximal
/// window is scanned over the empirical sample. ci_halfwidth is the binomial
/// half-width at z.
inline ConcentrationEstimate levy_mc(const RealVector& x, double r, const WeightModel& model,
                                     std::int64_t trials, RandomSource& rng, double z = 3.0) {
    if (trials < 1000) throw ParameterError("levy_mc: need at least 10^3 trials");
    const int n = static_cast<int>(x.size());
    std::vector<double> samples(static_cast<size_t>(trials));
    std::vector<std::uint8_t> bits(static_cast<size_t>(n));
    std::vector<int> scratch;
    for (std::int64_t t = 0; t < trials; ++t) {
        sample_weight_vector(bits.data(), n, model, rng, scratch);
        double s = 0;
        for (int i = 0; i < n; ++i)
            if (bits[static_cast<size_t>(i)]) s += x[static_cast<size_t>(i)];
        samples[static_cast<size_t>(t)] = s;
    }
    std::sort(samples.begin(), samples.end());
    double best = 0;
    size_t j = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (j < i) j = i;
        while (j < samples.size() && samples[j] <= samples[i] + 2 * r) ++j;
        best = std::max(best, static_cast<double>(j - i));
    }
    ConcentrationEstimate e;
    e.radius = r;
    e.method = ConcentrationEstimate::Method::Mc;
    e.model = model;
    e.trials = trials;
    e.value = best / static_cast<double>(trials);
    e.ci_halfwidth = z * std::sqrt(std::max(e.value * (1 - e.value), 1e-12) /
                                   static_cast<double>(trials));
    return e;
}

namespace detail {

// Prefix-min segment tree with point assign/reset, used by the threshold
// sweep to answer "minimum prefix mass among window starts i with G_i < F_j".
class PrefixMinTree {
public:
    explicit PrefixMinTree(size_t n) : n_(1) {
        while (n_ < std::max<size_t>(n, 1)) n_ <<= 1;
        tree_.assign(2 * n_, std::numeric_limits<double>::infinity());
    }
    void set(size_t pos, double val) {
        size_t i = pos + n_;
        tree_[i] = val;
        for (i >>= 1; i >= 1; i >>= 1) {
            tree_[i] = std::min(tree_[2 * i], tree_[2 * i + 1]);
            if (i == 1) break;
        }
    }
    void reset(size_t pos) { set(pos, std::numeric_limits<double>::infinity()); }
    /// Minimum over positions [0, count).
    double prefix_min(size_t count) const {
        double best = std::numeric_limits<double>::infinity();
        size_t lo = n_, hi = n_ + count;
        while (lo < hi) {
            if (lo & 1) best = std::min(best, tree_[lo++]);
            if (hi & 1) best = std::min(best, tree_[--hi]);
            lo >>= 1;
            hi >>= 1;
        }
        return best;
    }

private:
    size_t n_;
    std::vector<double> tree_;
};

}  // namespace detail

/// Threshold function T = sup{ t in (0,1) : L(xi, t) > L t }, computed on the
/// breakpoint structure of the step function L(.): on each interval between
/// consecutive positive breakpoints |a_i - a_j|/2 the condition is an
/// interval in t solvable in closed form. Radii below the smallest positive
/// breakpoint are not scanned; when no interval certifies the condition the
/// function returns 0 (the defining set is treated as empty).
inline double threshold_from_atoms(const AtomSet& atoms, double levy_slope) {
    const double L = levy_slope;
    if (!(L > 0)) throw ParameterError("threshold: L must be positive");
    const size_t K = atoms.values.size();
    if (K < 2) return 0.0;

    const auto& a = atoms.values;
    auto prefix = detail::prefix_masses(atoms.masses);
    std::vector<double> pref(K + 1);
    for (size_t i = 0; i <= K; ++i) pref[i] = static_cast<double>(prefix[i]);

    double best = 0.0;

    // Single-atom plateau: L(t) >= max mass for every t past the first
    // breakpoint.
    double t1 = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < K; ++i) t1 = std::min(t1, (a[i + 1] - a[i]) / 2);
    {
        double hi = std::min(atoms.max_mass() / L, 1.0);
        if (t1 < hi) best = std::max(best, hi);
    }

    // Multi-atom windows (i..j): the window qualifies iff
    // F_j := P_{j+1} - (L/2) a_j exceeds G_i := P_i - (L/2) a_i, and its
    // radius is below 1. Sweep j ascending, keeping window starts i with
    // a_j - a_i < 2 in a prefix-min structure keyed by G rank.
    std::vector<double> g(K);
    for (size_t i = 0; i < K; ++i) g[i] = pref[i] - (L / 2) * a[i];
    std::vector<size_t> order(K);
    for (size_t i = 0; i < K; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        return g[x] < g[y] || (g[x] == g[y] && x < y);
    });
    std::vector<size_t> rank(K);
    for (size_t r = 0; r < K; ++r) rank[order[r]] = r;
    std::vector<double> g_sorted(K);
    for (size_t r = 0; r < K; ++r) g_sorted[r] = g[order[r]];

    detail::PrefixMinTree tree(K);
    size_t evict = 0;
    for (size_t j = 0; j < K; ++j) {
        if (j > 0) tree.set(rank[j - 1], pref[j - 1]);
        while (evict < j && a[evict] <= a[j] - 2) {
            tree.reset(rank[evict]);
            ++evict;
        }
        if (j == 0) continue;
        double fj = pref[j + 1] - (L / 2) * a[j];
        size_t cnt = static_cast<size_t>(
            std::lower_bound(g_sorted.begin(), g_sorted.end(), fj) - g_sorted.begin());
        if (cnt == 0) continue;
        double min_p = tree.prefix_min(cnt);
        if (!std::isfinite(min_p)) continue;
        double mass = pref[j + 1] - min_p;
        best = std::max(best, std::min(mass / L, 1.0));
    }
    return best;
}

/// T_{p,gamma}(x, L) with the conditional law enumerated exactly.
inline double threshold(const UnitVector& x, double levy_slope, double p, double gamma,
                        double max_enumerated = 1e8) {
    AtomSet atoms = build_atoms(x.coords, WeightModel::slice_window(p, gamma), max_enumerated);
    return threshold_from_atoms(atoms, levy_slope);
}

/// Monte Carlo variant: the sweep runs on the empirical atom set.
inline double threshold_mc(const RealVector& x, double levy_slope, const WeightModel& model,
                           std::int64_t trials, RandomSource& rng) {
    if (trials < 1000) throw ParameterError("threshold_mc: need at least 10^3 trials");
    const int n = static_cast<int>(x.size());
    std::vector<std::pair<double, double>> raw;
    raw.reserve(static_cast<size_t>(trials));
    std::vector<std::uint8_t> bits(static_cast<size_t>(n));
    std::vector<int> scratch;
    for (std::int64_t t = 0; t < trials; ++t) {
        sample_weight_vector(bits.data(), n, model, rng, scratch);
        double s = 0;
        for (int i = 0; i < n; ++i)
            if (bits[static_cast<size_t>(i)]) s += x[static_cast<size_t>(i)];
        raw.emplace_back(s, 1.0 / static_cast<double>(trials));
    }
    AtomSet atoms;
    atoms.model = model;
    atoms.n = n;
    detail::sort_merge_atoms(raw, atoms);
    return threshold_from_atoms(atoms, levy_slope);
}

/// Plug-in Kolmogorov-Levy-Rogozin bound
///   C r / sqrt( sum_i (1 - L(xi_i, r_i)) r_i^2 ).
inline double lkr_bound(const std::vector<std::pair<double, double>>& levy_terms, double r,
                        double c_lkr) {
    if (levy_terms.empty()) throw ParameterError("lkr_bound: no terms");
    double denom = 0;
    double max_ri = 0;
    for (auto [levy_i, r_i] : levy_terms) {
        if (!(r_i > 0)) throw ParameterError("lkr_bound: radii must be positive");
        if (levy_i < 0 || levy_i > 1) throw ParameterError("lkr_bound: levy value outside [0,1]");
        denom += (1 - levy_i) * r_i * r_i;
        max_ri = std::max(max_ri, r_i);
    }
    if (r < max_ri) throw ParameterError("lkr_bound: r must be >= max r_i");
    if (denom <= 0) throw ParameterError("lkr_bound: degenerate input, all terms concentrated");
    return c_lkr * r / std::sqrt(denom);
}

}  // namespace slicelab
