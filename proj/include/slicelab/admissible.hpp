#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "slicelab/errors.hpp"
#include "slicelab/rng.hpp"
#include "slicelab/sampling.hpp"
#include "slicelab/structured.hpp"

namespace slicelab {

/// One coordinate set of a product set: an integer interval [lo1, hi1], or a
/// union of two disjoint intervals [lo1, hi1] and [lo2, hi2].
struct IntegerSet {
    std::int64_t lo1 = 0, hi1 = -1;
    bool two = false;
    std::int64_t lo2 = 0, hi2 = -1;

    static IntegerSet interval(std::int64_t lo, std::int64_t hi) {
        IntegerSet s;
        s.lo1 = lo;
        s.hi1 = hi;
        return s;
    }
    static IntegerSet two_intervals(std::int64_t lo1, std::int64_t hi1, std::int64_t lo2,
                                    std::int64_t hi2) {
        IntegerSet s;
        s.lo1 = lo1;
        s.hi1 = hi1;
        s.two = true;
        s.lo2 = lo2;
        s.hi2 = hi2;
        return s;
    }

    std::int64_t size() const {
        std::int64_t n = hi1 >= lo1 ? hi1 - lo1 + 1 : 0;
        if (two && hi2 >= lo2) n += hi2 - lo2 + 1;
        return n;
    }
    std::int64_t max_abs() const {
        std::int64_t m = std::max(iabs(lo1), iabs(hi1));
        if (two) m = std::max(m, std::max(iabs(lo2), iabs(hi2)));
        return m;
    }
    bool contains(std::int64_t v) const {
        return (v >= lo1 && v <= hi1) || (two && v >= lo2 && v <= hi2);
    }
    /// Set equals its reflection through 0.
    bool symmetric_about_zero() const {
        if (!two) return lo1 == -hi1;
        return (lo1 == -hi2 && hi1 == -lo2) || (lo2 == -hi1 && hi2 == -lo1);
    }
    bool intersects(std::int64_t lo, std::int64_t hi) const {
        if (hi1 >= lo1 && lo1 <= hi && hi1 >= lo) return true;
        if (two && hi2 >= lo2 && lo2 <= hi && hi2 >= lo) return true;
        return false;
    }
    bool contained_in(double lo, double hi) const {
        bool ok = lo1 >= lo && hi1 <= hi;
        if (two) ok = ok && lo2 >= lo && hi2 <= hi;
        return ok;
    }
    std::int64_t kth(std::int64_t k) const {
        std::int64_t n1 = hi1 >= lo1 ? hi1 - lo1 + 1 : 0;
        if (k < n1) return lo1 + k;
        return lo2 + (k - n1);
    }
};

/// Product set A = A_1 x ... x A_n with the interval/symmetry structure that
/// encodes a non-almost-constant direction at scale N.
struct AdmissibleSet {
    std::int64_t N = 1;
    int n = 1;
    double K1 = 2, K2 = 3, K3 = 4;
    double delta = 0.1;
    enum class Variant { P, Q } variant = Variant::P;
    std::vector<IntegerSet> coordinate_sets;

    double log_size() const {
        double s = 0;
        for (const auto& a : coordinate_sets) s += std::log(double(a.size()));
        return s;
    }
};

struct AdmissibleViolation {
    std::string clause;  // e.g. "size-product", "max-abs", "tail-interval", "P2"
    int coordinate;      // 1-based, or 0 for global clauses
    std::string message;
};

/// Checks every structural clause; an empty result means the set is
/// admissible. Violations are data, not errors.
inline std::vector<AdmissibleViolation> validate_admissible(const AdmissibleSet& a) {
    std::vector<AdmissibleViolation> v;
    const int n = a.n;
    auto fail = [&](const std::string& clause, int coord, const std::string& msg) {
        v.push_back({clause, coord, msg});
    };

    if (!(a.delta > 0 && a.delta < 0.25)) fail("delta-range", 0, "delta outside (0,1/4)");
    if (!(a.K3 > a.K2 && a.K2 > a.K1 && a.K1 > 1)) fail("k-order", 0, "need K3 > K2 > K1 > 1");
    if (static_cast<int>(a.coordinate_sets.size()) != n)
        fail("shape", 0, "coordinate set count differs from n");
    if (!v.empty()) return v;

    for (int i = 1; i <= n; ++i) {
        const IntegerSet& s = a.coordinate_sets[static_cast<size_t>(i - 1)];
        if (s.size() <= 0) fail("empty-set", i, "coordinate set is empty");
        if (s.max_abs() > a.n * a.N) fail("max-abs", i, "entry exceeds nN");
    }

    double logbound = n * std::log(double(a.K3) * double(a.N));
    if (a.log_size() > logbound + 1e-9)
        fail("size-product", 0, "product of sizes exceeds (K3 N)^n");

    const double dn = a.delta * n;
    for (int i = 1; i <= n; ++i) {
        const IntegerSet& s = a.coordinate_sets[static_cast<size_t>(i - 1)];
        if (i > 2 * dn) {
            if (s.two || s.size() < 2 * a.N + 1)
                fail("tail-interval", i, "A_i must be one interval of size >= 2N+1");
        }
    }
    for (int i = 1; i <= static_cast<int>(dn); ++i) {
        const IntegerSet& even = a.coordinate_sets[static_cast<size_t>(2 * i - 1)];
        const IntegerSet& odd = a.coordinate_sets[static_cast<size_t>(2 * i - 2)];
        if (a.variant == AdmissibleSet::Variant::P) {
            if (even.two || even.size() < 2 * a.N + 1 ||
                !even.contained_in(-a.K1 * a.N, a.K1 * a.N))
                fail("P1", 2 * i, "A_{2i} must be an interval of size >= 2N+1 in [-K1 N, K1 N]");
            if (!odd.symmetric_about_zero() || !odd.two || odd.size() < 2 * a.N ||
                odd.intersects(static_cast<std::int64_t>(std::ceil(-a.K2 * a.N)),
                               static_cast<std::int64_t>(std::floor(a.K2 * a.N))))
                fail("P2", 2 * i - 1,
                     "A_{2i-1} must be a symmetric union of two intervals of total size >= 2N "
                     "avoiding [-K2 N, K2 N]");
        } else {
            if (even.two || even.size() < 2 * a.N + 1 ||
                !even.contained_in(a.K1 * a.N, a.K2 * a.N))
                fail("Q1", 2 * i, "A_{2i} must be an interval of size >= 2N+1 in [K1 N, K2 N]");
            if (odd.two || odd.size() < 2 * a.N + 1 ||
                !odd.contained_in(-a.K2 * a.N, -a.K1 * a.N))
                fail("Q2", 2 * i - 1,
                     "A_{2i-1} must be an interval of size >= 2N+1 in [-K2 N, -K1 N]");
        }
    }
    return v;
}

/// Coordinate i uniform on A_i, independent across coordinates. Degenerate
/// product sets (down to singletons) are samplable; structural admissibility
/// is checked by validate_admissible where an experiment requires it.
inline LatticePoint sample_admissible_point(const AdmissibleSet& a, RandomSource& rng) {
    if (static_cast<int>(a.coordinate_sets.size()) != a.n)
        throw ParameterError("sample_admissible_point: coordinate set count differs from n");
    for (const IntegerSet& s : a.coordinate_sets)
        if (s.size() <= 0)
            throw ParameterError("sample_admissible_point: empty coordinate set");
    LatticePoint p(static_cast<size_t>(a.n));
    for (int i = 0; i < a.n; ++i) {
        const IntegerSet& s = a.coordinate_sets[static_cast<size_t>(i)];
        p[static_cast<size_t>(i)] =
            s.kth(static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(s.size()))));
    }
    return p;
}

/// Canonical valid set for demos and experiments: all coordinates are
/// centered intervals of size 2N+1, with the first 2*floor(delta n)
/// coordinates arranged per the requested variant.
inline AdmissibleSet make_admissible_demo(std::int64_t N, int n, double K1, double K2, double K3,
                                          double delta, AdmissibleSet::Variant variant) {
    AdmissibleSet a;
    a.N = N;
    a.n = n;
    a.K1 = K1;
    a.K2 = K2;
    a.K3 = K3;
    a.delta = delta;
    a.variant = variant;
    a.coordinate_sets.assign(static_cast<size_t>(n), IntegerSet::interval(-N, N));
    const int pairs = static_cast<int>(delta * n);
    for (int i = 1; i <= pairs; ++i) {
        if (variant == AdmissibleSet::Variant::P) {
            std::int64_t lo = static_cast<std::int64_t>(std::floor(K2 * N)) + 1;
            a.coordinate_sets[static_cast<size_t>(2 * i - 2)] =
                IntegerSet::two_intervals(-lo - N + 1, -lo, lo, lo + N - 1);
            a.coordinate_sets[static_cast<size_t>(2 * i - 1)] = IntegerSet::interval(-N, N);
        } else {
            std::int64_t lo = static_cast<std::int64_t>(std::ceil(K1 * N));
            a.coordinate_sets[static_cast<size_t>(2 * i - 2)] =
                IntegerSet::interval(-lo - 2 * N, -lo);
            a.coordinate_sets[static_cast<size_t>(2 * i - 1)] = IntegerSet::interval(lo, lo + 2 * N);
        }
    }
    return a;
}

/// Rescales a decomposition witness for v into an admissible set around the
/// rounded lattice point D v, in the style of the structure-theorem proof.
/// Returns an empty optional when the witness geometry cannot fit the
/// max-abs <= nN clause at this (n, N).
inline std::optional<AdmissibleSet> admissible_from_witness(const UnitVector& v,
                                                            const DecompositionWitness& w,
                                                            std::int64_t N) {
    if (w.witness_case == DecompositionWitness::Case::AlmostConstant) return std::nullopt;
    const int n = v.dim();
    const double rt = std::sqrt(double(n));

    double min_mag = 1e300, max_mag = 0;
    auto scan = [&](const std::vector<int>& idx) {
        for (int i : idx) {
            double m = std::abs(v[static_cast<size_t>(i)]);
            min_mag = std::min(min_mag, m);
            max_mag = std::max(max_mag, m);
        }
    };
    if (w.witness_case == DecompositionWitness::Case::Q) {
        scan(w.index_set_1);
        scan(w.index_set_2);
    } else {
        scan(w.index_set_2);  // only the separated class constrains the scale
    }
    if (min_mag <= 0) return std::nullopt;

    // Choose the rescaling so the separated class clears 3N.
    const double D = 3.0 * static_cast<double>(N) / min_mag;
    auto round_coord = [&](int i) {
        return static_cast<std::int64_t>(std::llround(D * v[static_cast<size_t>(i)]));
    };

    AdmissibleSet a;
    a.N = N;
    a.n = n;
    a.delta = std::min(0.24, static_cast<double>(std::min(w.index_set_1.size(),
                                                          w.index_set_2.size())) /
                                 static_cast<double>(n));
    int pairs = static_cast<int>(a.delta * n);
    if (pairs < 1) return std::nullopt;

    a.coordinate_sets.assign(static_cast<size_t>(n), IntegerSet());
    std::vector<bool> used(static_cast<size_t>(n), false);

    const std::int64_t max_center = static_cast<std::int64_t>(n) * N - N;

    if (w.witness_case == DecompositionWitness::Case::Q) {
        // Positive class on even slots, negative class on odd slots.
        std::int64_t min_abs_c = std::numeric_limits<std::int64_t>::max(), max_abs_c = 0;
        for (int k = 0; k < pairs; ++k) {
            std::int64_t cpos = round_coord(w.index_set_1[static_cast<size_t>(k)]);
            std::int64_t cneg = round_coord(w.index_set_2[static_cast<size_t>(k)]);
            if (cpos + N > max_center + N || -cneg + N > max_center + N) return std::nullopt;
            a.coordinate_sets[static_cast<size_t>(2 * k + 1)] =
                IntegerSet::interval(cpos - N, cpos + N);
            a.coordinate_sets[static_cast<size_t>(2 * k)] =
                IntegerSet::interval(cneg - N, cneg + N);
            used[static_cast<size_t>(w.index_set_1[static_cast<size_t>(k)])] = true;
            used[static_cast<size_t>(w.index_set_2[static_cast<size_t>(k)])] = true;
            min_abs_c = std::min({min_abs_c, iabs(cpos), iabs(cneg)});
            max_abs_c = std::max({max_abs_c, iabs(cpos), iabs(cneg)});
        }
        if (min_abs_c - N <= N) return std::nullopt;
        a.variant = AdmissibleSet::Variant::Q;
        a.K1 = static_cast<double>(min_abs_c - N) / static_cast<double>(N);
        a.K2 = static_cast<double>(max_abs_c + N) / static_cast<double>(N);
        a.K3 = a.K2 + 1;
    } else {
        // Small class on even slots, separated class on symmetric odd slots.
        std::int64_t max_small_c = 0, min_big_c = std::numeric_limits<std::int64_t>::max(),
                     max_big_c = 0;
        for (int k = 0; k < pairs; ++k) {
            std::int64_t csmall = round_coord(w.index_set_1[static_cast<size_t>(k)]);
            std::int64_t cbig = iabs(round_coord(w.index_set_2[static_cast<size_t>(k)]));
            a.coordinate_sets[static_cast<size_t>(2 * k + 1)] =
                IntegerSet::interval(csmall - N, csmall + N);
            a.coordinate_sets[static_cast<size_t>(2 * k)] =
                IntegerSet::two_intervals(-cbig - N + 1, -cbig, cbig, cbig + N - 1);
            used[static_cast<size_t>(w.index_set_1[static_cast<size_t>(k)])] = true;
            used[static_cast<size_t>(w.index_set_2[static_cast<size_t>(k)])] = true;
            max_small_c = std::max(max_small_c, iabs(csmall));
            min_big_c = std::min(min_big_c, cbig);
            max_big_c = std::max(max_big_c, cbig + N - 1);
        }
        if (min_big_c - 1 <= max_small_c + N) return std::nullopt;
        a.variant = AdmissibleSet::Variant::P;
        a.K1 = static_cast<double>(max_small_c + N) / static_cast<double>(N) + 0.5;
        a.K2 = static_cast<double>(min_big_c - 1) / static_cast<double>(N);
        if (!(a.K2 > a.K1 && a.K1 > 1)) return std::nullopt;
        a.K3 = std::max(a.K2 + 1, static_cast<double>(max_big_c) / static_cast<double>(N) + 1);
    }

    // Remaining coordinates: plain intervals around the rounded values,
    // clamped into [-nN, nN].
    int slot = 2 * pairs;
    for (int i = 0; i < n; ++i) {
        if (used[static_cast<size_t>(i)]) continue;
        if (slot >= n) break;
        std::int64_t c = std::clamp(round_coord(i), -max_center, max_center);
        a.coordinate_sets[static_cast<size_t>(slot++)] = IntegerSet::interval(c - N, c + N);
    }
    // If witness classes were larger than the early slots, fold the leftover
    // coordinates into tail intervals as well.
    for (int k = pairs; slot < n; ++k) {
        std::int64_t c = 0;
        a.coordinate_sets[static_cast<size_t>(slot++)] = IntegerSet::interval(c - N, c + N);
    }

    if (!validate_admissible(a).empty()) return std::nullopt;
    return a;
}

}  // namespace slicelab
