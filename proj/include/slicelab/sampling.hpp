#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "slicelab/errors.hpp"
#include "slicelab/rng.hpp"
#include "slicelab/types.hpp"

namespace slicelab {

/// Integer point of a product set; coords[i] lies in A_i when drawn from an
/// admissible set.
using LatticePoint = std::vector<std::int64_t>;

/// Fills `out` (length n) with iid Ber(p) bits.
inline void fill_bernoulli(std::uint8_t* out, int n, double p, RandomSource& rng) {
    for (int i = 0; i < n; ++i) out[i] = rng.bernoulli(p) ? 1 : 0;
}

inline Matrix01 sample_bernoulli_matrix(int n, double p, RandomSource& rng) {
    if (n < 1) throw ParameterError("sample_bernoulli_matrix: n must be >= 1");
    if (!(p >= 0 && p <= 1)) throw ParameterError("sample_bernoulli_matrix: p outside [0,1]");
    Matrix01 m(n, n);
    fill_bernoulli(m.entries.data(), n * n, p, rng);
    return m;
}

inline Matrix01 sample_bernoulli_matrix(int rows, int cols, double p, RandomSource& rng) {
    if (rows < 1 || cols < 1) throw ParameterError("sample_bernoulli_matrix: empty shape");
    if (!(p >= 0 && p <= 1)) throw ParameterError("sample_bernoulli_matrix: p outside [0,1]");
    Matrix01 m(rows, cols);
    fill_bernoulli(m.entries.data(), rows * cols, p, rng);
    return m;
}

/// Fills `out` (length n) with a uniform element of {0,1}^n_m via partial
/// Fisher-Yates selection of the m one-positions; exactly uniform.
inline void fill_slice(std::uint8_t* out, int n, int m, RandomSource& rng,
                       std::vector<int>& scratch) {
    if (m < 0 || m > n) throw ParameterError("fill_slice: m out of range [0,n]");
    scratch.resize(static_cast<size_t>(n));
    std::iota(scratch.begin(), scratch.end(), 0);
    for (int i = 0; i < n; ++i) out[i] = 0;
    for (int i = 0; i < m; ++i) {
        int j = static_cast<int>(rng.uniform_int(i, n - 1));
        std::swap(scratch[i], scratch[j]);
        out[scratch[i]] = 1;
    }
}

/// Uniform vector of {0,1}^n with exactly m ones, as a 1 x n matrix.
inline Matrix01 sample_slice_vector(int n, int m, RandomSource& rng) {
    Matrix01 row(1, n);
    std::vector<int> scratch;
    fill_slice(row.entries.data(), n, m, rng, scratch);
    return row;
}

/// A slice sample decomposed as a base assignment plus independent fair swap
/// bits on sigma_n disjoint index pairs (1,2), (3,4), ...; assembling the two
/// reproduces the uniform slice law exactly.
struct PairedSliceSample {
    Matrix01 base;                        // uniform on the slice
    std::vector<std::uint8_t> swap_flags; // independent Ber(1/2), one per pair

    Matrix01 assemble() const {
        Matrix01 v = base;
        for (size_t j = 0; j < swap_flags.size(); ++j) {
            if (swap_flags[j])
                std::swap(v.entries[2 * j], v.entries[2 * j + 1]);
        }
        return v;
    }
};

inline PairedSliceSample sample_paired_slice(int n, int m, int sigma_n, RandomSource& rng) {
    if (sigma_n < 0 || 2 * sigma_n > n)
        throw ParameterError("sample_paired_slice: pairing larger than n");
    PairedSliceSample s;
    s.base = sample_slice_vector(n, m, rng);
    s.swap_flags.resize(static_cast<size_t>(sigma_n));
    for (int j = 0; j < sigma_n; ++j) s.swap_flags[j] = rng.bernoulli(0.5) ? 1 : 0;
    return s;
}

/// n independent rows, each uniform on the central slice {0,1}^n_{floor(n/2)}.
inline Matrix01 sample_qn_matrix(int n, RandomSource& rng) {
    if (n < 1) throw ParameterError("sample_qn_matrix: n must be >= 1");
    Matrix01 q(n, n);
    std::vector<int> scratch;
    for (int i = 0; i < n; ++i)
        fill_slice(q.entries.data() + static_cast<size_t>(i) * n, n, n / 2, rng, scratch);
    return q;
}

/// Samples iid Ber(p) bits conditioned on the total weight landing in the
/// model's window, by rejection. Fails if the acceptance rate drops below
/// min_acceptance.
inline void fill_slice_window(std::uint8_t* out, int n, const WeightModel& model,
                              RandomSource& rng, double min_acceptance = 1e-3) {
    auto [mlo, mhi] = model.weight_range(n);
    const std::int64_t max_rejects =
        static_cast<std::int64_t>(10.0 / min_acceptance);
    for (std::int64_t attempt = 0; attempt < max_rejects; ++attempt) {
        int sum = 0;
        for (int i = 0; i < n; ++i) {
            out[i] = rng.bernoulli(model.p) ? 1 : 0;
            sum += out[i];
        }
        if (sum >= mlo && sum <= mhi) return;
    }
    throw ModelError("slice-window rejection acceptance below " +
                     std::to_string(min_acceptance) + "; window too narrow");
}

}  // namespace slicelab
