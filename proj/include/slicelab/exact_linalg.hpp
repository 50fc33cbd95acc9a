#pragma once

#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "slicelab/errors.hpp"
#include "slicelab/rational.hpp"
#include "slicelab/types.hpp"

namespace slicelab {

namespace detail {

struct Overflow {};

inline std::int64_t mul_chk(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}

inline std::int64_t sub_chk(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
}

// Fraction-free (Bareiss) elimination on a row-major buffer. Entries after k
// steps are (k+1)x(k+1) minors of the input, so the division by the previous
// pivot is exact; intermediates stay machine-word sized for desk-scale 0/1
// matrices. Throws Overflow when they do not.
inline int rank_bareiss_i64(std::int64_t* a, int rows, int cols) {
    std::int64_t prev = 1;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < rows; ++i) {
            if (a[static_cast<size_t>(i) * cols + col] != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != rank) {
            for (int j = 0; j < cols; ++j)
                std::swap(a[static_cast<size_t>(pivot) * cols + j],
                          a[static_cast<size_t>(rank) * cols + j]);
        }
        const std::int64_t p = a[static_cast<size_t>(rank) * cols + col];
        for (int i = rank + 1; i < rows; ++i) {
            const std::int64_t f = a[static_cast<size_t>(i) * cols + col];
            for (int j = col + 1; j < cols; ++j) {
                std::int64_t t = sub_chk(mul_chk(p, a[static_cast<size_t>(i) * cols + j]),
                                         mul_chk(f, a[static_cast<size_t>(rank) * cols + j]));
                a[static_cast<size_t>(i) * cols + j] = t / prev;
            }
            a[static_cast<size_t>(i) * cols + col] = 0;
        }
        prev = p;
        ++rank;
    }
    return rank;
}

inline int rank_bareiss_big(std::vector<BigInt> a, int rows, int cols) {
    BigInt prev = 1;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < rows; ++i) {
            if (a[static_cast<size_t>(i) * cols + col] != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != rank) {
            for (int j = 0; j < cols; ++j)
                std::swap(a[static_cast<size_t>(pivot) * cols + j],
                          a[static_cast<size_t>(rank) * cols + j]);
        }
        const BigInt p = a[static_cast<size_t>(rank) * cols + col];
        for (int i = rank + 1; i < rows; ++i) {
            const BigInt f = a[static_cast<size_t>(i) * cols + col];
            for (int j = col + 1; j < cols; ++j) {
                a[static_cast<size_t>(i) * cols + j] =
                    (p * a[static_cast<size_t>(i) * cols + j] -
                     f * a[static_cast<size_t>(rank) * cols + j]) /
                    prev;
            }
            a[static_cast<size_t>(i) * cols + col] = 0;
        }
        prev = p;
        ++rank;
    }
    return rank;
}

}  // namespace detail

/// Rank over the rationals of an integer matrix given as a row-major buffer.
/// Machine-word fast path with overflow detection, arbitrary-precision retry.
inline int exact_rank_ints(const std::int64_t* data, int rows, int cols,
                           std::vector<std::int64_t>& scratch) {
    scratch.assign(data, data + static_cast<size_t>(rows) * cols);
    try {
        return detail::rank_bareiss_i64(scratch.data(), rows, cols);
    } catch (detail::Overflow&) {
        std::vector<BigInt> big(data, data + static_cast<size_t>(rows) * cols);
        return detail::rank_bareiss_big(std::move(big), rows, cols);
    }
}

inline int exact_rank(const Matrix01& m, std::vector<std::int64_t>& scratch) {
    scratch.resize(m.entries.size());
    for (size_t i = 0; i < m.entries.size(); ++i) scratch[i] = m.entries[i];
    try {
        return detail::rank_bareiss_i64(scratch.data(), m.n_rows, m.n_cols);
    } catch (detail::Overflow&) {
        std::vector<BigInt> big(m.entries.begin(), m.entries.end());
        return detail::rank_bareiss_big(std::move(big), m.n_rows, m.n_cols);
    }
}

inline int exact_rank(const Matrix01& m) {
    std::vector<std::int64_t> scratch;
    return exact_rank(m, scratch);
}

/// Exact singularity over the rationals; no floating point anywhere.
inline bool is_singular(const Matrix01& m, std::vector<std::int64_t>& scratch) {
    if (m.n_rows != m.n_cols) throw ParameterError("is_singular: matrix not square");
    return exact_rank(m, scratch) < m.n_rows;
}

inline bool is_singular(const Matrix01& m) {
    std::vector<std::int64_t> scratch;
    return is_singular(m, scratch);
}

/// Unit vector in the right kernel of an (n-1) x n matrix, with its exact
/// rational representative. The sign rule (first nonzero coordinate positive)
/// makes the output canonical on the generic rank-(n-1) branch; `degenerate`
/// is set when the kernel has dimension > 1 and the returned line is one
/// exact kernel vector among many.
struct KernelResult {
    std::vector<Rational> exact;
    RealVector unit;
    bool degenerate = false;
};

inline KernelResult kernel_vector(const Matrix01& h) {
    const int rows = h.n_rows;
    const int cols = h.n_cols;
    if (cols != rows + 1)
        throw ParameterError("kernel_vector: expected (n-1) x n shape");

    std::vector<std::vector<Rational>> a(static_cast<size_t>(rows),
                                         std::vector<Rational>(static_cast<size_t>(cols)));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a[i][j] = int(h.at(i, j));

    // Reduced row echelon form over the rationals.
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i) {
            if (a[i][c] != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        std::swap(a[piv], a[r]);
        Rational inv = a[r][c];
        for (int j = c; j < cols; ++j) a[r][j] /= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }

    KernelResult res;
    res.degenerate = (r < rows);

    // Free column with the smallest index spans a kernel direction.
    std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
    for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
    int free_col = -1;
    for (int c = 0; c < cols; ++c) {
        if (!is_pivot[static_cast<size_t>(c)]) {
            free_col = c;
            break;
        }
    }

    res.exact.assign(static_cast<size_t>(cols), Rational(0));
    res.exact[static_cast<size_t>(free_col)] = 1;
    for (int i = 0; i < r; ++i)
        res.exact[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] =
            -a[i][static_cast<size_t>(free_col)];

    for (const Rational& v : res.exact) {
        if (v != 0) {
            if (v < 0)
                for (Rational& w : res.exact) w = -w;
            break;
        }
    }

    res.unit.resize(static_cast<size_t>(cols));
    double nrm = 0;
    for (int j = 0; j < cols; ++j) {
        res.unit[static_cast<size_t>(j)] = to_double(res.exact[static_cast<size_t>(j)]);
        nrm += res.unit[static_cast<size_t>(j)] * res.unit[static_cast<size_t>(j)];
    }
    nrm = std::sqrt(nrm);
    for (double& v : res.unit) v /= nrm;
    return res;
}

/// Exact counts of singular n x n {0,1}-matrices stratified by the number of
/// ones; q_n(p) = sum_k c_k p^k (1-p)^{n^2-k}.
struct SingularityPolynomial {
    int n = 0;
    std::vector<BigInt> counts;  // c_0 .. c_{n^2}

    Rational eval(const Rational& p) const {
        const int nn = n * n;
        Rational q = 1 - p;
        std::vector<Rational> p_pow(static_cast<size_t>(nn) + 1),
            q_pow(static_cast<size_t>(nn) + 1);
        p_pow[0] = 1;
        q_pow[0] = 1;
        for (int k = 1; k <= nn; ++k) {
            p_pow[static_cast<size_t>(k)] = p_pow[static_cast<size_t>(k - 1)] * p;
            q_pow[static_cast<size_t>(k)] = q_pow[static_cast<size_t>(k - 1)] * q;
        }
        Rational total = 0;
        for (int k = 0; k <= nn; ++k) {
            if (counts[static_cast<size_t>(k)] == 0) continue;
            total += Rational(counts[static_cast<size_t>(k)]) * p_pow[static_cast<size_t>(k)] *
                     q_pow[static_cast<size_t>(nn - k)];
        }
        return total;
    }
};

/// Exhaustive enumeration of all 2^{n^2} matrices, sharded across workers.
/// Refuses beyond n = 5 with a cost estimate.
inline SingularityPolynomial singularity_polynomial(int n, int workers = 1) {
    if (n < 1) throw ParameterError("singularity_polynomial: n must be >= 1");
    if (n > 5) {
        double secs = std::ldexp(1.0, n * n) / 3e7;  // ~3e7 small ranks per second
        throw BudgetError("singularity_polynomial: n=" + std::to_string(n) + " needs 2^" +
                          std::to_string(n * n) + " ranks (~" +
                          std::to_string(static_cast<long long>(secs)) +
                          " s); refusing beyond n=5");
    }
    const int nn = n * n;
    const std::uint64_t total = 1ull << nn;
    if (workers < 1) workers = 1;

    std::vector<std::vector<std::uint64_t>> partial(
        static_cast<size_t>(workers), std::vector<std::uint64_t>(static_cast<size_t>(nn) + 1, 0));

    auto work = [&](int w) {
        std::uint64_t lo = total / static_cast<std::uint64_t>(workers) * static_cast<std::uint64_t>(w);
        std::uint64_t hi = (w == workers - 1)
                               ? total
                               : total / static_cast<std::uint64_t>(workers) *
                                     static_cast<std::uint64_t>(w + 1);
        std::int64_t buf[25];
        std::vector<std::uint64_t>& mine = partial[static_cast<size_t>(w)];
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            for (int b = 0; b < nn; ++b) buf[b] = (mask >> b) & 1ull;
            try {
                if (detail::rank_bareiss_i64(buf, n, n) < n)
                    mine[static_cast<size_t>(__builtin_popcountll(mask))]++;
            } catch (detail::Overflow&) {
                // unreachable for n <= 5; re-run in big integers regardless
                std::vector<BigInt> big(static_cast<size_t>(nn));
                for (int b = 0; b < nn; ++b) big[static_cast<size_t>(b)] = int((mask >> b) & 1ull);
                if (detail::rank_bareiss_big(std::move(big), n, n) < n)
                    mine[static_cast<size_t>(__builtin_popcountll(mask))]++;
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    SingularityPolynomial poly;
    poly.n = n;
    poly.counts.assign(static_cast<size_t>(nn) + 1, BigInt(0));
    for (int w = 0; w < workers; ++w)
        for (int k = 0; k <= nn; ++k)
            poly.counts[static_cast<size_t>(k)] += partial[static_cast<size_t>(w)][static_cast<size_t>(k)];
    return poly;
}

/// Exact inclusion-exclusion probability that an n x n Ber(p) matrix has a
/// zero row or a zero column, with the first-order term 2n(1-p)^n.
struct ZeroLineProbability {
    Rational exact;
    Rational first_order;
};

inline ZeroLineProbability zero_line_probability(int n, const Rational& p) {
    if (n < 1) throw ParameterError("zero_line_probability: n must be >= 1");
    if (!(p > 0 && p < 1)) throw ParameterError("zero_line_probability: p outside (0,1)");
    const Rational q = 1 - p;
    std::vector<Rational> q_pow(static_cast<size_t>(n) * n + 1);
    q_pow[0] = 1;
    for (size_t k = 1; k < q_pow.size(); ++k) q_pow[k] = q_pow[k - 1] * q;

    Rational none = 0;  // P[no zero row and no zero column]
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            Rational term = Rational(binomial(unsigned(n), unsigned(i))) *
                            Rational(binomial(unsigned(n), unsigned(j))) *
                            q_pow[static_cast<size_t>(i * n + j * n - i * j)];
            if ((i + j) % 2 == 0)
                none += term;
            else
                none -= term;
        }
    }
    ZeroLineProbability z;
    z.exact = 1 - none;
    z.first_order = Rational(2 * n) * q_pow[static_cast<size_t>(n)];
    return z;
}

}  // namespace slicelab
