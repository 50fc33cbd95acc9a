#include <gtest/gtest.h>

#include "slicelab/exact_linalg.hpp"
#include "slicelab/numeric_linalg.hpp"
#include "slicelab/sampling.hpp"

#include "test_util.hpp"

using namespace slicelab;

TEST(LeastSingularValue, DiagonalCases) {
    EXPECT_NEAR(least_singular_value(Eigen::MatrixXd::Identity(4, 4)), 1.0, 1e-12);
    Eigen::MatrixXd d(2, 2);
    d << 1, 0, 0, 2;
    EXPECT_NEAR(least_singular_value(d), 1.0, 1e-12);
    Eigen::MatrixXd bad(1, 1);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(least_singular_value(bad), ParameterError);
}

// Exact rank and the numeric smallest singular value must agree about
// singularity across random and constructed-singular instances.
TEST(LeastSingularValue, CrossValidatedAgainstExactRank) {
    int checked_singular = 0, checked_regular = 0;
    for (int t = 0; t < 1000; ++t) {
        RandomSource rng = derive_stream(999, static_cast<std::uint64_t>(t));
        int n = 2 + static_cast<int>(rng.uniform_below(63));  // up to 64
        Matrix01 m = sample_bernoulli_matrix(n, 0.5, rng);
        if (t % 2 == 0) {
            // Force singularity by duplicating a row.
            int src = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
            int dst = (src + 1) % n;
            for (int j = 0; j < n; ++j) m.at(dst, j) = m.at(src, j);
        }
        bool singular = is_singular(m);
        double s = least_singular_value(m);
        if (singular) {
            EXPECT_LE(s, 1e-8 * n);
            ++checked_singular;
        } else {
            EXPECT_GT(s, 0.0);
            ++checked_regular;
        }
    }
    EXPECT_GE(checked_singular, 400);
    EXPECT_GE(checked_regular, 200);
}

TEST(OperatorNorm, SmallExamples) {
    Matrix01 ones(2, 2);
    std::fill(ones.entries.begin(), ones.entries.end(), 1);
    EXPECT_NEAR(operator_norm(ones), 2.0, 1e-10);

    EXPECT_NEAR(operator_norm(Eigen::MatrixXd::Identity(3, 3)), 1.0, 1e-10);

    // Gram matrix of [[1,1],[0,0]] is diag(2,0): top singular value sqrt(2).
    Eigen::MatrixXd m(2, 2);
    m << 1, 1, 0, 0;
    EXPECT_NEAR(operator_norm(m), std::sqrt(2.0), 1e-10);
}

TEST(OperatorNorm, MatchesSvdOnRandomMatrices) {
    for (int t = 0; t < 50; ++t) {
        RandomSource rng = derive_stream(321, static_cast<std::uint64_t>(t));
        int n = 2 + static_cast<int>(rng.uniform_below(30));
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = slicelab::testing::gaussian(rng);
        Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
        double top = svd.singularValues()(0);
        EXPECT_NEAR(operator_norm(m), top, 1e-8 * std::max(1.0, top));
    }
}

TEST(DistToRowspan, Examples) {
    EXPECT_NEAR(dist_to_rowspan({1, 0}, {{0, 1}}), 1.0, 1e-12);
    EXPECT_NEAR(dist_to_rowspan({1, 1}, {{1, 1}}), 0.0, 1e-12);
    // Projection of (1,0) onto span{(1,1)} leaves 1/sqrt(2).
    EXPECT_NEAR(dist_to_rowspan({1, 0}, {{1, 1}}), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_THROW(dist_to_rowspan({1, 0}, {{1, 2, 3}}), ParameterError);
}

TEST(DistToRowspan, DependentRowsAreHandled) {
    // The second row is spanned by the first; breakdown skips it.
    double d = dist_to_rowspan({0, 0, 1}, {{1, 1, 0}, {2, 2, 0}});
    EXPECT_NEAR(d, 1.0, 1e-12);
}
