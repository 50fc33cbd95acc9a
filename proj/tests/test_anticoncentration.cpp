#include <gtest/gtest.h>

#include "slicelab/anticoncentration.hpp"
#include "slicelab/structured.hpp"

#include "test_util.hpp"

using namespace slicelab;
using slicelab::testing::random_unit_vector;

namespace {

// Independent oracle: sup over candidate centers (all midpoints of atom
// pairs) of the closed-window mass, by direct double loop.
double levy_oracle(const AtomSet& atoms, double r) {
    double best = 0;
    const size_t k = atoms.values.size();
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i; j < k; ++j) {
            double z = (atoms.values[i] + atoms.values[j]) / 2;
            double mass = 0;
            for (size_t t = 0; t < k; ++t)
                if (std::abs(atoms.values[t] - z) <= r + 1e-15) mass += atoms.masses[t];
            best = std::max(best, mass);
        }
    }
    return best;
}

// Independent oracle for the threshold: examine every positive pair radius
// t_c, take L(t_c) from the exact Levy function, and solve L(t_c) > L t on
// [t_c, next breakpoint) in closed form.
double threshold_oracle(const AtomSet& atoms, double slope) {
    std::vector<double> radii;
    const size_t k = atoms.values.size();
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) radii.push_back((atoms.values[j] - atoms.values[i]) / 2);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    double best = 0;
    for (size_t c = 0; c < radii.size(); ++c) {
        double t_c = radii[c];
        if (t_c >= 1) break;
        double t_next = (c + 1 < radii.size()) ? std::min(radii[c + 1], 1.0) : 1.0;
        double plateau = levy_oracle(atoms, t_c);
        double cap = std::min(plateau / slope, t_next);
        if (t_c < cap) best = std::max(best, cap);
    }
    return best;
}

AtomSet atoms_from(std::vector<double> values, std::vector<double> masses) {
    std::vector<std::pair<double, double>> raw;
    for (size_t i = 0; i < values.size(); ++i) raw.emplace_back(values[i], masses[i]);
    AtomSet a;
    a.n = static_cast<int>(values.size());
    slicelab::detail::sort_merge_atoms(raw, a);
    return a;
}

}  // namespace

TEST(BuildAtoms, IidTwoCoordinates) {
    AtomSet a = build_atoms({1, 1}, WeightModel::iid(0.5));
    ASSERT_EQ(a.values.size(), 3u);
    EXPECT_DOUBLE_EQ(a.values[0], 0);
    EXPECT_DOUBLE_EQ(a.values[1], 1);
    EXPECT_DOUBLE_EQ(a.values[2], 2);
    EXPECT_DOUBLE_EQ(a.masses[0], 0.25);
    EXPECT_DOUBLE_EQ(a.masses[1], 0.5);
    EXPECT_DOUBLE_EQ(a.masses[2], 0.25);
}

TEST(BuildAtoms, SliceOfWeightOne) {
    AtomSet a = build_atoms({1, 2, 3}, WeightModel::slice(1));
    ASSERT_EQ(a.values.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(a.values[static_cast<size_t>(i)], i + 1);
        EXPECT_NEAR(a.masses[static_cast<size_t>(i)], 1.0 / 3, 1e-15);
    }
}

TEST(BuildAtoms, ZeroVectorIsOneAtom) {
    AtomSet a = build_atoms({0, 0, 0}, WeightModel::iid(0.3));
    ASSERT_EQ(a.values.size(), 1u);
    EXPECT_DOUBLE_EQ(a.values[0], 0);
    EXPECT_NEAR(a.masses[0], 1.0, 1e-15);
}

TEST(BuildAtoms, SliceWindowWeighting) {
    // n=2, window [0,2] covers all weights: the law equals the iid one.
    AtomSet w = build_atoms({0.6, 0.8}, WeightModel::slice_window(0.5, 0.5));
    AtomSet i = build_atoms({0.6, 0.8}, WeightModel::iid(0.5));
    ASSERT_EQ(w.values.size(), i.values.size());
    for (size_t k = 0; k < w.values.size(); ++k) {
        EXPECT_DOUBLE_EQ(w.values[k], i.values[k]);
        EXPECT_NEAR(w.masses[k], i.masses[k], 1e-15);
    }
}

TEST(BuildAtoms, BudgetRefusals) {
    RealVector big(30, 1.0);
    EXPECT_THROW(build_atoms(big, WeightModel::iid(0.5)), BudgetError);
    RealVector x(20, 1.0);
    EXPECT_THROW(build_atoms(x, WeightModel::slice(10), 1000.0), BudgetError);
}

TEST(LevyExact, WorkedExample) {
    AtomSet a = build_atoms({1, 1}, WeightModel::iid(0.5));
    EXPECT_DOUBLE_EQ(levy_exact(a, 0.5).value, 0.75);
    // Radius covering the whole support gives 1.
    EXPECT_DOUBLE_EQ(levy_exact(a, 1.0).value, 1.0);
    // Radius zero picks the largest atom.
    EXPECT_DOUBLE_EQ(levy_exact(a, 0).value, 0.5);
}

TEST(LevyExact, MatchesMidpointOracle) {
    for (int t = 0; t < 40; ++t) {
        RandomSource rng = derive_stream(777, static_cast<std::uint64_t>(t));
        int n = 3 + static_cast<int>(rng.uniform_below(8));
        RealVector x = random_unit_vector(n, rng);
        AtomSet a = build_atoms(x, WeightModel::iid(0.3));
        for (double r : {0.01, 0.05, 0.2, 0.7}) {
            EXPECT_NEAR(levy_exact(a, r).value, levy_oracle(a, r), 1e-12);
        }
    }
}

TEST(LevyExact, MonotoneInRadiusAndBounded) {
    RandomSource rng = derive_stream(778, 0);
    RealVector x = random_unit_vector(10, rng);
    AtomSet a = build_atoms(x, WeightModel::iid(0.4));
    double prev = 0;
    for (double r = 0; r <= 1.2; r += 0.03) {
        double v = levy_exact(a, r).value;
        EXPECT_GE(v, prev - 1e-15);
        EXPECT_GE(v, a.max_mass() - 1e-15);
        EXPECT_LE(v, 1.0 + 1e-15);
        prev = v;
    }
}

TEST(LevyMc, AgreesWithExactWithinThreeSigma) {
    const std::int64_t trials = 100000;
    int vec_index = 0;
    for (int t = 0; t < 10; ++t) {
        RandomSource vgen = derive_stream(1234, static_cast<std::uint64_t>(t));
        int n = 6 + static_cast<int>(vgen.uniform_below(7));  // n in [6,12]
        RealVector x = random_unit_vector(n, vgen);
        std::vector<WeightModel> models = {WeightModel::iid(0.3), WeightModel::slice(n / 2),
                                           WeightModel::slice_window(0.4, 0.2)};
        for (const WeightModel& model : models) {
            AtomSet a = build_atoms(x, model);
            double r = 0.25;
            double exact = levy_exact(a, r).value;
            RandomSource rng = derive_stream(4321, static_cast<std::uint64_t>(vec_index++));
            ConcentrationEstimate mc = levy_mc(x, r, model, trials, rng);
            EXPECT_LE(std::abs(mc.value - exact), std::max(mc.ci_halfwidth, 3e-3))
                << model.describe() << " n=" << n;
        }
    }
}

TEST(LevyMc, DegenerateVectorGivesOne) {
    RealVector x(8, 0.0);
    RandomSource rng = derive_stream(5, 5);
    EXPECT_DOUBLE_EQ(levy_mc(x, 0.1, WeightModel::iid(0.5), 2000, rng).value, 1.0);
}

TEST(Threshold, WorkedFourAtomExample) {
    // Atoms {0, 0.6, 0.8, 1.4}, masses 1/4 each; window is the whole cube.
    UnitVector x({0.6, 0.8});
    double t = threshold(x, 4.0, 0.5, 0.5);
    EXPECT_NEAR(t, 0.125, 1e-12);
}

TEST(Threshold, SupremumReachesOne) {
    UnitVector x({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
    double t = threshold(x, 0.5, 0.5, 0.5);
    EXPECT_NEAR(t, 1.0, 1e-12);
}

TEST(Threshold, EmptySetConventionReturnsZero) {
    // With a huge slope no breakpoint interval certifies L(t) > L t.
    UnitVector x({0.6, 0.8});
    EXPECT_DOUBLE_EQ(threshold(x, 1e9, 0.5, 0.5), 0.0);
    // A single-atom law has no positive breakpoints at all.
    AtomSet single = atoms_from({0.0}, {1.0});
    EXPECT_DOUBLE_EQ(threshold_from_atoms(single, 2.0), 0.0);
}

TEST(Threshold, MatchesQuadraticOracle) {
    for (int t = 0; t < 30; ++t) {
        RandomSource rng = derive_stream(31337, static_cast<std::uint64_t>(t));
        int n = 3 + static_cast<int>(rng.uniform_below(6));
        RealVector x = random_unit_vector(n, rng);
        AtomSet a = build_atoms(x, WeightModel::slice_window(0.4, 0.3));
        for (double slope : {0.5, 1.0, 4.0, 20.0}) {
            EXPECT_NEAR(threshold_from_atoms(a, slope), threshold_oracle(a, slope), 1e-10)
                << "n=" << n << " L=" << slope;
        }
    }
}

TEST(Threshold, MonotoneDecreasingInSlope) {
    RandomSource rng = derive_stream(4242, 0);
    RealVector x = random_unit_vector(8, rng);
    AtomSet a = build_atoms(x, WeightModel::slice_window(0.4, 0.2));
    double prev = 2;
    for (double slope : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 32.0}) {
        double t = threshold_from_atoms(a, slope);
        EXPECT_LE(t, prev + 1e-15);
        prev = t;
    }
}

TEST(LkrBound, PlugInArithmetic) {
    std::vector<std::pair<double, double>> terms(32, {0.5, 0.25});
    // sqrt(32 * 0.5 * 0.0625) = 1, so the bound equals C * r.
    EXPECT_DOUBLE_EQ(lkr_bound(terms, 0.25, 1.0), 0.25);
    EXPECT_DOUBLE_EQ(lkr_bound(terms, 0.25, 2.0), 0.5);  // linear in C

    std::vector<std::pair<double, double>> degenerate(4, {1.0, 0.5});
    EXPECT_THROW(lkr_bound(degenerate, 1.0, 1.0), ParameterError);
    EXPECT_THROW(lkr_bound(terms, 0.1, 1.0), ParameterError);  // r below max r_i
}

// Fitted-constant check of the bound against exact convolutions of small
// independent atom laws.
TEST(LkrBound, DominatesExactConvolutionWithFittedConstant) {
    double fitted = 0;
    std::vector<double> ratios;
    for (int t = 0; t < 20; ++t) {
        RandomSource rng = derive_stream(616, static_cast<std::uint64_t>(t));
        const int k = 6;
        // Independent scaled Bernoulli terms xi_i = a_i b_i.
        std::vector<double> scale(k);
        for (auto& s : scale) s = 0.5 + rng.next_double();
        RealVector x(scale.begin(), scale.end());
        AtomSet sum_atoms = build_atoms(x, WeightModel::iid(0.35));
        double r = 0.6;
        std::vector<std::pair<double, double>> terms;
        for (int i = 0; i < k; ++i) {
            AtomSet one = atoms_from({0.0, scale[static_cast<size_t>(i)]}, {0.65, 0.35});
            terms.emplace_back(levy_exact(one, scale[static_cast<size_t>(i)] / 4).value,
                               scale[static_cast<size_t>(i)] / 4);
        }
        double lhs = levy_exact(sum_atoms, r).value;
        double bound_at_one = lkr_bound(terms, r, 1.0);
        ratios.push_back(lhs / bound_at_one);
        fitted = std::max(fitted, lhs / bound_at_one);
    }
    EXPECT_GT(fitted, 0);
    for (double q : ratios) EXPECT_LE(q, fitted + 1e-15);
    // The fitted constant stays of order one on these instances.
    EXPECT_LT(fitted, 4.0);
}

// Two r-separated linear classes on the central slice: the Levy value decays
// like 1/sqrt(n), so L * sqrt(n) stays within a stable constant band.
TEST(SliceLkr, AlternatingVectorStability) {
    std::vector<double> products;
    for (int n : {12, 16, 20, 24}) {
        RealVector x(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
        AtomSet a = build_atoms(x, WeightModel::slice(n / 2));
        double levy = levy_exact(a, 1.0).value;
        products.push_back(levy * std::sqrt(double(n)));
    }
    double lo = *std::min_element(products.begin(), products.end());
    double hi = *std::max_element(products.begin(), products.end());
    EXPECT_GT(lo, 1.0);
    EXPECT_LT(hi, 4.0);
    EXPECT_LT(hi / lo, 1.5);  // fitted constant is stable across n
}

// Away from the elementary directions, some small radius theta has
// L(sum b_i x_i, theta) <= 1 - p - theta under iid Ber(p) weights.
TEST(PCharacterization, GridSearchFindsATheta) {
    const double p = 0.3;
    const std::vector<double> grid = {0.05, 0.1, 0.2, 0.3};
    int found = 0;
    for (int t = 0; t < 50; ++t) {
        RandomSource rng = derive_stream(2718, static_cast<std::uint64_t>(t));
        int n = 8 + static_cast<int>(rng.uniform_below(13));  // n in [8,20]
        RealVector x = random_unit_vector(n, rng);
        UnitVector u(x, 1e-9);
        if (coord_membership(u, 0.2).has_value()) continue;  // resample-free skip
        AtomSet a = build_atoms(x, WeightModel::iid(p));
        bool ok = false;
        for (double theta : grid) {
            if (levy_exact(a, theta).value <= 1 - p - theta) {
                ok = true;
                break;
            }
        }
        EXPECT_TRUE(ok) << "n=" << n << " t=" << t;
        ++found;
    }
    EXPECT_GE(found, 45);
}

// Central-slice version of the same sanity check for vectors with bounded
// overlap with the all-ones direction.
TEST(SliceClt, LevyBoundedAwayFromOne) {
    const int n = 20;
    int checked = 0;
    for (int t = 0; checked < 50 && t < 200; ++t) {
        RandomSource rng = derive_stream(31415, static_cast<std::uint64_t>(t));
        RealVector x = random_unit_vector(n, rng);
        double overlap = 0;
        for (double v : x) overlap += v / std::sqrt(double(n));
        if (std::abs(overlap) > 0.5) continue;
        AtomSet a = build_atoms(x, WeightModel::slice(n / 2));
        for (double theta : {0.01, 0.02, 0.05}) {
            EXPECT_LE(levy_exact(a, theta).value, 0.5 + 0.1) << "t=" << t << " theta=" << theta;
        }
        ++checked;
    }
    EXPECT_EQ(checked, 50);
}

TEST(AtomExport, TwoColumnFormat) {
    AtomSet a = build_atoms({1, 1}, WeightModel::iid(0.5));
    std::ostringstream os;
    a.write(os);
    EXPECT_EQ(os.str(), "0 0.25\n1 0.5\n2 0.25\n");
}
