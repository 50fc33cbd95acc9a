#include <gtest/gtest.h>

#include "slicelab/config.hpp"
#include "slicelab/rng.hpp"
#include "slicelab/types.hpp"

#include "test_util.hpp"

using namespace slicelab;

TEST(RandomSource, SameStreamIsDeterministic) {
    RandomSource a = derive_stream(7, 0);
    RandomSource b = derive_stream(7, 0);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomSource, DistinctStreamsDiffer) {
    RandomSource a = derive_stream(7, 0);
    RandomSource b = derive_stream(7, 1);
    int equal = 0;
    for (int i = 0; i < 100; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    EXPECT_LT(equal, 100);
    EXPECT_EQ(equal, 0);  // 64-bit collisions across 100 draws are not expected
}

TEST(RandomSource, UniformBelowIsUnbiased) {
    RandomSource rng = derive_stream(11, 3);
    std::vector<int> counts(7, 0);
    const int draws = 140000;
    for (int i = 0; i < draws; ++i) counts[rng.uniform_below(7)]++;
    for (int c : counts)
        EXPECT_TRUE(slicelab::testing::within_binomial_ci(c, draws, 1.0 / 7.0));
}

TEST(ConstantsConfig, JsonRoundTripIsIdentical) {
    ConstantsConfig c;
    c.c_lkr = 1.25;
    c.l_threshold = 6.5;
    c.c_round_upper = 4.75;
    c.c_round_lower = 0.125;
    c.k_opnorm = 3.5;
    c.tolerances.ci_z = 2.5;
    auto j = constants_to_json(c);
    ConstantsConfig back = constants_from_json(j);
    EXPECT_EQ(c, back);
    EXPECT_EQ(j.dump(), constants_to_json(back).dump());
}

TEST(WeightModel, JsonRoundTripIsIdentical) {
    for (const WeightModel& m : {WeightModel::iid(0.3), WeightModel::slice(5),
                                 WeightModel::slice_window(0.4, 0.1)}) {
        WeightModel back = model_from_json(model_to_json(m));
        EXPECT_EQ(m, back);
    }
}

TEST(WeightModel, Validation) {
    EXPECT_THROW(WeightModel::iid(0.0), ParameterError);
    EXPECT_THROW(WeightModel::iid(1.0), ParameterError);
    EXPECT_THROW(WeightModel::slice_window(0.3, 0.3), ParameterError);
    EXPECT_THROW(WeightModel::slice_window(0.3, 0.5), ParameterError);
    // Window [0.5*4 - 0.1*4, 0.5*4 + 0.1*4] = [1.6, 2.4] admits only m = 2.
    auto [lo, hi] = WeightModel::slice_window(0.5, 0.1).weight_range(4);
    EXPECT_EQ(lo, 2);
    EXPECT_EQ(hi, 2);
}

TEST(Density, RationalModeHasExactUnitMass) {
    DensityQ f;
    f.support_offset = -1;
    f.masses = {Rational(1, 3), Rational(1, 3), Rational(1, 3)};
    EXPECT_EQ(f.total_mass(), Rational(1));
    EXPECT_TRUE(unit_mass(f));
    EXPECT_EQ(f.at(-1), Rational(1, 3));
    EXPECT_EQ(f.at(2), Rational(0));
}

TEST(Density, LogLipschitzAcceptsExpDecayFamily) {
    for (int n : {4, 9, 16, 100}) {
        DensityD f = exp_decay_density(n, 50);
        EXPECT_TRUE(unit_mass(f, 1e-12));
        EXPECT_TRUE(is_log_lipschitz(f, 1.0 / std::sqrt(double(n))));
        // A tighter constant must be rejected.
        EXPECT_FALSE(is_log_lipschitz(f, 0.5 / std::sqrt(double(n))));
    }
}

TEST(UnitVector, NormIsValidated) {
    EXPECT_NO_THROW(UnitVector({1.0, 0.0}));
    EXPECT_THROW(UnitVector({1.0, 1.0}), ParameterError);
    UnitVector u = make_unit({3.0, 4.0});
    EXPECT_NEAR(u[0], 0.6, 1e-15);
    EXPECT_NEAR(u[1], 0.8, 1e-15);
}

TEST(ConfigFile, RoundTripBitExact) {
    RunConfig cfg;
    cfg.seed = 424242;
    cfg.constants.l_threshold = 7.5;
    cfg.experiment = {{"singularity", {{"points", {{{"n", 2}, {"p", "1/2"}, {"trials", 1000}}}}}}};
    std::string path = ::testing::TempDir() + "slicelab_cfg.json";
    save_config(cfg, path);
    RunConfig back = load_config(path);
    EXPECT_EQ(cfg.seed, back.seed);
    EXPECT_EQ(cfg.constants, back.constants);
    EXPECT_EQ(cfg.experiment.dump(), back.experiment.dump());
    EXPECT_EQ(config_to_json(cfg).dump(2), config_to_json(back).dump(2));
}
