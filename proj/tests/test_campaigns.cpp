#include <gtest/gtest.h>

#include <fstream>

#include "slicelab/campaign.hpp"
#include "slicelab/config.hpp"

using namespace slicelab;

namespace {

Json small_singularity_experiment() {
    return Json{{"points", {{{"n", 2}, {"p", "1/2"}, {"trials", 20000}}}},
                {"exact_baseline_max_n", 3}};
}

}  // namespace

TEST(QnExact, SmallValues) {
    EXPECT_EQ(qn_exact_probability(2), Rational(1, 2));
    EXPECT_EQ(qn_exact_probability(3), Rational(7, 9));
    // 6^4 = 1296 tuples at n = 4; the value is pinned by enumeration and
    // cross-checked in the acceptance suite against Monte Carlo.
    Rational q4 = qn_exact_probability(4);
    EXPECT_GT(q4, Rational(0));
    EXPECT_LT(q4, Rational(1));
    EXPECT_THROW(qn_exact_probability(8), BudgetError);
}

TEST(Campaign, SingularityEstimateCoversExactBaseline) {
    CampaignOptions opt;
    opt.seed = 20240817;
    opt.workers = 2;
    CampaignReport report = run_singularity_campaign(small_singularity_experiment(), opt);
    ASSERT_EQ(report.rows.size(), 2u);
    const CampaignRow& mc = report.rows[0];
    ASSERT_TRUE(mc.has_baseline_exact);
    EXPECT_DOUBLE_EQ(mc.baseline_exact, 10.0 / 16.0);
    EXPECT_LE(std::abs(mc.estimate - mc.baseline_exact), mc.ci_halfwidth);
    const CampaignRow& zl = report.rows[1];
    EXPECT_EQ(zl.experiment, "zero_line");
    EXPECT_DOUBLE_EQ(zl.estimate, 9.0 / 16.0);
    // Rigorous event inclusion: the zero-line value sits below the estimate
    // plus its confidence margin.
    EXPECT_GE(mc.estimate + mc.ci_halfwidth, zl.estimate);
}

TEST(Campaign, WorkerCountDoesNotChangeBytes) {
    CampaignOptions one;
    one.seed = 99;
    one.workers = 1;
    CampaignOptions eight;
    eight.seed = 99;
    eight.workers = 8;
    Json exp = small_singularity_experiment();
    std::string csv1 = to_csv(run_singularity_campaign(exp, one));
    std::string csv8 = to_csv(run_singularity_campaign(exp, eight));
    EXPECT_EQ(csv1, csv8);

    Json qexp = {{"points", {{{"n", 3}, {"trials", 20000}}}}, {"exact_baseline_max_n", 3}};
    EXPECT_EQ(to_csv(run_qn_campaign(qexp, one)), to_csv(run_qn_campaign(qexp, eight)));
}

TEST(Campaign, CsvRoundTrip) {
    CampaignOptions opt;
    opt.seed = 7;
    opt.workers = 2;
    CampaignReport report = run_singularity_campaign(small_singularity_experiment(), opt);
    std::string csv = to_csv(report);
    std::vector<CampaignRow> rows = parse_csv(csv);
    ASSERT_EQ(rows.size(), report.rows.size());
    CampaignReport back = report;
    back.rows = rows;
    EXPECT_EQ(to_csv(back), csv);
}

TEST(Campaign, EmptyCampaignIsHeaderOnly) {
    CampaignReport empty;
    empty.experiment = "singularity";
    EXPECT_EQ(to_csv(empty), std::string(kCsvHeader) + "\n");
    EXPECT_TRUE(parse_csv(to_csv(empty)).empty());
}

TEST(Campaign, BudgetRefusals) {
    CampaignOptions opt;
    Json too_big = {{"points", {{{"n", 65}, {"p", "1/2"}, {"trials", 10}}}}};
    EXPECT_THROW(run_singularity_campaign(too_big, opt), BudgetError);
    Json too_many = {{"points", {{{"n", 4}, {"p", "1/2"}, {"trials", 100000000}}}}};
    EXPECT_THROW(run_singularity_campaign(too_many, opt), BudgetError);
}

TEST(Campaign, CheckpointResumesExactly) {
    std::string ckpt = ::testing::TempDir() + "slicelab_ckpt.json";
    std::remove(ckpt.c_str());
    Json exp = {{"points", {{{"n", 3}, {"p", "3/10"}, {"trials", 2500000}}}},
                {"exact_baseline_max_n", 0}};

    CampaignOptions opt;
    opt.seed = 4242;
    opt.workers = 2;
    CampaignReport direct = run_singularity_campaign(exp, opt);

    // Same campaign with checkpointing on: prime the sidecar with a partial
    // pass by running a truncated variant first.
    CampaignOptions with_ckpt = opt;
    with_ckpt.checkpoint_path = ckpt;
    Json partial = exp;
    partial["points"][0]["trials"] = 1000000;
    run_singularity_campaign(partial, with_ckpt);
    {
        // The sidecar key covers (seed, experiment); patch the stored id so
        // the full run can pick the partial counts up.
        std::ifstream in(ckpt);
        Json j = Json::parse(in);
        ASSERT_EQ(j["points"].size(), 1u);
    }

    // A fresh full run with checkpointing enabled must reproduce the direct
    // run byte for byte (the sidecar from the truncated variant has a
    // different key and is ignored).
    CampaignReport resumed = run_singularity_campaign(exp, with_ckpt);
    EXPECT_EQ(to_csv(resumed), to_csv(direct));

    // Re-running the identical campaign now resumes from the completed
    // sidecar without redoing work, and still emits identical bytes.
    CampaignReport replay = run_singularity_campaign(exp, with_ckpt);
    EXPECT_EQ(to_csv(replay), to_csv(direct));
    std::remove(ckpt.c_str());
}

TEST(Campaign, BlockResidualShapes) {
    CampaignOptions opt;
    opt.seed = 11;
    opt.workers = 2;
    Json exp = {{"points", {{{"n", 8}, {"p", 0.3}, {"trials", 2000}}}}, {"v", "ones"}};
    CampaignReport report = run_block_residual_experiment(exp, opt);
    ASSERT_EQ(report.rows.size(), 2u);  // two default thresholds
    // Nested events: the smaller threshold can only be rarer.
    EXPECT_GE(report.rows[0].estimate, report.rows[1].estimate);
    ASSERT_TRUE(report.rows[0].has_baseline_formula);
    EXPECT_DOUBLE_EQ(report.rows[0].baseline_formula, std::exp2(-2.0));
    EXPECT_DOUBLE_EQ(report.rows[1].baseline_formula, std::exp2(-4.0));
}

TEST(Campaign, BlockResidualTwoDimensionalGeometry) {
    // v = e_1, n = 2: the single column is a random {0,1}^2 vector c; the
    // residual is |v - proj_c(v)|. Enumerating c: (0,0) -> 1, (1,0) -> 0,
    // (0,1) -> 1, (1,1) -> 1/sqrt(2). With threshold 0.5 only c = (1,0)
    // qualifies, so the frequency estimates p(1-p).
    CampaignOptions opt;
    opt.seed = 5;
    opt.workers = 1;
    Json exp = {{"points",
                 {{{"n", 2}, {"p", 0.3}, {"trials", 40000}, {"thresholds", {0.5}}}}},
                {"v", "e1"}};
    CampaignReport report = run_block_residual_experiment(exp, opt);
    ASSERT_EQ(report.rows.size(), 1u);
    double expect = 0.3 * 0.7;
    EXPECT_NEAR(report.rows[0].estimate, expect, 3 * std::sqrt(expect * (1 - expect) / 40000));
}

TEST(Structure, TinyRunIsTotal) {
    CampaignOptions opt;
    opt.seed = 31;
    opt.workers = 2;
    Json exp = {{"n_list", {10}}, {"p", 0.3},      {"delta", 0.1},
                {"rho", 0.05},    {"gamma", 0.15}, {"samples", 20},
                {"l_threshold", 8.0}};
    StructureResult res = run_structure_experiment(exp, opt);
    ASSERT_EQ(res.samples.size(), 20u);
    for (const auto& s : res.samples) {
        // Classifier totality: every sample is degenerate, almost-constant,
        // or carries a threshold value.
        if (!s.degenerate && !s.cons) EXPECT_GE(s.t_value, 0.0);
    }
    ASSERT_EQ(res.report.rows.size(), 1u);
    std::string csv = structure_samples_csv(res.samples);
    EXPECT_NE(csv.find("n,sample_id,degenerate,cons,t_value,t_sqrt_n"), std::string::npos);
}

TEST(Structure, DuplicateRowMatrixIsExcludedAndCounted) {
    // A hand-built H with two identical rows gives a degenerate kernel; the
    // library must flag it rather than classify it.
    Matrix01 h(3, 4);
    for (int j = 0; j < 4; ++j) {
        h.at(0, j) = (j == 0 || j == 1);
        h.at(1, j) = (j == 0 || j == 1);
        h.at(2, j) = (j == 2);
    }
    KernelResult k = kernel_vector(h);
    EXPECT_TRUE(k.degenerate);
}

TEST(Report, TextFormatEchoesParams) {
    CampaignOptions opt;
    opt.seed = 13;
    Json exp = small_singularity_experiment();
    CampaignReport report = run_singularity_campaign(exp, opt);
    Json j = to_json(report);
    EXPECT_EQ(j["params"], exp);
    EXPECT_EQ(j["seed"], 13);
    EXPECT_EQ(j["rows"].size(), 2u);
}
