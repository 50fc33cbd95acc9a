// Command-line laboratory for the slicelab library: reproducible Monte Carlo
// campaigns, exact enumerations, and one-off evaluations of the
// anticoncentration machinery.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "slicelab/slicelab.hpp"

namespace {

using namespace slicelab;

RealVector parse_vector(const std::string& csv) {
    RealVector x;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) x.push_back(std::stod(tok));
    }
    if (x.empty()) throw ParameterError("expected a comma-separated list of reals");
    return x;
}

WeightModel parse_model(const std::string& name, double p, int m, double gamma) {
    if (name == "iid") return WeightModel::iid(p);
    if (name == "slice") return WeightModel::slice(m);
    if (name == "window") return WeightModel::slice_window(p, gamma);
    throw ParameterError("model must be one of iid|slice|window");
}

void write_or_print(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ParameterError("cannot open output file " + out_path);
    out << content;
}

void emit_report(const CampaignReport& report, const std::string& out_path,
                 const std::string& format) {
    if (format == "csv") {
        write_or_print(out_path, to_csv(report));
    } else {
        write_or_print(out_path, to_json(report).dump(2) + "\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slicelab: exact and Monte Carlo experiments on sparse Boolean matrices"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    int workers = 1;
    std::string out_path;
    std::string format = "csv";
    bool timing = false;
    std::string checkpoint_path;

    app.add_option("--config", config_path, "config file (JSON: seed, constants, experiment)");
    app.add_option("--seed", seed_flag, "seed override")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "output path (default: stdout)");
    app.add_option("--format", format, "csv|text")->check(CLI::IsMember({"csv", "text"}));
    app.add_flag("--timing", timing, "fill the wall_ms column (breaks byte-reproducibility)");
    app.add_option("--checkpoint", checkpoint_path, "sidecar file for exact campaign resume");

    auto* cmd_singularity = app.add_subcommand("singularity", "q_n(p) Monte Carlo campaign");
    auto* cmd_qn = app.add_subcommand("qn", "Q_n singularity campaign");
    auto* cmd_structure = app.add_subcommand("structure", "kernel-vector structure experiment");
    auto* cmd_block = app.add_subcommand("block-residual", "distance-to-column-span experiment");

    auto* cmd_levy = app.add_subcommand("levy", "Levy concentration of sum b_i x_i");
    std::string x_csv, model_name = "iid";
    double radius = 0, model_p = 0.5, model_gamma = 0.1;
    int model_m = 0;
    std::int64_t trials = 0;
    cmd_levy->add_option("--x", x_csv, "weights x_1,...,x_n")->required();
    cmd_levy->add_option("--r", radius, "window radius")->required();
    cmd_levy->add_option("--model", model_name, "iid|slice|window");
    cmd_levy->add_option("--p", model_p, "Bernoulli parameter");
    cmd_levy->add_option("--m", model_m, "slice weight");
    cmd_levy->add_option("--gamma", model_gamma, "window half-width");
    cmd_levy->add_option("--trials", trials, "Monte Carlo trials (0 = exact)");

    auto* cmd_threshold = app.add_subcommand("threshold", "threshold function T_{p,gamma}(x,L)");
    double level = 0;
    cmd_threshold->add_option("--x", x_csv, "unit vector x_1,...,x_n")->required();
    cmd_threshold->add_option("--L", level, "slope L")->required();
    cmd_threshold->add_option("--p", model_p, "Bernoulli parameter");
    cmd_threshold->add_option("--gamma", model_gamma, "window half-width");
    cmd_threshold->add_option("--trials", trials, "Monte Carlo trials (0 = exact)");

    auto* cmd_round = app.add_subcommand("round", "randomized rounding with clause checks");
    std::string y_csv;
    double mu = 0.1, lambda = 0;
    int max_attempts = 64;
    cmd_round->add_option("--y", y_csv, "vector y_1,...,y_n")->required();
    cmd_round->add_option("--mu", mu, "small-ball slope hypothesis");
    cmd_round->add_option("--lambda", lambda, "small-ball center");
    cmd_round->add_option("--model", model_name, "iid|slice|window");
    cmd_round->add_option("--p", model_p, "Bernoulli parameter");
    cmd_round->add_option("--m", model_m, "slice weight");
    cmd_round->add_option("--gamma", model_gamma, "window half-width");
    cmd_round->add_option("--max-attempts", max_attempts, "resampling cap");

    auto* cmd_smooth = app.add_subcommand("smooth-demo",
                                          "step record, product identity, and the "
                                          "admissible-set density experiment");
    int sd_n = 12, sd_ell = 8, sd_s = 3;
    std::int64_t sd_bigN = 8;
    std::string sd_variant = "P";
    std::int64_t sd_samples = 0;
    cmd_smooth->add_option("--n", sd_n, "ambient dimension");
    cmd_smooth->add_option("--N", sd_bigN, "scale N");
    cmd_smooth->add_option("--ell", sd_ell, "levels of averaging");
    cmd_smooth->add_option("--s", sd_s, "slice weight");
    cmd_smooth->add_option("--variant", sd_variant, "P|Q");
    cmd_smooth->add_option("--samples", sd_samples,
                           "run the density experiment with this many samples");
    cmd_smooth->add_option("--p", model_p, "Bernoulli parameter");
    cmd_smooth->add_option("--gamma", model_gamma, "window half-width");

    auto* cmd_enumerate = app.add_subcommand("enumerate", "exact singularity polynomial");
    int enum_n = 3;
    std::string p_list;
    cmd_enumerate->add_option("--n", enum_n, "matrix size (<= 5)")->required();
    cmd_enumerate->add_option("--p", p_list, "rationals to evaluate, e.g. 1/2,1/3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed_given) cfg.seed = seed_flag;

        CampaignOptions opt;
        opt.seed = cfg.seed;
        opt.workers = workers;
        opt.timing = timing;
        opt.checkpoint_path = checkpoint_path;

        auto experiment_section = [&](const char* name) -> Json {
            if (cfg.experiment.contains(name)) return cfg.experiment.at(name);
            throw ParameterError(std::string("config experiment section '") + name +
                                 "' missing");
        };

        if (cmd_singularity->parsed()) {
            emit_report(run_singularity_campaign(experiment_section("singularity"), opt),
                        out_path, format);
        } else if (cmd_qn->parsed()) {
            emit_report(run_qn_campaign(experiment_section("qn"), opt), out_path, format);
        } else if (cmd_structure->parsed()) {
            Json section = experiment_section("structure");
            if (!section.contains("l_threshold"))
                section["l_threshold"] = cfg.constants.l_threshold;
            StructureResult res = run_structure_experiment(section, opt);
            emit_report(res.report, out_path, format);
            std::string samples_path =
                out_path.empty() ? "structure_samples.csv" : out_path + ".samples.csv";
            std::ofstream samples_out(samples_path);
            samples_out << structure_samples_csv(res.samples);
            std::cerr << "per-sample rows written to " << samples_path << "\n";
        } else if (cmd_block->parsed()) {
            emit_report(run_block_residual_experiment(experiment_section("block_residual"), opt),
                        out_path, format);
        } else if (cmd_levy->parsed()) {
            RealVector x = parse_vector(x_csv);
            WeightModel model = parse_model(model_name, model_p, model_m, model_gamma);
            ConcentrationEstimate est;
            if (trials > 0) {
                RandomSource rng = derive_stream(cfg.seed, 0);
                est = levy_mc(x, radius, model, trials, rng, cfg.constants.tolerances.ci_z);
            } else {
                est = levy_exact(build_atoms(x, model), radius);
            }
            std::ostringstream os;
            os.precision(17);
            os << "levy value " << est.value << " radius " << est.radius << " method "
               << (est.method == ConcentrationEstimate::Method::Exact ? "exact" : "mc")
               << " ci_halfwidth " << est.ci_halfwidth << " model " << model.describe() << "\n";
            write_or_print(out_path, os.str());
        } else if (cmd_threshold->parsed()) {
            RealVector x = parse_vector(x_csv);
            double t;
            if (trials > 0) {
                RandomSource rng = derive_stream(cfg.seed, 0);
                t = threshold_mc(x, level, WeightModel::slice_window(model_p, model_gamma),
                                 trials, rng);
            } else {
                t = threshold(make_unit(x), level, model_p, model_gamma);
            }
            std::ostringstream os;
            os.precision(17);
            os << "threshold " << t << " (T*sqrt(n) = " << t * std::sqrt(double(x.size()))
               << ")\n";
            write_or_print(out_path, os.str());
        } else if (cmd_round->parsed()) {
            RealVector y = parse_vector(y_csv);
            WeightModel model = parse_model(model_name, model_p, model_m, model_gamma);
            RandomSource rng = derive_stream(cfg.seed, 0);
            RoundingResult res = randomized_round(y, lambda, model, mu, cfg.constants, rng,
                                                  max_attempts);
            auto state = [](CheckState s) {
                return s == CheckState::Passed ? "pass"
                       : s == CheckState::Failed ? "FAIL"
                                                 : "skipped";
            };
            std::ostringstream os;
            os << "success " << (res.success ? "yes" : "no") << " attempts " << res.attempts
               << " R1 " << (res.checks.r1 ? "pass" : "FAIL") << " R2 " << state(res.checks.r2)
               << " R3 " << state(res.checks.r3) << " R4 "
               << (res.checks.r4 ? "pass" : "FAIL");
            if (!res.success) os << " failed_clause " << res.failed_clause;
            os << "\ny_prime";
            for (auto v : res.y_prime) os << ' ' << v;
            os << "\n";
            write_or_print(out_path, os.str());
        } else if (cmd_smooth->parsed()) {
            auto variant = sd_variant == "Q" ? AdmissibleSet::Variant::Q
                                             : AdmissibleSet::Variant::P;
            AdmissibleSet a = make_admissible_demo(sd_bigN, sd_n, 2.0, 4.5, 6.0, 0.15, variant);
            auto violations = validate_admissible(a);
            std::ostringstream os;
            os << "admissible set: n=" << a.n << " N=" << a.N << " variant "
               << (variant == AdmissibleSet::Variant::P ? "P" : "Q") << " violations "
               << violations.size() << "\n";

            RandomSource rng = derive_stream(cfg.seed, 0);
            LatticePoint xpt = sample_admissible_point(a, rng);
            DensityQ f;
            f.support_offset = 0;
            f.masses = {Rational(1)};  // point mass at 0
            SmoothingTable<Rational> table(f, xpt, sd_s, sd_ell);

            // Pick a point where the averaged function is positive.
            std::int64_t t_query = 0;
            bool found = false;
            for (std::int64_t t = -sd_bigN * sd_ell * 4; t <= sd_bigN * sd_ell * 4 && !found;
                 ++t) {
                if (table.value(sd_s, sd_ell, t) > 0) {
                    t_query = t;
                    found = true;
                }
            }
            if (!found) throw ParameterError("smooth-demo: averaged function is empty");
            StepRecord rec = build_step_record(table, xpt, sd_s, sd_ell, t_query);
            auto [lhs, rhs] = product_identity_check(rec);
            os << "step record at t=" << t_query << ": w =";
            for (auto w : rec.w_seq) os << ' ' << int(w);
            os << "\nproduct identity " << rational_to_string(lhs) << " = "
               << rational_to_string(rhs) << (lhs == rhs ? "  (exact)" : "  (MISMATCH)") << "\n";
            auto flags = classify_steps(rec, table, xpt, 0.25, 1.0, a.N, sd_n);
            int robust = 0, drops = 0;
            for (auto fl : flags) {
                robust += fl.robust;
                drops += fl.drop;
            }
            os << "robust steps " << robust << "/" << rec.ell << ", drops " << drops << "/"
               << rec.ell << "\n";

            if (sd_samples > 0) {
                InversionResult inv =
                    inversion_experiment(a, model_p, model_gamma, cfg.constants.l_threshold,
                                         sd_samples, rng, cfg.constants.tolerances.ci_z);
                os << "inversion experiment: fraction " << inv.fraction << " +- "
                   << inv.ci_halfwidth << " threshold " << inv.threshold << "\n";
                std::string csv_path = out_path.empty() ? "inversion_samples.csv"
                                                        : out_path + ".samples.csv";
                std::ofstream csv(csv_path);
                csv << "sample_id,levy_value,method,exceeds_threshold\n";
                for (const auto& s : inv.samples)
                    csv << s.sample_id << ',' << format_double(s.levy_value) << ','
                        << (s.method == ConcentrationEstimate::Method::Exact ? "exact" : "mc")
                        << ',' << (s.exceeds ? 1 : 0) << '\n';
                os << "per-sample rows written to " << csv_path << "\n";
            }
            write_or_print(out_path.empty() ? "" : out_path + ".txt", os.str());
        } else if (cmd_enumerate->parsed()) {
            SingularityPolynomial poly = singularity_polynomial(enum_n, workers);
            Json j = singularity_polynomial_to_json(poly);
            if (!p_list.empty()) {
                Json evals = Json::object();
                std::stringstream ss(p_list);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    Rational p = parse_rational(tok);
                    evals[tok] = rational_to_string(poly.eval(p));
                }
                j["q_n"] = evals;
            }
            write_or_print(out_path, j.dump(2) + "\n");
        }
        return 0;
    } catch (const BudgetError& e) {
        std::cerr << "budget refusal: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
