#pragma once

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "slicelab/anticoncentration.hpp"
#include "slicelab/errors.hpp"
#include "slicelab/exact_linalg.hpp"
#include "slicelab/numeric_linalg.hpp"
#include "slicelab/rational.hpp"
#include "slicelab/rng.hpp"
#include "slicelab/sampling.hpp"
#include "slicelab/structured.hpp"
#include "slicelab/types.hpp"

namespace slicelab {

using Json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// One CSV row of a campaign report. Optional baselines print as empty
/// fields.
struct CampaignRow {
    std::string experiment;
    int n = 0;
    double p = 0;
    std::int64_t trials = 0;
    double estimate = 0;
    double ci_halfwidth = 0;
    bool has_baseline_exact = false;
    double baseline_exact = 0;
    bool has_baseline_formula = false;
    double baseline_formula = 0;
    std::uint64_t seed = 0;
    std::int64_t wall_ms = 0;
};

struct CampaignReport {
    std::string experiment;
    Json params;  // full config echo
    std::uint64_t seed = 0;
    std::vector<CampaignRow> rows;
};

inline const char* kCsvHeader =
    "experiment,n,p,trials,estimate,ci_halfwidth,baseline_exact,baseline_formula,seed,wall_ms";

inline std::string to_csv(const CampaignReport& report) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const CampaignRow& r : report.rows) {
        os << r.experiment << ',' << r.n << ',' << format_double(r.p) << ',' << r.trials << ','
           << format_double(r.estimate) << ',' << format_double(r.ci_halfwidth) << ','
           << (r.has_baseline_exact ? format_double(r.baseline_exact) : "") << ','
           << (r.has_baseline_formula ? format_double(r.baseline_formula) : "") << ','
           << r.seed << ',' << r.wall_ms << '\n';
    }
    return os.str();
}

inline Json to_json(const CampaignReport& report) {
    Json j;
    j["experiment"] = report.experiment;
    j["params"] = report.params;
    j["seed"] = report.seed;
    Json rows = Json::array();
    for (const CampaignRow& r : report.rows) {
        Json row;
        row["experiment"] = r.experiment;
        row["n"] = r.n;
        row["p"] = r.p;
        row["trials"] = r.trials;
        row["estimate"] = r.estimate;
        row["ci_halfwidth"] = r.ci_halfwidth;
        if (r.has_baseline_exact) row["baseline_exact"] = r.baseline_exact;
        if (r.has_baseline_formula) row["baseline_formula"] = r.baseline_formula;
        row["seed"] = r.seed;
        row["wall_ms"] = r.wall_ms;
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

inline std::vector<CampaignRow> parse_csv(const std::string& text) {
    std::vector<CampaignRow> rows;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (first) {
            first = false;
            continue;  // header
        }
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        f.push_back(cur);
        if (f.size() != 10) throw ParameterError("parse_csv: malformed row: " + line);
        CampaignRow r;
        r.experiment = f[0];
        r.n = std::stoi(f[1]);
        r.p = std::stod(f[2]);
        r.trials = std::stoll(f[3]);
        r.estimate = std::stod(f[4]);
        r.ci_halfwidth = std::stod(f[5]);
        if (!f[6].empty()) {
            r.has_baseline_exact = true;
            r.baseline_exact = std::stod(f[6]);
        }
        if (!f[7].empty()) {
            r.has_baseline_formula = true;
            r.baseline_formula = std::stod(f[7]);
        }
        r.seed = std::stoull(f[8]);
        r.wall_ms = std::stoll(f[9]);
        rows.push_back(r);
    }
    return rows;
}

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Counts successes of fn(trial_index) over [lo, hi), split contiguously
/// across workers. Per-trial randomness is derived inside fn, so the count
/// does not depend on the worker count.
template <class Fn>
std::uint64_t count_trials(std::uint64_t lo, std::uint64_t hi, int workers, Fn&& fn) {
    if (hi <= lo) return 0;
    const std::uint64_t total = hi - lo;
    if (workers < 1) workers = 1;
    workers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), total));
    if (workers == 1) {
        std::uint64_t count = 0;
        for (std::uint64_t t = lo; t < hi; ++t)
            if (fn(t)) ++count;
        return count;
    }
    std::vector<std::uint64_t> partial(static_cast<size_t>(workers), 0);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        std::uint64_t wlo = lo + total * static_cast<std::uint64_t>(w) /
                                     static_cast<std::uint64_t>(workers);
        std::uint64_t whi = lo + total * static_cast<std::uint64_t>(w + 1) /
                                     static_cast<std::uint64_t>(workers);
        pool.emplace_back([&, w, wlo, whi] {
            std::uint64_t c = 0;
            for (std::uint64_t t = wlo; t < whi; ++t)
                if (fn(t)) ++c;
            partial[static_cast<size_t>(w)] = c;
        });
    }
    for (auto& t : pool) t.join();
    std::uint64_t count = 0;
    for (auto c : partial) count += c;
    return count;
}

}  // namespace detail

/// Sidecar with exact partial counts, flushed every `interval` trials and
/// keyed by (seed, config hash) so a restarted campaign resumes bit-exactly.
class Checkpoint {
public:
    Checkpoint(std::string path, std::uint64_t seed, const std::string& config_dump)
        : path_(std::move(path)) {
        key_ = std::to_string(seed) + ":" +
               std::to_string(detail::fnv1a64(config_dump));
        if (path_.empty()) return;
        std::ifstream in(path_);
        if (!in) return;
        Json j = Json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.contains("key") || j["key"] != key_) return;
        for (const auto& e : j["points"])
            state_[e["id"].get<std::string>()] = {e["trials_done"].get<std::uint64_t>(),
                                                  e["successes"].get<std::uint64_t>()};
    }

    std::pair<std::uint64_t, std::uint64_t> resume(const std::string& id) const {
        auto it = state_.find(id);
        return it == state_.end() ? std::pair<std::uint64_t, std::uint64_t>{0, 0} : it->second;
    }

    void record(const std::string& id, std::uint64_t trials_done, std::uint64_t successes) {
        state_[id] = {trials_done, successes};
        flush();
    }

    void flush() const {
        if (path_.empty()) return;
        Json j;
        j["key"] = key_;
        Json pts = Json::array();
        for (const auto& [id, v] : state_) {
            Json e;
            e["id"] = id;
            e["trials_done"] = v.first;
            e["successes"] = v.second;
            pts.push_back(e);
        }
        j["points"] = pts;
        std::ofstream out(path_);
        out << j.dump(2) << '\n';
    }

    static constexpr std::uint64_t kInterval = 1000000;

private:
    std::string path_;
    std::string key_;
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> state_;
};

struct CampaignOptions {
    std::uint64_t seed = 1;
    int workers = 1;
    bool timing = false;          // wall_ms column stays 0 unless enabled
    std::string checkpoint_path;  // empty disables checkpointing
};

namespace detail {

/// Monte Carlo loop for one (id, trials, per-trial predicate) point with
/// checkpointing.
template <class Fn>
std::uint64_t run_point(const std::string& id, std::uint64_t trials, const CampaignOptions& opt,
                        Checkpoint* ckpt, Fn&& per_trial) {
    std::uint64_t done = 0, successes = 0;
    if (ckpt) {
        auto [d, s] = ckpt->resume(id);
        if (d <= trials) {
            done = d;
            successes = s;
        }
    }
    while (done < trials) {
        std::uint64_t block = std::min<std::uint64_t>(Checkpoint::kInterval, trials - done);
        successes += count_trials(done, done + block, opt.workers, per_trial);
        done += block;
        if (ckpt) ckpt->record(id, done, successes);
    }
    return successes;
}

inline std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

inline Rational json_to_rational(const Json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    // Shortest decimal round-trip of the double, parsed exactly.
    return parse_rational(Json(v.get<double>()).dump());
}

}  // namespace detail

/// Monte Carlo estimate of the singularity probability of B_n(p) with the
/// exact zero-line baseline and the 2n(1-p)^n first-order curve. Every trial
/// decides singularity by exact integer rank. Emits two rows per point: one
/// "singularity" row (exhaustive baseline when n is small enough) and one
/// "zero_line" row carrying the exact inclusion-exclusion value.
inline CampaignReport run_singularity_campaign(const Json& experiment,
                                               const CampaignOptions& opt) {
    CampaignReport report;
    report.experiment = "singularity";
    report.params = experiment;
    report.seed = opt.seed;
    const int exact_max = experiment.value("exact_baseline_max_n", 4);
    Checkpoint ckpt(opt.checkpoint_path, opt.seed, experiment.dump());

    std::uint64_t point_index = 0;
    for (const auto& pt : experiment.at("points")) {
        const int n = pt.at("n").get<int>();
        const std::uint64_t trials = pt.at("trials").get<std::uint64_t>();
        if (n < 1 || n > 64)
            throw BudgetError("singularity campaign: n=" + std::to_string(n) +
                              " outside [1,64]");
        if (trials > 10000000)
            throw BudgetError("singularity campaign: " + std::to_string(trials) +
                              " trials exceed the 1e7-per-point budget (cost ~" +
                              std::to_string(trials * n * n * n / 100000000.0) + " s)");
        const Rational p = detail::json_to_rational(pt.at("p"));
        const double pd = to_double(p);
        // Decorrelate points by folding the point index into the stream id.
        const std::uint64_t stream_base = point_index << 40;

        std::int64_t t0 = detail::now_ms();
        std::uint64_t singular = detail::run_point(
            "singularity:" + std::to_string(n) + ":" + rational_to_string(p) + ":" +
                std::to_string(trials),
            trials, opt, opt.checkpoint_path.empty() ? nullptr : &ckpt,
            [&](std::uint64_t trial) {
                RandomSource rng = derive_stream(opt.seed, stream_base + trial);
                thread_local std::vector<std::int64_t> scratch;
                Matrix01 m = sample_bernoulli_matrix(n, pd, rng);
                return is_singular(m, scratch);
            });
        std::int64_t wall = detail::now_ms() - t0;

        CampaignRow row;
        row.experiment = "singularity";
        row.n = n;
        row.p = pd;
        row.trials = static_cast<std::int64_t>(trials);
        row.estimate = static_cast<double>(singular) / static_cast<double>(trials);
        row.ci_halfwidth = 3.0 * std::sqrt(std::max(row.estimate * (1 - row.estimate),
                                                    1.0 / static_cast<double>(trials)) /
                                           static_cast<double>(trials));
        if (n <= exact_max) {
            row.has_baseline_exact = true;
            row.baseline_exact = to_double(singularity_polynomial(n, opt.workers).eval(p));
        }
        ZeroLineProbability z = zero_line_probability(n, p);
        row.has_baseline_formula = true;
        row.baseline_formula = to_double(z.first_order);
        row.seed = opt.seed;
        row.wall_ms = opt.timing ? wall : 0;
        report.rows.push_back(row);

        CampaignRow zrow;
        zrow.experiment = "zero_line";
        zrow.n = n;
        zrow.p = pd;
        zrow.trials = 0;
        zrow.estimate = to_double(z.exact);
        zrow.ci_halfwidth = 0;
        zrow.has_baseline_exact = true;
        zrow.baseline_exact = to_double(z.exact);
        zrow.has_baseline_formula = true;
        zrow.baseline_formula = to_double(z.first_order);
        zrow.seed = opt.seed;
        zrow.wall_ms = 0;
        report.rows.push_back(zrow);
        ++point_index;
    }
    return report;
}

/// Exact singularity probability of Q_n by enumerating all C(n, floor(n/2))^n
/// row tuples; feasible for n <= 5.
inline Rational qn_exact_probability(int n, int workers = 1) {
    if (n < 1) throw ParameterError("qn_exact_probability: n must be >= 1");
    const int m = n / 2;
    std::vector<std::vector<std::uint8_t>> slice_vectors;
    {
        std::vector<std::uint8_t> v(static_cast<size_t>(n), 0);
        std::fill(v.begin(), v.begin() + m, 1);
        std::sort(v.begin(), v.end());
        do {
            slice_vectors.push_back(v);
        } while (std::next_permutation(v.begin(), v.end()));
    }
    const std::uint64_t rows = slice_vectors.size();
    double tuples = std::pow(static_cast<double>(rows), n);
    if (tuples > 2e6)
        throw BudgetError("qn_exact_probability: " + std::to_string(tuples) +
                          " row tuples; exhaustive baseline stops at n=5");
    const std::uint64_t total = static_cast<std::uint64_t>(tuples + 0.5);

    std::uint64_t singular = detail::count_trials(0, total, workers, [&](std::uint64_t code) {
        thread_local std::vector<std::int64_t> scratch;
        const int nn = static_cast<int>(slice_vectors[0].size());
        Matrix01 q(nn, nn);
        std::uint64_t c = code;
        for (int i = 0; i < nn; ++i) {
            const auto& row = slice_vectors[static_cast<size_t>(c % rows)];
            c /= rows;
            for (int j = 0; j < nn; ++j) q.at(i, j) = row[static_cast<size_t>(j)];
        }
        return is_singular(q, scratch);
    });
    return Rational(BigInt(singular), BigInt(total));
}

/// Monte Carlo singularity estimates for Q_n with the exact baseline at
/// n <= 5 and the (1/2)^n decay target in the formula column.
inline CampaignReport run_qn_campaign(const Json& experiment, const CampaignOptions& opt) {
    CampaignReport report;
    report.experiment = "qn";
    report.params = experiment;
    report.seed = opt.seed;
    const int exact_max = experiment.value("exact_baseline_max_n", 5);
    Checkpoint ckpt(opt.checkpoint_path, opt.seed, experiment.dump());

    std::uint64_t point_index = 0;
    for (const auto& pt : experiment.at("points")) {
        const int n = pt.at("n").get<int>();
        const std::uint64_t trials = pt.at("trials").get<std::uint64_t>();
        if (n < 1 || n > 64)
            throw BudgetError("qn campaign: n=" + std::to_string(n) + " outside [1,64]");
        if (trials > 10000000)
            throw BudgetError("qn campaign: trials exceed the 1e7-per-point budget");
        const std::uint64_t stream_base = point_index << 40;

        std::int64_t t0 = detail::now_ms();
        std::uint64_t singular = detail::run_point(
            "qn:" + std::to_string(n) + ":" + std::to_string(trials), trials, opt,
            opt.checkpoint_path.empty() ? nullptr : &ckpt, [&](std::uint64_t trial) {
                RandomSource rng = derive_stream(opt.seed, stream_base + trial);
                thread_local std::vector<std::int64_t> scratch;
                Matrix01 q = sample_qn_matrix(n, rng);
                return is_singular(q, scratch);
            });
        std::int64_t wall = detail::now_ms() - t0;

        CampaignRow row;
        row.experiment = "qn";
        row.n = n;
        row.p = 0.5;
        row.trials = static_cast<std::int64_t>(trials);
        row.estimate = static_cast<double>(singular) / static_cast<double>(trials);
        row.ci_halfwidth = 3.0 * std::sqrt(std::max(row.estimate * (1 - row.estimate),
                                                    1.0 / static_cast<double>(trials)) /
                                           static_cast<double>(trials));
        if (n <= exact_max) {
            row.has_baseline_exact = true;
            row.baseline_exact = to_double(qn_exact_probability(n, opt.workers));
        }
        row.has_baseline_formula = true;
        row.baseline_formula = std::pow(0.5, n);
        row.seed = opt.seed;
        row.wall_ms = opt.timing ? wall : 0;
        report.rows.push_back(row);
        ++point_index;
    }
    return report;
}

/// One sampled kernel direction in the structure experiment.
struct StructureSample {
    int n = 0;
    std::int64_t sample_id = 0;
    bool degenerate = false;
    bool cons = false;
    double t_value = 0;
    double t_sqrt_n = 0;
};

struct StructureResult {
    CampaignReport report;
    std::vector<StructureSample> samples;
};

/// Samples H(p), classifies the kernel direction as almost-constant or not,
/// and computes the threshold function of the non-almost-constant ones under
/// the exact conditional law. Summary rows report the per-n maximum of
/// T sqrt(n) over non-almost-constant samples.
inline StructureResult run_structure_experiment(const Json& experiment,
                                                const CampaignOptions& opt) {
    StructureResult result;
    result.report.experiment = "structure";
    result.report.params = experiment;
    result.report.seed = opt.seed;

    const double p = experiment.at("p").get<double>();
    const double delta = experiment.at("delta").get<double>();
    const double rho = experiment.at("rho").get<double>();
    const double gamma = experiment.at("gamma").get<double>();
    const double levy_slope = experiment.value("l_threshold", 8.0);
    const std::int64_t samples = experiment.at("samples").get<std::int64_t>();
    const ConsParams cons_params(delta, rho);

    std::uint64_t point_index = 0;
    for (const auto& nv : experiment.at("n_list")) {
        const int n = nv.get<int>();
        if (n > 24)
            throw BudgetError("structure experiment: exact conditional law stops at n=24");
        const std::uint64_t stream_base = point_index << 40;
        std::int64_t t0 = detail::now_ms();

        std::vector<StructureSample> local(static_cast<size_t>(samples));
        std::atomic<std::int64_t> next{0};
        auto work = [&]() {
            for (;;) {
                std::int64_t id = next.fetch_add(1);
                if (id >= samples) return;
                RandomSource rng =
                    derive_stream(opt.seed, stream_base + static_cast<std::uint64_t>(id));
                Matrix01 h = sample_bernoulli_matrix(n - 1, n, p, rng);
                StructureSample s;
                s.n = n;
                s.sample_id = id;
                KernelResult k = kernel_vector(h);
                s.degenerate = k.degenerate;
                if (!s.degenerate) {
                    UnitVector v(k.unit, 1e-9);
                    s.cons = cons_membership(v, cons_params).member;
                    if (!s.cons) {
                        s.t_value = threshold(v, levy_slope, p, gamma);
                        s.t_sqrt_n = s.t_value * std::sqrt(static_cast<double>(n));
                    }
                }
                local[static_cast<size_t>(id)] = s;
            }
        };
        int workers = std::max(1, opt.workers);
        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }

        double max_tsn = 0;
        std::int64_t non_cons = 0;
        for (const auto& s : local) {
            if (!s.degenerate && !s.cons) {
                max_tsn = std::max(max_tsn, s.t_sqrt_n);
                ++non_cons;
            }
            result.samples.push_back(s);
        }

        CampaignRow row;
        row.experiment = "structure";
        row.n = n;
        row.p = p;
        row.trials = samples;
        row.estimate = max_tsn;
        row.ci_halfwidth = 0;
        row.has_baseline_formula = true;
        row.baseline_formula = static_cast<double>(non_cons);
        row.seed = opt.seed;
        row.wall_ms = opt.timing ? detail::now_ms() - t0 : 0;
        result.report.rows.push_back(row);
        ++point_index;
    }
    return result;
}

inline std::string structure_samples_csv(const std::vector<StructureSample>& samples) {
    std::ostringstream os;
    os << "n,sample_id,degenerate,cons,t_value,t_sqrt_n\n";
    for (const auto& s : samples)
        os << s.n << ',' << s.sample_id << ',' << (s.degenerate ? 1 : 0) << ','
           << (s.cons ? 1 : 0) << ',' << format_double(s.t_value) << ','
           << format_double(s.t_sqrt_n) << '\n';
    return os.str();
}

/// Estimates P[dist(v, colspan(A)) <= threshold] for random n x (n-1)
/// Bernoulli A, sweeping the configured thresholds (default 2^{-n/4} and
/// 2^{-n/2}). The threshold appears in the baseline_formula column.
inline CampaignReport run_block_residual_experiment(const Json& experiment,
                                                    const CampaignOptions& opt) {
    CampaignReport report;
    report.experiment = "block_residual";
    report.params = experiment;
    report.seed = opt.seed;
    Checkpoint ckpt(opt.checkpoint_path, opt.seed, experiment.dump());

    const std::string v_kind = experiment.value("v", std::string("ones"));

    std::uint64_t point_index = 0;
    for (const auto& pt : experiment.at("points")) {
        const int n = pt.at("n").get<int>();
        const double p = pt.at("p").get<double>();
        const std::uint64_t trials = pt.at("trials").get<std::uint64_t>();
        if (n < 2 || n > 64)
            throw BudgetError("block-residual: n=" + std::to_string(n) + " outside [2,64]");
        if (trials > 10000000)
            throw BudgetError("block-residual: trials exceed the 1e7-per-point budget");

        RealVector v(static_cast<size_t>(n), 0.0);
        if (v_kind == "ones") {
            std::fill(v.begin(), v.end(), 1.0);
        } else if (v_kind == "e1") {
            v[0] = 1.0;
        } else {
            throw ParameterError("block-residual: v must be 'ones' or 'e1'");
        }

        std::vector<double> thresholds = {std::exp2(-n / 4.0), std::exp2(-n / 2.0)};
        if (pt.contains("thresholds")) {
            thresholds.clear();
            for (const auto& t : pt.at("thresholds")) thresholds.push_back(t.get<double>());
        }

        for (size_t ti = 0; ti < thresholds.size(); ++ti) {
            const double threshold_val = thresholds[ti];
            const std::uint64_t stream_base = point_index << 40;
            std::int64_t t0 = detail::now_ms();
            std::uint64_t hits = detail::run_point(
                "block:" + std::to_string(n) + ":" + format_double(p) + ":" +
                    format_double(threshold_val) + ":" + std::to_string(trials),
                trials, opt, opt.checkpoint_path.empty() ? nullptr : &ckpt,
                [&](std::uint64_t trial) {
                    RandomSource rng = derive_stream(opt.seed, stream_base + trial);
                    Matrix01 a = sample_bernoulli_matrix(n, n - 1, p, rng);
                    std::vector<RealVector> cols(static_cast<size_t>(n - 1),
                                                 RealVector(static_cast<size_t>(n)));
                    for (int j = 0; j < n - 1; ++j)
                        for (int i = 0; i < n; ++i)
                            cols[static_cast<size_t>(j)][static_cast<size_t>(i)] = a.at(i, j);
                    return dist_to_rowspan(v, cols) <= threshold_val;
                });
            std::int64_t wall = detail::now_ms() - t0;

            CampaignRow row;
            row.experiment = "block_residual";
            row.n = n;
            row.p = p;
            row.trials = static_cast<std::int64_t>(trials);
            row.estimate = static_cast<double>(hits) / static_cast<double>(trials);
            row.ci_halfwidth =
                3.0 * std::sqrt(std::max(row.estimate * (1 - row.estimate),
                                         1.0 / static_cast<double>(trials)) /
                                static_cast<double>(trials));
            row.has_baseline_formula = true;
            row.baseline_formula = threshold_val;
            row.seed = opt.seed;
            row.wall_ms = opt.timing ? wall : 0;
            report.rows.push_back(row);
        }
        ++point_index;
    }
    return report;
}

/// Serialization of the singularity polynomial: {n, counts[]} with counts as
/// decimal strings.
inline Json singularity_polynomial_to_json(const SingularityPolynomial& poly) {
    Json j;
    j["n"] = poly.n;
    Json counts = Json::array();
    for (const BigInt& c : poly.counts) counts.push_back(c.str());
    j["counts"] = counts;
    return j;
}

inline SingularityPolynomial singularity_polynomial_from_json(const Json& j) {
    SingularityPolynomial poly;
    poly.n = j.at("n").get<int>();
    for (const auto& c : j.at("counts")) poly.counts.emplace_back(c.get<std::string>());
    return poly;
}

}  // namespace slicelab
