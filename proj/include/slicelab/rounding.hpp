#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "slicelab/anticoncentration.hpp"
#include "slicelab/errors.hpp"
#include "slicelab/rng.hpp"
#include "slicelab/types.hpp"

namespace slicelab {

enum class CheckState { Passed, Failed, Skipped };

struct RoundingChecks {
    bool r1 = false;            // |y - y'|_inf <= 1, holds by construction
    CheckState r2 = CheckState::Skipped;  // decay of the small-ball tail
    CheckState r3 = CheckState::Skipped;  // Levy value not collapsed
    bool r4 = false;            // |sum y - sum y'| <= C sqrt(n)
};

struct RoundingResult {
    std::vector<std::int64_t> y_prime;
    int attempts = 0;
    bool success = false;
    RoundingChecks checks;
    double mu = 0;
    double lambda = 0;
    std::string failed_clause;  // set when success is false
};

/// Randomized rounding of y to an integer vector: y'_i = floor(y_i) plus a
/// Bernoulli(frac(y_i)) bit, independently, resampled until the verifiable
/// clauses hold:
///   (R1) |y - y'|_inf <= 1                          (by construction)
///   (R2) P[|sum b_i y'_i - lambda| <= t] <= C mu t  for all t >= sqrt(n)
///   (R3) L(sum b_i y'_i, sqrt(n)) >= c L(sum b_i y_i, sqrt(n))
///   (R4) |sum y - sum y'| <= C sqrt(n)
/// (R2)/(R3) need the exact law of the weighted sums and are marked skipped
/// when the enumeration exceeds the atom budget.
inline RoundingResult randomized_round(const RealVector& y, double lambda,
                                       const WeightModel& model, double mu,
                                       const ConstantsConfig& constants, RandomSource& rng,
                                       int max_attempts = 64, double atom_budget = 2e6) {
    const int n = static_cast<int>(y.size());
    const double rt = std::sqrt(static_cast<double>(n));
    const double c_upper = constants.c_round_upper;

    std::optional<AtomSet> base_atoms;
    double base_levy = 0;
    bool atoms_feasible = true;
    try {
        base_atoms = build_atoms(y, model, atom_budget);
        base_levy = levy_exact(*base_atoms, rt).value;
    } catch (const BudgetError&) {
        atoms_feasible = false;
    }

    RoundingResult best;
    best.mu = mu;
    best.lambda = lambda;
    int best_score = -1;

    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        RoundingResult cur;
        cur.mu = mu;
        cur.lambda = lambda;
        cur.attempts = attempt;
        cur.y_prime.resize(static_cast<size_t>(n));
        double sum_diff = 0;
        for (int i = 0; i < n; ++i) {
            double fl = std::floor(y[static_cast<size_t>(i)]);
            double frac = y[static_cast<size_t>(i)] - fl;
            std::int64_t v = static_cast<std::int64_t>(fl);
            if (frac > 0 && rng.bernoulli(frac)) v += 1;
            cur.y_prime[static_cast<size_t>(i)] = v;
            sum_diff += y[static_cast<size_t>(i)] - static_cast<double>(v);
        }

        cur.checks.r1 = true;
        for (int i = 0; i < n; ++i) {
            if (std::abs(y[static_cast<size_t>(i)] -
                         static_cast<double>(cur.y_prime[static_cast<size_t>(i)])) > 1.0)
                cur.checks.r1 = false;  // unreachable for floor+bit rounding
        }
        cur.checks.r4 = std::abs(sum_diff) <= c_upper * rt;

        std::string failed;
        if (!cur.checks.r1) failed = "R1";
        if (failed.empty() && !cur.checks.r4) failed = "R4";

        if (atoms_feasible) {
            RealVector yp(cur.y_prime.begin(), cur.y_prime.end());
            AtomSet atoms = build_atoms(yp, model, atom_budget);
            // (R2): the step function t -> P[|S' - lambda| <= t] stays below
            // C mu t on t >= sqrt(n); it suffices to test each atom distance
            // and the left endpoint.
            std::vector<std::pair<double, double>> dist;
            dist.reserve(atoms.values.size());
            for (size_t i = 0; i < atoms.values.size(); ++i)
                dist.emplace_back(std::abs(atoms.values[i] - lambda), atoms.masses[i]);
            std::sort(dist.begin(), dist.end());
            bool r2_ok = true;
            double cum = 0;
            for (auto& [d, m] : dist) {
                cum += m;
                double t_eff = std::max(d, rt);
                if (cum > c_upper * mu * t_eff) {
                    r2_ok = false;
                    break;
                }
            }
            cur.checks.r2 = r2_ok ? CheckState::Passed : CheckState::Failed;
            double levy_rounded = levy_exact(atoms, rt).value;
            cur.checks.r3 = levy_rounded >= constants.c_round_lower * base_levy
                                ? CheckState::Passed
                                : CheckState::Failed;
            if (failed.empty() && cur.checks.r2 == CheckState::Failed) failed = "R2";
            if (failed.empty() && cur.checks.r3 == CheckState::Failed) failed = "R3";
        }

        int score = int(cur.checks.r1) + int(cur.checks.r4) +
                    int(cur.checks.r2 != CheckState::Failed) +
                    int(cur.checks.r3 != CheckState::Failed);
        if (failed.empty()) {
            cur.success = true;
            return cur;
        }
        cur.failed_clause = failed;
        if (score > best_score) {
            best_score = score;
            best = cur;
        }
    }
    best.success = false;
    best.attempts = max_attempts;
    return best;
}

}  // namespace slicelab
