#pragma once

#include "tsra/instance.hpp"
#include "tsra/ledger.hpp"
#include "tsra/lp.hpp"
#include "tsra/policy.hpp"
#include "tsra/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsra {

struct Phase2Selection {
    int round = 0;
    int online_type = 0;
    std::optional<int> edge;  // index into edges_phase2; empty on rejection
};

struct EpisodeResult {
    double total_reward = 0.0;
    std::vector<long long> phase1_copies;
    std::vector<Phase2Selection> phase2_selections;
    Eigen::VectorXd final_remaining;
};

struct EvalReport {
    std::string policy;
    long episodes = 0;
    double mean_reward = 0.0;
    double std_error = 0.0;
    double lp_objective = 0.0;
    double competitive_ratio = 0.0;  // mean_reward / lp_objective, 0 when degenerate
    bool degenerate = false;         // lp_objective was 0
};

// Deterministic sum independent of accumulation order.
double pairwise_sum(const std::vector<double>& values);

int sample_arrival_at(const ArrivalModel& arrivals, int round, Rng& rng);

std::vector<int> sample_arrivals(const ArrivalModel& arrivals, Rng& rng);

// One full two-phase episode. The seed spawns two substreams, one for the
// arrival sequence and one for policy randomness, so all policies face the
// same arrivals for a given episode seed. solution may be null for policies
// that do not need the LP.
EpisodeResult run_episode(const Instance& inst, const PolicySpec& policy,
                          const LpSolution* solution, std::uint64_t seed);

// Episodes use seeds base_seed .. base_seed + episodes - 1. The ratio is
// mean reward over the LP objective; degenerate zero-objective instances
// report ratio 0.
EvalReport evaluate(const Instance& inst, const PolicySpec& policy, long episodes,
                    std::uint64_t base_seed, const LpSolution& solution);

// Maximum total weight achievable with hindsight on one fixed arrival
// sequence: exhaustive search over phase-1 copy vectors and per-round
// phase-2 selections under the shared budgets.
double offline_opt_for_sequence(const Instance& inst, const std::vector<int>& arrivals);

// Exact expected offline optimum: probability-weighted average of
// offline_opt_for_sequence over every arrival sequence. Rejects instances
// whose estimated enumeration work exceeds max_enumeration, and instances
// with an empty-cost phase-1 edge (their optimum is unbounded).
double brute_force_offline_opt(const Instance& inst, long long max_enumeration);

}  // namespace tsra
