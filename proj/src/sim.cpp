#include "tsra/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsra {

namespace {

double pairwise(const double* a, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise(a, half) + pairwise(a + half, n - half);
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) {
    return values.empty() ? 0.0 : pairwise(values.data(), values.size());
}

int sample_arrival_at(const ArrivalModel& arrivals, int round, Rng& rng) {
    const int types = static_cast<int>(arrivals.probs.cols());
    const double u = rng.uniform();
    double cum = 0.0;
    int last_positive = -1;
    for (int j = 0; j < types; ++j) {
        const double p = arrivals.prob(round, j);
        if (p <= 0.0) continue;
        cum += p;
        last_positive = j;
        if (u < cum) return j;
    }
    // u fell into the sliver left by normalization tolerance
    if (last_positive < 0) throw std::invalid_argument("sample_arrival_at: all-zero round");
    return last_positive;
}

std::vector<int> sample_arrivals(const ArrivalModel& arrivals, Rng& rng) {
    std::vector<int> out(arrivals.horizon);
    for (int t = 0; t < arrivals.horizon; ++t) out[t] = sample_arrival_at(arrivals, t, rng);
    return out;
}

EpisodeResult run_episode(const Instance& inst, const PolicySpec& policy,
                          const LpSolution* solution, std::uint64_t seed) {
    if (policy.needs_lp() && solution == nullptr)
        throw std::invalid_argument("run_episode: this policy needs an LP solution");

    Rng arrival_rng(mix_seed(seed));
    Rng policy_rng(mix_seed(seed + 0x9e3779b97f4a7c15ULL));
    const std::vector<int> arrivals = sample_arrivals(inst.arrivals, arrival_rng);

    PolicySpec acting = policy;
    if (policy.kind == PolicySpec::Kind::GreedyUniform) acting = greedy_uniform(policy_rng);

    EpisodeResult result;
    if (acting.kind == PolicySpec::Kind::Samp) {
        PhaseOnePlan plan =
            samp_phase1(*solution, acting.samp.eta, acting.samp.removal, inst, policy_rng);
        result.phase1_copies = std::move(plan.copies);
        BudgetLedger ledger(budget_vector(inst));
        ledger.debit(plan.total_cost);
        for (std::size_t e = 0; e < result.phase1_copies.size(); ++e)
            result.total_reward +=
                static_cast<double>(result.phase1_copies[e]) * inst.edges_phase1[e].weight;

        const std::vector<std::vector<int>> adjacency = phase2_adjacency(inst);
        for (int t = 0; t < inst.arrivals.horizon; ++t) {
            const int j = arrivals[t];
            const std::optional<int> pick = samp_phase2_decide(
                *solution, acting.samp.alpha, j, t, adjacency[j], inst, ledger, policy_rng);
            if (pick) result.total_reward += inst.edges_phase2[*pick].weight;
            result.phase2_selections.push_back({t, j, pick});
        }
        result.final_remaining = ledger.remaining();
    } else {
        PhaseOnePlan plan = greedy_phase1(inst, acting.greedy.delta);
        result.phase1_copies = std::move(plan.copies);
        BudgetLedger ledger(budget_vector(inst));
        ledger.debit(plan.total_cost);
        for (std::size_t e = 0; e < result.phase1_copies.size(); ++e)
            result.total_reward +=
                static_cast<double>(result.phase1_copies[e]) * inst.edges_phase1[e].weight;

        const std::vector<std::vector<int>> adjacency = phase2_adjacency(inst);
        for (int t = 0; t < inst.arrivals.horizon; ++t) {
            const int j = arrivals[t];
            const std::optional<int> pick = greedy_phase2_decide(adjacency[j], inst, ledger);
            if (pick) result.total_reward += inst.edges_phase2[*pick].weight;
            result.phase2_selections.push_back({t, j, pick});
        }
        result.final_remaining = ledger.remaining();
    }
    return result;
}

EvalReport evaluate(const Instance& inst, const PolicySpec& policy, long episodes,
                    std::uint64_t base_seed, const LpSolution& solution) {
    if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be >= 1");

    std::vector<double> rewards(episodes);
    for (long i = 0; i < episodes; ++i)
        rewards[i] =
            run_episode(inst, policy, &solution, base_seed + static_cast<std::uint64_t>(i))
                .total_reward;

    EvalReport report;
    report.policy = policy.label();
    report.episodes = episodes;
    report.mean_reward = pairwise_sum(rewards) / static_cast<double>(episodes);
    if (episodes > 1) {
        std::vector<double> sq(rewards.size());
        for (std::size_t i = 0; i < rewards.size(); ++i) {
            const double d = rewards[i] - report.mean_reward;
            sq[i] = d * d;
        }
        const double variance = pairwise_sum(sq) / static_cast<double>(episodes - 1);
        report.std_error = std::sqrt(variance / static_cast<double>(episodes));
    }
    report.lp_objective = solution.objective_value;
    report.degenerate = !(solution.objective_value > 0.0);
    report.competitive_ratio =
        report.degenerate ? 0.0 : report.mean_reward / solution.objective_value;
    return report;
}

namespace {

struct OracleContext {
    const Instance* inst;
    const std::vector<int>* arrivals;
    std::vector<std::vector<int>> adjacency;
    Eigen::VectorXd remaining;

    bool affordable(const EdgeSpec& edge) const {
        for (const CostEntry& c : edge.cost)
            if (c.amount > remaining[c.resource] + kLedgerTol) return false;
        return true;
    }
    void take(const EdgeSpec& edge) {
        for (const CostEntry& c : edge.cost) remaining[c.resource] -= c.amount;
    }
    void put_back(const EdgeSpec& edge) {
        for (const CostEntry& c : edge.cost) remaining[c.resource] += c.amount;
    }

    double best_phase2(int t) {
        if (t >= static_cast<int>(arrivals->size())) return 0.0;
        double best = best_phase2(t + 1);  // leave this arrival unassigned
        for (int e : adjacency[(*arrivals)[t]]) {
            const EdgeSpec& edge = inst->edges_phase2[e];
            if (!affordable(edge)) continue;
            take(edge);
            best = std::max(best, edge.weight + best_phase2(t + 1));
            put_back(edge);
        }
        return best;
    }

    double best_plan(int e, double phase1_reward) {
        if (e >= static_cast<int>(inst->edges_phase1.size()))
            return phase1_reward + best_phase2(0);
        const EdgeSpec& edge = inst->edges_phase1[e];
        double best = best_plan(e + 1, phase1_reward);
        int taken = 0;
        while (affordable(edge)) {
            take(edge);
            ++taken;
            best = std::max(best, best_plan(e + 1, phase1_reward + taken * edge.weight));
        }
        for (; taken > 0; --taken) put_back(edge);
        return best;
    }
};

std::vector<double> phase1_copy_caps(const Instance& inst) {
    std::vector<double> caps;
    for (const EdgeSpec& e : inst.edges_phase1) {
        if (e.cost.empty())
            throw std::invalid_argument(
                "oracle: phase-1 edge " + std::to_string(e.id) +
                " has empty cost support; its optimum is unbounded");
        double cap = std::numeric_limits<double>::infinity();
        for (const CostEntry& c : e.cost)
            cap = std::min(cap,
                           std::floor((inst.resources[c.resource].budget + kLedgerTol) / c.amount));
        caps.push_back(cap);
    }
    return caps;
}

}  // namespace

double offline_opt_for_sequence(const Instance& inst, const std::vector<int>& arrivals) {
    phase1_copy_caps(inst);  // reject unbounded instances
    OracleContext ctx{&inst, &arrivals, phase2_adjacency(inst), budget_vector(inst)};
    return ctx.best_plan(0, 0.0);
}

double brute_force_offline_opt(const Instance& inst, long long max_enumeration) {
    const int T = inst.arrivals.horizon;
    const int J = inst.online_types;
    if (J < 1) return 0.0;

    const std::vector<double> caps = phase1_copy_caps(inst);
    const std::vector<std::vector<int>> adjacency = phase2_adjacency(inst);
    double work = std::pow(static_cast<double>(J), T);
    for (double cap : caps) work *= cap + 1.0;
    std::size_t max_degree = 0;
    for (const auto& adj : adjacency) max_degree = std::max(max_degree, adj.size());
    work *= std::pow(static_cast<double>(max_degree) + 1.0, T);
    if (!(work <= static_cast<double>(max_enumeration)))
        throw std::invalid_argument("brute_force_offline_opt: estimated enumeration work " +
                                    std::to_string(work) + " exceeds the budget");

    std::vector<int> seq(T, 0);
    double expectation = 0.0;
    while (true) {
        double prob = 1.0;
        for (int t = 0; t < T && prob > 0.0; ++t) prob *= inst.arrivals.prob(t, seq[t]);
        if (prob > 0.0) expectation += prob * offline_opt_for_sequence(inst, seq);

        int t = T - 1;
        while (t >= 0 && seq[t] == J - 1) seq[t--] = 0;
        if (t < 0) break;
        ++seq[t];
    }
    return expectation;
}

}  // namespace tsra
