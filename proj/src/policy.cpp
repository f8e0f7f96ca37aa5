#include "tsra/policy.hpp"

#include "tsra/format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tsra {

namespace {

// Slack allowed before a phase-2 candidate distribution counts as corrupted.
constexpr double kSampContractTol = 1e-9;

double parse_real(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("policy: bad value '" + value + "' for " + key);
    }
}

std::vector<std::pair<std::string, std::string>> parse_params(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("policy: expected key=value, got '" + item + "'");
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        pos = comma + 1;
    }
    return out;
}

}  // namespace

PolicySpec PolicySpec::parse(const std::string& text) {
    PolicySpec spec;
    const std::size_t colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);

    if (head == "greedy-uniform") {
        if (!rest.empty())
            throw std::invalid_argument("policy: greedy-uniform takes no parameters");
        spec.kind = Kind::GreedyUniform;
        return spec;
    }
    if (head == "samp") {
        spec.kind = Kind::Samp;
        for (const auto& [key, value] : parse_params(rest)) {
            if (key == "eta")
                spec.samp.eta = parse_real(value, key);
            else if (key == "alpha")
                spec.samp.alpha = parse_real(value, key);
            else if (key == "removal") {
                if (value == "seq")
                    spec.samp.removal = RemovalMode::Sequential;
                else if (value == "all")
                    spec.samp.removal = RemovalMode::AllCopies;
                else
                    throw std::invalid_argument("policy: removal must be 'seq' or 'all', got '" +
                                                value + "'");
            } else {
                throw std::invalid_argument("policy: unknown samp parameter '" + key + "'");
            }
        }
        if (!(spec.samp.eta > 0.0 && spec.samp.eta <= 1.0))
            throw std::invalid_argument("policy: eta must lie in (0, 1]");
        if (!(spec.samp.alpha > 0.0 && spec.samp.alpha <= 1.0))
            throw std::invalid_argument("policy: alpha must lie in (0, 1]");
        return spec;
    }
    if (head == "greedy") {
        spec.kind = Kind::Greedy;
        for (const auto& [key, value] : parse_params(rest)) {
            if (key == "delta")
                spec.greedy.delta = parse_real(value, key);
            else
                throw std::invalid_argument("policy: unknown greedy parameter '" + key + "'");
        }
        if (!(spec.greedy.delta >= 0.0 && spec.greedy.delta <= 1.0))
            throw std::invalid_argument("policy: delta must lie in [0, 1]");
        return spec;
    }
    throw std::invalid_argument("policy: unknown policy '" + head + "'");
}

std::string PolicySpec::label() const {
    switch (kind) {
        case Kind::GreedyUniform: return "greedy-uniform";
        case Kind::Greedy: return "greedy:delta=" + format_double(greedy.delta);
        case Kind::Samp: break;
    }
    std::string out = "samp:eta=" + format_double(samp.eta) + ",alpha=" + format_double(samp.alpha);
    if (samp.removal == RemovalMode::Sequential) out += ",removal=seq";
    return out;
}

long long rd_round(double x, Rng& rng) {
    if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument("rd_round: input must be finite and non-negative");
    const double fl = std::floor(x);
    return static_cast<long long>(fl) + (rng.bernoulli(x - fl) ? 1 : 0);
}

std::vector<long long> sample_phase1_copies(const LpSolution& solution, double eta, Rng& rng) {
    std::vector<long long> copies(solution.x_star.size());
    for (std::size_t e = 0; e < copies.size(); ++e)
        copies[e] = rd_round(eta * solution.x_star[e], rng);
    return copies;
}

namespace {

Eigen::VectorXd plan_cost(const std::vector<long long>& copies, const Instance& inst) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(inst.resources.size());
    for (std::size_t e = 0; e < copies.size(); ++e)
        for (const CostEntry& c : inst.edges_phase1[e].cost)
            total[c.resource] += static_cast<double>(copies[e]) * c.amount;
    return total;
}

}  // namespace

PhaseOnePlan repair_phase1(std::vector<long long> copies, const Instance& inst,
                           RemovalMode mode) {
    const Eigen::VectorXd budgets = budget_vector(inst);
    Eigen::VectorXd total = plan_cost(copies, inst);

    if (mode == RemovalMode::AllCopies) {
        const auto overrun = [&](int k) { return total[k] > budgets[k] + kLedgerTol; };
        std::vector<long long> kept = copies;
        for (std::size_t e = 0; e < copies.size(); ++e) {
            if (copies[e] == 0) continue;
            for (const CostEntry& c : inst.edges_phase1[e].cost)
                if (overrun(c.resource)) {
                    kept[e] = 0;
                    break;
                }
        }
        copies = std::move(kept);
        total = plan_cost(copies, inst);
    } else {
        while (true) {
            bool any_overrun = false;
            for (int k = 0; k < total.size(); ++k)
                if (total[k] > budgets[k] + kLedgerTol) any_overrun = true;
            if (!any_overrun) break;

            int victim = -1;
            double victim_score = 0.0;
            for (std::size_t e = 0; e < copies.size(); ++e) {
                if (copies[e] == 0) continue;
                double contribution = 0.0;
                for (const CostEntry& c : inst.edges_phase1[e].cost)
                    if (total[c.resource] > budgets[c.resource] + kLedgerTol)
                        contribution += c.amount;
                if (contribution <= 0.0) continue;
                const double score = contribution / inst.edges_phase1[e].weight;
                if (victim < 0 || score > victim_score ||
                    (score == victim_score &&
                     inst.edges_phase1[e].id < inst.edges_phase1[victim].id)) {
                    victim = static_cast<int>(e);
                    victim_score = score;
                }
            }
            --copies[victim];
            for (const CostEntry& c : inst.edges_phase1[victim].cost)
                total[c.resource] -= c.amount;
        }
    }

    if ((total.array() > budgets.array() + kLedgerTol).any())
        throw std::logic_error("repair_phase1: plan still overruns a budget");
    return {std::move(copies), std::move(total)};
}

PhaseOnePlan samp_phase1(const LpSolution& solution, double eta, RemovalMode mode,
                         const Instance& inst, Rng& rng) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("samp_phase1: eta must lie in (0, 1]");
    return repair_phase1(sample_phase1_copies(solution, eta, rng), inst, mode);
}

std::optional<int> samp_phase2_decide(const LpSolution& solution, double alpha, int online_type,
                                      int round, const std::vector<int>& incident,
                                      const Instance& inst, BudgetLedger& ledger, Rng& rng) {
    const double p = inst.arrivals.prob(round, online_type);
    if (!(p > 0.0))
        throw std::logic_error("samp_phase2_decide: arrival of a zero-probability type");

    double sum = 0.0;
    for (int e : incident) sum += alpha * solution.y(e, round) / p;
    if (sum > 1.0 + kSampContractTol)
        throw std::logic_error(
            "samp_phase2_decide: candidate probabilities sum to " + format_double(sum) +
            "; the solution does not satisfy the arrival constraints");

    const double u = rng.uniform();
    double cum = 0.0;
    int candidate = -1;
    for (int e : incident) {
        cum += alpha * solution.y(e, round) / p;
        if (u < cum) {
            candidate = e;
            break;
        }
    }
    if (candidate < 0) return std::nullopt;

    const EdgeSpec& edge = inst.edges_phase2[candidate];
    if (!ledger.is_safe(edge)) return std::nullopt;
    ledger.debit(edge);
    return candidate;
}

PhaseOnePlan greedy_phase1(const Instance& inst, double delta) {
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("greedy_phase1: delta must lie in [0, 1]");

    std::vector<int> order(inst.edges_phase1.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const EdgeSpec& ea = inst.edges_phase1[a];
        const EdgeSpec& eb = inst.edges_phase1[b];
        if (ea.weight != eb.weight) return ea.weight > eb.weight;
        return ea.id < eb.id;
    });

    Eigen::VectorXd remaining = delta * budget_vector(inst);
    PhaseOnePlan plan;
    plan.copies.assign(inst.edges_phase1.size(), 0);
    plan.total_cost = Eigen::VectorXd::Zero(inst.resources.size());
    for (int e : order) {
        const EdgeSpec& edge = inst.edges_phase1[e];
        if (edge.cost.empty()) continue;
        while (true) {
            bool safe = true;
            for (const CostEntry& c : edge.cost)
                if (c.amount > remaining[c.resource] + kLedgerTol) {
                    safe = false;
                    break;
                }
            if (!safe) break;
            ++plan.copies[e];
            for (const CostEntry& c : edge.cost) {
                remaining[c.resource] = std::max(remaining[c.resource] - c.amount, 0.0);
                plan.total_cost[c.resource] += c.amount;
            }
        }
    }
    return plan;
}

std::optional<int> greedy_phase2_decide(const std::vector<int>& incident, const Instance& inst,
                                        BudgetLedger& ledger) {
    int best = -1;
    for (int e : incident) {
        const EdgeSpec& edge = inst.edges_phase2[e];
        if (!ledger.is_safe(edge)) continue;
        if (best < 0 || edge.weight > inst.edges_phase2[best].weight ||
            (edge.weight == inst.edges_phase2[best].weight && edge.id < inst.edges_phase2[best].id))
            best = e;
    }
    if (best < 0) return std::nullopt;
    ledger.debit(inst.edges_phase2[best]);
    return best;
}

PolicySpec greedy_uniform(Rng& rng) {
    PolicySpec spec;
    spec.kind = PolicySpec::Kind::Greedy;
    spec.greedy.delta = rng.uniform();
    return spec;
}

GuaranteeReport guarantee(int ell1, int ell2, std::optional<double> B) {
    if (ell1 < 0 || ell2 < 0 || (ell1 == 0 && ell2 == 0))
        throw std::invalid_argument("guarantee: sparsities must be non-negative and not both 0");

    GuaranteeReport report;
    report.ell1 = ell1;
    report.ell2 = ell2;
    if (ell2 == 0) {
        report.epsilon = 0.0;
        report.ratio_lower_bound = 1.0 / (4.0 * ell1);
        return report;
    }
    if (!B)
        throw std::invalid_argument("guarantee: non-integral sparsity requires a minimum budget");
    if (*B <= 2.0)
        throw std::invalid_argument("guarantee: bound vacuous for minimum budget <= 2");
    report.B = B;
    report.epsilon = 2.0 * std::max(1.0 / (*B - 2.0), ell2 * std::exp(-*B / 12.0 + 1.0 / 6.0));
    const double ratio = (1.0 - report.epsilon) / (4.0 * (ell1 + ell2));
    report.ratio_lower_bound = std::clamp(ratio, 0.0, 1.0);
    return report;
}

}  // namespace tsra
