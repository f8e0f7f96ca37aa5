#include "tsra/lp.hpp"

#include <cmath>
#include <limits>

namespace tsra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd raw_vector(const LpProblem& problem, const LpSolution& solution) {
    Eigen::VectorXd v(problem.vars.size());
    for (std::size_t i = 0; i < problem.vars.size(); ++i) {
        const VarInfo& info = problem.vars[i];
        switch (info.kind) {
            case VarKind::PhaseOne: v[i] = solution.x_star[info.edge]; break;
            case VarKind::PhaseTwoAggregate: v[i] = solution.y_star(0, info.edge); break;
            case VarKind::PhaseTwoRound: v[i] = solution.y_star(info.round, info.edge); break;
        }
    }
    return v;
}

}  // namespace

LpProblem build_benchmark(const Instance& inst) {
    const std::vector<Violation> violations = validate(inst);
    if (!violations.empty())
        throw std::invalid_argument("build_benchmark: invalid instance: " + violations[0].code +
                                    " (" + violations[0].detail + ")");
    for (const EdgeSpec& e : inst.edges_phase1)
        if (e.cost.empty())
            throw std::invalid_argument("build_benchmark: phase-1 edge " + std::to_string(e.id) +
                                        " has empty cost support; the LP would be unbounded");

    LpProblem p;
    p.horizon = inst.arrivals.horizon;
    p.aggregated = inst.arrivals.iid;
    p.num_phase1 = static_cast<int>(inst.edges_phase1.size());
    p.num_phase2 = static_cast<int>(inst.edges_phase2.size());
    const int T = p.horizon;

    const int num_y = p.aggregated ? p.num_phase2 : p.num_phase2 * T;
    const int num_vars = p.num_phase1 + num_y;
    p.objective.resize(num_vars);
    p.vars.resize(num_vars);
    p.upper.assign(num_vars, kInf);

    for (int e = 0; e < p.num_phase1; ++e) {
        p.vars[e] = {VarKind::PhaseOne, e, -1};
        p.objective[e] = inst.edges_phase1[e].weight;
    }
    auto y_var = [&](int e, int t) {
        return p.aggregated ? p.num_phase1 + e : p.num_phase1 + e * T + t;
    };
    for (int e = 0; e < p.num_phase2; ++e) {
        if (p.aggregated) {
            p.vars[y_var(e, 0)] = {VarKind::PhaseTwoAggregate, e, -1};
            p.objective[y_var(e, 0)] = inst.edges_phase2[e].weight;
        } else {
            for (int t = 0; t < T; ++t) {
                p.vars[y_var(e, t)] = {VarKind::PhaseTwoRound, e, t};
                p.objective[y_var(e, t)] = inst.edges_phase2[e].weight;
            }
        }
    }

    const std::vector<std::vector<int>> adjacency = phase2_adjacency(inst);
    std::vector<double> rhs;
    for (int j = 0; j < inst.online_types; ++j) {
        if (adjacency[j].empty()) continue;  // vacuous row, rhs >= 0 always
        if (p.aggregated) {
            std::vector<std::pair<int, double>> row;
            for (int e : adjacency[j]) row.emplace_back(y_var(e, 0), 1.0);
            p.rows.push_back(std::move(row));
            rhs.push_back(T * inst.arrivals.prob(0, j));
        } else {
            for (int t = 0; t < T; ++t) {
                std::vector<std::pair<int, double>> row;
                for (int e : adjacency[j]) row.emplace_back(y_var(e, t), 1.0);
                p.rows.push_back(std::move(row));
                rhs.push_back(inst.arrivals.prob(t, j));
            }
        }
    }
    for (std::size_t k = 0; k < inst.resources.size(); ++k) {
        std::vector<std::pair<int, double>> row;
        for (int e = 0; e < p.num_phase1; ++e)
            for (const CostEntry& c : inst.edges_phase1[e].cost)
                if (c.resource == static_cast<int>(k)) row.emplace_back(e, c.amount);
        for (int e = 0; e < p.num_phase2; ++e)
            for (const CostEntry& c : inst.edges_phase2[e].cost)
                if (c.resource == static_cast<int>(k)) {
                    if (p.aggregated) {
                        row.emplace_back(y_var(e, 0), c.amount);
                    } else {
                        for (int t = 0; t < T; ++t) row.emplace_back(y_var(e, t), c.amount);
                    }
                }
        p.rows.push_back(std::move(row));
        rhs.push_back(inst.resources[k].budget);
    }
    p.rhs = Eigen::Map<Eigen::VectorXd>(rhs.data(), rhs.size());
    return p;
}

LpSolution solve(const LpProblem& problem) {
    const int n = static_cast<int>(problem.vars.size());
    if (n < 1) throw std::invalid_argument("solve: problem has no variables");

    int extra = 0;
    for (double u : problem.upper)
        if (u < kInf) ++extra;
    const int m = static_cast<int>(problem.rows.size()) + extra;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n);
    Eigen::VectorXd b(m);
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
        for (const auto& [col, coef] : problem.rows[i]) A(i, col) = coef;
        b[i] = problem.rhs[i];
    }
    int row = static_cast<int>(problem.rows.size());
    for (int j = 0; j < n; ++j) {
        if (problem.upper[j] >= kInf) continue;
        A(row, j) = 1.0;
        b[row] = problem.upper[j];
        ++row;
    }

    const SimplexResult<double> res = simplex_solve<double>(A, b, problem.objective);
    if (res.status == LpStatus::Infeasible) throw LpError(res.status, "solve: LP is infeasible");
    if (res.status == LpStatus::Unbounded) throw LpError(res.status, "solve: LP is unbounded");

    LpSolution sol;
    sol.aggregated = problem.aggregated;
    sol.horizon = problem.horizon;
    sol.objective_value = res.objective;
    sol.x_star = Eigen::VectorXd::Zero(problem.num_phase1);
    sol.y_star = Eigen::MatrixXd::Zero(problem.aggregated ? 1 : problem.horizon, problem.num_phase2);
    for (int i = 0; i < n; ++i) {
        const VarInfo& info = problem.vars[i];
        const double v = std::max(res.solution[i], 0.0);
        switch (info.kind) {
            case VarKind::PhaseOne: sol.x_star[info.edge] = v; break;
            case VarKind::PhaseTwoAggregate: sol.y_star(0, info.edge) = v; break;
            case VarKind::PhaseTwoRound: sol.y_star(info.round, info.edge) = v; break;
        }
    }

    const double violation = max_constraint_violation(problem, sol);
    if (violation > kLpFeasTol)
        throw LpError(LpStatus::Optimal,
                      "solve: solution violates a constraint by " + std::to_string(violation));
    return sol;
}

LpSolution solve_benchmark(const Instance& inst) {
    if (inst.edges_phase1.empty() && inst.edges_phase2.empty()) {
        const std::vector<Violation> violations = validate(inst);
        if (!violations.empty())
            throw std::invalid_argument("solve_benchmark: invalid instance: " +
                                        violations[0].code);
        LpSolution sol;
        sol.aggregated = inst.arrivals.iid;
        sol.horizon = inst.arrivals.horizon;
        sol.x_star = Eigen::VectorXd(0);
        sol.y_star = Eigen::MatrixXd::Zero(sol.aggregated ? 1 : sol.horizon, 0);
        return sol;
    }
    return solve(build_benchmark(inst));
}

double max_constraint_violation(const LpProblem& problem, const LpSolution& solution) {
    const Eigen::VectorXd v = raw_vector(problem, solution);
    double worst = 0.0;
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
        double lhs = 0.0;
        for (const auto& [col, coef] : problem.rows[i]) lhs += coef * v[col];
        worst = std::max(worst, lhs - problem.rhs[i]);
    }
    for (int j = 0; j < v.size(); ++j) {
        worst = std::max(worst, -v[j]);
        if (problem.upper[j] < kInf) worst = std::max(worst, v[j] - problem.upper[j]);
    }
    return worst;
}

bool lp_upper_bound_check(const Instance&, const LpSolution& solution, double offline_opt) {
    return solution.objective_value >= offline_opt - 1e-6;
}

nlohmann::json solution_to_json(const Instance& inst, const LpSolution& solution) {
    nlohmann::json doc;
    doc["objective"] = solution.objective_value;
    nlohmann::json x = nlohmann::json::object();
    for (std::size_t e = 0; e < inst.edges_phase1.size(); ++e)
        x[std::to_string(inst.edges_phase1[e].id)] = solution.x_star[e];
    doc["x"] = x;
    nlohmann::json y = nlohmann::json::object();
    for (std::size_t e = 0; e < inst.edges_phase2.size(); ++e) {
        const std::string key = std::to_string(inst.edges_phase2[e].id);
        if (solution.aggregated) {
            y[key] = solution.y_star(0, e);
        } else {
            nlohmann::json per_round = nlohmann::json::array();
            for (int t = 0; t < solution.horizon; ++t) per_round.push_back(solution.y_star(t, e));
            y[key] = per_round;
        }
    }
    doc["y"] = y;
    return doc;
}

}  // namespace tsra
