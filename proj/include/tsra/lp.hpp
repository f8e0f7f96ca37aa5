#pragma once

#include "tsra/instance.hpp"
#include "tsra/simplex.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsra {

inline constexpr double kLpFeasTol = 1e-7;

enum class VarKind { PhaseOne, PhaseTwoRound, PhaseTwoAggregate };

struct VarInfo {
    VarKind kind = VarKind::PhaseOne;
    int edge = 0;   // index into edges_phase1 or edges_phase2
    int round = -1;  // only for PhaseTwoRound
};

// max objective'v subject to rows (sense <=), v >= 0, v <= upper.
struct LpProblem {
    Eigen::VectorXd objective;
    std::vector<std::vector<std::pair<int, double>>> rows;
    Eigen::VectorXd rhs;
    std::vector<double> upper;  // +inf where unbounded above
    std::vector<VarInfo> vars;
    int horizon = 0;
    bool aggregated = false;  // KIID compaction active
    int num_phase1 = 0;
    int num_phase2 = 0;
};

struct LpSolution {
    Eigen::VectorXd x_star;   // per phase-1 edge
    Eigen::MatrixXd y_star;   // aggregated: 1 x |E2| of Y_e in [0,T]; else T x |E2|
    bool aggregated = false;
    int horizon = 0;
    double objective_value = 0.0;

    // y*_{e,t} for the phase-2 edge at index e.
    double y(int e, int t) const {
        return aggregated ? y_star(0, e) / horizon : y_star(t, e);
    }
};

struct LpError : std::runtime_error {
    LpStatus status;
    LpError(LpStatus s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

// Transcribes the benchmark LP: maximize total expected weight subject to
// per-(j,t) arrival mass and per-resource budget rows. KIID instances are
// compacted to one aggregated variable Y_e per phase-2 edge and one arrival
// row per online type; y*_{e,t} is then Y_e/T. Throws std::invalid_argument
// on non-validating instances and on phase-1 edges with empty cost support
// (those make the LP unbounded).
LpProblem build_benchmark(const Instance& inst);

LpSolution solve(const LpProblem& problem);

LpSolution solve_benchmark(const Instance& inst);

// Largest amount by which (x_star, y_star) overshoots any row, upper bound,
// or non-negativity constraint of the problem; 0 when feasible.
double max_constraint_violation(const LpProblem& problem, const LpSolution& solution);

bool lp_upper_bound_check(const Instance& inst, const LpSolution& solution, double offline_opt);

nlohmann::json solution_to_json(const Instance& inst, const LpSolution& solution);

}  // namespace tsra
