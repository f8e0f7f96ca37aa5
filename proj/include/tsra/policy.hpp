#pragma once

#include "tsra/instance.hpp"
#include "tsra/ledger.hpp"
#include "tsra/lp.hpp"
#include "tsra/rng.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace tsra {

// Phase-I repair after randomized rounding. AllCopies drops every copy of
// every edge touching an overrun resource in one simultaneous pass;
// Sequential removes one copy at a time, largest overrun-contribution per
// unit weight first, until all budgets hold.
enum class RemovalMode { AllCopies, Sequential };

struct SampParams {
    double eta = 1.0;
    double alpha = 1.0;
    RemovalMode removal = RemovalMode::AllCopies;
};

struct GreedyParams {
    double delta = 1.0;
};

struct PolicySpec {
    enum class Kind { Samp, Greedy, GreedyUniform };
    Kind kind = Kind::Samp;
    SampParams samp;
    GreedyParams greedy;

    // Accepts "samp:eta=0.8,alpha=1.0,removal=seq", "greedy:delta=0.4",
    // "greedy-uniform". Throws std::invalid_argument on anything else.
    static PolicySpec parse(const std::string& text);
    std::string label() const;
    bool needs_lp() const { return kind == Kind::Samp; }
};

// ceil(x) with probability x - floor(x), else floor(x); mean exactly x.
// Consumes exactly one draw. Rejects negative or non-finite x.
long long rd_round(double x, Rng& rng);

struct PhaseOnePlan {
    std::vector<long long> copies;  // per phase-1 edge
    Eigen::VectorXd total_cost;     // per resource, of the surviving copies
};

std::vector<long long> sample_phase1_copies(const LpSolution& solution, double eta, Rng& rng);

PhaseOnePlan repair_phase1(std::vector<long long> copies, const Instance& inst, RemovalMode mode);

PhaseOnePlan samp_phase1(const LpSolution& solution, double eta, RemovalMode mode,
                         const Instance& inst, Rng& rng);

// One arrival of online type j at round t. Samples at most one candidate
// from E2_j with probability alpha * y*_{e,t} / p_{jt} each, keeps it iff
// safe, and debits the ledger iff an edge is returned. Consumes exactly one
// draw. Throws std::logic_error when p_{jt} = 0 or when the sampling
// probabilities sum beyond 1 + 1e-9 (a corrupted solution).
std::optional<int> samp_phase2_decide(const LpSolution& solution, double alpha, int online_type,
                                      int round, const std::vector<int>& incident,
                                      const Instance& inst, BudgetLedger& ledger, Rng& rng);

// Scans phase-1 edges by decreasing weight (ties by ascending id), taking
// copies while they fit under the reduced budget delta * B. Edges with empty
// cost support are skipped; they have no budget-exhaustion stopping point.
PhaseOnePlan greedy_phase1(const Instance& inst, double delta);

// Maximum-weight safe edge among incident, ties by ascending id; debits the
// ledger iff an edge is returned.
std::optional<int> greedy_phase2_decide(const std::vector<int>& incident, const Instance& inst,
                                        BudgetLedger& ledger);

// Draws delta uniformly and returns the corresponding Greedy spec.
PolicySpec greedy_uniform(Rng& rng);

struct GuaranteeReport {
    int ell1 = 0;
    int ell2 = 0;
    std::optional<double> B;
    double epsilon = 0.0;
    double ratio_lower_bound = 0.0;
};

// Worst-case ratio floor: 1/(4*ell1) for purely integral instances, else
// (1 - eps)/(4*(ell1 + ell2)) with
// eps = 2 * max(1/(B-2), ell2 * exp(-B/12 + 1/6)), clamped into [0, 1].
GuaranteeReport guarantee(int ell1, int ell2, std::optional<double> B);

}  // namespace tsra
