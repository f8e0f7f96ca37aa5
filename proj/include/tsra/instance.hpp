#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tsra {

enum class ResourceKind { Integral, NonIntegral };

struct Resource {
    int id = 0;
    ResourceKind kind = ResourceKind::Integral;
    double budget = 0.0;  // B_k; integer-valued when kind is Integral
};

enum class EdgeSide { PhaseOne, PhaseTwo };

// One entry of an edge's sparse cost vector. Entries are kept sorted by
// resource id with no duplicates.
struct CostEntry {
    int resource = 0;
    double amount = 0.0;  // in (0, 1]; exactly 1 on integral resources
};

struct EdgeSpec {
    int id = 0;
    EdgeSide side = EdgeSide::PhaseOne;
    int offline_endpoint = 0;  // index into I
    int other_endpoint = 0;    // index into H (PhaseOne) or J (PhaseTwo)
    double weight = 0.0;
    std::vector<CostEntry> cost;
};

struct ArrivalModel {
    int horizon = 0;  // T
    bool iid = true;
    // iid: 1 x |J| row of per-round probabilities; general: T x |J|.
    Eigen::MatrixXd probs;

    double prob(int t, int j) const { return iid ? probs(0, j) : probs(t, j); }
};

struct Instance {
    int offline_types = 0;  // |I|
    int phase1_types = 0;   // |H|
    int online_types = 0;   // |J|
    std::vector<Resource> resources;
    std::vector<EdgeSpec> edges_phase1;
    std::vector<EdgeSpec> edges_phase2;
    ArrivalModel arrivals;
};

bool operator==(const Resource& a, const Resource& b);
bool operator==(const CostEntry& a, const CostEntry& b);
bool operator==(const EdgeSpec& a, const EdgeSpec& b);
bool operator==(const ArrivalModel& a, const ArrivalModel& b);
bool operator==(const Instance& a, const Instance& b);

// A single violated invariant. code is a stable machine-readable tag,
// detail is free text for humans.
struct Violation {
    std::string code;
    std::string detail;
};

// Absolute tolerance for per-round arrival probability normalization.
inline constexpr double kArrivalNormTol = 1e-9;

std::vector<Violation> validate(const Instance& inst);
bool is_valid(const Instance& inst);

// (l1, l2): max integral / non-integral cost support size over all edges.
std::pair<int, int> sparsities(const Instance& inst);

// Minimum budget over non-integral resources; absent when there are none.
std::optional<double> min_nonintegral_budget(const Instance& inst);

// adjacency[j] lists indices into edges_phase2 incident to online type j.
std::vector<std::vector<int>> phase2_adjacency(const Instance& inst);

Eigen::VectorXd budget_vector(const Instance& inst);

}  // namespace tsra
