#include "tsra/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace tsra {

bool operator==(const Resource& a, const Resource& b) {
    return a.id == b.id && a.kind == b.kind && a.budget == b.budget;
}

bool operator==(const CostEntry& a, const CostEntry& b) {
    return a.resource == b.resource && a.amount == b.amount;
}

bool operator==(const EdgeSpec& a, const EdgeSpec& b) {
    return a.id == b.id && a.side == b.side && a.offline_endpoint == b.offline_endpoint &&
           a.other_endpoint == b.other_endpoint && a.weight == b.weight && a.cost == b.cost;
}

bool operator==(const ArrivalModel& a, const ArrivalModel& b) {
    return a.horizon == b.horizon && a.iid == b.iid && a.probs.rows() == b.probs.rows() &&
           a.probs.cols() == b.probs.cols() && a.probs == b.probs;
}

bool operator==(const Instance& a, const Instance& b) {
    return a.offline_types == b.offline_types && a.phase1_types == b.phase1_types &&
           a.online_types == b.online_types && a.resources == b.resources &&
           a.edges_phase1 == b.edges_phase1 && a.edges_phase2 == b.edges_phase2 &&
           a.arrivals == b.arrivals;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void check_edges(const Instance& inst, const std::vector<EdgeSpec>& edges, EdgeSide expected,
                 int other_count, std::vector<Violation>& out) {
    const int num_resources = static_cast<int>(inst.resources.size());
    for (const EdgeSpec& e : edges) {
        const std::string tag = "edge " + std::to_string(e.id);
        if (e.side != expected)
            out.push_back({"edge-side", tag + " is in the wrong edge list"});
        if (e.offline_endpoint < 0 || e.offline_endpoint >= inst.offline_types)
            out.push_back({"endpoint-range", tag + " offline endpoint " +
                                                 std::to_string(e.offline_endpoint)});
        if (e.other_endpoint < 0 || e.other_endpoint >= other_count)
            out.push_back(
                {"endpoint-range", tag + " other endpoint " + std::to_string(e.other_endpoint)});
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            out.push_back({"weight-positive", tag + " weight " + fmt(e.weight)});
        std::set<int> seen;
        for (const CostEntry& c : e.cost) {
            if (c.resource < 0 || c.resource >= num_resources) {
                out.push_back(
                    {"resource-range", tag + " cost on resource " + std::to_string(c.resource)});
                continue;
            }
            if (!seen.insert(c.resource).second)
                out.push_back({"cost-duplicate",
                               tag + " duplicate cost on resource " + std::to_string(c.resource)});
            if (!(c.amount > 0.0) || c.amount > 1.0 || !std::isfinite(c.amount))
                out.push_back({"cost-range", tag + " cost " + fmt(c.amount) + " on resource " +
                                                 std::to_string(c.resource)});
            else if (inst.resources[c.resource].kind == ResourceKind::Integral && c.amount != 1.0)
                out.push_back({"integral-cost", tag + " cost " + fmt(c.amount) +
                                                    " on integral resource " +
                                                    std::to_string(c.resource)});
        }
    }
}

}  // namespace

std::vector<Violation> validate(const Instance& inst) {
    std::vector<Violation> out;

    for (std::size_t k = 0; k < inst.resources.size(); ++k) {
        const Resource& r = inst.resources[k];
        if (r.id != static_cast<int>(k))
            out.push_back({"resource-id", "resource at position " + std::to_string(k) +
                                              " has id " + std::to_string(r.id)});
        if (!(r.budget >= 0.0) || !std::isfinite(r.budget))
            out.push_back({"budget-negative",
                           "resource " + std::to_string(r.id) + " budget " + fmt(r.budget)});
        else if (r.kind == ResourceKind::Integral &&
                 std::abs(r.budget - std::round(r.budget)) > 1e-9)
            out.push_back({"integral-budget",
                           "resource " + std::to_string(r.id) + " budget " + fmt(r.budget)});
    }

    check_edges(inst, inst.edges_phase1, EdgeSide::PhaseOne, inst.phase1_types, out);
    check_edges(inst, inst.edges_phase2, EdgeSide::PhaseTwo, inst.online_types, out);

    std::set<int> ids;
    for (const auto* edges : {&inst.edges_phase1, &inst.edges_phase2})
        for (const EdgeSpec& e : *edges)
            if (!ids.insert(e.id).second)
                out.push_back({"edge-id-duplicate", "edge id " + std::to_string(e.id)});

    const ArrivalModel& arr = inst.arrivals;
    if (arr.horizon <= 0)
        out.push_back({"horizon-positive", "horizon " + std::to_string(arr.horizon)});
    const int prob_rows = arr.iid ? 1 : arr.horizon;
    if (arr.probs.rows() != prob_rows || arr.probs.cols() != inst.online_types) {
        out.push_back({"arrival-shape", "probability matrix is " +
                                            std::to_string(arr.probs.rows()) + "x" +
                                            std::to_string(arr.probs.cols()) + ", expected " +
                                            std::to_string(prob_rows) + "x" +
                                            std::to_string(inst.online_types)});
        return out;  // remaining arrival checks would index out of bounds
    }
    for (int t = 0; t < prob_rows; ++t) {
        double sum = 0.0;
        for (int j = 0; j < inst.online_types; ++j) {
            const double p = arr.probs(t, j);
            if (!(p >= 0.0) || p > 1.0 || !std::isfinite(p))
                out.push_back({"arrival-range", "p(t=" + std::to_string(t) +
                                                    ", j=" + std::to_string(j) + ") = " + fmt(p)});
            else
                sum += p;
        }
        if (std::abs(sum - 1.0) > kArrivalNormTol)
            out.push_back(
                {"arrival-normalization", "t=" + std::to_string(t) + " sum=" + fmt(sum)});
    }
    return out;
}

bool is_valid(const Instance& inst) { return validate(inst).empty(); }

std::pair<int, int> sparsities(const Instance& inst) {
    int l1 = 0;
    int l2 = 0;
    for (const auto* edges : {&inst.edges_phase1, &inst.edges_phase2}) {
        for (const EdgeSpec& e : *edges) {
            int n1 = 0;
            int n2 = 0;
            for (const CostEntry& c : e.cost) {
                if (inst.resources[c.resource].kind == ResourceKind::Integral)
                    ++n1;
                else
                    ++n2;
            }
            l1 = std::max(l1, n1);
            l2 = std::max(l2, n2);
        }
    }
    return {l1, l2};
}

std::optional<double> min_nonintegral_budget(const Instance& inst) {
    std::optional<double> best;
    for (const Resource& r : inst.resources)
        if (r.kind == ResourceKind::NonIntegral && (!best || r.budget < *best))
            best = r.budget;
    return best;
}

std::vector<std::vector<int>> phase2_adjacency(const Instance& inst) {
    std::vector<std::vector<int>> adj(inst.online_types);
    for (std::size_t i = 0; i < inst.edges_phase2.size(); ++i) {
        const int j = inst.edges_phase2[i].other_endpoint;
        if (j >= 0 && j < inst.online_types) adj[j].push_back(static_cast<int>(i));
    }
    return adj;
}

Eigen::VectorXd budget_vector(const Instance& inst) {
    Eigen::VectorXd b(inst.resources.size());
    for (std::size_t k = 0; k < inst.resources.size(); ++k) b[k] = inst.resources[k].budget;
    return b;
}

}  // namespace tsra
