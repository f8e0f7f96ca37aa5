#pragma once

// Seeded random generators shared by the unit and acceptance suites.

#include "tsra/bikeshare.hpp"
#include "tsra/instance.hpp"
#include "tsra/lp.hpp"
#include "tsra/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace testsupport {

inline double positive_unit(tsra::Rng& rng) { return 0.05 + 0.95 * rng.uniform(); }

inline Eigen::MatrixXd normalized_rows(int rows, int cols, tsra::Rng& rng) {
    Eigen::MatrixXd p(rows, cols);
    for (int t = 0; t < rows; ++t) {
        double sum = 0.0;
        for (int j = 0; j < cols; ++j) {
            p(t, j) = 0.05 + rng.uniform();
            sum += p(t, j);
        }
        for (int j = 0; j < cols; ++j) p(t, j) /= sum;
    }
    return p;
}

// Distinct resource ids, uniformly chosen, ascending.
inline std::vector<int> random_support(int count, int universe, tsra::Rng& rng) {
    std::vector<int> ids(universe);
    for (int i = 0; i < universe; ++i) ids[i] = i;
    for (int i = 0; i < count; ++i)
        std::swap(ids[i], ids[i + static_cast<int>(rng.uniform_below(
                                     static_cast<std::uint64_t>(universe - i)))]);
    ids.resize(count);
    std::sort(ids.begin(), ids.end());
    return ids;
}

// Oracle-scale instance: <= 3 edges per phase, <= 2 online types, horizon
// <= 3, <= 3 resources, budgets <= 3. Every phase-1 edge touches at least
// one unit-cost integral resource, keeping its feasible copy count small.
inline tsra::Instance tiny_instance(tsra::Rng& rng) {
    using namespace tsra;
    Instance inst;
    const int K = 1 + static_cast<int>(rng.uniform_below(3));
    for (int k = 0; k < K; ++k) {
        Resource r;
        r.id = k;
        r.kind = (k == 0 || rng.bernoulli(0.5)) ? ResourceKind::Integral : ResourceKind::NonIntegral;
        r.budget = r.kind == ResourceKind::Integral
                       ? static_cast<double>(rng.uniform_below(4))
                       : 3.0 * rng.uniform();
        inst.resources.push_back(r);
    }
    std::vector<int> integral_ids;
    for (const auto& r : inst.resources)
        if (r.kind == ResourceKind::Integral) integral_ids.push_back(r.id);

    inst.offline_types = 1 + static_cast<int>(rng.uniform_below(2));
    inst.phase1_types = 1;
    inst.online_types = 1 + static_cast<int>(rng.uniform_below(2));
    const int T = 1 + static_cast<int>(rng.uniform_below(3));

    const int n1 = static_cast<int>(rng.uniform_below(4));
    for (int e = 0; e < n1; ++e) {
        EdgeSpec edge;
        edge.id = e;
        edge.side = EdgeSide::PhaseOne;
        edge.offline_endpoint = static_cast<int>(rng.uniform_below(inst.offline_types));
        edge.other_endpoint = 0;
        edge.weight = positive_unit(rng);
        const int anchor = integral_ids[rng.uniform_below(integral_ids.size())];
        for (const auto& r : inst.resources) {
            if (r.id == anchor) {
                edge.cost.push_back({r.id, 1.0});
            } else if (rng.bernoulli(0.35)) {
                edge.cost.push_back({r.id, r.kind == ResourceKind::Integral
                                               ? 1.0
                                               : 0.1 + 0.9 * rng.uniform()});
            }
        }
        inst.edges_phase1.push_back(edge);
    }
    const int n2 = static_cast<int>(rng.uniform_below(4));
    for (int e = 0; e < n2; ++e) {
        EdgeSpec edge;
        edge.id = n1 + e;
        edge.side = EdgeSide::PhaseTwo;
        edge.offline_endpoint = static_cast<int>(rng.uniform_below(inst.offline_types));
        edge.other_endpoint = static_cast<int>(rng.uniform_below(inst.online_types));
        edge.weight = positive_unit(rng);
        for (const auto& r : inst.resources)
            if (rng.bernoulli(0.4))
                edge.cost.push_back({r.id, r.kind == ResourceKind::Integral
                                               ? 1.0
                                               : 0.1 + 0.9 * rng.uniform()});
        inst.edges_phase2.push_back(edge);
    }

    inst.arrivals.horizon = T;
    inst.arrivals.iid = rng.bernoulli(0.5);
    inst.arrivals.probs = normalized_rows(inst.arrivals.iid ? 1 : T, inst.online_types, rng);
    return inst;
}

// Purely integral instance whose largest cost support is exactly ell;
// resamples until the benchmark optimum clears 0.1 so ratios are meaningful.
inline tsra::Instance integral_instance(tsra::Rng& rng, int ell) {
    using namespace tsra;
    for (int attempt = 0; attempt < 100; ++attempt) {
        Instance inst;
        const int K = ell + static_cast<int>(rng.uniform_below(3));
        for (int k = 0; k < K; ++k)
            inst.resources.push_back(
                {k, ResourceKind::Integral, static_cast<double>(1 + rng.uniform_below(4))});

        inst.offline_types = 1 + static_cast<int>(rng.uniform_below(3));
        inst.phase1_types = 1;
        inst.online_types = 2 + static_cast<int>(rng.uniform_below(2));
        const int T = 4 + static_cast<int>(rng.uniform_below(5));

        const int n1 = 2 + static_cast<int>(rng.uniform_below(3));
        const int n2 = 3 + static_cast<int>(rng.uniform_below(4));
        for (int e = 0; e < n1; ++e) {
            EdgeSpec edge;
            edge.id = e;
            edge.side = EdgeSide::PhaseOne;
            edge.offline_endpoint = static_cast<int>(rng.uniform_below(inst.offline_types));
            edge.other_endpoint = 0;
            edge.weight = positive_unit(rng);
            const int sz = e == 0 ? ell : 1 + static_cast<int>(rng.uniform_below(ell));
            for (int k : random_support(sz, K, rng)) edge.cost.push_back({k, 1.0});
            inst.edges_phase1.push_back(edge);
        }
        for (int e = 0; e < n2; ++e) {
            EdgeSpec edge;
            edge.id = n1 + e;
            edge.side = EdgeSide::PhaseTwo;
            edge.offline_endpoint = static_cast<int>(rng.uniform_below(inst.offline_types));
            edge.other_endpoint = static_cast<int>(rng.uniform_below(inst.online_types));
            edge.weight = positive_unit(rng);
            const int sz = e == 0 ? ell : 1 + static_cast<int>(rng.uniform_below(ell));
            for (int k : random_support(sz, K, rng)) edge.cost.push_back({k, 1.0});
            inst.edges_phase2.push_back(edge);
        }

        inst.arrivals.horizon = T;
        inst.arrivals.iid = true;
        inst.arrivals.probs = normalized_rows(1, inst.online_types, rng);

        if (solve_benchmark(inst).objective_value > 0.1) return inst;
    }
    throw std::logic_error("integral_instance failed to produce a usable instance");
}

// Mixed instance with sparsities (2, 1) and a large non-integral budget,
// built on the synthetic bike-share shape.
inline tsra::Instance mixed_instance(tsra::Rng& rng, double min_budget = 60.0) {
    using namespace tsra;
    for (int attempt = 0; attempt < 100; ++attempt) {
        SyntheticShape shape;
        shape.supply_sites = 2;
        shape.demand_sites = 2;
        shape.worker_types = 4 + static_cast<int>(rng.uniform_below(4));
        shape.horizon = 40 + static_cast<int>(rng.uniform_below(30));
        SyntheticConfig cfg;
        cfg.qualify_quantile = 0.7;
        cfg.global_budget_override = min_budget + 40.0 * rng.uniform();
        const Instance inst = synthetic_instance(shape, cfg, rng.next_u64());
        if (sparsities(inst) != std::make_pair(2, 1))
            throw std::logic_error("mixed_instance produced unexpected sparsities");
        if (solve_benchmark(inst).objective_value > 0.1) return inst;
    }
    throw std::logic_error("mixed_instance failed to produce a usable instance");
}

struct RandomLp {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
};

// Bounded by an all-ones row; occasional negative right-hand sides exercise
// the Big-M path and can make the region empty.
inline RandomLp random_small_lp(tsra::Rng& rng) {
    const int n = 1 + static_cast<int>(rng.uniform_below(6));
    const int extra = static_cast<int>(rng.uniform_below(6));
    RandomLp lp;
    lp.A.resize(1 + extra, n);
    lp.b.resize(1 + extra);
    lp.c.resize(n);
    lp.A.row(0).setOnes();
    lp.b(0) = 1.0 + 4.0 * rng.uniform();
    for (int r = 1; r <= extra; ++r) {
        for (int j = 0; j < n; ++j) lp.A(r, j) = 2.0 * rng.uniform() - 1.0;
        lp.b(r) = rng.bernoulli(0.8) ? 5.0 * rng.uniform() : -rng.uniform();
    }
    for (int j = 0; j < n; ++j) lp.c(j) = 2.0 * rng.uniform() - 1.0;
    return lp;
}

}  // namespace testsupport
