#pragma once

// Tiny hand-built instances reused across suites.

#include "tsra/instance.hpp"

namespace testsupport {

// One phase-1 edge (w=2, unit cost on resource 0) and one phase-2 edge
// (w=1, unit cost on resource 0), budget 1, horizon 1, one online type with
// p=1. Benchmark optimum: x=1, y=0, objective 2.
inline tsra::Instance example1() {
    using namespace tsra;
    Instance inst;
    inst.offline_types = 1;
    inst.phase1_types = 1;
    inst.online_types = 1;
    inst.resources = {{0, ResourceKind::Integral, 1.0}};
    EdgeSpec e1;
    e1.id = 0;
    e1.side = EdgeSide::PhaseOne;
    e1.offline_endpoint = 0;
    e1.other_endpoint = 0;
    e1.weight = 2.0;
    e1.cost = {{0, 1.0}};
    inst.edges_phase1.push_back(e1);
    EdgeSpec e2;
    e2.id = 1;
    e2.side = EdgeSide::PhaseTwo;
    e2.offline_endpoint = 0;
    e2.other_endpoint = 0;
    e2.weight = 1.0;
    e2.cost = {{0, 1.0}};
    inst.edges_phase2.push_back(e2);
    inst.arrivals.horizon = 1;
    inst.arrivals.iid = true;
    inst.arrivals.probs = Eigen::MatrixXd::Ones(1, 1);
    return inst;
}

// Single phase-2 edge, w=1, p=1, T=1, ample budget: every policy that takes
// the sampled edge scores exactly 1, and the LP optimum is 1.
inline tsra::Instance single_phase2() {
    using namespace tsra;
    Instance inst;
    inst.offline_types = 1;
    inst.phase1_types = 1;
    inst.online_types = 1;
    inst.resources = {{0, ResourceKind::Integral, 5.0}};
    EdgeSpec e;
    e.id = 0;
    e.side = EdgeSide::PhaseTwo;
    e.offline_endpoint = 0;
    e.other_endpoint = 0;
    e.weight = 1.0;
    e.cost = {{0, 1.0}};
    inst.edges_phase2.push_back(e);
    inst.arrivals.horizon = 1;
    inst.arrivals.iid = true;
    inst.arrivals.probs = Eigen::MatrixXd::Ones(1, 1);
    return inst;
}

}  // namespace testsupport
