#include "tsra/policy.hpp"

#include "tsra/lp.hpp"
#include "tsra/rng.hpp"

#include "support/fixtures.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace tsra;

namespace {

// One offline type, no arrivals worth speaking of, edges/resources as given.
Instance phase1_only(std::vector<Resource> resources, std::vector<EdgeSpec> edges) {
    Instance inst;
    inst.offline_types = 1;
    inst.phase1_types = 1;
    inst.online_types = 1;
    inst.resources = std::move(resources);
    inst.edges_phase1 = std::move(edges);
    inst.arrivals.horizon = 1;
    inst.arrivals.iid = true;
    inst.arrivals.probs = Eigen::MatrixXd::Ones(1, 1);
    return inst;
}

EdgeSpec p1_edge(int id, double weight, std::vector<CostEntry> cost) {
    EdgeSpec e;
    e.id = id;
    e.side = EdgeSide::PhaseOne;
    e.offline_endpoint = 0;
    e.other_endpoint = 0;
    e.weight = weight;
    e.cost = std::move(cost);
    return e;
}

LpSolution x_only_solution(std::vector<double> x) {
    LpSolution sol;
    sol.aggregated = true;
    sol.horizon = 1;
    sol.x_star = Eigen::Map<Eigen::VectorXd>(x.data(), x.size());
    sol.y_star = Eigen::MatrixXd::Zero(1, 0);
    return sol;
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("rd_round") {
    Rng rng(7);
    SUBCASE("integers pass through untouched") {
        for (int i = 0; i < 200; ++i) CHECK(rd_round(4.0, rng) == 4);
        CHECK(rd_round(0.0, rng) == 0);
    }
    SUBCASE("fractional input hits floor and ceiling at the right rate") {
        const int n = 100000;
        int threes = 0;
        for (int i = 0; i < n; ++i) {
            const long long v = rd_round(2.3, rng);
            REQUIRE(v >= 2);
            REQUIRE(v <= 3);
            threes += v == 3;
        }
        // p = 0.3, se = sqrt(p(1-p)/n) ~ 0.00145
        CHECK(std::abs(threes / double(n) - 0.3) < 0.005);
    }
    SUBCASE("a million draws of 0.5 average to 0.5") {
        const int n = 1000000;
        long long total = 0;
        for (int i = 0; i < n; ++i) total += rd_round(0.5, rng);
        CHECK(std::abs(total / double(n) - 0.5) < 0.002);
    }
    SUBCASE("the two-point distribution has mean x by construction") {
        for (double x : {0.25, 1.7, 3.999, 12.5}) {
            const double fl = std::floor(x);
            const double frac = x - fl;
            CHECK(fl * (1.0 - frac) + (fl + 1.0) * frac == doctest::Approx(x).epsilon(1e-12));
        }
    }
    SUBCASE("rejects bad input") {
        CHECK_THROWS_AS(rd_round(-0.1, rng), std::invalid_argument);
        CHECK_THROWS_AS(rd_round(std::nan(""), rng), std::invalid_argument);
        CHECK_THROWS_AS(rd_round(std::numeric_limits<double>::infinity(), rng),
                        std::invalid_argument);
    }
}

TEST_CASE("policy specs parse and print") {
    SUBCASE("samp with every parameter") {
        const PolicySpec spec = PolicySpec::parse("samp:eta=0.8,alpha=0.25,removal=seq");
        CHECK(spec.kind == PolicySpec::Kind::Samp);
        CHECK(spec.samp.eta == 0.8);
        CHECK(spec.samp.alpha == 0.25);
        CHECK(spec.samp.removal == RemovalMode::Sequential);
        CHECK(spec.needs_lp());
        CHECK(spec.label() == "samp:eta=0.8,alpha=0.25,removal=seq");
    }
    SUBCASE("samp defaults") {
        const PolicySpec spec = PolicySpec::parse("samp:eta=1,alpha=1");
        CHECK(spec.samp.removal == RemovalMode::AllCopies);
        CHECK(spec.label() == "samp:eta=1,alpha=1");
    }
    SUBCASE("greedy") {
        const PolicySpec spec = PolicySpec::parse("greedy:delta=0.4");
        CHECK(spec.kind == PolicySpec::Kind::Greedy);
        CHECK(spec.greedy.delta == 0.4);
        CHECK(!spec.needs_lp());
        CHECK(spec.label() == "greedy:delta=0.4");
    }
    SUBCASE("greedy-uniform") {
        const PolicySpec spec = PolicySpec::parse("greedy-uniform");
        CHECK(spec.kind == PolicySpec::Kind::GreedyUniform);
        CHECK(spec.label() == "greedy-uniform");
    }
    SUBCASE("labels parse back to the same spec") {
        for (const char* text :
             {"samp:eta=0.5,alpha=0.125,removal=seq", "greedy:delta=0.75", "greedy-uniform"}) {
            const PolicySpec spec = PolicySpec::parse(text);
            CHECK(PolicySpec::parse(spec.label()).label() == spec.label());
        }
    }
    SUBCASE("bad input is rejected") {
        CHECK_THROWS_AS(PolicySpec::parse("magic"), std::invalid_argument);
        CHECK_THROWS_AS(PolicySpec::parse("samp:eta=zero,alpha=1"), std::invalid_argument);
        CHECK_THROWS_AS(PolicySpec::parse("samp:eta=0,alpha=1"), std::invalid_argument);
        CHECK_THROWS_AS(PolicySpec::parse("samp:eta=1,alpha=1.5"), std::invalid_argument);
        CHECK_THROWS_AS(PolicySpec::parse("samp:eta=1,alpha=1,removal=maybe"),
                        std::invalid_argument);
        CHECK_THROWS_AS(PolicySpec::parse("samp:eta=1,alpha=1,beta=2"), std::invalid_argument);
        CHECK_THROWS_AS(PolicySpec::parse("greedy:delta=1.2"), std::invalid_argument);
        CHECK_THROWS_AS(PolicySpec::parse("greedy:gamma=1"), std::invalid_argument);
        CHECK_THROWS_AS(PolicySpec::parse("greedy-uniform:delta=1"), std::invalid_argument);
    }
}

TEST_CASE("phase-1 sampling") {
    SUBCASE("integral allocation with ample budget survives untouched") {
        const Instance inst =
            phase1_only({{0, ResourceKind::Integral, 10.0}}, {p1_edge(0, 1.0, {{0, 1.0}})});
        Rng rng(1);
        for (int i = 0; i < 50; ++i) {
            const PhaseOnePlan plan =
                samp_phase1(x_only_solution({2.0}), 1.0, RemovalMode::AllCopies, inst, rng);
            CHECK(plan.copies == std::vector<long long>{2});
            CHECK(plan.total_cost[0] == 2.0);
        }
    }
    SUBCASE("overrun repair: all-copies clears the resource, sequential keeps one") {
        const Instance inst = phase1_only(
            {{0, ResourceKind::Integral, 1.0}},
            {p1_edge(0, 1.0, {{0, 1.0}}), p1_edge(1, 1.0, {{0, 1.0}})});
        const std::vector<long long> drawn = {1, 1};

        const PhaseOnePlan all = repair_phase1(drawn, inst, RemovalMode::AllCopies);
        CHECK(all.copies == std::vector<long long>{0, 0});
        CHECK(all.total_cost[0] == 0.0);

        const PhaseOnePlan seq = repair_phase1(drawn, inst, RemovalMode::Sequential);
        // Equal weights mean equal removal scores; the lower id loses its copy.
        CHECK(seq.copies == std::vector<long long>{0, 1});
        CHECK(seq.total_cost[0] == 1.0);
    }
    SUBCASE("sequential removal prefers the worst cost-to-weight offender") {
        const Instance inst = phase1_only(
            {{0, ResourceKind::Integral, 1.0}},
            {p1_edge(0, 5.0, {{0, 1.0}}), p1_edge(1, 1.0, {{0, 1.0}})});
        const PhaseOnePlan seq = repair_phase1({1, 1}, inst, RemovalMode::Sequential);
        // Edge 1 contributes 1 per unit weight, edge 0 only 0.2.
        CHECK(seq.copies == std::vector<long long>{1, 0});
    }
    SUBCASE("eta outside (0,1] is rejected") {
        const Instance inst =
            phase1_only({{0, ResourceKind::Integral, 1.0}}, {p1_edge(0, 1.0, {{0, 1.0}})});
        Rng rng(3);
        CHECK_THROWS_AS(samp_phase1(x_only_solution({1.0}), 0.0, RemovalMode::AllCopies, inst, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(samp_phase1(x_only_solution({1.0}), 1.5, RemovalMode::AllCopies, inst, rng),
                        std::invalid_argument);
    }
    SUBCASE("surviving copy counts meet the eta(1-eta)^ell floor") {
        // Odd cycle: three unit-cost edges pairwise sharing three budget-1
        // resources (ell = 2). The unique optimum x* = (1/2, 1/2, 1/2) is
        // fractional, so rounding can overrun and removal really fires.
        const Instance inst = phase1_only(
            {{0, ResourceKind::Integral, 1.0},
             {1, ResourceKind::Integral, 1.0},
             {2, ResourceKind::Integral, 1.0}},
            {p1_edge(0, 1.0, {{0, 1.0}, {1, 1.0}}), p1_edge(1, 1.0, {{1, 1.0}, {2, 1.0}}),
             p1_edge(2, 1.0, {{2, 1.0}, {0, 1.0}})});
        const LpSolution sol = solve_benchmark(inst);
        for (int e = 0; e < 3; ++e) REQUIRE(sol.x_star[e] == doctest::Approx(0.5).epsilon(1e-9));

        // A copy of edge e survives all-copies removal iff the other two
        // edges drew zero, so E[X_e] = q(1-q)^2 exactly, q = eta/2.
        for (const double eta : {0.25, 0.9}) {
            const double q = eta * 0.5;
            const double exact = q * (1.0 - q) * (1.0 - q);
            const double floor = eta * (1.0 - eta) * (1.0 - eta) * 0.5;
            REQUIRE(exact >= floor);

            const int n = 100000;
            Rng rng(17);
            Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
            for (int i = 0; i < n; ++i) {
                const PhaseOnePlan plan = samp_phase1(sol, eta, RemovalMode::AllCopies, inst, rng);
                for (int e = 0; e < 3; ++e) mean[e] += static_cast<double>(plan.copies[e]);
            }
            mean /= n;
            for (int e = 0; e < 3; ++e) {
                CHECK(mean[e] == doctest::Approx(exact).epsilon(0.05));
                CHECK(mean[e] >= floor);
            }
        }
    }
    SUBCASE("sequential repair dominates all-copies edge for edge") {
        Rng rng(41);
        for (int trial = 0; trial < 40; ++trial) {
            const Instance inst = testsupport::integral_instance(rng, 2);
            const LpSolution sol = solve_benchmark(inst);
            const std::vector<long long> drawn = sample_phase1_copies(sol, 1.0, rng);
            const PhaseOnePlan all = repair_phase1(drawn, inst, RemovalMode::AllCopies);
            const PhaseOnePlan seq = repair_phase1(drawn, inst, RemovalMode::Sequential);
            REQUIRE(all.copies.size() == seq.copies.size());
            for (std::size_t e = 0; e < all.copies.size(); ++e)
                CHECK(seq.copies[e] >= all.copies[e]);
        }
    }
}

TEST_CASE("phase-2 sampling") {
    // Online type 0 arrives with p = 0.5; the single candidate has y* = 0.3.
    Instance inst;
    inst.offline_types = 1;
    inst.phase1_types = 1;
    inst.online_types = 2;
    inst.resources = {{0, ResourceKind::NonIntegral, 100.0}};
    EdgeSpec edge;
    edge.id = 0;
    edge.side = EdgeSide::PhaseTwo;
    edge.offline_endpoint = 0;
    edge.other_endpoint = 0;
    edge.weight = 1.0;
    edge.cost = {{0, 1.0}};
    inst.edges_phase2 = {edge};
    inst.arrivals.horizon = 1;
    inst.arrivals.iid = true;
    inst.arrivals.probs = Eigen::MatrixXd::Constant(1, 2, 0.5);
    REQUIRE(validate(inst).empty());

    LpSolution sol;
    sol.aggregated = true;
    sol.horizon = 1;
    sol.x_star = Eigen::VectorXd(0);
    sol.y_star = Eigen::MatrixXd::Constant(1, 1, 0.3);

    SUBCASE("candidate keeps the alpha*y/p selection rate") {
        Rng rng(23);
        const int n = 100000;
        int hits = 0;
        for (int i = 0; i < n; ++i) {
            BudgetLedger ledger(budget_vector(inst));
            const auto pick = samp_phase2_decide(sol, 1.0, 0, 0, {0}, inst, ledger, rng);
            if (pick) {
                CHECK(*pick == 0);
                CHECK(ledger.remaining()[0] == doctest::Approx(99.0));
                ++hits;
            }
        }
        // p = 0.6, se ~ 0.0015
        CHECK(std::abs(hits / double(n) - 0.6) < 0.005);
    }
    SUBCASE("unsafe candidates are rejected and the ledger stays put") {
        Instance tight = inst;
        tight.resources[0].budget = 0.5;
        tight.edges_phase2[0].cost = {{0, 0.8}};
        LpSolution certain = sol;
        certain.y_star(0, 0) = 0.5;  // alpha*y/p = 1: always sampled
        Rng rng(5);
        BudgetLedger ledger(budget_vector(tight));
        for (int i = 0; i < 20; ++i) {
            CHECK(!samp_phase2_decide(certain, 1.0, 0, 0, {0}, tight, ledger, rng).has_value());
            CHECK(ledger.remaining()[0] == 0.5);
        }
    }
    SUBCASE("zero arrival probability is a contract violation") {
        Instance degenerate = inst;
        degenerate.arrivals.probs << 1.0, 0.0;
        Rng rng(5);
        BudgetLedger ledger(budget_vector(degenerate));
        CHECK_THROWS_AS(samp_phase2_decide(sol, 1.0, 1, 0, {0}, degenerate, ledger, rng),
                        std::logic_error);
    }
    SUBCASE("probabilities above one are a contract violation") {
        LpSolution corrupt = sol;
        corrupt.y_star(0, 0) = 0.8;  // alpha*y/p = 1.6
        Rng rng(5);
        BudgetLedger ledger(budget_vector(inst));
        CHECK_THROWS_AS(samp_phase2_decide(corrupt, 1.0, 0, 0, {0}, inst, ledger, rng),
                        std::logic_error);
    }
    SUBCASE("exactly one draw is consumed either way") {
        for (double y : {0.0, 0.3, 0.5}) {
            LpSolution s = sol;
            s.y_star(0, 0) = y;
            Rng used(91), mirror(91);
            BudgetLedger ledger(budget_vector(inst));
            samp_phase2_decide(s, 1.0, 0, 0, {0}, inst, ledger, used);
            mirror.uniform();
            CHECK(used.next_u64() == mirror.next_u64());
        }
    }
    SUBCASE("selection frequency meets the Phase-II floor under eta=alpha=1/2") {
        // One resource, ell = 1; LP puts all mass on the phase-2 edge.
        Instance small = testsupport::single_phase2();
        const LpSolution opt = solve_benchmark(small);
        REQUIRE(opt.y(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
        Rng rng(29);
        const int n = 100000;
        int hits = 0;
        for (int i = 0; i < n; ++i) {
            BudgetLedger ledger(budget_vector(small));
            hits += samp_phase2_decide(opt, 0.5, 0, 0, {0}, small, ledger, rng).has_value();
        }
        const double bound = 0.5 * (1.0 - 0.5) * opt.y(0, 0);  // alpha(1-max(eta,alpha))y*
        CHECK(hits / double(n) >= bound - 1e-9);
        CHECK(std::abs(hits / double(n) - 0.5) < 0.005);
    }
}

TEST_CASE("greedy phase 1") {
    SUBCASE("budget goes to the heavy edge first") {
        const Instance inst = phase1_only(
            {{0, ResourceKind::Integral, 2.0}},
            {p1_edge(0, 3.0, {{0, 1.0}}), p1_edge(1, 2.0, {{0, 1.0}})});
        const PhaseOnePlan plan = greedy_phase1(inst, 0.5);  // reduced budget 1
        CHECK(plan.copies == std::vector<long long>{1, 0});
        CHECK(plan.total_cost[0] == 1.0);
    }
    SUBCASE("delta zero allocates nothing") {
        const Instance inst = phase1_only(
            {{0, ResourceKind::Integral, 5.0}},
            {p1_edge(0, 3.0, {{0, 1.0}}), p1_edge(1, 2.0, {{0, 1.0}})});
        const PhaseOnePlan plan = greedy_phase1(inst, 0.0);
        CHECK(plan.copies == std::vector<long long>{0, 0});
    }
    SUBCASE("a blocked heavy edge does not stall the scan") {
        const Instance inst = phase1_only(
            {{0, ResourceKind::Integral, 0.0}, {1, ResourceKind::Integral, 2.0}},
            {p1_edge(0, 3.0, {{0, 1.0}}), p1_edge(1, 2.0, {{1, 1.0}})});
        const PhaseOnePlan plan = greedy_phase1(inst, 1.0);
        CHECK(plan.copies == std::vector<long long>{0, 2});
    }
    SUBCASE("weight ties go to the lower id") {
        const Instance inst = phase1_only(
            {{0, ResourceKind::Integral, 1.0}},
            {p1_edge(0, 2.0, {{0, 1.0}}), p1_edge(1, 2.0, {{0, 1.0}})});
        const PhaseOnePlan plan = greedy_phase1(inst, 1.0);
        CHECK(plan.copies == std::vector<long long>{1, 0});
    }
    SUBCASE("cost-free edges are skipped rather than looped on") {
        const Instance inst = phase1_only(
            {{0, ResourceKind::Integral, 1.0}},
            {p1_edge(0, 3.0, {}), p1_edge(1, 2.0, {{0, 1.0}})});
        const PhaseOnePlan plan = greedy_phase1(inst, 1.0);
        CHECK(plan.copies == std::vector<long long>{0, 1});
    }
    SUBCASE("delta outside [0,1] is rejected") {
        const Instance inst =
            phase1_only({{0, ResourceKind::Integral, 1.0}}, {p1_edge(0, 1.0, {{0, 1.0}})});
        CHECK_THROWS_AS(greedy_phase1(inst, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(greedy_phase1(inst, 1.1), std::invalid_argument);
    }
}

TEST_CASE("greedy phase 2") {
    Instance inst = testsupport::single_phase2();
    inst.resources = {{0, ResourceKind::NonIntegral, 1.0}};
    EdgeSpec heavy = inst.edges_phase2[0];
    heavy.id = 1;
    heavy.weight = 5.0;
    heavy.cost = {{0, 0.8}};
    EdgeSpec light = inst.edges_phase2[0];
    light.id = 2;
    light.weight = 4.0;
    light.cost = {{0, 0.5}};
    inst.edges_phase2 = {heavy, light};
    REQUIRE(validate(inst).empty());

    SUBCASE("takes the maximum weight when everything is safe") {
        BudgetLedger ledger(budget_vector(inst));
        const auto pick = greedy_phase2_decide({0, 1}, inst, ledger);
        REQUIRE(pick.has_value());
        CHECK(inst.edges_phase2[*pick].id == 1);
        CHECK(ledger.remaining()[0] == doctest::Approx(0.2));
    }
    SUBCASE("falls back when the heavy edge is unsafe") {
        BudgetLedger ledger(Eigen::VectorXd::Constant(1, 0.6));
        const auto pick = greedy_phase2_decide({0, 1}, inst, ledger);
        REQUIRE(pick.has_value());
        CHECK(inst.edges_phase2[*pick].id == 2);
        CHECK(ledger.remaining()[0] == doctest::Approx(0.1));
    }
    SUBCASE("rejects when nothing fits and leaves the ledger alone") {
        BudgetLedger ledger(Eigen::VectorXd::Constant(1, 0.1));
        CHECK(!greedy_phase2_decide({0, 1}, inst, ledger).has_value());
        CHECK(ledger.remaining()[0] == 0.1);
        CHECK(!greedy_phase2_decide({}, inst, ledger).has_value());
    }
    SUBCASE("weight ties go to the lower id") {
        Instance tied = inst;
        tied.edges_phase2[0].weight = 4.0;  // both weigh 4 now
        BudgetLedger ledger(budget_vector(tied));
        const auto pick = greedy_phase2_decide({0, 1}, tied, ledger);
        REQUIRE(pick.has_value());
        CHECK(tied.edges_phase2[*pick].id == 1);
    }
}

TEST_CASE("greedy-uniform draws a fresh delta") {
    SUBCASE("produces plain greedy specs inside the unit interval") {
        Rng rng(13);
        for (int i = 0; i < 1000; ++i) {
            const PolicySpec spec = greedy_uniform(rng);
            CHECK(spec.kind == PolicySpec::Kind::Greedy);
            CHECK(spec.greedy.delta >= 0.0);
            CHECK(spec.greedy.delta < 1.0);
        }
    }
    SUBCASE("same stream, same delta") {
        Rng a(99), b(99);
        CHECK(greedy_uniform(a).greedy.delta == greedy_uniform(b).greedy.delta);
    }
    SUBCASE("draws average to one half") {
        Rng rng(31);
        const int n = 100000;
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += greedy_uniform(rng).greedy.delta;
        CHECK(std::abs(total / n - 0.5) < 0.005);
    }
}

TEST_CASE("guarantee calculator") {
    SUBCASE("purely integral ratios") {
        const GuaranteeReport two = guarantee(2, 0, std::nullopt);
        CHECK(two.ratio_lower_bound == 0.125);
        CHECK(two.epsilon == 0.0);
        CHECK(!two.B.has_value());
        CHECK(guarantee(1, 0, std::nullopt).ratio_lower_bound == 0.25);
        CHECK(guarantee(3, 0, std::nullopt).ratio_lower_bound ==
              doctest::Approx(1.0 / 12.0).epsilon(1e-12));
        // B is irrelevant without non-integral resources.
        CHECK(guarantee(2, 0, 50.0).ratio_lower_bound == 0.125);
    }
    SUBCASE("mixed ratio at a comfortable budget") {
        const GuaranteeReport rep = guarantee(2, 1, 100.0);
        CHECK(rep.epsilon == doctest::Approx(2.0 / 98.0).epsilon(1e-12));
        CHECK(rep.ratio_lower_bound ==
              doctest::Approx((1.0 - 2.0 / 98.0) / 12.0).epsilon(1e-12));
        CHECK(rep.ratio_lower_bound == doctest::Approx(0.081632653).epsilon(1e-7));
        CHECK(rep.ell1 == 2);
        CHECK(rep.ell2 == 1);
    }
    SUBCASE("small-budget exponential term can win the max") {
        // At B = 3: 1/(B-2) = 1, ell2*exp(-3/12+1/6) ~ 0.92; epsilon = 2.
        const GuaranteeReport rep = guarantee(0, 1, 3.0);
        CHECK(rep.epsilon == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(rep.ratio_lower_bound == 0.0);  // clamped from (1-2)/4
    }
    SUBCASE("heavier exponential term") {
        // Large ell2 with moderate B lets the tail term dominate.
        const double b = 40.0;
        const GuaranteeReport rep = guarantee(0, 30, b);
        const double tail = 30.0 * std::exp(-b / 12.0 + 1.0 / 6.0);
        REQUIRE(tail > 1.0 / (b - 2.0));
        CHECK(rep.epsilon == doctest::Approx(2.0 * tail).epsilon(1e-12));
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(guarantee(0, 0, std::nullopt), std::invalid_argument);
        CHECK_THROWS_AS(guarantee(-1, 1, 10.0), std::invalid_argument);
        CHECK_THROWS_AS(guarantee(2, 1, std::nullopt), std::invalid_argument);
        CHECK_THROWS_WITH_AS(guarantee(2, 1, 2.0),
                             "guarantee: bound vacuous for minimum budget <= 2",
                             std::invalid_argument);
        CHECK_THROWS_AS(guarantee(2, 1, 1.0), std::invalid_argument);
    }
}

}
