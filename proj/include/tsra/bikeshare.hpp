#pragma once

#include "tsra/instance.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tsra {

struct TripRecord {
    long long start_station = 0;
    long long end_station = 0;
    std::int64_t start_time = 0;  // civil seconds since 1970-01-01 00:00:00
    std::int64_t end_time = 0;
    Eigen::Vector2d start_pos{0.0, 0.0};  // (lat, lon) treated as planar
    Eigen::Vector2d end_pos{0.0, 0.0};
};

struct Site {
    int id = 0;
    Eigen::Vector2d center{0.0, 0.0};
    std::vector<long long> member_stations;
};

// Time-of-day interval [begin_second, end_second); a trip belongs to the
// window when its start time falls inside.
struct RushWindow {
    int begin_second = 8 * 3600;
    int end_second = 9 * 3600;
};

struct BikeShareConfig {
    int num_sites = 50;
    int top_k = 10;
    double lambda = 1.5;  // relative unit cost of phase-1 rebalancing, >= 1
    double gamma = 2.0;   // supply/demand scale
    double beta = 1.0;    // arrival-rate scale
    double rho = 0.2;     // basic rate floor of the assignment cost, in [0, 1]
    double tau = 0.0;     // walking threshold; <= 0 selects the median pairwise site distance
    double kappa = 0.5;   // budget fraction
    RushWindow rush_window;
    std::uint64_t weight_seed = 0;
};

double manhattan(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

// Lloyd-style K-medians under Manhattan distance: nearest-median assignment,
// coordinate-wise median recomputation, until a fixed point or 100
// iterations. Initial medians are k distinct stations drawn from the seed.
// May settle in a local optimum.
std::vector<Site> cluster_stations(
    const std::vector<std::pair<long long, Eigen::Vector2d>>& stations, int k,
    std::uint64_t seed);

struct SiteFlow {
    int site = 0;
    double supply = 0.0;  // average per-day check-ins over the distinct days present
    double demand = 0.0;  // average per-day check-outs
};

std::vector<SiteFlow> site_flow_stats(const std::vector<TripRecord>& trips,
                                      const std::vector<Site>& sites, const RushWindow& window);

struct RankedSite {
    int site = 0;
    long long capacity = 0;  // round(gamma * flow)
};

struct SupplyDemand {
    std::vector<RankedSite> supply;
    std::vector<RankedSite> demand;
};

// Picks the top-k supplying and top-k demanding sites, disjointly, ranked by
// net flow (check-ins minus check-outs). Rejects when fewer than 2*top_k
// sites show any activity.
SupplyDemand extract_supply_demand(const std::vector<TripRecord>& trips,
                                   const std::vector<Site>& sites,
                                   const BikeShareConfig& config);

// kappa * avg_cbr_cost * min(total_supply, total_demand).
double global_budget_amount(double avg_cbr_cost, double total_supply, double total_demand,
                            double kappa);

struct BuildReport {
    std::vector<Site> sites;
    SupplyDemand selection;
    double tau = 0.0;
    double max_raw_cbr_cost = 0.0;
    double avg_cbr_cost = 0.0;   // after normalizing the largest cost to 1
    double global_budget = 0.0;  // stored budget, after the lambda rescale
    int dropped_worker_types = 0;
    int horizon = 0;
};

// Full pipeline from trips to a validated instance: cluster, extract supply
// and demand, derive worker types and arrival rates from trip frequencies,
// qualify task-worker pairs within tau, price assignments, and set budgets.
// The phase-1 unit cost lambda exceeds 1, while stored costs must stay in
// (0, 1], so the shared non-integral axis is rescaled by lambda: phase-1
// cost 1, assignment costs divided by lambda, budget divided by lambda. The
// model is unchanged by this unit choice.
Instance build_instance(const std::vector<TripRecord>& trips, const BikeShareConfig& config,
                        std::uint64_t seed, BuildReport* report = nullptr);

struct SyntheticShape {
    int supply_sites = 1;
    int demand_sites = 1;
    int worker_types = 1;
    int horizon = 1;
};

struct SyntheticConfig {
    double lambda = 1.5;
    double gamma = 2.0;
    double beta = 1.0;
    double kappa = 0.5;
    double rho = 0.2;
    // Fraction of task-worker pairs within walking distance; sets tau at
    // this quantile of the pairwise distance sums.
    double qualify_quantile = 0.6;
    // When set, replaces the computed kappa-based global budget (stored
    // value, after cost normalization).
    std::optional<double> global_budget_override;
};

// Random instance with the exact structural shape of build_instance output:
// sparsities (2, 1), one shared non-integral budget, KIID arrivals. All
// geometry, flows, rates, and weights depend only on (shape, seed), so
// sweeping lambda/gamma/beta/kappa re-prices the same underlying scenario.
Instance synthetic_instance(const SyntheticShape& shape, const SyntheticConfig& config,
                            std::uint64_t seed);

struct CsvReadSummary {
    long long total_rows = 0;
    long long malformed_rows = 0;
};

// Header-mapped trip CSV reader. Unknown columns are ignored; rows that fail
// to parse are counted and skipped.
std::vector<TripRecord> read_trips_csv(const std::string& path,
                                       CsvReadSummary* summary = nullptr);

}  // namespace tsra
