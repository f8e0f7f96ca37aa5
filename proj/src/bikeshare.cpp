#include "tsra/bikeshare.hpp"

#include "tsra/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace tsra {

namespace {

long long day_index(std::int64_t t) {
    long long d = t / 86400;
    if (t % 86400 < 0) --d;
    return d;
}

int second_of_day(std::int64_t t) {
    long long r = t % 86400;
    if (r < 0) r += 86400;
    return static_cast<int>(r);
}

bool in_window(std::int64_t t, const RushWindow& w) {
    const int s = second_of_day(t);
    return s >= w.begin_second && s < w.end_second;
}

// Howard Hinnant's civil-date algorithm: days since 1970-01-01.
long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097LL + static_cast<long long>(doe) - 719468LL;
}

// Lower-middle median of an unsorted copy.
double median_of(std::vector<double> v) {
    if (v.empty()) throw std::logic_error("median of empty set");
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

void check_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        std::ostringstream os;
        os << name << " must be positive";
        throw std::invalid_argument(os.str());
    }
}

struct AssemblyInput {
    std::vector<Eigen::Vector2d> supply_pos;
    std::vector<Eigen::Vector2d> demand_pos;
    std::vector<long long> supply_cap;
    std::vector<long long> demand_cap;
    std::vector<Eigen::Vector2d> worker_origin;
    std::vector<Eigen::Vector2d> worker_dest;
    std::vector<double> worker_rate;   // pre-beta
    std::vector<double> task_weights;  // supply-major, demand-minor
    double lambda = 1.5;
    double beta = 1.0;
    double rho = 0.2;
    double kappa = 0.5;
    double tau = 0.0;
    std::optional<double> budget_override;
};

struct AssemblyStats {
    double max_raw_cbr_cost = 0.0;
    double avg_cbr_cost = 0.0;
    double global_budget = 0.0;
    int dropped_worker_types = 0;
    int horizon = 0;
};

// Turns located supply/demand capacities, worker types, and pricing
// parameters into a validated instance. Shared by the trip pipeline and the
// synthetic generator so both produce the same structure.
Instance assemble(const AssemblyInput& in, AssemblyStats* stats) {
    const int num_supply = static_cast<int>(in.supply_pos.size());
    const int num_demand = static_cast<int>(in.demand_pos.size());
    if (num_supply < 1 || num_demand < 1) throw std::invalid_argument("need at least one site per side");
    if (in.supply_cap.size() != in.supply_pos.size() ||
        in.demand_cap.size() != in.demand_pos.size())
        throw std::logic_error("capacity list does not match site list");
    if (in.worker_origin.size() != in.worker_rate.size() ||
        in.worker_dest.size() != in.worker_rate.size())
        throw std::logic_error("worker attribute lists disagree");
    const int num_tasks = num_supply * num_demand;
    if (in.task_weights.size() != static_cast<std::size_t>(num_tasks))
        throw std::logic_error("need one weight per task");
    if (!(in.tau > 0.0)) throw std::invalid_argument("walking threshold must be positive");

    // Worker types with no arrivals can never be matched; drop them.
    std::vector<int> kept;
    int dropped = 0;
    for (std::size_t j = 0; j < in.worker_rate.size(); ++j) {
        if (in.beta * in.worker_rate[j] > 0.0)
            kept.push_back(static_cast<int>(j));
        else
            ++dropped;
    }
    const int num_workers = static_cast<int>(kept.size());
    if (num_workers < 1) throw std::invalid_argument("no worker types with a positive arrival rate");

    double rate_sum = 0.0;
    std::vector<double> rates(kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j) {
        rates[j] = in.beta * in.worker_rate[kept[j]];
        rate_sum += rates[j];
    }
    const long long horizon = std::llround(rate_sum);
    if (horizon < 1) throw std::invalid_argument("arrival rates round to an empty horizon");

    // Qualified pairs and their raw costs: rho plus distance, linear up to tau.
    struct Candidate {
        int task;
        int worker;  // kept index
        double raw;
    };
    std::vector<Candidate> candidates;
    for (int a = 0; a < num_supply; ++a) {
        for (int b = 0; b < num_demand; ++b) {
            const int task = a * num_demand + b;
            for (int j = 0; j < num_workers; ++j) {
                const double detour = manhattan(in.worker_origin[kept[j]], in.supply_pos[a]) +
                                      manhattan(in.demand_pos[b], in.worker_dest[kept[j]]);
                if (detour > in.tau) continue;
                const double raw = in.rho + (1.0 - in.rho) * detour / in.tau;
                if (!(raw > 0.0))
                    throw std::invalid_argument("assignment cost vanishes; rho must be positive when detours can be 0");
                candidates.push_back({task, j, raw});
            }
        }
    }
    if (candidates.empty())
        throw std::invalid_argument("no qualified task-worker pairs within the walking threshold");

    double max_raw = 0.0;
    for (const auto& c : candidates) max_raw = std::max(max_raw, c.raw);
    double norm_sum = 0.0;
    for (const auto& c : candidates) norm_sum += c.raw / max_raw;
    const double avg_cost = norm_sum / static_cast<double>(candidates.size());

    double supply_total = 0.0, demand_total = 0.0;
    for (long long c : in.supply_cap) supply_total += static_cast<double>(c);
    for (long long c : in.demand_cap) demand_total += static_cast<double>(c);
    if (!(std::min(supply_total, demand_total) > 0.0))
        throw std::invalid_argument("no serviceable tasks: one capacity side is empty");

    // Unit choice: divide the shared axis by lambda so the largest stored
    // cost is at most 1. Relocation costs 1, assignments cost norm/lambda,
    // and the budget shrinks by the same factor.
    double budget = global_budget_amount(avg_cost, supply_total, demand_total, in.kappa) / in.lambda;
    if (in.budget_override) {
        if (*in.budget_override < 0.0) throw std::invalid_argument("budget override must be non-negative");
        budget = *in.budget_override;
    }

    Instance inst;
    inst.offline_types = num_tasks;
    inst.phase1_types = 1;
    inst.online_types = num_workers;

    const int global_res = num_supply + num_demand;
    inst.resources.reserve(global_res + 1);
    for (int a = 0; a < num_supply; ++a)
        inst.resources.push_back({a, ResourceKind::Integral, static_cast<double>(in.supply_cap[a])});
    for (int b = 0; b < num_demand; ++b)
        inst.resources.push_back({num_supply + b, ResourceKind::Integral, static_cast<double>(in.demand_cap[b])});
    inst.resources.push_back({global_res, ResourceKind::NonIntegral, budget});

    for (int a = 0; a < num_supply; ++a) {
        for (int b = 0; b < num_demand; ++b) {
            const int task = a * num_demand + b;
            const double w = in.task_weights[task];
            if (!(w > 0.0)) throw std::logic_error("task weights must be positive");
            EdgeSpec e;
            e.id = task;
            e.side = EdgeSide::PhaseOne;
            e.offline_endpoint = task;
            e.other_endpoint = 0;
            e.weight = w;
            e.cost = {{a, 1.0}, {num_supply + b, 1.0}, {global_res, 1.0}};
            inst.edges_phase1.push_back(std::move(e));
        }
    }
    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
        const auto& c = candidates[idx];
        const int a = c.task / num_demand;
        const int b = c.task % num_demand;
        EdgeSpec e;
        e.id = num_tasks + static_cast<int>(idx);
        e.side = EdgeSide::PhaseTwo;
        e.offline_endpoint = c.task;
        e.other_endpoint = c.worker;
        e.weight = in.task_weights[c.task];
        e.cost = {{a, 1.0}, {num_supply + b, 1.0}, {global_res, c.raw / max_raw / in.lambda}};
        inst.edges_phase2.push_back(std::move(e));
    }

    inst.arrivals.horizon = static_cast<int>(horizon);
    inst.arrivals.iid = true;
    inst.arrivals.probs.resize(1, num_workers);
    for (int j = 0; j < num_workers; ++j) inst.arrivals.probs(0, j) = rates[j] / rate_sum;

    const auto violations = validate(inst);
    if (!violations.empty())
        throw std::logic_error("generated instance failed validation: " + violations.front().code +
                               " (" + violations.front().detail + ")");

    if (stats) {
        stats->max_raw_cbr_cost = max_raw;
        stats->avg_cbr_cost = avg_cost;
        stats->global_budget = budget;
        stats->dropped_worker_types = dropped;
        stats->horizon = static_cast<int>(horizon);
    }
    return inst;
}

SupplyDemand select_from_flows(const std::vector<SiteFlow>& flows, int top_k, double gamma) {
    std::vector<const SiteFlow*> active;
    for (const auto& f : flows)
        if (f.supply > 0.0 || f.demand > 0.0) active.push_back(&f);
    if (static_cast<int>(active.size()) < 2 * top_k) {
        std::ostringstream os;
        os << "only " << active.size() << " active sites; need " << 2 * top_k;
        throw std::invalid_argument(os.str());
    }

    const auto net = [](const SiteFlow* f) { return f->supply - f->demand; };
    std::sort(active.begin(), active.end(), [&](const SiteFlow* x, const SiteFlow* y) {
        const double ax = std::abs(net(x)), ay = std::abs(net(y));
        if (ax != ay) return ax > ay;
        return x->site < y->site;
    });

    // Strong imbalances claim their natural side first; leftovers fill the
    // remaining slots by signed net flow.
    std::vector<const SiteFlow*> supply_sel, demand_sel, unclaimed;
    for (const SiteFlow* f : active) {
        const double v = net(f);
        if (v > 0.0 && static_cast<int>(supply_sel.size()) < top_k)
            supply_sel.push_back(f);
        else if (v < 0.0 && static_cast<int>(demand_sel.size()) < top_k)
            demand_sel.push_back(f);
        else
            unclaimed.push_back(f);
    }
    std::sort(unclaimed.begin(), unclaimed.end(), [&](const SiteFlow* x, const SiteFlow* y) {
        if (net(x) != net(y)) return net(x) > net(y);
        return x->site < y->site;
    });
    while (static_cast<int>(supply_sel.size()) < top_k) {
        supply_sel.push_back(unclaimed.front());
        unclaimed.erase(unclaimed.begin());
    }
    std::sort(unclaimed.begin(), unclaimed.end(), [&](const SiteFlow* x, const SiteFlow* y) {
        if (net(x) != net(y)) return net(x) < net(y);
        return x->site < y->site;
    });
    while (static_cast<int>(demand_sel.size()) < top_k) {
        demand_sel.push_back(unclaimed.front());
        unclaimed.erase(unclaimed.begin());
    }

    SupplyDemand out;
    for (const SiteFlow* f : supply_sel)
        out.supply.push_back({f->site, std::max(0LL, std::llround(gamma * f->supply))});
    for (const SiteFlow* f : demand_sel)
        out.demand.push_back({f->site, std::max(0LL, std::llround(gamma * f->demand))});
    return out;
}

void check_config(const BikeShareConfig& c) {
    if (c.num_sites < 1) throw std::invalid_argument("num_sites must be at least 1");
    if (c.top_k < 1) throw std::invalid_argument("top_k must be at least 1");
    if (!(c.lambda >= 1.0)) throw std::invalid_argument("lambda must be at least 1");
    check_positive(c.gamma, "gamma");
    check_positive(c.beta, "beta");
    check_positive(c.kappa, "kappa");
    if (!(c.rho >= 0.0 && c.rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
    if (c.rush_window.begin_second < 0 || c.rush_window.end_second > 86400 ||
        c.rush_window.begin_second >= c.rush_window.end_second)
        throw std::invalid_argument("rush window must satisfy 0 <= begin < end <= 86400");
}

}  // namespace

double manhattan(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - b).cwiseAbs().sum();
}

std::vector<Site> cluster_stations(
    const std::vector<std::pair<long long, Eigen::Vector2d>>& stations, int k,
    std::uint64_t seed) {
    const int n = static_cast<int>(stations.size());
    if (k < 1 || k > n) {
        std::ostringstream os;
        os << "cluster count " << k << " must lie in [1, " << n << "]";
        throw std::invalid_argument(os.str());
    }

    Rng rng(mix_seed(seed));
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = 0; i < k; ++i)
        std::swap(order[i], order[i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - i)))]);
    std::vector<Eigen::Vector2d> medians;
    for (int c = 0; c < k; ++c) medians.push_back(stations[order[c]].second);

    std::vector<int> assign(n, -1), prev(n, -2);
    for (int iter = 0; iter < 100; ++iter) {
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = manhattan(stations[i].second, medians[0]);
            for (int c = 1; c < k; ++c) {
                const double d = manhattan(stations[i].second, medians[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            assign[i] = best;
        }

        // An empty cluster steals the station farthest from its own median.
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) ++counts[assign[i]];
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            int donor = -1;
            double donor_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (counts[assign[i]] < 2) continue;
                const double d = manhattan(stations[i].second, medians[assign[i]]);
                if (d > donor_d) {
                    donor_d = d;
                    donor = i;
                }
            }
            if (donor < 0) throw std::logic_error("cannot repair empty cluster");
            --counts[assign[donor]];
            assign[donor] = c;
            counts[c] = 1;
        }

        if (assign == prev) break;
        prev = assign;

        for (int c = 0; c < k; ++c) {
            std::vector<double> xs, ys;
            for (int i = 0; i < n; ++i) {
                if (assign[i] != c) continue;
                xs.push_back(stations[i].second.x());
                ys.push_back(stations[i].second.y());
            }
            medians[c] = Eigen::Vector2d(median_of(xs), median_of(ys));
        }
    }

    std::vector<Site> sites(k);
    for (int c = 0; c < k; ++c) {
        sites[c].id = c;
        sites[c].center = medians[c];
    }
    for (int i = 0; i < n; ++i) sites[assign[i]].member_stations.push_back(stations[i].first);
    for (auto& s : sites) std::sort(s.member_stations.begin(), s.member_stations.end());
    return sites;
}

std::vector<SiteFlow> site_flow_stats(const std::vector<TripRecord>& trips,
                                      const std::vector<Site>& sites, const RushWindow& window) {
    std::map<long long, int> station_site;
    for (const auto& s : sites)
        for (long long id : s.member_stations) station_site[id] = s.id;

    std::set<long long> days;
    std::vector<long long> checkins(sites.size(), 0), checkouts(sites.size(), 0);
    for (const auto& t : trips) {
        if (!in_window(t.start_time, window)) continue;
        const auto from = station_site.find(t.start_station);
        const auto to = station_site.find(t.end_station);
        if (from == station_site.end() || to == station_site.end()) {
            std::ostringstream os;
            os << "trip references a station outside every site: "
               << (from == station_site.end() ? t.start_station : t.end_station);
            throw std::invalid_argument(os.str());
        }
        days.insert(day_index(t.start_time));
        ++checkouts[from->second];
        ++checkins[to->second];
    }
    if (days.empty()) throw std::invalid_argument("no trips fall inside the rush window");

    const double den = static_cast<double>(days.size());
    std::vector<SiteFlow> out(sites.size());
    for (std::size_t s = 0; s < sites.size(); ++s) {
        out[s].site = sites[s].id;
        out[s].supply = static_cast<double>(checkins[s]) / den;
        out[s].demand = static_cast<double>(checkouts[s]) / den;
    }
    return out;
}

SupplyDemand extract_supply_demand(const std::vector<TripRecord>& trips,
                                   const std::vector<Site>& sites,
                                   const BikeShareConfig& config) {
    check_config(config);
    return select_from_flows(site_flow_stats(trips, sites, config.rush_window), config.top_k,
                             config.gamma);
}

double global_budget_amount(double avg_cbr_cost, double total_supply, double total_demand,
                            double kappa) {
    return kappa * avg_cbr_cost * std::min(total_supply, total_demand);
}

Instance build_instance(const std::vector<TripRecord>& trips, const BikeShareConfig& config,
                        std::uint64_t seed, BuildReport* report) {
    check_config(config);

    std::vector<TripRecord> rush;
    for (const auto& t : trips)
        if (in_window(t.start_time, config.rush_window)) rush.push_back(t);
    if (rush.empty()) throw std::invalid_argument("no trips fall inside the rush window");

    // First-seen coordinates win when a station id repeats with a drifted fix.
    std::map<long long, Eigen::Vector2d> coords;
    for (const auto& t : rush) {
        coords.emplace(t.start_station, t.start_pos);
        coords.emplace(t.end_station, t.end_pos);
    }
    std::vector<std::pair<long long, Eigen::Vector2d>> stations(coords.begin(), coords.end());

    const auto sites = cluster_stations(stations, config.num_sites, seed);
    const auto flows = site_flow_stats(rush, sites, config.rush_window);
    const auto selection = select_from_flows(flows, config.top_k, config.gamma);

    std::map<long long, int> station_site;
    for (const auto& s : sites)
        for (long long id : s.member_stations) station_site[id] = s.id;

    std::set<long long> days;
    std::map<std::pair<int, int>, long long> pair_counts;
    for (const auto& t : rush) {
        days.insert(day_index(t.start_time));
        ++pair_counts[{station_site.at(t.start_station), station_site.at(t.end_station)}];
    }

    double tau = config.tau;
    if (!(tau > 0.0)) {
        if (sites.size() < 2)
            throw std::invalid_argument("tau must be given explicitly with a single site");
        std::vector<double> dists;
        for (std::size_t i = 0; i < sites.size(); ++i)
            for (std::size_t j = i + 1; j < sites.size(); ++j)
                dists.push_back(manhattan(sites[i].center, sites[j].center));
        tau = median_of(dists);
        if (!(tau > 0.0))
            throw std::invalid_argument("median pairwise site distance is 0; give tau explicitly");
    }

    AssemblyInput in;
    for (const auto& r : selection.supply) {
        in.supply_pos.push_back(sites[r.site].center);
        in.supply_cap.push_back(r.capacity);
    }
    for (const auto& r : selection.demand) {
        in.demand_pos.push_back(sites[r.site].center);
        in.demand_cap.push_back(r.capacity);
    }
    for (const auto& [pair, count] : pair_counts) {
        in.worker_origin.push_back(sites[pair.first].center);
        in.worker_dest.push_back(sites[pair.second].center);
        in.worker_rate.push_back(static_cast<double>(count) / static_cast<double>(days.size()));
    }
    Rng wrng(mix_seed(config.weight_seed));
    for (std::size_t i = 0; i < in.supply_pos.size() * in.demand_pos.size(); ++i) {
        double w = wrng.uniform();
        while (w == 0.0) w = wrng.uniform();
        in.task_weights.push_back(w);
    }
    in.lambda = config.lambda;
    in.beta = config.beta;
    in.rho = config.rho;
    in.kappa = config.kappa;
    in.tau = tau;

    AssemblyStats stats;
    Instance inst = assemble(in, &stats);
    if (report) {
        report->sites = sites;
        report->selection = selection;
        report->tau = tau;
        report->max_raw_cbr_cost = stats.max_raw_cbr_cost;
        report->avg_cbr_cost = stats.avg_cbr_cost;
        report->global_budget = stats.global_budget;
        report->dropped_worker_types = stats.dropped_worker_types;
        report->horizon = stats.horizon;
    }
    return inst;
}

Instance synthetic_instance(const SyntheticShape& shape, const SyntheticConfig& config,
                            std::uint64_t seed) {
    if (shape.supply_sites < 1 || shape.demand_sites < 1 || shape.worker_types < 1 ||
        shape.horizon < 1)
        throw std::invalid_argument("shape fields must all be at least 1");
    if (!(config.lambda >= 1.0)) throw std::invalid_argument("lambda must be at least 1");
    check_positive(config.gamma, "gamma");
    check_positive(config.beta, "beta");
    check_positive(config.kappa, "kappa");
    if (!(config.rho >= 0.0 && config.rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
    if (!(config.qualify_quantile >= 0.0 && config.qualify_quantile <= 1.0))
        throw std::invalid_argument("qualify_quantile must lie in [0, 1]");

    // Every draw happens before any parameter is consumed, so instances for
    // different lambda/gamma/beta/kappa share identical geometry and demand.
    Rng rng(mix_seed(seed));
    const auto point = [&rng] { return Eigen::Vector2d(rng.uniform() * 10.0, rng.uniform() * 10.0); };

    std::vector<Eigen::Vector2d> supply_pos, demand_pos, origins, dests;
    for (int a = 0; a < shape.supply_sites; ++a) supply_pos.push_back(point());
    for (int b = 0; b < shape.demand_sites; ++b) demand_pos.push_back(point());
    std::vector<double> supply_flow, demand_flow;
    for (int a = 0; a < shape.supply_sites; ++a) supply_flow.push_back(2.0 + 4.0 * rng.uniform());
    for (int b = 0; b < shape.demand_sites; ++b) demand_flow.push_back(2.0 + 4.0 * rng.uniform());
    for (int j = 0; j < shape.worker_types; ++j) origins.push_back(point());
    for (int j = 0; j < shape.worker_types; ++j) dests.push_back(point());
    std::vector<double> rate_raw;
    for (int j = 0; j < shape.worker_types; ++j) rate_raw.push_back(0.5 + rng.uniform());
    std::vector<double> weights;
    for (int i = 0; i < shape.supply_sites * shape.demand_sites; ++i) {
        double w = rng.uniform();
        while (w == 0.0) w = rng.uniform();
        weights.push_back(w);
    }

    double raw_sum = 0.0;
    for (double r : rate_raw) raw_sum += r;
    std::vector<double> rates;
    for (double r : rate_raw) rates.push_back(r * static_cast<double>(shape.horizon) / raw_sum);

    std::vector<double> detours;
    for (const auto& sp : supply_pos)
        for (const auto& dp : demand_pos)
            for (int j = 0; j < shape.worker_types; ++j)
                detours.push_back(manhattan(origins[j], sp) + manhattan(dp, dests[j]));
    std::sort(detours.begin(), detours.end());
    double tau = detours[static_cast<std::size_t>(
        std::llround(config.qualify_quantile * static_cast<double>(detours.size() - 1)))];
    if (!(tau > 0.0)) {
        const auto pos = std::find_if(detours.begin(), detours.end(), [](double d) { return d > 0.0; });
        if (pos == detours.end()) throw std::invalid_argument("all detours are 0; degenerate geometry");
        tau = *pos;
    }

    AssemblyInput in;
    in.supply_pos = std::move(supply_pos);
    in.demand_pos = std::move(demand_pos);
    for (double f : supply_flow) in.supply_cap.push_back(std::max(0LL, std::llround(config.gamma * f)));
    for (double f : demand_flow) in.demand_cap.push_back(std::max(0LL, std::llround(config.gamma * f)));
    in.worker_origin = std::move(origins);
    in.worker_dest = std::move(dests);
    in.worker_rate = std::move(rates);
    in.task_weights = std::move(weights);
    in.lambda = config.lambda;
    in.beta = config.beta;
    in.rho = config.rho;
    in.kappa = config.kappa;
    in.tau = tau;
    in.budget_override = config.global_budget_override;
    return assemble(in, nullptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string normalize_header(std::string s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    s = s.substr(b, e - b);
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool parse_ll(const std::string& s, long long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end == s.c_str()) return false;
    while (*end == ' ') ++end;
    if (*end != '\0') return false;
    out = v;
    return true;
}

bool parse_finite(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) return false;
    while (*end == ' ') ++end;
    if (*end != '\0' || !std::isfinite(v)) return false;
    out = v;
    return true;
}

// "YYYY-MM-DD HH:MM:SS" with an optional fractional-second tail.
bool parse_time(const std::string& s, std::int64_t& out) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0, used = 0;
    if (std::sscanf(s.c_str(), " %d-%d-%d %d:%d:%d%n", &y, &mo, &d, &h, &mi, &se, &used) != 6)
        return false;
    const char* rest = s.c_str() + used;
    if (*rest == '.') {
        ++rest;
        if (!std::isdigit(static_cast<unsigned char>(*rest))) return false;
        while (std::isdigit(static_cast<unsigned char>(*rest))) ++rest;
    }
    while (*rest == ' ') ++rest;
    if (*rest != '\0') return false;
    if (mo < 1 || mo > 12 || d < 1 || d > 31) return false;
    if (h < 0 || h > 23 || mi < 0 || mi > 59 || se < 0 || se > 60) return false;
    out = days_from_civil(y, mo, d) * 86400LL + h * 3600LL + mi * 60LL + se;
    return true;
}

}  // namespace

std::vector<TripRecord> read_trips_csv(const std::string& path, CsvReadSummary* summary) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open trip file: " + path);

    std::string line;
    if (!std::getline(file, line)) throw std::invalid_argument("trip file is empty: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const char* wanted[] = {"starttime",
                            "stoptime",
                            "start station id",
                            "start station latitude",
                            "start station longitude",
                            "end station id",
                            "end station latitude",
                            "end station longitude"};
    const auto header = split_csv_line(line);
    int col[8];
    std::fill(std::begin(col), std::end(col), -1);
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = normalize_header(header[i]);
        for (int w = 0; w < 8; ++w)
            if (name == wanted[w]) col[w] = static_cast<int>(i);
    }
    for (int w = 0; w < 8; ++w)
        if (col[w] < 0)
            throw std::invalid_argument(std::string("trip file misses column '") + wanted[w] + "'");

    std::vector<TripRecord> trips;
    CsvReadSummary local;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++local.total_rows;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            ++local.malformed_rows;
            continue;
        }
        TripRecord t;
        double slat, slon, elat, elon;
        const bool ok = parse_time(cells[col[0]], t.start_time) &&
                        parse_time(cells[col[1]], t.end_time) &&
                        parse_ll(cells[col[2]], t.start_station) &&
                        parse_finite(cells[col[3]], slat) && parse_finite(cells[col[4]], slon) &&
                        parse_ll(cells[col[5]], t.end_station) &&
                        parse_finite(cells[col[6]], elat) && parse_finite(cells[col[7]], elon);
        if (!ok || t.start_time > t.end_time) {
            ++local.malformed_rows;
            continue;
        }
        t.start_pos = Eigen::Vector2d(slat, slon);
        t.end_pos = Eigen::Vector2d(elat, elon);
        trips.push_back(t);
    }
    if (summary) *summary = local;
    return trips;
}

}  // namespace tsra
