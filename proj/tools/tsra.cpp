#include "tsra/bikeshare.hpp"
#include "tsra/format.hpp"
#include "tsra/instance.hpp"
#include "tsra/instance_io.hpp"
#include "tsra/lp.hpp"
#include "tsra/policy.hpp"
#include "tsra/reporting.hpp"
#include "tsra/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace tsra;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write to " + path);
    file << text;
}

struct GenOptions {
    bool synthetic = false;
    std::vector<int> shape;  // supply,demand,workers,horizon
    std::string trips_path;
    BikeShareConfig config;
    double qualify_quantile = 0.6;
    double budget_override = std::nan("");
};

void add_generation_options(CLI::App* cmd, GenOptions& g) {
    cmd->add_flag("--synthetic", g.synthetic, "generate a synthetic instance");
    cmd->add_option("--shape", g.shape, "supply,demand,workers,horizon (with --synthetic)")
        ->delimiter(',');
    cmd->add_option("--trips", g.trips_path, "trip CSV to build from");
    cmd->add_option("--sites", g.config.num_sites, "number of clustered sites")
        ->capture_default_str();
    cmd->add_option("--top-k", g.config.top_k, "sites kept per side")->capture_default_str();
    cmd->add_option("--lambda", g.config.lambda, "relocation unit cost, >= 1")
        ->capture_default_str();
    cmd->add_option("--gamma", g.config.gamma, "supply/demand scale")->capture_default_str();
    cmd->add_option("--beta", g.config.beta, "arrival-rate scale")->capture_default_str();
    cmd->add_option("--rho", g.config.rho, "basic assignment rate in [0,1]")
        ->capture_default_str();
    cmd->add_option("--tau", g.config.tau, "walking threshold (<= 0: median site distance)")
        ->capture_default_str();
    cmd->add_option("--kappa", g.config.kappa, "budget fraction")->capture_default_str();
    cmd->add_option("--weight-seed", g.config.weight_seed, "seed for task weights")
        ->capture_default_str();
    cmd->add_option("--qualify-quantile", g.qualify_quantile,
                    "detour quantile that sets tau (with --synthetic)")
        ->capture_default_str();
    cmd->add_option("--budget-override", g.budget_override,
                    "replace the computed global budget (with --synthetic)");
}

// Maps a swept parameter value to a fresh instance; with an empty parameter
// the configured values are used as-is.
std::function<Instance(double)> instance_builder(const GenOptions& g, std::uint64_t seed,
                                                 const std::string& parameter) {
    if (g.synthetic == !g.trips_path.empty())
        throw std::invalid_argument("give exactly one of --synthetic or --trips");
    if (!parameter.empty() && parameter != "lambda" && parameter != "gamma" &&
        parameter != "beta" && parameter != "kappa")
        throw std::invalid_argument("--parameter must be one of lambda, gamma, beta, kappa");

    const auto apply = [parameter](double* lambda, double* gamma, double* beta, double* kappa,
                                   double value) {
        if (parameter == "lambda") *lambda = value;
        else if (parameter == "gamma") *gamma = value;
        else if (parameter == "beta") *beta = value;
        else if (parameter == "kappa") *kappa = value;
    };

    if (g.synthetic) {
        if (g.shape.size() != 4)
            throw std::invalid_argument("--shape needs supply,demand,workers,horizon");
        SyntheticShape shape;
        shape.supply_sites = g.shape[0];
        shape.demand_sites = g.shape[1];
        shape.worker_types = g.shape[2];
        shape.horizon = g.shape[3];
        SyntheticConfig base;
        base.lambda = g.config.lambda;
        base.gamma = g.config.gamma;
        base.beta = g.config.beta;
        base.kappa = g.config.kappa;
        base.rho = g.config.rho;
        base.qualify_quantile = g.qualify_quantile;
        if (!std::isnan(g.budget_override)) base.global_budget_override = g.budget_override;
        return [shape, base, seed, apply](double value) {
            SyntheticConfig cfg = base;
            apply(&cfg.lambda, &cfg.gamma, &cfg.beta, &cfg.kappa, value);
            return synthetic_instance(shape, cfg, seed);
        };
    }

    CsvReadSummary summary;
    auto trips = read_trips_csv(g.trips_path, &summary);
    if (summary.malformed_rows > 0)
        std::cerr << "skipped " << summary.malformed_rows << " malformed of " << summary.total_rows
                  << " rows\n";
    const BikeShareConfig base = g.config;
    return [trips = std::move(trips), base, seed, apply](double value) {
        BikeShareConfig cfg = base;
        apply(&cfg.lambda, &cfg.gamma, &cfg.beta, &cfg.kappa, value);
        return build_instance(trips, cfg, seed);
    };
}

Instance load_from(const std::string& path) { return load_instance(path); }

std::vector<PolicySpec> parse_policies(const std::vector<std::string>& names) {
    std::vector<PolicySpec> out;
    for (const auto& name : names) out.push_back(PolicySpec::parse(name));
    return out;
}

nlohmann::json report_to_json(const EvalReport& r) {
    return {{"policy", r.policy},
            {"episodes", r.episodes},
            {"mean_reward", r.mean_reward},
            {"std_error", r.std_error},
            {"lp_objective", r.lp_objective},
            {"competitive_ratio", r.competitive_ratio}};
}

int run_gen(const GenOptions& g, std::uint64_t seed, const std::string& out_path) {
    const Instance inst = instance_builder(g, seed, "")(0.0);
    write_output(instance_to_json(inst).dump(2) + "\n", out_path);

    const auto [ell1, ell2] = sparsities(inst);
    std::cerr << "sparsity=(" << ell1 << "," << ell2 << ")"
              << " phase1_edges=" << inst.edges_phase1.size()
              << " phase2_edges=" << inst.edges_phase2.size() << " tasks=" << inst.offline_types
              << " workers=" << inst.online_types << " horizon=" << inst.arrivals.horizon
              << " resources=" << inst.resources.size() << "\n";
    if (const auto b = min_nonintegral_budget(inst))
        std::cerr << "min_nonintegral_budget=" << format_double(*b) << "\n";
    return 0;
}

int run_lp(const std::string& instance_path, const std::string& out_path) {
    const Instance inst = load_from(instance_path);
    const LpSolution sol = solve_benchmark(inst);
    write_output(solution_to_json(inst, sol).dump(2) + "\n", out_path);
    return 0;
}

int run_simulate(const std::string& instance_path, const std::vector<std::string>& policy_names,
                 long episodes, std::uint64_t seed, const std::string& out_path,
                 const std::string& format) {
    const Instance inst = load_from(instance_path);
    const auto policies = parse_policies(policy_names);
    const LpSolution sol = solve_benchmark(inst);

    std::vector<EvalReport> reports;
    for (const auto& policy : policies) reports.push_back(evaluate(inst, policy, episodes, seed, sol));

    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) arr.push_back(report_to_json(r));
        write_output(arr.dump(2) + "\n", out_path);
    } else {
        std::ostringstream os;
        os << eval_report_csv_header() << "\n";
        for (const auto& r : reports) os << eval_report_csv_row(r) << "\n";
        write_output(os.str(), out_path);
    }
    return 0;
}

int run_sweep_cmd(const GenOptions& g, const std::string& parameter,
                  const std::vector<double>& values, const std::vector<std::string>& policy_names,
                  long episodes, std::uint64_t seed, const std::string& out_path,
                  const std::string& format) {
    if (format == "json") throw std::invalid_argument("sweep output is csv only");
    SweepSpec spec;
    spec.parameter = parameter;
    spec.values = values;
    spec.policies = parse_policies(policy_names);
    spec.episodes = episodes;
    spec.base_seed = seed;
    const SweepResult result = run_sweep(spec, instance_builder(g, seed, parameter));
    write_output(result.csv, out_path);
    for (const auto& f : result.failures)
        std::cerr << "value " << format_double(f.value) << " failed: " << f.message << "\n";
    return result.failures.empty() ? 0 : 1;
}

int run_oracle(const std::string& instance_path, double max_enumeration,
               const std::string& out_path) {
    const Instance inst = load_from(instance_path);
    const double opt = brute_force_offline_opt(inst, static_cast<long long>(max_enumeration));
    const LpSolution sol = solve_benchmark(inst);
    const bool holds = lp_upper_bound_check(inst, sol, opt);
    std::ostringstream os;
    os << "offline_opt=" << format_double(opt) << "\n"
       << "lp_objective=" << format_double(sol.objective_value) << "\n"
       << "upper_bound_holds=" << (holds ? "true" : "false") << "\n";
    write_output(os.str(), out_path);
    return holds ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-stage resource allocation: benchmark LP, policies, simulation"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "csv";
    app.add_option("--seed", seed, "base random seed")->capture_default_str();
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    GenOptions gen_opts;
    auto* gen = app.add_subcommand("gen", "generate an instance and print it as JSON");
    gen->fallthrough();
    add_generation_options(gen, gen_opts);

    std::string lp_instance;
    auto* lp = app.add_subcommand("lp", "solve the benchmark relaxation of an instance");
    lp->fallthrough();
    lp->add_option("--instance", lp_instance, "instance JSON path")->required();

    std::string sim_instance;
    std::vector<std::string> sim_policies;
    long sim_episodes = 1000;
    auto* simulate = app.add_subcommand("simulate", "estimate competitive ratios by simulation");
    simulate->fallthrough();
    simulate->add_option("--instance", sim_instance, "instance JSON path")->required();
    simulate->add_option("--policies", sim_policies, "policy specs, e.g. samp:eta=0.5,alpha=0.5")
        ->required();
    simulate->add_option("--episodes", sim_episodes, "episodes per policy")->capture_default_str();

    GenOptions sweep_opts;
    std::string sweep_parameter;
    std::vector<double> sweep_values;
    std::vector<std::string> sweep_policies;
    long sweep_episodes = 1000;
    auto* sweep = app.add_subcommand("sweep", "evaluate policies across a parameter range");
    sweep->fallthrough();
    add_generation_options(sweep, sweep_opts);
    sweep->add_option("--parameter", sweep_parameter, "lambda, gamma, beta, or kappa")->required();
    sweep->add_option("--values", sweep_values, "comma-separated parameter values")
        ->delimiter(',')
        ->required();
    sweep->add_option("--policies", sweep_policies, "policy specs")->required();
    sweep->add_option("--episodes", sweep_episodes, "episodes per policy and value")
        ->capture_default_str();

    std::string oracle_instance;
    double oracle_max = 5e7;
    auto* oracle = app.add_subcommand("oracle", "exact expected offline optimum (tiny instances)");
    oracle->fallthrough();
    oracle->add_option("--instance", oracle_instance, "instance JSON path")->required();
    oracle->add_option("--max-enumeration", oracle_max, "enumeration budget")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return run_gen(gen_opts, seed, out_path);
        if (lp->parsed()) return run_lp(lp_instance, out_path);
        if (simulate->parsed())
            return run_simulate(sim_instance, sim_policies, sim_episodes, seed, out_path, format);
        if (sweep->parsed())
            return run_sweep_cmd(sweep_opts, sweep_parameter, sweep_values, sweep_policies,
                                 sweep_episodes, seed, out_path, format);
        if (oracle->parsed()) return run_oracle(oracle_instance, oracle_max, out_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
