#include "tsra/reporting.hpp"

#include "tsra/format.hpp"
#include "tsra/lp.hpp"

#include <sstream>
#include <stdexcept>

namespace tsra {

std::string eval_report_csv_header() {
    return "policy,episodes,mean_reward,std_error,lp_objective,competitive_ratio";
}

std::string eval_report_csv_row(const EvalReport& report) {
    std::ostringstream os;
    os << report.policy << ',' << report.episodes << ',' << format_double(report.mean_reward)
       << ',' << format_double(report.std_error) << ',' << format_double(report.lp_objective)
       << ',' << format_double(report.competitive_ratio);
    return os.str();
}

SweepResult run_sweep(const SweepSpec& spec, const std::function<Instance(double)>& build_at) {
    if (spec.values.empty()) throw std::invalid_argument("sweep needs at least one value");
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (!(spec.values[i] > spec.values[i - 1]))
            throw std::invalid_argument("sweep values must be strictly increasing");
    if (spec.policies.empty()) throw std::invalid_argument("sweep needs at least one policy");
    if (spec.episodes < 1) throw std::invalid_argument("episodes must be positive");
    if (!build_at) throw std::invalid_argument("sweep needs an instance builder");

    SweepResult result;
    std::ostringstream csv;
    csv << "parameter_value,policy,ratio,std_error\n";
    for (double value : spec.values) {
        try {
            const Instance inst = build_at(value);
            const LpSolution sol = solve_benchmark(inst);
            for (const auto& policy : spec.policies) {
                const EvalReport report = evaluate(inst, policy, spec.episodes, spec.base_seed, sol);
                csv << format_double(value) << ',' << report.policy << ','
                    << format_double(report.competitive_ratio) << ','
                    << format_double(report.std_error / (report.degenerate ? 1.0 : report.lp_objective))
                    << '\n';
            }
        } catch (const std::exception& e) {
            result.failures.push_back({value, e.what()});
        }
    }
    result.csv = csv.str();
    return result;
}

}  // namespace tsra
