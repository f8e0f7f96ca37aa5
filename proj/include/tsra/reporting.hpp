#pragma once

#include "tsra/instance.hpp"
#include "tsra/policy.hpp"
#include "tsra/sim.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tsra {

std::string eval_report_csv_header();
std::string eval_report_csv_row(const EvalReport& report);

struct SweepSpec {
    std::string parameter;        // label only; the builder interprets the value
    std::vector<double> values;   // non-empty, strictly increasing
    std::vector<PolicySpec> policies;
    long episodes = 1000;
    std::uint64_t base_seed = 0;
};

struct SweepFailure {
    double value = 0.0;
    std::string message;
};

struct SweepResult {
    std::string csv;  // parameter_value,policy,ratio,std_error
    std::vector<SweepFailure> failures;
};

// Builds one instance per parameter value, solves its benchmark relaxation
// once, and evaluates every policy on common random numbers (same base seed
// per value). Values that fail to build or solve are reported and skipped.
SweepResult run_sweep(const SweepSpec& spec,
                      const std::function<Instance(double)>& build_at);

}  // namespace tsra
