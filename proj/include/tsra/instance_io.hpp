#pragma once

#include "tsra/instance.hpp"

#include <json.hpp>

#include <string>

namespace tsra {

nlohmann::json instance_to_json(const Instance& inst);

// Throws std::invalid_argument on schema problems. The optional "types" key
// makes round-trips exact; files without it get type counts inferred from
// edge endpoints and arrival entries.
Instance instance_from_json(const nlohmann::json& doc);

void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace tsra
