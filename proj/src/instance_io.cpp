#include "tsra/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace tsra {

namespace {

using nlohmann::json;

json cost_to_json(const std::vector<CostEntry>& cost) {
    json out = json::object();
    for (const CostEntry& c : cost) out[std::to_string(c.resource)] = c.amount;
    return out;
}

json edge_to_json(const EdgeSpec& e) {
    return json{{"id", e.id},
                {"offline", e.offline_endpoint},
                {"other", e.other_endpoint},
                {"weight", e.weight},
                {"cost", cost_to_json(e.cost)}};
}

int parse_index_key(const std::string& key, const char* what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(key, &pos);
        if (pos != key.size() || v < 0) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("instance json: bad ") + what + " key '" + key +
                                    "'");
    }
}

EdgeSpec edge_from_json(const json& doc, EdgeSide side) {
    EdgeSpec e;
    e.id = doc.at("id").get<int>();
    e.side = side;
    e.offline_endpoint = doc.at("offline").get<int>();
    e.other_endpoint = doc.at("other").get<int>();
    e.weight = doc.at("weight").get<double>();
    for (const auto& [key, value] : doc.at("cost").items())
        e.cost.push_back({parse_index_key(key, "cost resource"), value.get<double>()});
    std::sort(e.cost.begin(), e.cost.end(),
              [](const CostEntry& a, const CostEntry& b) { return a.resource < b.resource; });
    return e;
}

}  // namespace

json instance_to_json(const Instance& inst) {
    json doc;
    doc["types"] = {{"offline", inst.offline_types},
                    {"phase1", inst.phase1_types},
                    {"online", inst.online_types}};
    doc["resources"] = json::array();
    for (const Resource& r : inst.resources)
        doc["resources"].push_back(
            {{"id", r.id},
             {"kind", r.kind == ResourceKind::Integral ? "integral" : "nonintegral"},
             {"budget", r.budget}});
    doc["edges_phase1"] = json::array();
    for (const EdgeSpec& e : inst.edges_phase1) doc["edges_phase1"].push_back(edge_to_json(e));
    doc["edges_phase2"] = json::array();
    for (const EdgeSpec& e : inst.edges_phase2) doc["edges_phase2"].push_back(edge_to_json(e));

    json arrivals;
    arrivals["horizon"] = inst.arrivals.horizon;
    if (inst.arrivals.iid) {
        json probs = json::object();
        for (int j = 0; j < inst.online_types; ++j)
            probs[std::to_string(j)] = inst.arrivals.probs(0, j);
        arrivals["iid"] = probs;
    } else {
        json triples = json::array();
        for (int t = 0; t < inst.arrivals.horizon; ++t)
            for (int j = 0; j < inst.online_types; ++j)
                if (inst.arrivals.probs(t, j) != 0.0)
                    triples.push_back({t, j, inst.arrivals.probs(t, j)});
        arrivals["general"] = triples;
    }
    doc["arrivals"] = arrivals;
    return doc;
}

Instance instance_from_json(const json& doc) {
    try {
        Instance inst;
        for (const json& r : doc.at("resources")) {
            Resource res;
            res.id = r.at("id").get<int>();
            const std::string kind = r.at("kind").get<std::string>();
            if (kind == "integral")
                res.kind = ResourceKind::Integral;
            else if (kind == "nonintegral")
                res.kind = ResourceKind::NonIntegral;
            else
                throw std::invalid_argument("instance json: unknown resource kind '" + kind + "'");
            res.budget = r.at("budget").get<double>();
            inst.resources.push_back(res);
        }
        for (const json& e : doc.at("edges_phase1"))
            inst.edges_phase1.push_back(edge_from_json(e, EdgeSide::PhaseOne));
        for (const json& e : doc.at("edges_phase2"))
            inst.edges_phase2.push_back(edge_from_json(e, EdgeSide::PhaseTwo));

        const json& arrivals = doc.at("arrivals");
        inst.arrivals.horizon = arrivals.at("horizon").get<int>();

        int online = 0;
        std::vector<std::pair<int, double>> iid_entries;
        std::vector<std::tuple<int, int, double>> general_entries;
        if (arrivals.contains("iid")) {
            inst.arrivals.iid = true;
            for (const auto& [key, value] : arrivals.at("iid").items()) {
                const int j = parse_index_key(key, "arrival type");
                iid_entries.emplace_back(j, value.get<double>());
                online = std::max(online, j + 1);
            }
        } else if (arrivals.contains("general")) {
            inst.arrivals.iid = false;
            for (const json& triple : arrivals.at("general")) {
                if (!triple.is_array() || triple.size() != 3)
                    throw std::invalid_argument(
                        "instance json: general arrival entries must be [t, j, p] triples");
                const int t = triple[0].get<int>();
                const int j = triple[1].get<int>();
                if (t < 0 || j < 0)
                    throw std::invalid_argument("instance json: negative arrival index");
                general_entries.emplace_back(t, j, triple[2].get<double>());
                online = std::max(online, j + 1);
            }
        } else {
            throw std::invalid_argument("instance json: arrivals need an 'iid' or 'general' key");
        }

        if (doc.contains("types")) {
            const json& types = doc.at("types");
            inst.offline_types = types.at("offline").get<int>();
            inst.phase1_types = types.at("phase1").get<int>();
            inst.online_types = types.at("online").get<int>();
        } else {
            for (const EdgeSpec& e : inst.edges_phase1) {
                inst.offline_types = std::max(inst.offline_types, e.offline_endpoint + 1);
                inst.phase1_types = std::max(inst.phase1_types, e.other_endpoint + 1);
            }
            for (const EdgeSpec& e : inst.edges_phase2) {
                inst.offline_types = std::max(inst.offline_types, e.offline_endpoint + 1);
                online = std::max(online, e.other_endpoint + 1);
            }
            inst.online_types = online;
        }

        const int rows = inst.arrivals.iid ? 1 : std::max(inst.arrivals.horizon, 0);
        inst.arrivals.probs = Eigen::MatrixXd::Zero(rows, inst.online_types);
        for (const auto& [j, p] : iid_entries) {
            if (j >= inst.online_types)
                throw std::invalid_argument("instance json: arrival type out of range");
            inst.arrivals.probs(0, j) = p;
        }
        for (const auto& [t, j, p] : general_entries) {
            if (t >= rows || j >= inst.online_types)
                throw std::invalid_argument("instance json: arrival entry out of range");
            inst.arrivals.probs(t, j) = p;
        }
        return inst;
    } catch (const json::exception& err) {
        throw std::invalid_argument(std::string("instance json: ") + err.what());
    }
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    out << instance_to_json(inst).dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& err) {
        throw std::invalid_argument(path + ": " + err.what());
    }
    return instance_from_json(doc);
}

}  // namespace tsra
