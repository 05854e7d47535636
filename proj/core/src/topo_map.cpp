#include "body/topo_map.hpp"

#include <algorithm>

#include <yaml-cpp/yaml.h>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

TopoMap::TopoMap(std::vector<Campus> campuses, std::vector<ServerPlacement> servers,
                 std::vector<std::string> auxiliary)
    : campuses_(std::move(campuses)), servers_(std::move(servers)), auxiliary_(std::move(auxiliary)) {
    std::sort(campuses_.begin(), campuses_.end(),
              [](const Campus& a, const Campus& b) { return a.campus_id < b.campus_id; });
    for (auto& campus : campuses_) {
        std::sort(campus.distribution_switches.begin(), campus.distribution_switches.end(),
                  [](const auto& a, const auto& b) { return a.switch_id < b.switch_id; });
        for (auto& dist : campus.distribution_switches) {
            if (!switches_.emplace(dist.switch_id, SwitchPlacement{campus.campus_id, Tier::distribution, {}}).second)
                throw DuplicateSwitch(dist.switch_id);
            std::sort(dist.access_switches.begin(), dist.access_switches.end());
            for (const auto& access : dist.access_switches) {
                if (!switches_.emplace(access, SwitchPlacement{campus.campus_id, Tier::access, dist.switch_id}).second)
                    throw DuplicateSwitch(access);
            }
        }
    }
    std::sort(servers_.begin(), servers_.end(),
              [](const auto& a, const auto& b) { return a.server_id < b.server_id; });
    for (const auto& server : servers_) {
        if (!switches_.count(server.parent_switch_id)) throw OrphanServer(server.server_id);
    }
    std::sort(auxiliary_.begin(), auxiliary_.end());
}

bool TopoMap::is_auxiliary(std::string_view campus_id) const {
    return std::find(auxiliary_.begin(), auxiliary_.end(), campus_id) != auxiliary_.end();
}

const SwitchPlacement* TopoMap::find_switch(std::string_view switch_id) const {
    auto it = switches_.find(switch_id);
    return it == switches_.end() ? nullptr : &it->second;
}

std::optional<Tier> TopoMap::tier_of(std::string_view switch_id) const {
    if (auto* p = find_switch(switch_id)) return p->tier;
    return std::nullopt;
}

std::vector<std::string> TopoMap::switch_ids() const {
    std::vector<std::string> ids;
    ids.reserve(switches_.size());
    for (const auto& [id, placement] : switches_) ids.push_back(id);
    return ids;
}

TopoMap parse_topo_map(std::string_view yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("topology map is not valid YAML: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("topology map must be a mapping with a 'campuses' key");
    std::vector<Campus> campuses;
    std::vector<ServerPlacement> servers;
    std::vector<std::string> auxiliary;
    try {
        if (auto c = root["campuses"]) {
            if (!c.IsMap()) throw ConfigError("topology map: 'campuses' must be a mapping");
            for (const auto& campus_kv : c) {
                Campus campus{campus_kv.first.as<std::string>(), {}};
                const auto& dists = campus_kv.second;
                if (dists && !dists.IsNull()) {
                    if (!dists.IsMap())
                        throw ConfigError("topology map: campus '" + campus.campus_id + "' must map switches");
                    for (const auto& dist_kv : dists) {
                        DistributionSwitch dist{dist_kv.first.as<std::string>(), {}};
                        if (dist_kv.second && !dist_kv.second.IsNull())
                            for (const auto& a : dist_kv.second) dist.access_switches.push_back(a.as<std::string>());
                        campus.distribution_switches.push_back(std::move(dist));
                    }
                }
                campuses.push_back(std::move(campus));
            }
        }
        if (auto s = root["servers"]) {
            for (const auto& node : s) {
                servers.push_back({node["id"].as<std::string>(), node["campus"].as<std::string>(),
                                   node["parent"].as<std::string>()});
            }
        }
        if (auto a = root["auxiliary"]) {
            for (const auto& node : a) auxiliary.push_back(node.as<std::string>());
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("topology map: ") + e.what());
    }
    return TopoMap(std::move(campuses), std::move(servers), std::move(auxiliary));
}

TopoMap load_topo_map(const std::filesystem::path& path) { return parse_topo_map(read_file(path)); }

std::string render_topo_map(const TopoMap& map) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "campuses" << YAML::Value << YAML::BeginMap;
    for (const auto& campus : map.campuses()) {
        out << YAML::Key << campus.campus_id << YAML::Value << YAML::BeginMap;
        for (const auto& dist : campus.distribution_switches) {
            out << YAML::Key << dist.switch_id << YAML::Value << YAML::BeginSeq;
            for (const auto& a : dist.access_switches) out << a;
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    out << YAML::Key << "servers" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : map.servers()) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << s.server_id << YAML::Key
            << "campus" << YAML::Value << s.campus_id << YAML::Key << "parent" << YAML::Value
            << s.parent_switch_id << YAML::EndMap;
    }
    out << YAML::EndSeq;
    if (!map.auxiliary().empty()) {
        out << YAML::Key << "auxiliary" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (const auto& a : map.auxiliary()) out << a;
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace body
