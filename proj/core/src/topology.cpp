#include "body/topology.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <yaml-cpp/yaml.h>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

using nlohmann::json;

namespace {
constexpr NodeKind kAllKinds[] = {NodeKind::core,         NodeKind::campus,     NodeKind::distribution_switch,
                                  NodeKind::access_switch, NodeKind::floor_group, NodeKind::camera,
                                  NodeKind::mini_switch,  NodeKind::server,     NodeKind::quarantine_block,
                                  NodeKind::unresolved_mac};
}

std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::core: return "core";
        case NodeKind::campus: return "campus";
        case NodeKind::distribution_switch: return "distribution_switch";
        case NodeKind::access_switch: return "access_switch";
        case NodeKind::floor_group: return "floor_group";
        case NodeKind::camera: return "camera";
        case NodeKind::mini_switch: return "mini_switch";
        case NodeKind::server: return "server";
        case NodeKind::quarantine_block: return "quarantine_block";
        case NodeKind::unresolved_mac: return "unresolved_mac";
    }
    return "core";
}

std::optional<NodeKind> node_kind_from_string(std::string_view s) {
    for (auto k : kAllKinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::size_t TopologyNode::size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
}

const TopologyNode* TopologyNode::find(std::string_view node_id) const {
    if (id == node_id) return this;
    for (const auto& c : children)
        if (const auto* hit = c.find(node_id)) return hit;
    return nullptr;
}

void TopologyNode::normalize() {
    for (auto& c : children) c.normalize();
    std::sort(children.begin(), children.end(), [](const TopologyNode& a, const TopologyNode& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.id < b.id;
    });
}

json to_json(const TopologyNode& node) {
    json meta = json::object();
    const auto& m = node.metadata;
    auto put = [&](const char* key, const std::optional<std::string>& v) {
        if (v) meta[key] = *v;
    };
    put("mac", m.mac);
    put("ip", m.ip);
    put("model", m.model);
    put("port", m.port);
    put("oui_vendor", m.oui_vendor);
    put("parent_switch", m.parent_switch);
    put("campus", m.campus);
    put("status", m.status);
    if (m.stream_count) meta["stream_count"] = *m.stream_count;
    json children = json::array();
    for (const auto& c : node.children) children.push_back(to_json(c));
    return {{"id", node.id},
            {"kind", to_string(node.kind)},
            {"label", node.label},
            {"metadata", meta},
            {"children", children}};
}

TopologyNode tree_from_json(const json& j) {
    try {
        TopologyNode n;
        n.id = j.at("id").get<std::string>();
        auto kind = node_kind_from_string(j.at("kind").get<std::string>());
        if (!kind) throw Error("unknown node kind in tree: " + j.at("kind").get<std::string>());
        n.kind = *kind;
        n.label = j.at("label").get<std::string>();
        const auto& meta = j.at("metadata");
        auto get = [&](const char* key, std::optional<std::string>& out) {
            if (meta.contains(key)) out = meta.at(key).get<std::string>();
        };
        get("mac", n.metadata.mac);
        get("ip", n.metadata.ip);
        get("model", n.metadata.model);
        get("port", n.metadata.port);
        get("oui_vendor", n.metadata.oui_vendor);
        get("parent_switch", n.metadata.parent_switch);
        get("campus", n.metadata.campus);
        get("status", n.metadata.status);
        if (meta.contains("stream_count")) n.metadata.stream_count = meta.at("stream_count").get<int>();
        for (const auto& c : j.at("children")) n.children.push_back(tree_from_json(c));
        return n;
    } catch (const json::exception& e) {
        throw Error(std::string("tree JSON does not match schema: ") + e.what());
    }
}

std::string serialize_tree(const TopologyNode& root) { return canonical_json(to_json(root)); }

std::string floor_group_id(std::string_view switch_id, std::string_view floor_key) {
    return std::string(switch_id) + "." + std::string(floor_key);
}

std::string mini_switch_id(std::string_view floor_group, std::string_view port) {
    return std::string(floor_group) + ".mini-" + std::string(port);
}

std::string quarantine_id(std::string_view switch_id) { return std::string(switch_id) + ".others"; }

std::string unresolved_id(const MacAddress& mac) { return "mac-" + mac.bare(); }

namespace {

TopologyNode& child_with(TopologyNode& parent, const std::string& id, NodeKind kind, const std::string& label) {
    for (auto& c : parent.children)
        if (c.id == id) return c;
    TopologyNode n;
    n.id = id;
    n.kind = kind;
    n.label = label;
    parent.children.push_back(std::move(n));
    return parent.children.back();
}

std::string unique_id(std::set<std::string>& used, std::string id, const MacAddress& mac) {
    if (!used.insert(id).second) {
        id += "@" + mac.bare();
        used.insert(id);
    }
    return id;
}

}  // namespace

TopologyNode build_switch_tree(const SwitchClassification& classification, NodeKind root_kind,
                               const HostnameGrammar& grammar) {
    const auto& sw = classification.switch_id;
    TopologyNode root;
    root.id = sw;
    root.kind = root_kind;
    root.label = sw;
    if (auto h = grammar.parse(sw)) root.metadata.campus = h->campus;

    std::set<std::string> used{sw};
    for (const auto& r : classification.resolutions) {
        if (!is_resolved(r.status)) {
            auto& others = child_with(root, quarantine_id(sw), NodeKind::quarantine_block, "others");
            TopologyNode leaf;
            leaf.id = unique_id(used, unresolved_id(r.mac), r.mac);
            leaf.kind = NodeKind::unresolved_mac;
            leaf.label = r.mac.str();
            leaf.metadata.mac = r.mac.str();
            leaf.metadata.port = r.port;
            leaf.metadata.oui_vendor = r.oui ? r.oui->vendor : "unknown";
            leaf.metadata.parent_switch = sw;
            leaf.metadata.status = std::string(to_string(r.status));
            others.children.push_back(std::move(leaf));
            continue;
        }
        const auto& id = *r.identity;
        TopologyNode leaf;
        leaf.id = unique_id(used, id.hostname, r.mac);
        leaf.label = id.hostname;
        leaf.metadata.mac = r.mac.str();
        leaf.metadata.ip = id.ip.str();
        leaf.metadata.model = id.model;
        leaf.metadata.port = r.port;
        leaf.metadata.parent_switch = sw;
        leaf.metadata.status = std::string(to_string(r.status));
        if (r.oui) leaf.metadata.oui_vendor = r.oui->vendor;
        if (id.location) leaf.metadata.campus = id.location->campus;

        if (!id.location || id.location->role == Role::srv || id.location->role == Role::sw) {
            leaf.kind = id.location && id.location->role == Role::srv ? NodeKind::server : NodeKind::camera;
            root.children.push_back(std::move(leaf));
            continue;
        }
        leaf.kind = NodeKind::camera;
        auto key = id.location->floor_key();
        auto& group = child_with(root, floor_group_id(sw, key), NodeKind::floor_group, key);
        group.metadata.campus = id.location->campus;
        const auto* pc = classification.find_port(r.port);
        if (pc && pc->kind == PortKind::MINI_SWITCH_CASCADE) {
            auto& mini = child_with(group, mini_switch_id(group.id, r.port), NodeKind::mini_switch, "mini-" + r.port);
            mini.metadata.port = r.port;
            mini.metadata.parent_switch = sw;
            mini.children.push_back(std::move(leaf));
        } else {
            group.children.push_back(std::move(leaf));
        }
    }
    root.normalize();
    return root;
}

ServerMetadata parse_server_metadata(std::string_view yaml_text) {
    ServerMetadata out;
    try {
        auto root = YAML::Load(std::string(yaml_text));
        auto servers = root["servers"];
        if (!servers || servers.IsNull()) return out;
        if (!servers.IsMap()) throw ConfigError("server metadata: 'servers' must be a mapping");
        for (const auto& kv : servers) {
            ServerInfo info;
            const auto& v = kv.second;
            if (v["stream_count"]) info.stream_count = v["stream_count"].as<int>();
            if (v["ip"]) info.ip = v["ip"].as<std::string>();
            if (v["model"]) info.model = v["model"].as<std::string>();
            out.emplace(kv.first.as<std::string>(), std::move(info));
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("server metadata: ") + e.what());
    }
    return out;
}

ServerMetadata load_server_metadata(const std::filesystem::path& path) {
    return parse_server_metadata(read_file(path));
}

std::string render_server_metadata(const ServerMetadata& meta) {
    YAML::Emitter out;
    out << YAML::BeginMap << YAML::Key << "servers" << YAML::Value << YAML::BeginMap;
    for (const auto& [id, info] : meta) {
        out << YAML::Key << id << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "stream_count" << YAML::Value << info.stream_count;
        if (info.ip) out << YAML::Key << "ip" << YAML::Value << *info.ip;
        if (info.model) out << YAML::Key << "model" << YAML::Value << *info.model;
        out << YAML::EndMap;
    }
    out << YAML::EndMap << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

TopologyNode build_server_graph(const TopoMap& topo, const ServerMetadata& servers) {
    TopologyNode core;
    core.id = "core";
    core.kind = NodeKind::core;
    core.label = "core";
    for (const auto& campus : topo.campuses()) {
        TopologyNode cn;
        cn.id = "campus-" + campus.campus_id;
        cn.kind = NodeKind::campus;
        cn.label = campus.campus_id;
        cn.metadata.campus = campus.campus_id;
        for (const auto& dist : campus.distribution_switches) {
            TopologyNode dn;
            dn.id = dist.switch_id;
            dn.kind = NodeKind::distribution_switch;
            dn.label = dist.switch_id;
            dn.metadata.campus = campus.campus_id;
            for (const auto& access : dist.access_switches) {
                TopologyNode an;
                an.id = access;
                an.kind = NodeKind::access_switch;
                an.label = access;
                an.metadata.campus = campus.campus_id;
                an.metadata.parent_switch = dist.switch_id;
                dn.children.push_back(std::move(an));
            }
            cn.children.push_back(std::move(dn));
        }
        core.children.push_back(std::move(cn));
    }
    std::map<std::string, std::vector<TopologyNode>> attached;
    std::set<std::string> known;
    for (const auto& cn : core.children)
        for (const auto& dn : cn.children) {
            known.insert(dn.id);
            for (const auto& an : dn.children) known.insert(an.id);
        }
    for (const auto& s : topo.servers()) {
        if (!known.count(s.parent_switch_id)) throw OrphanServer(s.server_id);
        TopologyNode sn;
        sn.id = s.server_id;
        sn.kind = NodeKind::server;
        sn.label = s.server_id;
        sn.metadata.campus = s.campus_id;
        sn.metadata.parent_switch = s.parent_switch_id;
        auto info = servers.find(s.server_id);
        sn.metadata.stream_count = info == servers.end() ? 0 : info->second.stream_count;
        if (info != servers.end()) {
            sn.metadata.ip = info->second.ip;
            sn.metadata.model = info->second.model;
        }
        attached[s.parent_switch_id].push_back(std::move(sn));
    }
    auto take = [&](TopologyNode& sw) {
        auto it = attached.find(sw.id);
        if (it == attached.end()) return;
        for (auto& sn : it->second) sw.children.push_back(std::move(sn));
    };
    // Access switches first: appending to a distribution switch moves them.
    for (auto& cn : core.children)
        for (auto& dn : cn.children) {
            for (auto& an : dn.children) take(an);
            take(dn);
        }
    core.normalize();
    return core;
}

std::string sanitize_name(std::string_view id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_' || c == '@';
        out += ok ? c : '_';
    }
    if (out.empty() || out == "." || out == "..") out = "_" + out;
    return out;
}

std::filesystem::path switch_tree_dir(const std::filesystem::path& state_dir, std::string_view campus,
                                      std::string_view switch_id) {
    return state_dir / "topology" / sanitize_name(campus) / sanitize_name(switch_id);
}

std::filesystem::path server_tree_path(const std::filesystem::path& state_dir) {
    return state_dir / "topology" / "_srv" / "_tree.json";
}

namespace {

bool is_group(const TopologyNode& n) {
    return !n.children.empty() || n.kind == NodeKind::floor_group || n.kind == NodeKind::mini_switch ||
           n.kind == NodeKind::quarantine_block || n.kind == NodeKind::campus;
}

std::string dir_name(const TopologyNode& n) {
    switch (n.kind) {
        case NodeKind::floor_group:
        case NodeKind::mini_switch:
        case NodeKind::quarantine_block:
        case NodeKind::campus: return sanitize_name(n.label);
        default: return sanitize_name(n.id);
    }
}

void write_children(const TopologyNode& node, const std::filesystem::path& dir,
                    std::set<std::filesystem::path>& expected, PersistStats& stats) {
    for (const auto& c : node.children) {
        if (is_group(c)) {
            write_children(c, dir / dir_name(c), expected, stats);
            continue;
        }
        auto path = dir / (sanitize_name(c.id) + ".json");
        expected.insert(path);
        if (auto n = write_if_changed(path, canonical_json(to_json(c)))) {
            ++stats.files_written;
            stats.bytes_written += n;
        }
    }
}

void prune(const std::filesystem::path& dir, const std::set<std::filesystem::path>& expected, PersistStats& stats) {
    if (!std::filesystem::is_directory(dir)) return;
    std::vector<std::filesystem::path> files, dirs;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_directory()) dirs.push_back(e.path());
        else if (!expected.count(e.path())) files.push_back(e.path());
    }
    for (const auto& f : files) {
        std::filesystem::remove(f);
        ++stats.files_removed;
    }
    std::sort(dirs.rbegin(), dirs.rend());
    for (const auto& d : dirs)
        if (std::filesystem::is_empty(d)) std::filesystem::remove(d);
}

PersistStats persist_at(const TopologyNode& root, const std::filesystem::path& dir,
                        const std::filesystem::path& tree_file) {
    PersistStats stats;
    std::set<std::filesystem::path> expected{tree_file};
    if (auto n = write_if_changed(tree_file, serialize_tree(root))) {
        ++stats.files_written;
        stats.bytes_written += n;
    }
    write_children(root, dir, expected, stats);
    prune(dir, expected, stats);
    return stats;
}

}  // namespace

PersistStats persist_tree(const TopologyNode& root, std::string_view campus, const std::filesystem::path& state_dir) {
    auto dir = switch_tree_dir(state_dir, campus, root.id);
    return persist_at(root, dir, dir / "_tree.json");
}

PersistStats persist_server_graph(const TopologyNode& root, const std::filesystem::path& state_dir) {
    auto path = server_tree_path(state_dir);
    return persist_at(root, path.parent_path(), path);
}

TopologyNode load_tree(const std::filesystem::path& tree_json) {
    json j;
    try {
        j = json::parse(read_file(tree_json));
    } catch (const json::parse_error& e) {
        throw Error(tree_json.string() + ": " + e.what());
    }
    return tree_from_json(j);
}

}  // namespace body
