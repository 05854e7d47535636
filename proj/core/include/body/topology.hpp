#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "body/classify.hpp"
#include "body/topo_map.hpp"

namespace body {

// Declaration order is the sibling sort order.
enum class NodeKind {
    core,
    campus,
    distribution_switch,
    access_switch,
    floor_group,
    camera,
    mini_switch,
    server,
    quarantine_block,
    unresolved_mac
};

std::string_view to_string(NodeKind k);
std::optional<NodeKind> node_kind_from_string(std::string_view s);

struct NodeMetadata {
    std::optional<std::string> mac;
    std::optional<std::string> ip;
    std::optional<std::string> model;
    std::optional<std::string> port;
    std::optional<std::string> oui_vendor;
    std::optional<std::string> parent_switch;
    std::optional<std::string> campus;
    std::optional<std::string> status;
    std::optional<int> stream_count;

    bool operator==(const NodeMetadata&) const = default;
};

struct TopologyNode {
    std::string id;
    NodeKind kind = NodeKind::core;
    std::string label;
    NodeMetadata metadata;
    std::vector<TopologyNode> children;

    std::size_t size() const;  // nodes in this subtree
    const TopologyNode* find(std::string_view node_id) const;
    // Sorts children by (kind, id) throughout the subtree.
    void normalize();

    bool operator==(const TopologyNode&) const = default;
};

nlohmann::json to_json(const TopologyNode& node);
TopologyNode tree_from_json(const nlohmann::json& j);
std::string serialize_tree(const TopologyNode& root);

std::string floor_group_id(std::string_view switch_id, std::string_view floor_key);
std::string mini_switch_id(std::string_view floor_group, std::string_view port);
std::string quarantine_id(std::string_view switch_id);
std::string unresolved_id(const MacAddress& mac);

// Per-switch tree. Resolved endpoints sit under floor groups taken from
// their own hostnames, behind a mini_switch node when their port is a
// mini-switch cascade; HIL resolutions sit under the "others" block.
TopologyNode build_switch_tree(const SwitchClassification& classification, NodeKind root_kind = NodeKind::access_switch,
                               const HostnameGrammar& grammar = default_grammar());

struct ServerInfo {
    int stream_count = 0;
    std::optional<std::string> ip;
    std::optional<std::string> model;
};

using ServerMetadata = std::map<std::string, ServerInfo, std::less<>>;

// servers.yml: `servers: {<server_id>: {stream_count, ip, model}}`.
ServerMetadata parse_server_metadata(std::string_view yaml_text);
ServerMetadata load_server_metadata(const std::filesystem::path& path);
std::string render_server_metadata(const ServerMetadata& meta);

// core -> campus -> distribution_switch -> access_switch/server.
TopologyNode build_server_graph(const TopoMap& topo, const ServerMetadata& servers);

struct PersistStats {
    std::size_t files_written = 0;
    std::size_t bytes_written = 0;
    std::size_t files_removed = 0;

    PersistStats& operator+=(const PersistStats& o) {
        files_written += o.files_written;
        bytes_written += o.bytes_written;
        files_removed += o.files_removed;
        return *this;
    }
};

std::filesystem::path switch_tree_dir(const std::filesystem::path& state_dir, std::string_view campus,
                                      std::string_view switch_id);
// <state>/topology/_srv/_tree.json
std::filesystem::path server_tree_path(const std::filesystem::path& state_dir);

// Writes <state>/topology/<campus>/<switch>/_tree.json plus one directory per
// internal node and one <id>.json per leaf. Unchanged files are left alone
// and files no longer in the tree are removed.
PersistStats persist_tree(const TopologyNode& root, std::string_view campus, const std::filesystem::path& state_dir);
PersistStats persist_server_graph(const TopologyNode& root, const std::filesystem::path& state_dir);

TopologyNode load_tree(const std::filesystem::path& tree_json);

// Path-safe rendering of a node id.
std::string sanitize_name(std::string_view id);

}  // namespace body
