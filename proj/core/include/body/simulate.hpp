#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "body/classify.hpp"
#include "body/collect.hpp"
#include "body/dialect.hpp"
#include "body/health.hpp"
#include "body/oui.hpp"
#include "body/profile.hpp"
#include "body/registry.hpp"
#include "body/topo_map.hpp"
#include "body/topology.hpp"

namespace body {

struct IntRange {
    int min = 0;
    int max = 0;
};

// Endpoints behind one unmanaged PoE hub.
struct CascadeLayout {
    int cameras = 0;       // registered
    int unregistered = 0;  // camera-vendor MACs missing from the registry
};

struct AccessLayout {
    std::string id;
    Dialect dialect = Dialect::dialect_a;
    int direct = 0;         // registered cameras on single-MAC PoE ports
    std::vector<CascadeLayout> cascades;
    int unregistered = 0;   // unregistered cameras on single-MAC PoE ports
    int stale = 0;          // registry records whose device is no longer visible
    int unknown = 0;        // unknown-vendor MACs on non-PoE ports
    int servers = 0;        // registered servers on non-PoE ports
    bool lldp = true;
    int floors = 3;
};

struct DistributionLayout {
    std::string id;
    Dialect dialect = Dialect::dialect_a;
    int servers = 0;  // monitoring servers on the server VLAN
    std::vector<AccessLayout> access;
};

struct CampusLayout {
    std::string id;
    std::vector<DistributionLayout> distribution;
};

struct Layout {
    std::vector<CampusLayout> campuses;
    std::vector<std::string> auxiliary;
};

// Either an explicit layout or ranges the generator samples a layout from.
struct CampusSpec {
    std::uint64_t seed = 1;
    int overlay_vlan = 10;
    int server_vlan = 20;
    std::string collected_at = "2025-06-02T06:00:00Z";

    int campuses = 1;
    IntRange switches_per_campus{1, 1};
    IntRange cameras_per_switch{1, 1};
    double cascade_fraction = 0.0;
    double unregistered_fraction = 0.0;
    std::array<double, 3> dialect_mix{1.0, 1.0, 1.0};
    double lldp_fraction = 1.0;
    IntRange servers_per_campus{1, 1};
    double unknown_fraction = 0.0;
    double access_server_fraction = 0.0;

    std::optional<Layout> layout;
};

CampusSpec parse_campus_spec(std::string_view yaml_text);
CampusSpec load_campus_spec(const std::filesystem::path& path);

// Deterministic layout for a campus spec (the explicit one, or one sampled from
// the ranges with its seed).
Layout resolve_layout(const CampusSpec& spec);

enum class EndpointKind { camera_direct, camera_cascade, server, unregistered, unknown, stale };
std::string_view to_string(EndpointKind k);
std::optional<EndpointKind> endpoint_kind_from_string(std::string_view s);

struct TruthEndpoint {
    MacAddress mac;
    std::string switch_id;
    std::string port;
    EndpointKind kind = EndpointKind::camera_direct;
    std::string hostname;   // empty when unregistered
    std::string floor_key;  // empty when the endpoint is not floor-grouped
    bool registered = false;
    bool visible = true;

    bool operator==(const TruthEndpoint&) const = default;
};

struct GroundTruth {
    std::vector<TruthEndpoint> endpoints;  // ordered by MAC
    std::map<std::string, std::string> uplinks;
    std::vector<std::string> switches;

    bool operator==(const GroundTruth&) const = default;
};

nlohmann::json to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& j);

struct SimSwitch {
    SwitchProfile profile;
    bool lldp = true;  // false: the switch does not run LLDP itself
    MacAddress mgmt_mac;
};

struct World {
    TopoMap topo;
    std::vector<AssetRecord> registry;  // ordered by MAC
    OuiDatabase oui;
    WattageTable wattage;
    ServerMetadata servers;
    std::vector<SimSwitch> switches;  // ordered by switch id
    GroundTruth truth;
    VerdictFeed camera_verdicts;
    VerdictFeed infra_verdicts;
    int overlay_vlan = 10;
};

World generate_campus(const CampusSpec& spec);

// Renders a profile as the four transcripts of its dialect.
CliBundle emit_cli_bundle(const SwitchProfile& profile, bool lldp_enabled = true);

std::string render_classify_config(const World& world);

// Writes the corpus: registry sources, topo_map.yml, tables, feeds,
// ground_truth.json and one transcript directory per switch.
void write_world(const World& world, const std::filesystem::path& out_dir);

struct Mismatch {
    MacAddress mac;
    std::string expected;
    std::string got;

    bool operator==(const Mismatch&) const = default;
};

struct TopologyDiff {
    std::size_t registered = 0;          // registered endpoints in the truth
    std::size_t registered_visible = 0;  // of which visible on some switch
    std::size_t correct = 0;             // resolved and placed as in the truth
    double accuracy = 0.0;               // correct / registered
    double visible_accuracy = 0.0;       // correct / registered_visible
    std::vector<Mismatch> mismatches;
    std::vector<MacAddress> missing_hil;  // unregistered truth MACs absent from every "others" block
};

// Placement of one endpoint in a switch tree: "<switch>/<floor_key>[/mini-<port>]",
// "<switch>/-" for root-level nodes and "<switch>/others" for HIL nodes.
std::map<MacAddress, std::string> endpoint_placements(const TopologyNode& switch_tree);
std::string expected_placement(const TruthEndpoint& e);

// Throws SwitchSetMismatch when the trees and the truth cover different switches.
TopologyDiff diff_topology(const std::map<std::string, TopologyNode>& trees, const GroundTruth& truth);

}  // namespace body
