#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "body/hostname.hpp"
#include "body/oui.hpp"
#include "body/profile.hpp"
#include "body/registry.hpp"
#include "body/topo_map.hpp"

namespace body {

enum class PortKind { UPLINK, MANAGED_CASCADE, MINI_SWITCH_CASCADE, CAMERA, SERVER, EMPTY, UNKNOWN };
enum class Evidence { lldp_name, mac_density, poe_state, registry_match, oui, wattage, operator_confirmed };
enum class ResolutionStatus { RESOLVED_DIRECT_POE, RESOLVED_NOT_POE, UNREGISTERED_HIL, UNKNOWN_HIL };
enum class WattageCheck { confirmed, inconclusive, contradicted, not_applicable };
enum class HilReason { unregistered, unknown_oui, ambiguous_uplink };

std::string_view to_string(PortKind k);
std::string_view to_string(Evidence e);
std::string_view to_string(ResolutionStatus s);
std::string_view to_string(WattageCheck w);
std::string_view to_string(HilReason r);
std::optional<HilReason> hil_reason_from_string(std::string_view s);

inline bool is_resolved(ResolutionStatus s) {
    return s == ResolutionStatus::RESOLVED_DIRECT_POE || s == ResolutionStatus::RESOLVED_NOT_POE;
}

// Regular expressions searched within LLDP neighbor names.
class NamePatterns {
public:
    NamePatterns() = default;
    explicit NamePatterns(std::vector<std::string> patterns);

    bool matches(std::string_view name) const;
    const std::vector<std::string>& patterns() const noexcept { return patterns_; }

private:
    std::vector<std::string> patterns_;
    std::vector<std::regex> compiled_;
};

struct ClassifyConfig {
    std::optional<int> overlay_vlan;  // empty: every VLAN counts
    NamePatterns uplink_names = NamePatterns(std::vector<std::string>{"(^|-)core(-|$)"});
    NamePatterns cascade_names;
    OuiDatabase oui;
    WattageTable wattage;
    HostnameGrammar grammar;
    // Uplinks confirmed by an operator during onboarding, keyed by switch id.
    std::map<std::string, std::string, std::less<>> uplink_overrides;
};

// Reads classify_config.yml. Relative table paths resolve against the
// config file's directory.
ClassifyConfig load_classify_config(const std::filesystem::path& path);

struct UplinkDecision {
    std::string port;
    Evidence evidence = Evidence::mac_density;
};

struct PortClassification {
    std::string port;
    PortKind kind = PortKind::UNKNOWN;
    std::vector<Evidence> evidence;
    std::size_t mac_count = 0;
};

struct EndpointResolution {
    MacAddress mac;
    std::string port;
    ResolutionStatus status = ResolutionStatus::UNKNOWN_HIL;
    std::optional<AssetRecord> identity;
    std::optional<OuiEntry> oui;
    std::optional<int> floor;
    WattageCheck wattage_check = WattageCheck::not_applicable;
    std::vector<Evidence> evidence;
};

struct HilCandidate {
    std::optional<MacAddress> mac;  // empty for ambiguous_uplink work items
    std::string oui_vendor = "unknown";
    std::string oui_prefix;
    std::string port;
    std::string parent_switch;
    std::optional<int> floor_hint;
    HilReason reason = HilReason::unregistered;
    std::vector<std::string> also_seen;  // other switches exposing the same MAC

    bool operator==(const HilCandidate&) const = default;
};

struct SwitchClassification {
    std::string switch_id;
    std::optional<UplinkDecision> uplink;
    std::vector<std::string> ambiguous_ports;  // non-empty iff uplink could not be decided
    std::vector<PortClassification> classifications;
    std::vector<EndpointResolution> resolutions;
    std::vector<HilCandidate> hil_candidates;

    bool uplink_ambiguous() const noexcept { return !uplink.has_value(); }
    const PortClassification* find_port(std::string_view port) const;
};

// Distinct MACs per port, restricted to the overlay VLAN when configured.
std::map<std::string, std::vector<MacAddress>> macs_by_port(const SwitchProfile& profile,
                                                            std::optional<int> overlay_vlan);

// LLDP name rule first, MAC-density fallback second. Throws AmbiguousUplink
// when the fallback ties or LLDP names more than one uplink.
UplinkDecision identify_uplink(const SwitchProfile& profile, const TopoMap& topo, const ClassifyConfig& config,
                               bool ignore_lldp = false);

std::vector<PortClassification> classify_ports(const SwitchProfile& profile, const std::string& uplink_port,
                                               const Registry& registry, const TopoMap& topo,
                                               const ClassifyConfig& config);

EndpointResolution resolve_endpoint(const MacAddress& mac, const PortClassification& port_class,
                                    const Registry& registry, const OuiDatabase& oui_db,
                                    const WattageTable& wattage_profiles, const PoeState& port_poe);

SwitchClassification classify_switch(const SwitchProfile& profile, const Registry& registry, const TopoMap& topo,
                                     const ClassifyConfig& config);

}  // namespace body
