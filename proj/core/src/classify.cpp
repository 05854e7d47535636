#include "body/classify.hpp"

#include <algorithm>
#include <set>

#include <yaml-cpp/yaml.h>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

std::string_view to_string(PortKind k) {
    switch (k) {
        case PortKind::UPLINK: return "UPLINK";
        case PortKind::MANAGED_CASCADE: return "MANAGED_CASCADE";
        case PortKind::MINI_SWITCH_CASCADE: return "MINI_SWITCH_CASCADE";
        case PortKind::CAMERA: return "CAMERA";
        case PortKind::SERVER: return "SERVER";
        case PortKind::EMPTY: return "EMPTY";
        case PortKind::UNKNOWN: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::string_view to_string(Evidence e) {
    switch (e) {
        case Evidence::lldp_name: return "lldp_name";
        case Evidence::mac_density: return "mac_density";
        case Evidence::poe_state: return "poe_state";
        case Evidence::registry_match: return "registry_match";
        case Evidence::oui: return "oui";
        case Evidence::wattage: return "wattage";
        case Evidence::operator_confirmed: return "operator_confirmed";
    }
    return "mac_density";
}

std::string_view to_string(ResolutionStatus s) {
    switch (s) {
        case ResolutionStatus::RESOLVED_DIRECT_POE: return "RESOLVED_DIRECT_POE";
        case ResolutionStatus::RESOLVED_NOT_POE: return "RESOLVED_NOT_POE";
        case ResolutionStatus::UNREGISTERED_HIL: return "UNREGISTERED_HIL";
        case ResolutionStatus::UNKNOWN_HIL: return "UNKNOWN_HIL";
    }
    return "UNKNOWN_HIL";
}

std::string_view to_string(WattageCheck w) {
    switch (w) {
        case WattageCheck::confirmed: return "confirmed";
        case WattageCheck::inconclusive: return "inconclusive";
        case WattageCheck::contradicted: return "contradicted";
        case WattageCheck::not_applicable: return "not_applicable";
    }
    return "not_applicable";
}

std::string_view to_string(HilReason r) {
    switch (r) {
        case HilReason::unregistered: return "unregistered";
        case HilReason::unknown_oui: return "unknown_oui";
        case HilReason::ambiguous_uplink: return "ambiguous_uplink";
    }
    return "unregistered";
}

std::optional<HilReason> hil_reason_from_string(std::string_view s) {
    for (auto r : {HilReason::unregistered, HilReason::unknown_oui, HilReason::ambiguous_uplink})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

NamePatterns::NamePatterns(std::vector<std::string> patterns) : patterns_(std::move(patterns)) {
    for (const auto& p : patterns_) {
        try {
            compiled_.emplace_back(p, std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& e) {
            throw ConfigError("invalid name pattern '" + p + "': " + e.what());
        }
    }
}

bool NamePatterns::matches(std::string_view name) const {
    return std::any_of(compiled_.begin(), compiled_.end(),
                       [&](const std::regex& re) { return std::regex_search(name.begin(), name.end(), re); });
}

namespace {

std::vector<std::string> string_list(const YAML::Node& node, const char* key) {
    std::vector<std::string> out;
    if (!node.IsSequence()) throw ConfigError(std::string(key) + " must be a list");
    for (const auto& item : node) out.push_back(item.as<std::string>());
    return out;
}

std::filesystem::path resolve_against(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

ClassifyConfig load_classify_config(const std::filesystem::path& path) {
    YAML::Node root;
    try {
        root = YAML::Load(read_file(path));
    } catch (const YAML::Exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    if (!root.IsMap()) throw ConfigError(path.string() + ": expected a mapping");
    auto base = path.parent_path();
    ClassifyConfig config;
    try {
        if (auto v = root["overlay_vlan"]; v && !v.IsNull()) {
            auto text = v.as<std::string>();
            if (text != "all") config.overlay_vlan = v.as<int>();
        }
        if (auto v = root["uplink_name_patterns"]) config.uplink_names = NamePatterns(string_list(v, "uplink_name_patterns"));
        if (auto v = root["cascade_name_patterns"])
            config.cascade_names = NamePatterns(string_list(v, "cascade_name_patterns"));
        if (auto v = root["oui_csv"]) config.oui = OuiDatabase::load(resolve_against(base, v.as<std::string>()));
        if (auto v = root["wattage_csv"])
            config.wattage = WattageTable::load(resolve_against(base, v.as<std::string>()));
        if (auto v = root["hostname_pattern"])
            config.grammar = HostnameGrammar::from_file(resolve_against(base, v.as<std::string>()));
    } catch (const YAML::Exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config;
}

const PortClassification* SwitchClassification::find_port(std::string_view port) const {
    for (const auto& c : classifications)
        if (c.port == port) return &c;
    return nullptr;
}

std::map<std::string, std::vector<MacAddress>> macs_by_port(const SwitchProfile& profile,
                                                            std::optional<int> overlay_vlan) {
    std::map<std::string, std::set<MacAddress>> sets;
    for (const auto& e : profile.mac_table)
        if (!overlay_vlan || e.vlan == *overlay_vlan) sets[e.port].insert(e.mac);
    std::map<std::string, std::vector<MacAddress>> out;
    for (auto& [port, macs] : sets) out.emplace(port, std::vector<MacAddress>(macs.begin(), macs.end()));
    return out;
}

namespace {

Tier own_tier(const SwitchProfile& profile, const TopoMap& topo) {
    return topo.tier_of(profile.switch_id).value_or(Tier::access);
}

// Neighbor is a managed switch named by the grammar whose tier compares
// against ours as requested.
bool neighbor_switch_tier(const std::string& name, const TopoMap& topo, const ClassifyConfig& config, Tier own,
                          bool upward) {
    auto h = config.grammar.parse(name);
    if (!h || h->role != Role::sw) return false;
    auto tier = topo.tier_of(name);
    if (!tier) return false;
    return upward ? *tier < own : *tier > own;
}

}  // namespace

UplinkDecision identify_uplink(const SwitchProfile& profile, const TopoMap& topo, const ClassifyConfig& config,
                               bool ignore_lldp) {
    if (!ignore_lldp) {
        auto own = own_tier(profile, topo);
        std::set<std::string> ports;
        for (const auto& n : profile.lldp_neighbors)
            if (config.uplink_names.matches(n.neighbor_name) ||
                neighbor_switch_tier(n.neighbor_name, topo, config, own, true))
                ports.insert(n.local_port);
        if (ports.size() == 1) return {*ports.begin(), Evidence::lldp_name};
        if (ports.size() > 1) throw AmbiguousUplink(profile.switch_id, {ports.begin(), ports.end()});
    }
    auto by_port = macs_by_port(profile, config.overlay_vlan);
    std::size_t best = 0;
    std::vector<std::string> tied;
    for (const auto& [port, macs] : by_port) {
        if (macs.size() > best) {
            best = macs.size();
            tied = {port};
        } else if (macs.size() == best) {
            tied.push_back(port);
        }
    }
    if (best == 0 || tied.size() != 1) {
        if (best == 0) tied.clear();
        std::sort(tied.begin(), tied.end(), [](const auto& a, const auto& b) { return port_less(a, b); });
        throw AmbiguousUplink(profile.switch_id, std::move(tied));
    }
    return {tied.front(), Evidence::mac_density};
}

std::vector<PortClassification> classify_ports(const SwitchProfile& profile, const std::string& uplink_port,
                                               const Registry& registry, const TopoMap& topo,
                                               const ClassifyConfig& config) {
    auto by_port = macs_by_port(profile, config.overlay_vlan);
    auto own = own_tier(profile, topo);
    std::vector<PortClassification> out;
    out.reserve(profile.interfaces.size());
    for (const auto& iface : profile.interfaces) {
        PortClassification c;
        c.port = iface.port;
        auto it = by_port.find(iface.port);
        const std::vector<MacAddress> none;
        const auto& macs = it == by_port.end() ? none : it->second;
        c.mac_count = macs.size();

        bool managed = false;
        for (const auto& n : profile.lldp_neighbors)
            if (n.local_port == iface.port && (config.cascade_names.matches(n.neighbor_name) ||
                                               neighbor_switch_tier(n.neighbor_name, topo, config, own, false)))
                managed = true;

        bool poe = iface.poe.delivering;
        if (iface.port == uplink_port) {
            c.kind = PortKind::UPLINK;
        } else if (managed) {
            c.kind = PortKind::MANAGED_CASCADE;
            c.evidence = {Evidence::lldp_name};
        } else if (poe && c.mac_count > 1) {
            c.kind = PortKind::MINI_SWITCH_CASCADE;
            c.evidence = {Evidence::poe_state, Evidence::mac_density};
        } else if (poe && c.mac_count == 1) {
            c.kind = PortKind::CAMERA;
            c.evidence = {Evidence::poe_state, Evidence::mac_density};
        } else if (!poe && c.mac_count == 1) {
            const auto* rec = registry.lookup(macs.front());
            const auto* oui = config.oui.lookup(macs.front());
            if (rec && rec->location && rec->location->role == Role::srv) {
                c.kind = PortKind::SERVER;
                c.evidence = {Evidence::mac_density, Evidence::registry_match};
            } else if (oui && oui->device_class == DeviceClass::server) {
                c.kind = PortKind::SERVER;
                c.evidence = {Evidence::mac_density, Evidence::oui};
            } else {
                c.kind = PortKind::UNKNOWN;
            }
        } else if (!iface.link_up && c.mac_count == 0) {
            c.kind = PortKind::EMPTY;
        } else {
            c.kind = PortKind::UNKNOWN;
        }
        out.push_back(std::move(c));
    }
    return out;
}

EndpointResolution resolve_endpoint(const MacAddress& mac, const PortClassification& port_class,
                                    const Registry& registry, const OuiDatabase& oui_db,
                                    const WattageTable& wattage_profiles, const PoeState& port_poe) {
    EndpointResolution r;
    r.mac = mac;
    r.port = port_class.port;
    if (const auto* oui = oui_db.lookup(mac)) r.oui = *oui;

    if (const auto* rec = registry.lookup(mac)) {
        r.identity = *rec;
        r.status = port_class.kind == PortKind::CAMERA ? ResolutionStatus::RESOLVED_DIRECT_POE
                                                       : ResolutionStatus::RESOLVED_NOT_POE;
        if (rec->location) r.floor = rec->location->floor;
        r.evidence = {Evidence::registry_match};
        if (port_class.kind == PortKind::CAMERA) {
            const WattageRange* range = rec->model ? wattage_profiles.find(*rec->model) : nullptr;
            if (!range || !port_poe.delivering) {
                r.wattage_check = WattageCheck::inconclusive;
            } else if (range->contains(port_poe.power_watts)) {
                r.wattage_check = WattageCheck::confirmed;
                r.evidence.push_back(Evidence::wattage);
            } else {
                r.wattage_check = WattageCheck::contradicted;
            }
        }
        return r;
    }
    if (r.oui) {
        r.status = ResolutionStatus::UNREGISTERED_HIL;
        r.evidence = {Evidence::oui};
    } else {
        r.status = ResolutionStatus::UNKNOWN_HIL;
    }
    return r;
}

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

bool hosts_endpoints(PortKind k) {
    return k != PortKind::UPLINK && k != PortKind::MANAGED_CASCADE && k != PortKind::EMPTY;
}

}  // namespace

SwitchClassification classify_switch(const SwitchProfile& profile, const Registry& registry, const TopoMap& topo,
                                     const ClassifyConfig& config) {
    SwitchClassification out;
    out.switch_id = profile.switch_id;
    std::optional<int> floor_hint;
    if (auto h = config.grammar.parse(profile.switch_id)) floor_hint = h->floor;

    auto ov = config.uplink_overrides.find(profile.switch_id);
    if (ov != config.uplink_overrides.end() && profile.find_interface(ov->second)) {
        out.uplink = UplinkDecision{ov->second, Evidence::operator_confirmed};
    } else {
        try {
            out.uplink = identify_uplink(profile, topo, config);
        } catch (const AmbiguousUplink& e) {
            out.ambiguous_ports = e.tied_ports();
            HilCandidate c;
            c.port = join(e.tied_ports(), ",");
            c.parent_switch = profile.switch_id;
            c.floor_hint = floor_hint;
            c.reason = HilReason::ambiguous_uplink;
            c.oui_vendor = "unknown";
            out.hil_candidates.push_back(std::move(c));
            return out;
        }
    }

    out.classifications = classify_ports(profile, out.uplink->port, registry, topo, config);
    for (auto& c : out.classifications)
        if (c.kind == PortKind::UPLINK) c.evidence = {out.uplink->evidence};

    auto by_port = macs_by_port(profile, config.overlay_vlan);
    std::set<MacAddress> seen;
    for (const auto& c : out.classifications) {
        if (!hosts_endpoints(c.kind)) continue;
        auto it = by_port.find(c.port);
        if (it == by_port.end()) continue;
        const auto* iface = profile.find_interface(c.port);
        for (const auto& mac : it->second) {
            if (!seen.insert(mac).second) continue;
            auto r = resolve_endpoint(mac, c, registry, config.oui, config.wattage, iface->poe);
            if (!is_resolved(r.status)) {
                HilCandidate h;
                h.mac = mac;
                h.oui_vendor = r.oui ? r.oui->vendor : "unknown";
                h.oui_prefix = OuiEntry{mac.oui(), {}, DeviceClass::unknown}.prefix_str();
                h.port = c.port;
                h.parent_switch = profile.switch_id;
                h.floor_hint = floor_hint;
                h.reason = r.status == ResolutionStatus::UNREGISTERED_HIL ? HilReason::unregistered
                                                                          : HilReason::unknown_oui;
                out.hil_candidates.push_back(std::move(h));
            }
            out.resolutions.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace body
