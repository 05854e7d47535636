#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "body/mac.hpp"

namespace body {

enum class Dialect { dialect_a, dialect_b, dialect_c };

std::string_view to_string(Dialect d);
// Throws UnknownDialect.
Dialect dialect_from_string(std::string_view s);

struct PoeState {
    bool capable = false;
    bool delivering = false;
    double power_watts = 0.0;
    std::optional<int> poe_class;
    bool operator==(const PoeState&) const = default;
};

struct InterfaceState {
    std::string port;
    bool link_up = false;
    int speed_mbps = 0;
    PoeState poe;
    bool operator==(const InterfaceState&) const = default;
};

struct MacTableEntry {
    std::string port;
    MacAddress mac;
    int vlan = 1;
    bool operator==(const MacTableEntry&) const = default;
};

struct LldpNeighbor {
    std::string local_port;
    std::string neighbor_name;
    std::string neighbor_port;
    bool operator==(const LldpNeighbor&) const = default;
};

// Vendor-agnostic snapshot of one switch, persisted as _profile.json.
struct SwitchProfile {
    std::string switch_id;
    Dialect vendor_dialect = Dialect::dialect_a;
    std::string model;
    std::string firmware;
    std::string serial;
    double poe_budget_watts = 0.0;
    std::vector<InterfaceState> interfaces;
    std::vector<MacTableEntry> mac_table;
    std::vector<LldpNeighbor> lldp_neighbors;
    std::string collected_at;  // ISO-8601 UTC

    const InterfaceState* find_interface(std::string_view port) const;

    // Sorts every list into canonical order and drops exact duplicate rows.
    void canonicalize();

    // Throws InvalidProfile when a structural invariant is violated.
    void validate() const;

    bool operator==(const SwitchProfile&) const = default;
};

// Comparators defining the canonical list order; ports compare naturally so
// that Gi1/0/2 sorts before Gi1/0/10.
bool port_less(std::string_view a, std::string_view b);

nlohmann::json to_json(const SwitchProfile& profile);
SwitchProfile profile_from_json(const nlohmann::json& j);
std::string serialize_profile(const SwitchProfile& profile);

// Filesystem store rooted at <state>/profiles_sw/<switch_id>/_profile.json.
class ProfileStore {
public:
    explicit ProfileStore(std::filesystem::path state_dir) : state_dir_(std::move(state_dir)) {}

    std::filesystem::path path_for(std::string_view switch_id) const;
    // Canonicalizes, validates and writes; returns the profile path.
    std::filesystem::path store(const SwitchProfile& profile) const;
    // Throws MissingProfile when the switch was never collected.
    SwitchProfile load(std::string_view switch_id) const;
    bool contains(std::string_view switch_id) const;
    // Ids of every persisted profile, sorted.
    std::vector<std::string> list() const;

    const std::filesystem::path& state_dir() const noexcept { return state_dir_; }

private:
    std::filesystem::path state_dir_;
};

}  // namespace body
