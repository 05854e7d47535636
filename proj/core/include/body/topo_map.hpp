#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace body {

// Position in the spine-leaf hierarchy; a lower value is closer to the core.
enum class Tier { core = 0, distribution = 1, access = 2 };

struct DistributionSwitch {
    std::string switch_id;
    std::vector<std::string> access_switches;
};

struct Campus {
    std::string campus_id;
    std::vector<DistributionSwitch> distribution_switches;
};

struct ServerPlacement {
    std::string server_id;
    std::string campus_id;
    std::string parent_switch_id;
};

struct SwitchPlacement {
    std::string campus_id;
    Tier tier = Tier::access;
    std::optional<std::string> parent;  // distribution switch, for access switches
};

// Campus-to-switch hierarchy. Validated on construction: switch ids are
// globally unique and every server hangs off a known switch.
class TopoMap {
public:
    TopoMap() = default;
    TopoMap(std::vector<Campus> campuses, std::vector<ServerPlacement> servers,
            std::vector<std::string> auxiliary = {});

    const std::vector<Campus>& campuses() const noexcept { return campuses_; }
    const std::vector<ServerPlacement>& servers() const noexcept { return servers_; }
    // Campus ids reported together as auxiliary units.
    const std::vector<std::string>& auxiliary() const noexcept { return auxiliary_; }
    bool is_auxiliary(std::string_view campus_id) const;

    const SwitchPlacement* find_switch(std::string_view switch_id) const;
    std::optional<Tier> tier_of(std::string_view switch_id) const;
    std::size_t switch_count() const noexcept { return switches_.size(); }
    // Every switch id, sorted.
    std::vector<std::string> switch_ids() const;

private:
    std::vector<Campus> campuses_;
    std::vector<ServerPlacement> servers_;
    std::vector<std::string> auxiliary_;
    std::map<std::string, SwitchPlacement, std::less<>> switches_;
};

TopoMap parse_topo_map(std::string_view yaml_text);
TopoMap load_topo_map(const std::filesystem::path& path);
std::string render_topo_map(const TopoMap& map);

}  // namespace body
