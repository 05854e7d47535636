#include "body/profile.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

using nlohmann::json;

std::string_view to_string(Dialect d) {
    switch (d) {
        case Dialect::dialect_a: return "dialect_a";
        case Dialect::dialect_b: return "dialect_b";
        case Dialect::dialect_c: return "dialect_c";
    }
    return "dialect_a";
}

Dialect dialect_from_string(std::string_view s) {
    if (s == "dialect_a") return Dialect::dialect_a;
    if (s == "dialect_b") return Dialect::dialect_b;
    if (s == "dialect_c") return Dialect::dialect_c;
    throw UnknownDialect(std::string(s));
}

bool port_less(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            std::size_t si = i, sj = j;
            while (i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
            while (j < b.size() && std::isdigit(static_cast<unsigned char>(b[j]))) ++j;
            auto na = a.substr(si, i - si), nb = b.substr(sj, j - sj);
            while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
            while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i, ++j;
        }
    }
    if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
    return a < b;
}

const InterfaceState* SwitchProfile::find_interface(std::string_view port) const {
    for (const auto& iface : interfaces)
        if (iface.port == port) return &iface;
    return nullptr;
}

void SwitchProfile::canonicalize() {
    std::sort(interfaces.begin(), interfaces.end(),
              [](const auto& a, const auto& b) { return port_less(a.port, b.port); });
    auto entry_less = [](const MacTableEntry& a, const MacTableEntry& b) {
        if (a.port != b.port) return port_less(a.port, b.port);
        if (a.mac != b.mac) return a.mac < b.mac;
        return a.vlan < b.vlan;
    };
    std::sort(mac_table.begin(), mac_table.end(), entry_less);
    mac_table.erase(std::unique(mac_table.begin(), mac_table.end()), mac_table.end());
    std::sort(lldp_neighbors.begin(), lldp_neighbors.end(), [](const auto& a, const auto& b) {
        if (a.local_port != b.local_port) return port_less(a.local_port, b.local_port);
        if (a.neighbor_name != b.neighbor_name) return a.neighbor_name < b.neighbor_name;
        return a.neighbor_port < b.neighbor_port;
    });
    lldp_neighbors.erase(std::unique(lldp_neighbors.begin(), lldp_neighbors.end()), lldp_neighbors.end());
}

void SwitchProfile::validate() const {
    std::set<std::string, std::less<>> ports;
    double delivered = 0.0;
    for (const auto& iface : interfaces) {
        if (!ports.insert(iface.port).second) throw InvalidProfile(switch_id + ": duplicate interface " + iface.port);
        const auto& poe = iface.poe;
        if (poe.delivering && !poe.capable)
            throw InvalidProfile(switch_id + ": " + iface.port + " delivers PoE but is not PoE capable");
        if (poe.delivering && !(poe.power_watts > 0.0))
            throw InvalidProfile(switch_id + ": " + iface.port + " delivers PoE with zero power");
        if (poe.power_watts < 0.0) throw InvalidProfile(switch_id + ": " + iface.port + " negative PoE power");
        if (poe.delivering && !iface.link_up)
            throw InvalidProfile(switch_id + ": " + iface.port + " delivers PoE with link down");
        if (poe.delivering) delivered += poe.power_watts;
    }
    if (delivered > poe_budget_watts + 1e-6)
        throw InvalidProfile(switch_id + ": delivered PoE exceeds budget");
    std::set<std::tuple<std::string, MacAddress, int>> rows;
    for (const auto& e : mac_table) {
        if (!ports.count(e.port))
            throw InvalidProfile(switch_id + ": MAC " + e.mac.str() + " on unknown port " + e.port);
        if (!rows.emplace(e.port, e.mac, e.vlan).second)
            throw InvalidProfile(switch_id + ": duplicate MAC table row " + e.mac.str());
    }
    for (const auto& n : lldp_neighbors)
        if (!ports.count(n.local_port))
            throw InvalidProfile(switch_id + ": LLDP neighbor on unknown port " + n.local_port);
}

json to_json(const SwitchProfile& p) {
    json interfaces = json::array();
    for (const auto& i : p.interfaces) {
        json poe = {{"capable", i.poe.capable},
                    {"delivering", i.poe.delivering},
                    {"power_watts", i.poe.power_watts},
                    {"poe_class", i.poe.poe_class ? json(*i.poe.poe_class) : json(nullptr)}};
        interfaces.push_back({{"port", i.port}, {"link_up", i.link_up}, {"speed_mbps", i.speed_mbps}, {"poe", poe}});
    }
    json macs = json::array();
    for (const auto& e : p.mac_table) macs.push_back({{"port", e.port}, {"mac", e.mac.str()}, {"vlan", e.vlan}});
    json lldp = json::array();
    for (const auto& n : p.lldp_neighbors)
        lldp.push_back({{"local_port", n.local_port}, {"neighbor_name", n.neighbor_name}, {"neighbor_port", n.neighbor_port}});
    return {{"switch_id", p.switch_id},
            {"vendor_dialect", to_string(p.vendor_dialect)},
            {"model", p.model},
            {"firmware", p.firmware},
            {"serial", p.serial},
            {"poe_budget_watts", p.poe_budget_watts},
            {"interfaces", interfaces},
            {"mac_table", macs},
            {"lldp_neighbors", lldp},
            {"collected_at", p.collected_at}};
}

SwitchProfile profile_from_json(const json& j) {
    try {
        SwitchProfile p;
        p.switch_id = j.at("switch_id").get<std::string>();
        p.vendor_dialect = dialect_from_string(j.at("vendor_dialect").get<std::string>());
        p.model = j.at("model").get<std::string>();
        p.firmware = j.at("firmware").get<std::string>();
        p.serial = j.at("serial").get<std::string>();
        p.poe_budget_watts = j.at("poe_budget_watts").get<double>();
        p.collected_at = j.at("collected_at").get<std::string>();
        for (const auto& i : j.at("interfaces")) {
            InterfaceState s;
            s.port = i.at("port").get<std::string>();
            s.link_up = i.at("link_up").get<bool>();
            s.speed_mbps = i.at("speed_mbps").get<int>();
            const auto& poe = i.at("poe");
            s.poe.capable = poe.at("capable").get<bool>();
            s.poe.delivering = poe.at("delivering").get<bool>();
            s.poe.power_watts = poe.at("power_watts").get<double>();
            if (!poe.at("poe_class").is_null()) s.poe.poe_class = poe.at("poe_class").get<int>();
            p.interfaces.push_back(std::move(s));
        }
        for (const auto& e : j.at("mac_table"))
            p.mac_table.push_back({e.at("port").get<std::string>(), MacAddress::parse(e.at("mac").get<std::string>()),
                                   e.at("vlan").get<int>()});
        for (const auto& n : j.at("lldp_neighbors"))
            p.lldp_neighbors.push_back({n.at("local_port").get<std::string>(), n.at("neighbor_name").get<std::string>(),
                                        n.at("neighbor_port").get<std::string>()});
        return p;
    } catch (const json::exception& e) {
        throw InvalidProfile(std::string("profile JSON does not match schema: ") + e.what());
    }
}

std::string serialize_profile(const SwitchProfile& profile) {
    SwitchProfile copy = profile;
    copy.canonicalize();
    return canonical_json(to_json(copy));
}

std::filesystem::path ProfileStore::path_for(std::string_view switch_id) const {
    return state_dir_ / "profiles_sw" / std::string(switch_id) / "_profile.json";
}

std::filesystem::path ProfileStore::store(const SwitchProfile& profile) const {
    SwitchProfile copy = profile;
    copy.canonicalize();
    copy.validate();
    auto path = path_for(copy.switch_id);
    write_if_changed(path, canonical_json(to_json(copy)));
    return path;
}

SwitchProfile ProfileStore::load(std::string_view switch_id) const {
    auto path = path_for(switch_id);
    if (!std::filesystem::is_regular_file(path)) throw MissingProfile(std::string(switch_id));
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw InvalidProfile(path.string() + ": " + e.what());
    }
    return profile_from_json(j);
}

bool ProfileStore::contains(std::string_view switch_id) const {
    return std::filesystem::is_regular_file(path_for(switch_id));
}

std::vector<std::string> ProfileStore::list() const {
    std::vector<std::string> ids;
    auto root = state_dir_ / "profiles_sw";
    if (!std::filesystem::is_directory(root)) return ids;
    for (const auto& entry : std::filesystem::directory_iterator(root))
        if (entry.is_directory() && std::filesystem::is_regular_file(entry.path() / "_profile.json"))
            ids.push_back(entry.path().filename().string());
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace body
