#include "body/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

using nlohmann::json;

namespace {

// Portable sampling on top of mt19937_64; std distributions differ between
// standard libraries and would break seed stability.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    int uniform(int lo, int hi) {
        if (hi <= lo) return lo;
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t v;
        do v = gen_();
        while (v >= limit);
        return lo + static_cast<int>(v % span);
    }
    int uniform(const IntRange& r) { return uniform(r.min, r.max); }
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }
    std::uint32_t bits24() { return static_cast<std::uint32_t>(gen_() & 0xffffff); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform(0, static_cast<int>(i) - 1)]);
    }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[uniform(0, static_cast<int>(v.size()) - 1)];
    }

private:
    std::mt19937_64 gen_;
};

constexpr std::uint32_t kUnknownPrefix = 0x02ee01;
constexpr std::uint32_t kUpstreamPrefix = 0x02c000;
constexpr std::uint32_t kServerPrefix = 0x021c10;

struct CameraVendor {
    std::uint32_t prefix;
    const char* vendor;
    std::vector<std::string> models;
};

const std::vector<CameraVendor>& camera_vendors() {
    static const std::vector<CameraVendor> v = {
        {0x021a10, "Intelbras", {"VIP-1230-B", "VIP-3260-Z"}},
        {0x021a11, "Hikvision", {"DS-2CD2143"}},
        {0x021a12, "Axis", {"P3245-V"}},
    };
    return v;
}

OuiDatabase make_oui_table() {
    std::vector<OuiEntry> entries;
    for (const auto& c : camera_vendors()) entries.push_back({c.prefix, c.vendor, DeviceClass::camera});
    entries.push_back({0x021b10, "Intelbras", DeviceClass::switch_});
    entries.push_back({0x021b11, "HP Aruba", DeviceClass::switch_});
    entries.push_back({0x021b12, "Tenda", DeviceClass::switch_});
    entries.push_back({kServerPrefix, "Dell", DeviceClass::server});
    entries.push_back({0x021d10, "Intelbras NVR", DeviceClass::nvr});
    return OuiDatabase(std::move(entries));
}

WattageTable make_wattage_table() {
    return WattageTable({{"VIP-1230-B", {3.0, 5.5}},
                         {"VIP-3260-Z", {6.0, 9.5}},
                         {"DS-2CD2143", {4.0, 8.0}},
                         {"P3245-V", {5.0, 9.0}}});
}

std::uint32_t switch_prefix(Dialect d) {
    switch (d) {
        case Dialect::dialect_a: return 0x021b10;
        case Dialect::dialect_b: return 0x021b11;
        case Dialect::dialect_c: return 0x021b12;
    }
    return 0x021b10;
}

struct DialectLook {
    const char* model;
    const char* firmware;
};

DialectLook look(Dialect d) {
    switch (d) {
        case Dialect::dialect_a: return {"SG-2428P", "2.4.1"};
        case Dialect::dialect_b: return {"2530-24G-PoEP", "YA.16.10.0012"};
        case Dialect::dialect_c: return {"TEG-1024P", "1.0.2"};
    }
    return {"SG-2428P", "2.4.1"};
}

std::string port_name(Dialect d, int i) {
    switch (d) {
        case Dialect::dialect_a: return "Gi1/0/" + std::to_string(i);
        case Dialect::dialect_b: return std::to_string(i);
        case Dialect::dialect_c: return "port" + std::to_string(i);
    }
    return std::to_string(i);
}

int port_count(int needed) {
    int p = 24;
    while (p < needed) p *= 2;
    return p;
}

std::string fixed1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

Dialect pick_dialect(Rng& rng, const std::array<double, 3>& mix) {
    double total = mix[0] + mix[1] + mix[2];
    if (total <= 0.0) return Dialect::dialect_a;
    double r = rng.unit() * total;
    if (r < mix[0]) return Dialect::dialect_a;
    if (r < mix[0] + mix[1]) return Dialect::dialect_b;
    return Dialect::dialect_c;
}

class MacAllocator {
public:
    MacAddress make(std::uint32_t prefix, Rng& rng) {
        for (;;) {
            auto low = rng.bits24();
            MacAddress::Octets o{static_cast<std::uint8_t>(prefix >> 16), static_cast<std::uint8_t>(prefix >> 8),
                                 static_cast<std::uint8_t>(prefix), static_cast<std::uint8_t>(low >> 16),
                                 static_cast<std::uint8_t>(low >> 8), static_cast<std::uint8_t>(low)};
            MacAddress mac(o);
            if (used_.insert(mac).second) return mac;
        }
    }

private:
    std::set<MacAddress> used_;
};

class IpAllocator {
public:
    explicit IpAllocator(std::uint32_t start) : next_(start) {}
    Ipv4 make() {
        while ((next_ & 0xff) == 0 || (next_ & 0xff) == 255) ++next_;
        return Ipv4(next_++);
    }

private:
    std::uint32_t next_;
};

struct PortPlan {
    std::string name;
    bool link_up = false;
    int speed = 0;
    PoeState poe{true, false, 0.0, std::nullopt};
    std::vector<std::pair<MacAddress, int>> macs;
    std::optional<LldpNeighbor> lldp;
};

struct SwitchBuild {
    std::string id;
    Dialect dialect = Dialect::dialect_a;
    Tier tier = Tier::access;
    std::string campus;
    bool lldp = true;
    MacAddress mgmt;
    std::vector<PortPlan> ports;
    int uplink = 0;                // index into ports
    std::set<MacAddress> subtree;  // overlay MACs below the uplink, own management MAC included
    std::vector<std::size_t> children;
    std::string serial;
};

PositionalHostname parse_switch_id(const std::string& id) {
    auto h = parse_hostname(id);
    if (!h || h->role != Role::sw) throw ConfigError("layout switch id does not follow the hostname grammar: " + id);
    return *h;
}

std::string make_serial(Rng& rng) {
    static constexpr char kAlphabet[] = "ABCDEFGHJKLMNPQRSTUVWXYZ0123456789";
    std::string s;
    for (int i = 0; i < 10; ++i) s += kAlphabet[rng.uniform(0, static_cast<int>(sizeof kAlphabet) - 2)];
    return s;
}

int binomial(Rng& rng, int n, double p) {
    int k = 0;
    for (int i = 0; i < n; ++i) k += rng.chance(p) ? 1 : 0;
    return k;
}

}  // namespace

std::string_view to_string(EndpointKind k) {
    switch (k) {
        case EndpointKind::camera_direct: return "camera_direct";
        case EndpointKind::camera_cascade: return "camera_cascade";
        case EndpointKind::server: return "server";
        case EndpointKind::unregistered: return "unregistered";
        case EndpointKind::unknown: return "unknown";
        case EndpointKind::stale: return "stale";
    }
    return "camera_direct";
}

std::optional<EndpointKind> endpoint_kind_from_string(std::string_view s) {
    for (auto k : {EndpointKind::camera_direct, EndpointKind::camera_cascade, EndpointKind::server,
                   EndpointKind::unregistered, EndpointKind::unknown, EndpointKind::stale})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

namespace {

IntRange range_of(const YAML::Node& n) {
    if (n.IsScalar()) {
        int v = n.as<int>();
        return {v, v};
    }
    if (!n.IsSequence() || n.size() != 2) throw ConfigError("range must be an integer or [min, max]");
    IntRange r{n[0].as<int>(), n[1].as<int>()};
    if (r.min > r.max) throw ConfigError("range minimum exceeds maximum");
    return r;
}

AccessLayout parse_access(const YAML::Node& n) {
    AccessLayout a;
    a.id = n["id"].as<std::string>();
    if (n["dialect"]) a.dialect = dialect_from_string(n["dialect"].as<std::string>());
    if (n["direct"]) a.direct = n["direct"].as<int>();
    if (n["unregistered"]) a.unregistered = n["unregistered"].as<int>();
    if (n["stale"]) a.stale = n["stale"].as<int>();
    if (n["unknown"]) a.unknown = n["unknown"].as<int>();
    if (n["servers"]) a.servers = n["servers"].as<int>();
    if (n["lldp"]) a.lldp = n["lldp"].as<bool>();
    if (n["floors"]) a.floors = n["floors"].as<int>();
    if (auto c = n["cascades"]) {
        for (const auto& e : c) {
            CascadeLayout cl;
            if (e.IsScalar()) {
                cl.cameras = e.as<int>();
            } else {
                if (e["cameras"]) cl.cameras = e["cameras"].as<int>();
                if (e["unregistered"]) cl.unregistered = e["unregistered"].as<int>();
            }
            if (cl.cameras + cl.unregistered < 2) throw ConfigError(a.id + ": a cascade needs at least two endpoints");
            a.cascades.push_back(cl);
        }
    }
    if (a.floors < 1) throw ConfigError(a.id + ": floors must be positive");
    return a;
}

}  // namespace

CampusSpec parse_campus_spec(std::string_view yaml_text) {
    CampusSpec spec;
    try {
        auto root = YAML::Load(std::string(yaml_text));
        if (!root.IsMap()) throw ConfigError("campus spec must be a mapping");
        if (root["seed"]) spec.seed = root["seed"].as<std::uint64_t>();
        if (root["overlay_vlan"]) spec.overlay_vlan = root["overlay_vlan"].as<int>();
        if (root["server_vlan"]) spec.server_vlan = root["server_vlan"].as<int>();
        if (root["collected_at"]) spec.collected_at = root["collected_at"].as<std::string>();
        if (root["campuses"]) spec.campuses = root["campuses"].as<int>();
        if (root["switches_per_campus"]) spec.switches_per_campus = range_of(root["switches_per_campus"]);
        if (root["cameras_per_switch"]) spec.cameras_per_switch = range_of(root["cameras_per_switch"]);
        if (root["cascade_fraction"]) spec.cascade_fraction = root["cascade_fraction"].as<double>();
        if (root["unregistered_fraction"]) spec.unregistered_fraction = root["unregistered_fraction"].as<double>();
        if (root["lldp_fraction"]) spec.lldp_fraction = root["lldp_fraction"].as<double>();
        if (root["servers_per_campus"]) spec.servers_per_campus = range_of(root["servers_per_campus"]);
        if (root["unknown_fraction"]) spec.unknown_fraction = root["unknown_fraction"].as<double>();
        if (root["access_server_fraction"]) spec.access_server_fraction = root["access_server_fraction"].as<double>();
        if (auto mix = root["dialect_mix"]) {
            spec.dialect_mix = {0.0, 0.0, 0.0};
            for (const auto& kv : mix)
                spec.dialect_mix[static_cast<int>(dialect_from_string(kv.first.as<std::string>()))] =
                    kv.second.as<double>();
        }
        if (auto layout = root["layout"]) {
            Layout l;
            if (auto aux = layout["auxiliary"])
                for (const auto& a : aux) l.auxiliary.push_back(a.as<std::string>());
            for (const auto& c : layout["campuses"]) {
                CampusLayout cl;
                cl.id = c["id"].as<std::string>();
                for (const auto& d : c["distribution"]) {
                    DistributionLayout dl;
                    dl.id = d["id"].as<std::string>();
                    if (d["dialect"]) dl.dialect = dialect_from_string(d["dialect"].as<std::string>());
                    if (d["servers"]) dl.servers = d["servers"].as<int>();
                    if (auto acc = d["access"])
                        for (const auto& a : acc) dl.access.push_back(parse_access(a));
                    cl.distribution.push_back(std::move(dl));
                }
                l.campuses.push_back(std::move(cl));
            }
            spec.layout = std::move(l);
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("campus spec: ") + e.what());
    }
    auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob_ok(spec.cascade_fraction) || !prob_ok(spec.unregistered_fraction) || !prob_ok(spec.lldp_fraction) ||
        !prob_ok(spec.unknown_fraction) || !prob_ok(spec.access_server_fraction))
        throw ConfigError("campus spec: fractions must lie in [0, 1]");
    if (spec.campuses < 0) throw ConfigError("campus spec: negative campus count");
    return spec;
}

CampusSpec load_campus_spec(const std::filesystem::path& path) { return parse_campus_spec(read_file(path)); }

Layout resolve_layout(const CampusSpec& spec) {
    if (spec.layout) return *spec.layout;
    Rng rng(spec.seed * 0x9E3779B97F4A7C15ULL + 0x51);
    Layout layout;
    for (int i = 0; i < spec.campuses; ++i) {
        CampusLayout campus;
        campus.id = "c" + std::to_string(i);
        DistributionLayout dist;
        dist.id = "camp-" + campus.id + "-inst-dti-sw-blda-flr0";
        dist.dialect = pick_dialect(rng, spec.dialect_mix);
        dist.servers = rng.uniform(spec.servers_per_campus);
        int n = rng.uniform(spec.switches_per_campus);
        for (int j = 0; j < n; ++j) {
            AccessLayout a;
            a.id = "camp-" + campus.id + "-inst-e-sw-bldb" + std::to_string(j) + "-flr0";
            a.dialect = pick_dialect(rng, spec.dialect_mix);
            a.lldp = rng.chance(spec.lldp_fraction);
            a.floors = rng.uniform(1, 4);
            int cams = rng.uniform(spec.cameras_per_switch);
            int behind = static_cast<int>(std::lround(cams * spec.cascade_fraction));
            if (behind < 2) behind = 0;
            int direct = cams - behind;
            a.unknown = binomial(rng, cams, spec.unknown_fraction);
            a.servers = binomial(rng, cams, spec.access_server_fraction);
            // Keep every endpoint port on a 48-port switch.
            while (direct > 0 && direct + a.unknown + a.servers + (behind + 7) / 8 + 1 > 47) {
                int moved = std::min(direct, 8);
                direct -= moved;
                behind += moved;
            }
            std::vector<int> groups;
            int remaining = behind;
            while (remaining > 0) {
                int size = rng.uniform(2, std::min(8, remaining));
                if (remaining - size == 1) ++size;
                groups.push_back(size);
                remaining -= size;
            }
            for (int k = 0; k < direct; ++k) {
                if (rng.chance(spec.unregistered_fraction)) ++a.unregistered;
                else ++a.direct;
            }
            for (int size : groups) {
                CascadeLayout cl;
                for (int k = 0; k < size; ++k) {
                    if (rng.chance(spec.unregistered_fraction)) ++cl.unregistered;
                    else ++cl.cameras;
                }
                a.cascades.push_back(cl);
            }
            dist.access.push_back(std::move(a));
        }
        campus.distribution.push_back(std::move(dist));
        layout.campuses.push_back(std::move(campus));
    }
    return layout;
}

namespace {

struct Generator {
    const CampusSpec& spec;
    Rng rng;
    MacAllocator macs;
    IpAllocator ips{(10u << 24) | (20u << 16) | 10u};
    IpAllocator server_ips{(10u << 24) | (250u << 16) | 10u};
    std::map<std::string, int> host_index;
    World world;
    std::vector<SwitchBuild> builds;

    explicit Generator(const CampusSpec& s) : spec(s), rng(s.seed) {}

    std::string next_hostname(const PositionalHostname& sw, Role role, int floor) {
        PositionalHostname h{sw.campus, sw.institute, role, sw.building, floor, std::nullopt};
        auto key = sw.campus + "|" + sw.institute + "|" + std::string(to_string(role)) + "|" + sw.building + "|" +
                   std::to_string(floor);
        h.index = ++host_index[key];
        return render_hostname(h);
    }

    AssetRecord register_asset(const MacAddress& mac, const std::string& hostname, std::optional<std::string> model) {
        AssetRecord r;
        r.mac = mac;
        r.ip = ips.make();
        r.hostname = hostname;
        r.location = parse_hostname(hostname);
        r.model = std::move(model);
        r.lease = LeaseTier::H12;
        r.source = RecordSource::both;
        world.registry.push_back(r);
        return r;
    }

    void truth(const MacAddress& mac, const std::string& sw, const std::string& port, EndpointKind kind,
               const std::string& hostname, bool registered, bool visible = true) {
        TruthEndpoint e;
        e.mac = mac;
        e.switch_id = sw;
        e.port = port;
        e.kind = kind;
        e.hostname = hostname;
        e.registered = registered;
        e.visible = visible;
        if (!hostname.empty() && kind != EndpointKind::server)
            if (auto h = parse_hostname(hostname)) e.floor_key = h->floor_key();
        world.truth.endpoints.push_back(std::move(e));
    }

    // A camera on a direct PoE port: draws within its model's range.
    void direct_camera(SwitchBuild& sb, PortPlan& port, const PositionalHostname& swh, int floors, bool registered) {
        const auto& vendor = camera_vendors()[rng.uniform(0, static_cast<int>(camera_vendors().size()) - 1)];
        const auto& model = rng.pick(vendor.models);
        auto range = *world.wattage.find(model);
        int lo = static_cast<int>(std::ceil(range.min_w * 10)), hi = static_cast<int>(std::floor(range.max_w * 10));
        auto mac = macs.make(vendor.prefix, rng);
        port.link_up = true;
        port.speed = 1000;
        port.poe = PoeState{true, true, rng.uniform(lo, hi) / 10.0, rng.uniform(1, 3)};
        port.macs.emplace_back(mac, spec.overlay_vlan);
        sb.subtree.insert(mac);
        if (registered) {
            auto host = next_hostname(swh, Role::cam, rng.uniform(0, floors - 1));
            register_asset(mac, host, model);
            truth(mac, sb.id, port.name, EndpointKind::camera_direct, host, true);
        } else {
            truth(mac, sb.id, port.name, EndpointKind::unregistered, "", false);
        }
    }

    void cascade(SwitchBuild& sb, PortPlan& port, const PositionalHostname& swh, int floors, const CascadeLayout& cl) {
        int floor = rng.uniform(0, floors - 1);
        port.link_up = true;
        port.speed = 1000;
        port.poe = PoeState{true, true, rng.uniform(150, 300) / 10.0, 4};
        for (int k = 0; k < cl.cameras + cl.unregistered; ++k) {
            const auto& vendor = camera_vendors()[rng.uniform(0, static_cast<int>(camera_vendors().size()) - 1)];
            auto mac = macs.make(vendor.prefix, rng);
            port.macs.emplace_back(mac, spec.overlay_vlan);
            sb.subtree.insert(mac);
            if (k < cl.cameras) {
                auto host = next_hostname(swh, Role::cam, floor);
                register_asset(mac, host, rng.pick(vendor.models));
                truth(mac, sb.id, port.name, EndpointKind::camera_cascade, host, true);
            } else {
                truth(mac, sb.id, port.name, EndpointKind::unregistered, "", false);
            }
        }
    }

    void access_switch(const AccessLayout& a, const std::string& campus) {
        auto swh = parse_switch_id(a.id);
        SwitchBuild sb;
        sb.id = a.id;
        sb.dialect = a.dialect;
        sb.tier = Tier::access;
        sb.campus = campus;
        sb.lldp = a.lldp;
        sb.mgmt = macs.make(switch_prefix(a.dialect), rng);
        sb.subtree.insert(sb.mgmt);
        sb.serial = make_serial(rng);

        enum class Slot { direct, hil, cascade, unknown, server };
        std::vector<std::pair<Slot, std::size_t>> slots;
        for (int i = 0; i < a.direct; ++i) slots.emplace_back(Slot::direct, 0);
        for (int i = 0; i < a.unregistered; ++i) slots.emplace_back(Slot::hil, 0);
        for (std::size_t i = 0; i < a.cascades.size(); ++i) slots.emplace_back(Slot::cascade, i);
        for (int i = 0; i < a.unknown; ++i) slots.emplace_back(Slot::unknown, 0);
        for (int i = 0; i < a.servers; ++i) slots.emplace_back(Slot::server, 0);

        int p = port_count(static_cast<int>(slots.size()) + 1);
        for (int i = 1; i <= p; ++i) {
            PortPlan port;
            port.name = port_name(a.dialect, i);
            sb.ports.push_back(std::move(port));
        }
        sb.uplink = p - 1;
        std::vector<int> positions(p - 1);
        for (int i = 0; i < p - 1; ++i) positions[i] = i;
        rng.shuffle(positions);

        for (std::size_t s = 0; s < slots.size(); ++s) {
            auto& port = sb.ports[positions[s]];
            switch (slots[s].first) {
                case Slot::direct: direct_camera(sb, port, swh, a.floors, true); break;
                case Slot::hil: direct_camera(sb, port, swh, a.floors, false); break;
                case Slot::cascade: cascade(sb, port, swh, a.floors, a.cascades[slots[s].second]); break;
                case Slot::unknown: {
                    auto mac = macs.make(kUnknownPrefix, rng);
                    port.link_up = true;
                    port.speed = 100;
                    port.macs.emplace_back(mac, spec.overlay_vlan);
                    sb.subtree.insert(mac);
                    truth(mac, sb.id, port.name, EndpointKind::unknown, "", false);
                    break;
                }
                case Slot::server: {
                    auto mac = macs.make(kServerPrefix, rng);
                    port.link_up = true;
                    port.speed = 1000;
                    port.poe = PoeState{false, false, 0.0, std::nullopt};
                    port.macs.emplace_back(mac, spec.overlay_vlan);
                    sb.subtree.insert(mac);
                    auto host = next_hostname(swh, Role::srv, rng.uniform(0, a.floors - 1));
                    register_asset(mac, host, std::string("PowerEdge-R740"));
                    truth(mac, sb.id, port.name, EndpointKind::server, host, true);
                    break;
                }
            }
        }
        for (int i = 0; i < a.stale; ++i) {
            const auto& vendor = camera_vendors()[rng.uniform(0, static_cast<int>(camera_vendors().size()) - 1)];
            auto mac = macs.make(vendor.prefix, rng);
            auto host = next_hostname(swh, Role::cam, rng.uniform(0, a.floors - 1));
            register_asset(mac, host, rng.pick(vendor.models));
            truth(mac, sb.id, "", EndpointKind::stale, host, true, false);
        }
        auto& up = sb.ports[sb.uplink];
        up.link_up = true;
        up.speed = 1000;
        up.poe = PoeState{false, false, 0.0, std::nullopt};
        builds.push_back(std::move(sb));
    }

    void distribution_switch(const DistributionLayout& d, const std::string& campus, int campus_index,
                             std::vector<ServerPlacement>& servers) {
        auto swh = parse_switch_id(d.id);
        SwitchBuild sb;
        sb.id = d.id;
        sb.dialect = d.dialect;
        sb.tier = Tier::distribution;
        sb.campus = campus;
        sb.mgmt = macs.make(switch_prefix(d.dialect), rng);
        sb.subtree.insert(sb.mgmt);
        sb.serial = make_serial(rng);

        std::size_t first_child = builds.size();
        for (const auto& a : d.access) access_switch(a, campus);
        std::size_t last_child = builds.size();

        int n = static_cast<int>(last_child - first_child) + d.servers;
        int p = port_count(n + 1);
        for (int i = 1; i <= p; ++i) {
            PortPlan port;
            port.name = port_name(d.dialect, i);
            sb.ports.push_back(std::move(port));
        }
        for (auto& port : sb.ports) port.poe = PoeState{false, false, 0.0, std::nullopt};
        sb.uplink = p - 1;

        int next = 0;
        for (std::size_t c = first_child; c < last_child; ++c) {
            auto& child = builds[c];
            auto& port = sb.ports[next++];
            port.link_up = true;
            port.speed = 1000;
            for (const auto& mac : child.subtree) port.macs.emplace_back(mac, spec.overlay_vlan);
            port.lldp = LldpNeighbor{port.name, child.id, child.ports[child.uplink].name};
            auto& child_up = child.ports[child.uplink];
            child_up.lldp = LldpNeighbor{child_up.name, sb.id, port.name};
            sb.subtree.insert(child.subtree.begin(), child.subtree.end());
            sb.children.push_back(c);
        }
        for (int s = 0; s < d.servers; ++s) {
            auto& port = sb.ports[next++];
            auto mac = macs.make(kServerPrefix, rng);
            port.link_up = true;
            port.speed = 1000;
            port.macs.emplace_back(mac, spec.server_vlan);
            auto id = next_hostname(swh, Role::srv, swh.floor);
            servers.push_back({id, campus, sb.id});
            ServerInfo info;
            info.ip = server_ips.make().str();
            info.model = "PowerEdge-R740";
            world.servers.emplace(id, info);
        }
        auto& up = sb.ports[sb.uplink];
        up.link_up = true;
        up.speed = 10000;
        up.lldp = LldpNeighbor{up.name, "camp-" + campus + "-core-sw", "Te1/0/" + std::to_string(campus_index + 1)};
        builds.push_back(std::move(sb));
    }

    void fill_uplinks() {
        std::set<MacAddress> overlay;
        std::size_t widest = 0;
        for (const auto& sb : builds) {
            overlay.insert(sb.mgmt);
            for (int i = 0; i < static_cast<int>(sb.ports.size()); ++i) {
                if (i == sb.uplink) continue;
                std::size_t count = 0;
                for (const auto& [mac, vlan] : sb.ports[i].macs)
                    if (vlan == spec.overlay_vlan) overlay.insert(mac), ++count;
                widest = std::max(widest, count);
            }
        }
        std::vector<MacAddress> pool;
        for (std::size_t i = 0; i <= widest; ++i) pool.push_back(macs.make(kUpstreamPrefix, rng));
        for (auto& sb : builds) {
            auto& up = sb.ports[sb.uplink];
            for (const auto& mac : pool) up.macs.emplace_back(mac, spec.overlay_vlan);
            for (const auto& mac : overlay)
                if (!sb.subtree.count(mac)) up.macs.emplace_back(mac, spec.overlay_vlan);
        }
    }

    SwitchProfile profile_of(const SwitchBuild& sb) const {
        SwitchProfile p;
        p.switch_id = sb.id;
        p.vendor_dialect = sb.dialect;
        p.model = look(sb.dialect).model;
        p.firmware = look(sb.dialect).firmware;
        p.serial = sb.serial;
        p.collected_at = spec.collected_at;
        double drawn = 0.0;
        for (const auto& port : sb.ports) {
            InterfaceState s;
            s.port = port.name;
            s.link_up = port.link_up;
            s.speed_mbps = port.link_up ? port.speed : 0;
            s.poe = port.poe;
            if (s.poe.delivering) drawn += s.poe.power_watts;
            p.interfaces.push_back(s);
            for (const auto& [mac, vlan] : port.macs) p.mac_table.push_back({port.name, mac, vlan});
            if (port.lldp && sb.lldp) p.lldp_neighbors.push_back(*port.lldp);
        }
        double budget = 0.0;
        if (drawn > 0.0) {
            budget = 370.0;
            while (budget < drawn) budget += 370.0;
        }
        p.poe_budget_watts = budget;
        p.canonicalize();
        return p;
    }

    World run() {
        world.oui = make_oui_table();
        world.wattage = make_wattage_table();
        world.overlay_vlan = spec.overlay_vlan;
        auto layout = resolve_layout(spec);

        std::vector<Campus> campuses;
        std::vector<ServerPlacement> servers;
        int campus_index = 0;
        for (const auto& c : layout.campuses) {
            Campus campus{c.id, {}};
            for (const auto& d : c.distribution) {
                DistributionSwitch ds{d.id, {}};
                for (const auto& a : d.access) ds.access_switches.push_back(a.id);
                campus.distribution_switches.push_back(std::move(ds));
                distribution_switch(d, c.id, campus_index, servers);
            }
            campuses.push_back(std::move(campus));
            ++campus_index;
        }
        world.topo = TopoMap(std::move(campuses), std::move(servers), layout.auxiliary);
        fill_uplinks();

        for (const auto& sb : builds) {
            world.switches.push_back({profile_of(sb), sb.lldp, sb.mgmt});
            world.truth.uplinks[sb.id] = sb.ports[sb.uplink].name;
            world.truth.switches.push_back(sb.id);
        }
        std::sort(world.switches.begin(), world.switches.end(),
                  [](const SimSwitch& a, const SimSwitch& b) { return a.profile.switch_id < b.profile.switch_id; });
        std::sort(world.truth.switches.begin(), world.truth.switches.end());
        std::sort(world.truth.endpoints.begin(), world.truth.endpoints.end(),
                  [](const auto& a, const auto& b) { return a.mac < b.mac; });
        std::sort(world.registry.begin(), world.registry.end(),
                  [](const auto& a, const auto& b) { return a.mac < b.mac; });

        // Stream counts: each campus's visible cameras spread over its servers.
        std::map<std::string, int> cams_per_campus;
        for (const auto& e : world.truth.endpoints) {
            bool cam = e.kind == EndpointKind::camera_direct || e.kind == EndpointKind::camera_cascade;
            if (cam && e.visible && e.registered)
                if (auto h = parse_hostname(e.hostname)) ++cams_per_campus[h->campus];
        }
        std::map<std::string, std::vector<std::string>> servers_per_campus;
        for (const auto& s : world.topo.servers()) servers_per_campus[s.campus_id].push_back(s.server_id);
        for (auto& [campus, ids] : servers_per_campus) {
            int total = cams_per_campus[campus];
            int k = static_cast<int>(ids.size());
            for (int i = 0; i < k; ++i) world.servers[ids[i]].stream_count = total / k + (i < total % k ? 1 : 0);
        }

        for (const auto& e : world.truth.endpoints) {
            bool cam = e.kind == EndpointKind::camera_direct || e.kind == EndpointKind::camera_cascade;
            if (!cam || !e.registered || !e.visible) continue;
            double r = rng.unit();
            world.camera_verdicts[e.hostname] = r < 0.01 ? Level::Red : r < 0.04 ? Level::Amber : Level::Green;
        }
        for (const auto& id : world.truth.switches)
            world.infra_verdicts[id] = rng.chance(0.05) ? Level::Amber : Level::Green;
        for (const auto& s : world.topo.servers())
            world.infra_verdicts[s.server_id] = rng.chance(0.05) ? Level::Amber : Level::Green;
        return std::move(world);
    }
};

}  // namespace

World generate_campus(const CampusSpec& spec) { return Generator(spec).run(); }

namespace {

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

double drawn_watts(const SwitchProfile& p) {
    double d = 0.0;
    for (const auto& i : p.interfaces)
        if (i.poe.delivering) d += i.poe.power_watts;
    return d;
}

CliBundle emit_a(const SwitchProfile& p, bool lldp_enabled) {
    CliBundle b;
    std::ostringstream in;
    in << "System Model : " << p.model << "\n"
       << "Firmware Version : " << p.firmware << "\n"
       << "Serial Number : " << p.serial << "\n\n"
       << "Port      Status       Vlan   Duplex  Speed   Type\n"
       << "--------- ------------ ------ ------- ------- ------------------\n";
    for (const auto& i : p.interfaces) {
        in << pad(i.port, 10) << pad(i.link_up ? "connected" : "notconnect", 13) << pad("10", 7)
           << pad(i.link_up ? "a-full" : "auto", 8) << pad(i.link_up ? "a-" + std::to_string(i.speed_mbps) : "auto", 8)
           << "10/100/1000BaseTX\n";
    }
    b.interface_text = in.str();

    std::ostringstream mt;
    mt << "          Mac Address Table\n-------------------------------------------\n\n"
       << "Vlan    Mac Address       Type        Ports\n"
       << "----    -----------       --------    -----\n"
       << " All    0100.0ccc.cccc    STATIC      CPU\n";
    for (const auto& e : p.mac_table)
        mt << pad(std::to_string(e.vlan), 8) << pad(e.mac.dotted(), 18) << pad("DYNAMIC", 12) << e.port << "\n";
    mt << "Total Mac Addresses for this criterion: " << p.mac_table.size() << "\n";
    b.mac_table_text = mt.str();

    std::ostringstream poe;
    double used = drawn_watts(p);
    poe << "Module   Available     Used     Remaining\n"
        << "          (Watts)     (Watts)    (Watts)\n"
        << "------   ---------   --------   ---------\n"
        << "1          " << fixed1(p.poe_budget_watts) << "       " << fixed1(used) << "      "
        << fixed1(p.poe_budget_watts - used) << "\n\n"
        << "Interface Admin  Oper       Power   Device              Class Max\n"
        << "--------- ------ ---------- ------- ------------------- ----- ----\n";
    for (const auto& i : p.interfaces) {
        poe << pad(i.port, 10) << pad(i.poe.capable ? "auto" : "off", 7) << pad(i.poe.delivering ? "on" : "off", 11)
            << pad(fixed1(i.poe.power_watts), 8) << pad(i.poe.delivering ? "Ieee-PD" : "n/a", 20)
            << pad(i.poe.poe_class ? std::to_string(*i.poe.poe_class) : "n/a", 6) << "30.0\n";
    }
    b.poe_text = poe.str();

    std::ostringstream ll;
    if (!lldp_enabled) {
        ll << "% LLDP is not enabled\n";
    } else {
        ll << "Capability codes:\n"
           << "    (R) Router, (B) Bridge, (T) Telephone, (C) DOCSIS Cable Device\n"
           << "    (W) WLAN Access Point, (P) Repeater, (S) Station, (O) Other\n\n"
           << "Device ID                        Local Intf     Hold-time  Capability      Port ID\n";
        for (const auto& n : p.lldp_neighbors)
            ll << pad(n.neighbor_name, 33) << pad(n.local_port, 15) << pad("120", 11) << pad("B", 16)
               << n.neighbor_port << "\n";
        ll << "\nTotal entries displayed: " << p.lldp_neighbors.size() << "\n";
    }
    b.lldp_text = ll.str();
    return b;
}

CliBundle emit_b(const SwitchProfile& p, const std::map<std::string, MacAddress>& chassis) {
    CliBundle b;
    std::ostringstream in;
    in << " Status and Counters - Port Status\n\n"
       << "  Product Model : " << p.model << "\n"
       << "  Firmware Revision : " << p.firmware << "\n"
       << "  Serial Number : " << p.serial << "\n\n"
       << "  Port   Type       Enabled Status  Mode\n"
       << "  ------ ---------- ------- ------- ----------\n";
    for (const auto& i : p.interfaces)
        in << "  " << pad(i.port, 7) << pad("100/1000T", 11) << pad("Yes", 8) << pad(i.link_up ? "Up" : "Down", 8)
           << (i.link_up ? std::to_string(i.speed_mbps) + "FDx" : std::string("Auto")) << "\n";
    b.interface_text = in.str();

    std::ostringstream mt;
    mt << " Status and Counters - Address Table\n\n"
       << "  MAC Address       Port   VLAN\n"
       << "  ----------------- ------ ----\n";
    for (const auto& e : p.mac_table) mt << "  " << pad(e.mac.str(), 18) << pad(e.port, 7) << e.vlan << "\n";
    b.mac_table_text = mt.str();

    std::ostringstream poe;
    poe << " Status and Counters - PoE Status\n\n"
        << "  Total Available Power  :  " << fixed1(p.poe_budget_watts) << " W\n"
        << "  Total Power Drawn      :  " << fixed1(drawn_watts(p)) << " W\n\n"
        << "  Port   PoE   Status      Class  Draw(W)\n"
        << "  ------ ----- ----------- ------ -------\n";
    for (const auto& i : p.interfaces) {
        std::string status = i.poe.delivering ? "Delivering" : i.poe.capable ? "Searching" : "Disabled";
        poe << "  " << pad(i.port, 7) << pad(i.poe.capable ? "Yes" : "No", 6) << pad(status, 12)
            << pad(i.poe.poe_class ? std::to_string(*i.poe.poe_class) : "-", 7) << fixed1(i.poe.power_watts) << "\n";
    }
    b.poe_text = poe.str();

    std::ostringstream ll;
    ll << " LLDP Remote Devices Information\n\n"
       << "  LocalPort | ChassisId          PortId  SysName\n"
       << "  --------- + ------------------ ------- ---------------\n";
    for (const auto& n : p.lldp_neighbors) {
        auto it = chassis.find(n.neighbor_name);
        std::string id = it == chassis.end() ? std::string("00:00:00:00:00:00") : it->second.str();
        ll << "  " << pad(n.local_port, 10) << "| " << pad(id, 19) << pad(n.neighbor_port, 8) << n.neighbor_name
           << "\n";
    }
    b.lldp_text = ll.str();
    return b;
}

CliBundle emit_c(const SwitchProfile& p) {
    CliBundle b;
    std::ostringstream in;
    in << "# interface show\n"
       << "system {model=" << p.model << ", firmware=" << p.firmware << ", serial=" << p.serial << "}\n";
    for (const auto& i : p.interfaces)
        in << "{port=" << i.port << ", link=" << (i.link_up ? "up" : "down") << ", speed=" << i.speed_mbps << "}\n";
    b.interface_text = in.str();

    std::ostringstream mt;
    mt << "# fdb show\n";
    for (const auto& e : p.mac_table)
        mt << "{mac=" << e.mac.dashed() << ", port=" << e.port << ", vlan=" << e.vlan << ", type=dynamic}\n";
    b.mac_table_text = mt.str();

    std::ostringstream poe;
    poe << "# poe show\npoe_system {budget=" << fixed1(p.poe_budget_watts) << "}\n";
    for (const auto& i : p.interfaces) {
        std::string state = i.poe.delivering ? "delivering" : i.poe.capable ? "searching" : "disabled";
        poe << "{port=" << i.port << ", poe=" << (i.poe.capable ? "enabled" : "disabled") << ", state=" << state
            << ", class=" << (i.poe.poe_class ? std::to_string(*i.poe.poe_class) : std::string("none"))
            << ", power=" << fixed1(i.poe.power_watts) << "}\n";
    }
    b.poe_text = poe.str();

    std::ostringstream ll;
    ll << "# lldp neighbor show\n";
    for (const auto& n : p.lldp_neighbors)
        ll << "{local_port=" << n.local_port << ", sys_name=" << n.neighbor_name << ", remote_port=" << n.neighbor_port
           << "}\n";
    b.lldp_text = ll.str();
    return b;
}

}  // namespace

CliBundle emit_cli_bundle(const SwitchProfile& profile, bool lldp_enabled) {
    switch (profile.vendor_dialect) {
        case Dialect::dialect_a: return emit_a(profile, lldp_enabled);
        case Dialect::dialect_b: return emit_b(profile, {});
        case Dialect::dialect_c: return emit_c(profile);
    }
    throw UnknownDialect(std::to_string(static_cast<int>(profile.vendor_dialect)));
}

std::string render_classify_config(const World& world) {
    std::ostringstream out;
    out << "overlay_vlan: " << world.overlay_vlan << "\n"
        << "uplink_name_patterns:\n"
        << "  - \"(^|-)core(-|$)\"\n"
        << "cascade_name_patterns: []\n"
        << "oui_csv: oui.csv\n"
        << "wattage_csv: wattage.csv\n";
    return out.str();
}

json to_json(const GroundTruth& truth) {
    json endpoints = json::array();
    for (const auto& e : truth.endpoints)
        endpoints.push_back({{"mac", e.mac.str()},
                             {"switch", e.switch_id},
                             {"port", e.port},
                             {"kind", to_string(e.kind)},
                             {"hostname", e.hostname},
                             {"floor_key", e.floor_key},
                             {"registered", e.registered},
                             {"visible", e.visible}});
    return {{"switches", truth.switches}, {"uplinks", truth.uplinks}, {"endpoints", endpoints}};
}

GroundTruth ground_truth_from_json(const json& j) {
    try {
        GroundTruth t;
        t.switches = j.at("switches").get<std::vector<std::string>>();
        t.uplinks = j.at("uplinks").get<std::map<std::string, std::string>>();
        for (const auto& e : j.at("endpoints")) {
            TruthEndpoint te;
            te.mac = MacAddress::parse(e.at("mac").get<std::string>());
            te.switch_id = e.at("switch").get<std::string>();
            te.port = e.at("port").get<std::string>();
            auto kind = endpoint_kind_from_string(e.at("kind").get<std::string>());
            if (!kind) throw Error("ground truth: unknown endpoint kind");
            te.kind = *kind;
            te.hostname = e.at("hostname").get<std::string>();
            te.floor_key = e.at("floor_key").get<std::string>();
            te.registered = e.at("registered").get<bool>();
            te.visible = e.at("visible").get<bool>();
            t.endpoints.push_back(std::move(te));
        }
        return t;
    } catch (const json::exception& e) {
        throw Error(std::string("ground truth JSON does not match schema: ") + e.what());
    }
}

void write_world(const World& world, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_if_changed(out_dir / "topo_map.yml", render_topo_map(world.topo));
    write_if_changed(out_dir / "dnsmasq.conf", render_dhcp_conf(world.registry));
    write_if_changed(out_dir / "assets.csv", render_asset_csv(world.registry));
    write_if_changed(out_dir / "oui.csv", world.oui.render_csv());
    write_if_changed(out_dir / "wattage.csv", world.wattage.render_csv());
    write_if_changed(out_dir / "servers.yml", render_server_metadata(world.servers));
    write_if_changed(out_dir / "classify_config.yml", render_classify_config(world));
    write_if_changed(out_dir / "verdicts.json", render_verdict_feed(world.camera_verdicts));
    write_if_changed(out_dir / "verdicts_infra.json", render_verdict_feed(world.infra_verdicts));
    write_if_changed(out_dir / "ground_truth.json", canonical_json(to_json(world.truth)));

    std::map<std::string, MacAddress> chassis;
    std::set<std::string> ids;
    for (const auto& sw : world.switches) {
        ids.insert(sw.profile.switch_id);
        chassis.emplace(sw.profile.switch_id, sw.mgmt_mac);
    }
    for (const auto& sw : world.switches) {
        const auto& p = sw.profile;
        auto dir = out_dir / p.switch_id;
        auto bundle = p.vendor_dialect == Dialect::dialect_b ? emit_b(p, chassis) : emit_cli_bundle(p, sw.lldp);
        write_if_changed(dir / "meta.yml", render_fixture_meta({p.switch_id, p.vendor_dialect, p.collected_at}));
        write_if_changed(dir / transcript_file(Section::mac_table), bundle.mac_table_text);
        write_if_changed(dir / transcript_file(Section::interfaces), bundle.interface_text);
        write_if_changed(dir / transcript_file(Section::poe), bundle.poe_text);
        write_if_changed(dir / transcript_file(Section::lldp), bundle.lldp_text);
    }
    for (const auto& id : list_fixture_switches(out_dir))
        if (!ids.count(id)) std::filesystem::remove_all(out_dir / id);
}

namespace {

void collect_placements(const TopologyNode& node, const std::string& sw, const std::string& floor,
                        const std::string& mini, bool in_others, std::map<MacAddress, std::string>& out) {
    for (const auto& c : node.children) {
        switch (c.kind) {
            case NodeKind::floor_group: collect_placements(c, sw, c.label, "", false, out); break;
            case NodeKind::mini_switch: collect_placements(c, sw, floor, c.label, false, out); break;
            case NodeKind::quarantine_block: collect_placements(c, sw, "", "", true, out); break;
            default: {
                if (!c.metadata.mac) break;
                auto mac = MacAddress::parse(*c.metadata.mac);
                std::string where = sw + "/";
                if (in_others) where += "others";
                else if (floor.empty()) where += "-";
                else where += floor + (mini.empty() ? "" : "/" + mini);
                out[mac] = where;
            }
        }
    }
}

}  // namespace

std::map<MacAddress, std::string> endpoint_placements(const TopologyNode& switch_tree) {
    std::map<MacAddress, std::string> out;
    collect_placements(switch_tree, switch_tree.id, "", "", false, out);
    return out;
}

std::string expected_placement(const TruthEndpoint& e) {
    switch (e.kind) {
        case EndpointKind::camera_direct:
        case EndpointKind::stale: return e.switch_id + "/" + e.floor_key;
        case EndpointKind::camera_cascade: return e.switch_id + "/" + e.floor_key + "/mini-" + e.port;
        case EndpointKind::server: return e.switch_id + "/-";
        case EndpointKind::unregistered:
        case EndpointKind::unknown: return e.switch_id + "/others";
    }
    return e.switch_id;
}

TopologyDiff diff_topology(const std::map<std::string, TopologyNode>& trees, const GroundTruth& truth) {
    std::set<std::string> have, want(truth.switches.begin(), truth.switches.end());
    for (const auto& [id, tree] : trees) have.insert(id);
    if (have != want) throw SwitchSetMismatch("inferred trees and ground truth cover different switch sets");

    std::map<MacAddress, std::string> placed;
    for (const auto& [id, tree] : trees) {
        auto p = endpoint_placements(tree);
        placed.insert(p.begin(), p.end());
    }
    TopologyDiff d;
    for (const auto& e : truth.endpoints) {
        auto it = placed.find(e.mac);
        std::string got = it == placed.end() ? "absent" : it->second;
        auto expected = expected_placement(e);
        if (!e.registered) {
            if (e.visible && got != expected) d.missing_hil.push_back(e.mac);
            continue;
        }
        ++d.registered;
        if (e.visible) ++d.registered_visible;
        if (got == expected) ++d.correct;
        else d.mismatches.push_back({e.mac, expected, got});
    }
    d.accuracy = d.registered ? static_cast<double>(d.correct) / static_cast<double>(d.registered) : 1.0;
    d.visible_accuracy =
        d.registered_visible ? static_cast<double>(d.correct) / static_cast<double>(d.registered_visible) : 1.0;
    return d;
}

}  // namespace body
