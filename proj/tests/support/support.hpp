// Test fixtures, hand-rolled generators and independent oracles shared by
// the unit tests and the acceptance binary.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "body/classify.hpp"
#include "body/health.hpp"
#include "body/integrity.hpp"
#include "body/profile.hpp"
#include "body/simulate.hpp"
#include "body/topology.hpp"

namespace body::support {

inline std::filesystem::path source_dir() { return BODY_SOURCE_DIR; }
inline std::filesystem::path fixture_corpus() { return source_dir() / "fixtures" / "uff-like"; }

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("body-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

// Byte contents of every regular file under `root`, keyed by relative path.
inline std::map<std::string, std::string> snapshot_tree(const std::filesystem::path& root) {
    std::map<std::string, std::string> out;
    if (!std::filesystem::exists(root)) return out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        out[std::filesystem::relative(e.path(), root).string()] =
            std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return out;
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : g_(seed) {}

    int uniform(int lo, int hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<int>(g_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    double unit() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }
    std::uint64_t next() { return g_(); }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
    }

private:
    std::mt19937_64 g_;
};

inline MacAddress random_mac(Gen& g, std::uint32_t prefix) {
    auto low = g.next();
    return MacAddress({static_cast<std::uint8_t>(prefix >> 16), static_cast<std::uint8_t>(prefix >> 8),
                       static_cast<std::uint8_t>(prefix), static_cast<std::uint8_t>(low >> 16),
                       static_cast<std::uint8_t>(low >> 8), static_cast<std::uint8_t>(low)});
}

inline std::string dialect_port(Dialect d, int i) {
    switch (d) {
        case Dialect::dialect_a: return "Gi1/0/" + std::to_string(i);
        case Dialect::dialect_b: return std::to_string(i);
        case Dialect::dialect_c: return "port" + std::to_string(i);
    }
    return std::to_string(i);
}

// A structurally valid, canonical profile. The last port carries the most
// MACs so that the density fallback has a unique answer.
inline SwitchProfile random_profile(Gen& g, Dialect dialect, std::uint32_t endpoint_prefix = 0x021a10) {
    SwitchProfile p;
    p.switch_id = "camp-x-inst-y-sw-bldz-flr" + std::to_string(g.uniform(0, 9));
    p.vendor_dialect = dialect;
    p.model = g.pick(std::vector<std::string>{"SG-2428P", "2530-24G", "TEG-1024P"});
    p.firmware = std::to_string(g.uniform(1, 9)) + "." + std::to_string(g.uniform(0, 20));
    p.serial = "SN" + std::to_string(g.uniform(10000, 99999));
    p.collected_at = "2025-01-0" + std::to_string(g.uniform(1, 9)) + "T00:00:00Z";
    int n = g.uniform(2, 30);
    double drawn = 0.0;
    std::size_t widest = 0;
    for (int i = 1; i <= n; ++i) {
        InterfaceState s;
        s.port = dialect_port(dialect, i);
        s.link_up = g.chance(0.7);
        s.speed_mbps = s.link_up ? g.pick(std::vector<int>{100, 1000}) : 0;
        s.poe.capable = i != n && g.chance(0.8);
        s.poe.delivering = s.poe.capable && s.link_up && g.chance(0.6);
        if (s.poe.delivering) {
            s.poe.power_watts = g.uniform(10, 300) / 10.0;
            s.poe.poe_class = g.uniform(0, 4);
            drawn += s.poe.power_watts;
        }
        p.interfaces.push_back(s);
        if (i == n || !s.link_up) continue;
        int macs = g.chance(0.2) ? 0 : g.uniform(1, s.poe.delivering && g.chance(0.3) ? 8 : 1);
        for (int k = 0; k < macs; ++k) {
            auto prefix = g.chance(0.8) ? endpoint_prefix : 0x02ee00u + static_cast<std::uint32_t>(g.uniform(0, 3));
            p.mac_table.push_back({s.port, random_mac(g, prefix), g.chance(0.9) ? 10 : 20});
        }
        widest = std::max<std::size_t>(widest, static_cast<std::size_t>(macs));
    }
    auto uplink = dialect_port(dialect, n);
    p.interfaces.back().link_up = true;
    p.interfaces.back().speed_mbps = 1000;
    for (std::size_t k = 0; k < widest + 1 + static_cast<std::size_t>(g.uniform(0, 20)); ++k)
        p.mac_table.push_back({uplink, random_mac(g, 0x02c000), 10});
    if (g.chance(0.7)) p.lldp_neighbors.push_back({uplink, "camp-x-core-sw", "Te1/0/1"});
    p.poe_budget_watts = drawn > 0.0 ? std::ceil(drawn / 370.0) * 370.0 : 0.0;
    p.canonicalize();
    return p;
}

// Random topology tree: root switch, floor groups, mini switches, cameras,
// quarantine block.
inline TopologyNode random_tree(Gen& g, int max_children = 6) {
    TopologyNode root{"sw-root", NodeKind::access_switch, "sw-root", {}, {}};
    int groups = g.uniform(0, max_children);
    int serial = 0;
    auto leaf = [&](NodeKind kind) {
        auto id = "n" + std::to_string(serial++);
        TopologyNode n{id, kind, id, {}, {}};
        return n;
    };
    for (int i = 0; i < groups; ++i) {
        auto fg = leaf(NodeKind::floor_group);
        int cams = g.uniform(0, max_children);
        for (int k = 0; k < cams; ++k) fg.children.push_back(leaf(NodeKind::camera));
        if (g.chance(0.4)) {
            auto mini = leaf(NodeKind::mini_switch);
            int behind = g.uniform(1, max_children);
            for (int k = 0; k < behind; ++k) mini.children.push_back(leaf(NodeKind::camera));
            fg.children.push_back(std::move(mini));
        }
        root.children.push_back(std::move(fg));
    }
    if (g.chance(0.5)) root.children.push_back(leaf(NodeKind::server));
    if (g.chance(0.5)) {
        auto q = leaf(NodeKind::quarantine_block);
        int n = g.uniform(1, 3);
        for (int k = 0; k < n; ++k) q.children.push_back(leaf(NodeKind::unresolved_mac));
        root.children.push_back(std::move(q));
    }
    if (g.chance(0.3)) {
        // Distribution root above the access switch.
        TopologyNode dist{"sw-dist", NodeKind::distribution_switch, "sw-dist", {}, {}};
        dist.children.push_back(std::move(root));
        dist.children.push_back(leaf(NodeKind::server));
        return dist;
    }
    return root;
}

inline void node_ids(const TopologyNode& n, std::vector<const TopologyNode*>& out) {
    out.push_back(&n);
    for (const auto& c : n.children) node_ids(c, out);
}

inline VerdictFeed random_feed(Gen& g, const TopologyNode& tree) {
    std::vector<const TopologyNode*> nodes;
    node_ids(tree, nodes);
    VerdictFeed feed;
    for (const auto* n : nodes)
        if (g.chance(0.3)) feed[n->id] = static_cast<Level>(g.uniform(0, 2));
    if (g.chance(0.2)) feed["not-in-tree"] = Level::Red;
    return feed;
}

// Effective level written directly from its closed form: own verdict, or
// the worst strict descendant clamped at Amber, whichever is higher.
inline std::map<std::string, Level> effective_oracle(const TopologyNode& tree, const VerdictFeed& feed) {
    std::map<std::string, Level> out;
    auto own = [&](const TopologyNode& n) {
        auto it = feed.find(n.id);
        return it == feed.end() ? Level::Green : it->second;
    };
    std::function<Level(const TopologyNode&)> worst_below = [&](const TopologyNode& n) {
        Level w = Level::Green;
        for (const auto& c : n.children) w = std::max({w, own(c), worst_below(c)});
        return w;
    };
    std::vector<const TopologyNode*> nodes;
    node_ids(tree, nodes);
    for (const auto* n : nodes) out[n->id] = std::max(own(*n), std::min(worst_below(*n), Level::Amber));
    return out;
}

// Display fill: verdict-less leaves take the effective level of the
// closest switch above them (the root when none).
inline std::map<std::string, Level> fill_oracle(const TopologyNode& tree, const VerdictFeed& feed) {
    auto eff = effective_oracle(tree, feed);
    std::map<std::string, Level> out;
    std::function<void(const TopologyNode&, const std::string&)> walk = [&](const TopologyNode& n,
                                                                             const std::string& sw) {
        bool is_sw = n.kind == NodeKind::access_switch || n.kind == NodeKind::distribution_switch;
        std::string here = is_sw ? n.id : sw;
        if (n.children.empty() && !feed.count(n.id)) out[n.id] = eff[here];
        else out[n.id] = eff[n.id];
        for (const auto& c : n.children) walk(c, here);
    };
    walk(tree, tree.id);
    return out;
}

// Lease transition table for the default promotion threshold of 2.
struct LeaseRow {
    LeaseTier tier;
    int counter;
    LeaseEvent event;
    LeaseTier next_tier;
    int next_counter;
    bool surveillance;
};

inline const std::vector<LeaseRow>& lease_table() {
    using T = LeaseTier;
    using E = LeaseEvent;
    static const std::vector<LeaseRow> rows = {
        {T::H12, 0, E::renewed, T::H12, 1, false},       {T::H12, 1, E::renewed, T::H24, 0, false},
        {T::H24, 0, E::renewed, T::H24, 1, false},       {T::H24, 1, E::renewed, T::H48, 0, false},
        {T::H48, 0, E::renewed, T::H48, 1, false},       {T::H48, 1, E::renewed, T::STABLE, 0, false},
        {T::STABLE, 0, E::renewed, T::STABLE, 0, false}, {T::STABLE, 1, E::renewed, T::STABLE, 1, false},
        {T::H12, 0, E::absent, T::H12, 0, true},         {T::H12, 1, E::absent, T::H12, 0, true},
        {T::H24, 0, E::absent, T::H24, 0, true},         {T::H24, 1, E::absent, T::H24, 0, true},
        {T::H48, 0, E::absent, T::H48, 0, true},         {T::H48, 1, E::absent, T::H48, 0, true},
        {T::STABLE, 0, E::absent, T::STABLE, 0, false},  {T::STABLE, 1, E::absent, T::STABLE, 0, false},
        {T::H12, 0, E::registered, T::H12, 0, false},    {T::H12, 1, E::registered, T::H12, 0, false},
        {T::H24, 0, E::registered, T::H12, 0, false},    {T::H24, 1, E::registered, T::H12, 0, false},
        {T::H48, 0, E::registered, T::H12, 0, false},    {T::H48, 1, E::registered, T::H12, 0, false},
        {T::STABLE, 0, E::registered, T::H12, 0, false}, {T::STABLE, 1, E::registered, T::H12, 0, false},
    };
    return rows;
}

inline LeaseState lease_oracle(LeaseState s, LeaseEvent e, const std::string& now) {
    for (const auto& r : lease_table()) {
        if (r.tier != s.tier || r.counter != s.consecutive_renewals || r.event != e) continue;
        s.tier = r.next_tier;
        s.consecutive_renewals = r.next_counter;
        s.surveillance = r.surveillance;
        if (e == LeaseEvent::renewed) s.last_seen = now;
        return s;
    }
    throw std::logic_error("state outside the transition table");
}

// Noise-free campus: no stale registry records, arbitrary unregistered and
// unknown endpoints, mixed dialects and LLDP coverage.
inline CampusSpec random_spec(std::uint64_t seed) {
    Gen g(seed * 7919 + 17);
    CampusSpec s;
    s.seed = seed;
    s.campuses = g.uniform(1, 3);
    s.switches_per_campus = {1, g.uniform(1, 4)};
    s.cameras_per_switch = {0, g.uniform(4, 40)};
    s.cascade_fraction = g.unit() * 0.7;
    s.unregistered_fraction = g.unit() * 0.1;
    s.dialect_mix = {g.unit() + 0.1, g.unit() + 0.1, g.unit() + 0.1};
    s.lldp_fraction = g.unit();
    s.servers_per_campus = {0, 3};
    s.unknown_fraction = g.unit() * 0.05;
    s.access_server_fraction = g.unit() * 0.05;
    return s;
}

// In-memory classification of a generated world, one tree per switch.
inline std::map<std::string, TopologyNode> classify_world(const World& w) {
    Registry registry;
    for (const auto& r : w.registry) registry.insert(r);
    ClassifyConfig config;
    config.overlay_vlan = w.overlay_vlan;
    config.oui = w.oui;
    config.wattage = w.wattage;
    std::map<std::string, TopologyNode> trees;
    for (const auto& sw : w.switches) {
        auto c = classify_switch(sw.profile, registry, w.topo, config);
        auto kind = w.topo.tier_of(sw.profile.switch_id) == Tier::distribution ? NodeKind::distribution_switch
                                                                               : NodeKind::access_switch;
        trees.emplace(sw.profile.switch_id, build_switch_tree(c, kind));
    }
    return trees;
}

}  // namespace body::support
