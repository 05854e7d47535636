#include <gtest/gtest.h>

#include "body/classify.hpp"
#include "body/error.hpp"
#include "body/fsio.hpp"
#include "support.hpp"

using namespace body;

namespace {

const std::string kAccess = "camp-g-inst-a-sw-bldb-flr0";
const std::string kDist = "camp-g-inst-dti-sw-blda-flr0";

MacAddress mac(const char* s) { return MacAddress::parse(s); }

AssetRecord asset(const char* m, const std::string& hostname, std::optional<std::string> model = std::nullopt) {
    AssetRecord r;
    r.mac = mac(m);
    r.ip = *Ipv4::parse("10.0.0.1");
    r.hostname = hostname;
    r.location = parse_hostname(hostname);
    r.model = std::move(model);
    return r;
}

InterfaceState port(int i, bool up, bool poe = false, double watts = 0.0) {
    InterfaceState s;
    s.port = "Gi1/0/" + std::to_string(i);
    s.link_up = up;
    s.speed_mbps = up ? 1000 : 0;
    s.poe.capable = true;
    s.poe.delivering = poe;
    s.poe.power_watts = watts;
    if (poe) s.poe.poe_class = 2;
    return s;
}

struct Scenario {
    SwitchProfile profile;
    Registry registry;
    TopoMap topo;
    ClassifyConfig config;
};

// One port of every kind; Gi1/0/8 is the uplink towards the distribution switch.
Scenario scenario() {
    Scenario s;
    s.topo = TopoMap({Campus{"g", {DistributionSwitch{kDist, {kAccess}}}}}, {});
    s.config.oui = OuiDatabase({{0x021a10, "Intelbras", DeviceClass::camera}, {0x021c10, "Dell", DeviceClass::server}});
    s.config.wattage = WattageTable({{"VIP-1230-B", {3.0, 5.5}}});
    s.config.cascade_names = NamePatterns(std::vector<std::string>{"^cascade-"});
    s.config.overlay_vlan = 10;

    s.registry.insert(asset("02:1a:10:00:00:01", "camp-g-inst-a-cam-bldb-flr0-01", "VIP-1230-B"));
    s.registry.insert(asset("02:1a:10:00:00:02", "camp-g-inst-a-cam-bldb-flr1-02", "VIP-1230-B"));
    s.registry.insert(asset("02:1a:10:00:00:03", "camp-g-inst-a-cam-bldb-flr2-03"));
    s.registry.insert(asset("02:1a:10:00:00:04", "camp-g-inst-a-cam-bldb-flr2-04"));
    s.registry.insert(asset("02:1c:10:00:00:01", "camp-g-inst-a-srv-bldb-flr0-01"));

    auto& p = s.profile;
    p.switch_id = kAccess;
    p.interfaces = {port(1, true, true, 5.0), port(2, true, true, 9.0), port(3, true, true, 12.0), port(4, true),
                    port(5, true),           port(6, false),           port(7, true),              port(8, true)};
    p.mac_table = {
        {"Gi1/0/1", mac("02:1a:10:00:00:01"), 10},
        {"Gi1/0/2", mac("02:1a:10:00:00:02"), 10},
        {"Gi1/0/3", mac("02:1a:10:00:00:03"), 10},
        {"Gi1/0/3", mac("02:1a:10:00:00:04"), 10},
        {"Gi1/0/3", mac("02:1a:10:00:00:99"), 10},
        {"Gi1/0/4", mac("02:1c:10:00:00:01"), 10},
        {"Gi1/0/5", mac("02:ee:01:00:00:01"), 10},
        {"Gi1/0/7", mac("02:1b:10:00:00:07"), 10},
    };
    for (int k = 0; k < 6; ++k)
        p.mac_table.push_back({"Gi1/0/8", MacAddress({0x02, 0xc0, 0x00, 0, 0, static_cast<std::uint8_t>(k)}), 10});
    p.lldp_neighbors = {{"Gi1/0/8", kDist, "Gi1/0/1"}, {"Gi1/0/7", "cascade-sw-1", "1"}};
    p.canonicalize();
    return s;
}

const EndpointResolution* find(const SwitchClassification& c, const char* m) {
    for (const auto& r : c.resolutions)
        if (r.mac == mac(m)) return &r;
    return nullptr;
}

}  // namespace

TEST(Classify, UplinkFromLldpNameOfUpstreamTier) {
    auto s = scenario();
    auto d = identify_uplink(s.profile, s.topo, s.config);
    EXPECT_EQ(d.port, "Gi1/0/8");
    EXPECT_EQ(d.evidence, Evidence::lldp_name);
}

TEST(Classify, UplinkFromLldpNamePattern) {
    auto s = scenario();
    s.profile.lldp_neighbors = {{"Gi1/0/8", "campus-core-2", "Te1/0/1"}};
    auto d = identify_uplink(s.profile, TopoMap{}, s.config);
    EXPECT_EQ(d.port, "Gi1/0/8");
    EXPECT_EQ(d.evidence, Evidence::lldp_name);
}

TEST(Classify, UplinkFallsBackToMacDensity) {
    auto s = scenario();
    s.profile.lldp_neighbors.clear();
    auto d = identify_uplink(s.profile, s.topo, s.config);
    EXPECT_EQ(d.port, "Gi1/0/8");
    EXPECT_EQ(d.evidence, Evidence::mac_density);
}

TEST(Classify, DensityIgnoresOtherVlans) {
    auto s = scenario();
    s.profile.lldp_neighbors.clear();
    for (int k = 0; k < 10; ++k)
        s.profile.mac_table.push_back({"Gi1/0/5", MacAddress({0x02, 0xd0, 0, 0, 0, static_cast<std::uint8_t>(k)}), 20});
    s.profile.canonicalize();
    EXPECT_EQ(identify_uplink(s.profile, s.topo, s.config).port, "Gi1/0/8");
    s.config.overlay_vlan.reset();
    EXPECT_EQ(identify_uplink(s.profile, s.topo, s.config).port, "Gi1/0/5");
}

TEST(Classify, TiedDensityIsAmbiguous) {
    auto s = scenario();
    s.profile.lldp_neighbors.clear();
    s.profile.mac_table.erase(std::remove_if(s.profile.mac_table.begin(), s.profile.mac_table.end(),
                                             [](const auto& e) { return e.port == "Gi1/0/8"; }),
                              s.profile.mac_table.end());
    s.profile.mac_table.push_back({"Gi1/0/8", mac("02:c0:00:00:00:01"), 10});
    s.profile.mac_table.push_back({"Gi1/0/8", mac("02:c0:00:00:00:02"), 10});
    s.profile.mac_table.push_back({"Gi1/0/8", mac("02:c0:00:00:00:03"), 10});
    s.profile.canonicalize();
    try {
        identify_uplink(s.profile, s.topo, s.config);
        FAIL() << "expected AmbiguousUplink";
    } catch (const AmbiguousUplink& e) {
        EXPECT_EQ(e.tied_ports(), (std::vector<std::string>{"Gi1/0/3", "Gi1/0/8"}));
        EXPECT_EQ(e.switch_id(), kAccess);
    }
}

TEST(Classify, TwoLldpUplinksAreAmbiguous) {
    auto s = scenario();
    s.profile.lldp_neighbors.push_back({"Gi1/0/5", "core-b", "1"});
    EXPECT_THROW(identify_uplink(s.profile, s.topo, s.config), AmbiguousUplink);
}

TEST(Classify, NoMacsAnywhereIsAmbiguousWithNoTiedPorts) {
    auto s = scenario();
    s.profile.lldp_neighbors.clear();
    s.profile.mac_table.clear();
    try {
        identify_uplink(s.profile, s.topo, s.config);
        FAIL();
    } catch (const AmbiguousUplink& e) {
        EXPECT_TRUE(e.tied_ports().empty());
    }
}

TEST(Classify, PortKindsFollowTheRuleOrder) {
    auto s = scenario();
    auto ports = classify_ports(s.profile, "Gi1/0/8", s.registry, s.topo, s.config);
    std::map<std::string, PortKind> kinds;
    for (const auto& p : ports) kinds[p.port] = p.kind;
    EXPECT_EQ(kinds["Gi1/0/1"], PortKind::CAMERA);
    EXPECT_EQ(kinds["Gi1/0/2"], PortKind::CAMERA);
    EXPECT_EQ(kinds["Gi1/0/3"], PortKind::MINI_SWITCH_CASCADE);
    EXPECT_EQ(kinds["Gi1/0/4"], PortKind::SERVER);
    EXPECT_EQ(kinds["Gi1/0/5"], PortKind::UNKNOWN);
    EXPECT_EQ(kinds["Gi1/0/6"], PortKind::EMPTY);
    EXPECT_EQ(kinds["Gi1/0/7"], PortKind::MANAGED_CASCADE);
    EXPECT_EQ(kinds["Gi1/0/8"], PortKind::UPLINK);
    EXPECT_EQ(ports[2].mac_count, 3u);
}

TEST(Classify, ServerByOuiWhenNotRegistered) {
    auto s = scenario();
    s.profile.mac_table.push_back({"Gi1/0/5", mac("02:1c:10:00:00:02"), 10});
    s.profile.mac_table.erase(std::find_if(s.profile.mac_table.begin(), s.profile.mac_table.end(),
                                           [](const auto& e) { return e.port == "Gi1/0/5"; }));
    s.profile.canonicalize();
    auto ports = classify_ports(s.profile, "Gi1/0/8", s.registry, s.topo, s.config);
    auto it = std::find_if(ports.begin(), ports.end(), [](const auto& p) { return p.port == "Gi1/0/5"; });
    EXPECT_EQ(it->kind, PortKind::SERVER);
    EXPECT_EQ(it->evidence, (std::vector<Evidence>{Evidence::mac_density, Evidence::oui}));
}

TEST(Classify, EndpointStatusesAndWattage) {
    auto s = scenario();
    auto c = classify_switch(s.profile, s.registry, s.topo, s.config);
    ASSERT_FALSE(c.uplink_ambiguous());
    EXPECT_EQ(c.find_port("Gi1/0/8")->evidence, std::vector<Evidence>{Evidence::lldp_name});

    const auto* direct = find(c, "02:1a:10:00:00:01");
    ASSERT_TRUE(direct);
    EXPECT_EQ(direct->status, ResolutionStatus::RESOLVED_DIRECT_POE);
    EXPECT_EQ(direct->wattage_check, WattageCheck::confirmed);
    EXPECT_EQ(direct->floor, 0);

    EXPECT_EQ(find(c, "02:1a:10:00:00:02")->wattage_check, WattageCheck::contradicted);
    EXPECT_EQ(find(c, "02:1a:10:00:00:02")->status, ResolutionStatus::RESOLVED_DIRECT_POE);
    EXPECT_EQ(find(c, "02:1a:10:00:00:03")->status, ResolutionStatus::RESOLVED_NOT_POE);
    EXPECT_EQ(find(c, "02:1a:10:00:00:03")->wattage_check, WattageCheck::not_applicable);
    EXPECT_EQ(find(c, "02:1a:10:00:00:99")->status, ResolutionStatus::UNREGISTERED_HIL);
    EXPECT_EQ(find(c, "02:1c:10:00:00:01")->status, ResolutionStatus::RESOLVED_NOT_POE);
    EXPECT_EQ(find(c, "02:ee:01:00:00:01")->status, ResolutionStatus::UNKNOWN_HIL);
    // Uplink and managed-cascade MACs belong to other switches.
    EXPECT_FALSE(find(c, "02:1b:10:00:00:07"));
    EXPECT_FALSE(find(c, "02:c0:00:00:00:00"));
    EXPECT_EQ(c.resolutions.size(), 7u);

    ASSERT_EQ(c.hil_candidates.size(), 2u);
    const auto& unreg = c.hil_candidates[0];
    EXPECT_EQ(unreg.reason, HilReason::unregistered);
    EXPECT_EQ(unreg.oui_vendor, "Intelbras");
    EXPECT_EQ(unreg.oui_prefix, "02:1a:10");
    EXPECT_EQ(unreg.port, "Gi1/0/3");
    EXPECT_EQ(unreg.parent_switch, kAccess);
    EXPECT_EQ(unreg.floor_hint, 0);
    EXPECT_EQ(c.hil_candidates[1].reason, HilReason::unknown_oui);
    EXPECT_EQ(c.hil_candidates[1].oui_vendor, "unknown");
}

TEST(Classify, WattageInconclusiveWithoutProfile) {
    auto s = scenario();
    EndpointResolution r = resolve_endpoint(mac("02:1a:10:00:00:03"), {"Gi1/0/1", PortKind::CAMERA, {}, 1},
                                            s.registry, s.config.oui, s.config.wattage, PoeState{true, true, 4.0, 2});
    EXPECT_EQ(r.status, ResolutionStatus::RESOLVED_DIRECT_POE);
    EXPECT_EQ(r.wattage_check, WattageCheck::inconclusive);
}

TEST(Classify, OperatorOverrideWins) {
    auto s = scenario();
    s.profile.lldp_neighbors.clear();
    s.config.uplink_overrides[kAccess] = "Gi1/0/5";
    auto c = classify_switch(s.profile, s.registry, s.topo, s.config);
    ASSERT_TRUE(c.uplink);
    EXPECT_EQ(c.uplink->port, "Gi1/0/5");
    EXPECT_EQ(c.uplink->evidence, Evidence::operator_confirmed);
    EXPECT_FALSE(find(c, "02:ee:01:00:00:01"));
}

TEST(Classify, AmbiguousSwitchBecomesOneWorkItem) {
    auto s = scenario();
    s.profile.lldp_neighbors.push_back({"Gi1/0/5", "core-b", "1"});
    auto c = classify_switch(s.profile, s.registry, s.topo, s.config);
    EXPECT_TRUE(c.uplink_ambiguous());
    EXPECT_TRUE(c.resolutions.empty());
    ASSERT_EQ(c.hil_candidates.size(), 1u);
    EXPECT_EQ(c.hil_candidates[0].reason, HilReason::ambiguous_uplink);
    EXPECT_EQ(c.hil_candidates[0].port, "Gi1/0/5,Gi1/0/8");
    EXPECT_FALSE(c.hil_candidates[0].mac);
}

TEST(Classify, LldpAndDensityAgreeOnRandomProfiles) {
    support::Gen g(0xF00D);
    ClassifyConfig config;
    int with_lldp = 0;
    for (int i = 0; i < 500; ++i) {
        auto p = support::random_profile(g, static_cast<Dialect>(i % 3));
        auto density = identify_uplink(p, TopoMap{}, config, true);
        EXPECT_EQ(density.evidence, Evidence::mac_density);
        if (p.lldp_neighbors.empty()) continue;
        ++with_lldp;
        auto lldp = identify_uplink(p, TopoMap{}, config);
        EXPECT_EQ(lldp.evidence, Evidence::lldp_name);
        EXPECT_EQ(lldp.port, density.port) << "profile " << i;
    }
    EXPECT_GT(with_lldp, 200);
}

TEST(Classify, EveryEndpointMacResolvedOnce) {
    support::Gen g(0xBEEF);
    ClassifyConfig config;
    config.oui = OuiDatabase({{0x021a10, "Intelbras", DeviceClass::camera}});
    for (int i = 0; i < 200; ++i) {
        auto p = support::random_profile(g, static_cast<Dialect>(i % 3));
        auto c = classify_switch(p, Registry{}, TopoMap{}, config);
        ASSERT_FALSE(c.uplink_ambiguous());
        std::set<MacAddress> expected;
        for (const auto& cl : c.classifications)
            if (cl.kind != PortKind::UPLINK && cl.kind != PortKind::MANAGED_CASCADE)
                for (const auto& e : p.mac_table)
                    if (e.port == cl.port) expected.insert(e.mac);
        std::multiset<MacAddress> got;
        for (const auto& r : c.resolutions) got.insert(r.mac);
        EXPECT_EQ(got.size(), expected.size());
        EXPECT_EQ(std::set<MacAddress>(got.begin(), got.end()), expected);
    }
}

TEST(Classify, ConfigFileResolvesRelativeTables) {
    support::TempDir dir;
    write_if_changed(dir / "oui.csv", "prefix,vendor,device_class\n02:1a:10,Intelbras,camera\n");
    write_if_changed(dir / "wattage.csv", "model,min_w,max_w\nVIP-1230-B,3.0,5.5\n");
    write_if_changed(dir / "classify_config.yml",
                     "overlay_vlan: 10\n"
                     "uplink_name_patterns: ['-core-', 'uplink']\n"
                     "oui_csv: oui.csv\n"
                     "wattage_csv: wattage.csv\n");
    auto c = load_classify_config(dir / "classify_config.yml");
    EXPECT_EQ(c.overlay_vlan, 10);
    EXPECT_TRUE(c.uplink_names.matches("x-core-y"));
    EXPECT_TRUE(c.uplink_names.matches("UPLINK-1"));
    EXPECT_TRUE(c.oui.lookup(mac("02:1a:10:00:00:01")));
    EXPECT_TRUE(c.wattage.find("VIP-1230-B"));

    write_if_changed(dir / "bad.yml", "uplink_name_patterns: ['(']\n");
    EXPECT_THROW(load_classify_config(dir / "bad.yml"), ConfigError);
    write_if_changed(dir / "all.yml", "overlay_vlan: all\n");
    EXPECT_FALSE(load_classify_config(dir / "all.yml").overlay_vlan);
}
