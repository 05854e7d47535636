#include <gtest/gtest.h>

#include "body/error.hpp"
#include "body/fsio.hpp"
#include "body/topology.hpp"
#include "support.hpp"

using namespace body;

namespace {

const std::string kSw = "camp-g-inst-a-sw-bldb-flr0";

EndpointResolution resolved(const char* mac, const std::string& hostname, const std::string& port,
                            ResolutionStatus status) {
    EndpointResolution r;
    r.mac = MacAddress::parse(mac);
    r.port = port;
    r.status = status;
    AssetRecord a;
    a.mac = r.mac;
    a.ip = *Ipv4::parse("10.20.0.10");
    a.hostname = hostname;
    a.location = parse_hostname(hostname);
    a.model = "VIP-1230-B";
    r.identity = a;
    return r;
}

EndpointResolution hil(const char* mac, const std::string& port, ResolutionStatus status) {
    EndpointResolution r;
    r.mac = MacAddress::parse(mac);
    r.port = port;
    r.status = status;
    if (status == ResolutionStatus::UNREGISTERED_HIL) r.oui = OuiEntry{r.mac.oui(), "Intelbras", DeviceClass::camera};
    return r;
}

SwitchClassification sample() {
    SwitchClassification c;
    c.switch_id = kSw;
    c.uplink = UplinkDecision{"Gi1/0/24", Evidence::lldp_name};
    c.classifications = {{"Gi1/0/1", PortKind::CAMERA, {}, 1},
                         {"Gi1/0/2", PortKind::MINI_SWITCH_CASCADE, {}, 3},
                         {"Gi1/0/3", PortKind::SERVER, {}, 1},
                         {"Gi1/0/24", PortKind::UPLINK, {}, 40}};
    auto D = ResolutionStatus::RESOLVED_DIRECT_POE;
    auto N = ResolutionStatus::RESOLVED_NOT_POE;
    c.resolutions = {
        resolved("02:1a:10:00:00:01", "camp-g-inst-a-cam-bldb-flr0-01", "Gi1/0/1", D),
        resolved("02:1a:10:00:00:02", "camp-g-inst-a-cam-bldb-flr1-02", "Gi1/0/2", N),
        resolved("02:1a:10:00:00:03", "camp-g-inst-a-cam-bldb-flr1-03", "Gi1/0/2", N),
        resolved("02:1c:10:00:00:01", "camp-g-inst-a-srv-bldb-flr0-01", "Gi1/0/3", N),
        resolved("02:1d:10:00:00:01", "lobby-nvr", "Gi1/0/4", N),
        hil("02:1a:10:00:00:99", "Gi1/0/2", ResolutionStatus::UNREGISTERED_HIL),
        hil("02:ee:01:00:00:01", "Gi1/0/5", ResolutionStatus::UNKNOWN_HIL),
    };
    return c;
}

std::size_t leaves(const TopologyNode& n) {
    if (n.children.empty()) return 1;
    std::size_t k = 0;
    for (const auto& c : n.children) k += leaves(c);
    return k;
}

}  // namespace

TEST(Topology, SwitchTreeGroupsByFloorAndCascade) {
    auto t = build_switch_tree(sample());
    EXPECT_EQ(t.id, kSw);
    EXPECT_EQ(t.kind, NodeKind::access_switch);
    EXPECT_EQ(t.metadata.campus, "g");

    const auto* flr0 = t.find(floor_group_id(kSw, "bldb-flr0"));
    ASSERT_TRUE(flr0);
    EXPECT_EQ(flr0->kind, NodeKind::floor_group);
    EXPECT_EQ(flr0->label, "bldb-flr0");
    ASSERT_EQ(flr0->children.size(), 1u);
    EXPECT_EQ(flr0->children[0].id, "camp-g-inst-a-cam-bldb-flr0-01");
    EXPECT_EQ(flr0->children[0].metadata.port, "Gi1/0/1");
    EXPECT_EQ(flr0->children[0].metadata.ip, "10.20.0.10");

    auto flr1 = floor_group_id(kSw, "bldb-flr1");
    const auto* mini = t.find(mini_switch_id(flr1, "Gi1/0/2"));
    ASSERT_TRUE(mini);
    EXPECT_EQ(mini->kind, NodeKind::mini_switch);
    EXPECT_EQ(mini->children.size(), 2u);

    EXPECT_EQ(t.find("camp-g-inst-a-srv-bldb-flr0-01")->kind, NodeKind::server);
    const auto* nvr = t.find("lobby-nvr");
    ASSERT_TRUE(nvr);
    EXPECT_EQ(nvr->kind, NodeKind::camera);

    const auto* others = t.find(quarantine_id(kSw));
    ASSERT_TRUE(others);
    EXPECT_EQ(others->kind, NodeKind::quarantine_block);
    ASSERT_EQ(others->children.size(), 2u);
    const auto* unreg = t.find(unresolved_id(MacAddress::parse("02:1a:10:00:00:99")));
    ASSERT_TRUE(unreg);
    EXPECT_EQ(unreg->metadata.oui_vendor, "Intelbras");
    EXPECT_EQ(unreg->metadata.parent_switch, kSw);
    EXPECT_EQ(t.find(unresolved_id(MacAddress::parse("02:ee:01:00:00:01")))->metadata.oui_vendor, "unknown");

    EXPECT_EQ(leaves(t), 7u);
    auto copy = t;
    copy.normalize();
    EXPECT_EQ(copy, t);
}

TEST(Topology, RootKindFollowsTier) {
    auto t = build_switch_tree(sample(), NodeKind::distribution_switch);
    EXPECT_EQ(t.kind, NodeKind::distribution_switch);
}

TEST(Topology, DuplicateHostnamesGetMacSuffix) {
    auto c = sample();
    c.resolutions.push_back(
        resolved("02:1a:10:00:00:05", "camp-g-inst-a-cam-bldb-flr0-01", "Gi1/0/6", ResolutionStatus::RESOLVED_NOT_POE));
    auto t = build_switch_tree(c);
    EXPECT_TRUE(t.find("camp-g-inst-a-cam-bldb-flr0-01"));
    EXPECT_TRUE(t.find("camp-g-inst-a-cam-bldb-flr0-01@021a10000005"));
}

TEST(Topology, JsonRoundTrip) {
    support::Gen g(5);
    for (int i = 0; i < 100; ++i) {
        auto t = support::random_tree(g);
        t.metadata.stream_count = i;
        t.metadata.mac = "02:1a:10:00:00:01";
        EXPECT_EQ(tree_from_json(to_json(t)), t);
    }
    EXPECT_EQ(node_kind_from_string("floor_group"), NodeKind::floor_group);
    EXPECT_FALSE(node_kind_from_string("gateway"));
}

TEST(Topology, PersistIsIdempotentAndPrunes) {
    support::TempDir state;
    auto t = build_switch_tree(sample());
    auto first = persist_tree(t, "g", state.path());
    auto dir = switch_tree_dir(state.path(), "g", kSw);
    EXPECT_TRUE(std::filesystem::is_regular_file(dir / "_tree.json"));
    EXPECT_TRUE(std::filesystem::is_regular_file(dir / "bldb-flr0" / "camp-g-inst-a-cam-bldb-flr0-01.json"));
    EXPECT_TRUE(std::filesystem::is_regular_file(dir / "bldb-flr1" / "mini-Gi1_0_2" /
                                                 "camp-g-inst-a-cam-bldb-flr1-02.json"));
    EXPECT_TRUE(std::filesystem::is_regular_file(dir / "others" / "mac-021a10000099.json"));
    EXPECT_EQ(first.files_written, 8u);
    EXPECT_EQ(load_tree(dir / "_tree.json"), t);

    auto before = support::snapshot_tree(state.path());
    auto again = persist_tree(t, "g", state.path());
    EXPECT_EQ(again.files_written, 0u);
    EXPECT_EQ(again.files_removed, 0u);
    EXPECT_EQ(support::snapshot_tree(state.path()), before);

    auto c = sample();
    c.resolutions.erase(c.resolutions.begin() + 1, c.resolutions.begin() + 3);
    auto smaller = persist_tree(build_switch_tree(c), "g", state.path());
    EXPECT_EQ(smaller.files_removed, 2u);
    EXPECT_FALSE(std::filesystem::exists(dir / "bldb-flr1"));
}

TEST(Topology, ServerGraphHangsServersOffTheirSwitch) {
    TopoMap topo({Campus{"g", {DistributionSwitch{"camp-g-inst-dti-sw-blda-flr0", {kSw}}}},
                  Campus{"p", {DistributionSwitch{"camp-p-inst-dti-sw-blda-flr0", {}}}}},
                 {{"srv-g-01", "g", "camp-g-inst-dti-sw-blda-flr0"}, {"srv-g-02", "g", kSw},
                  {"srv-p-01", "p", "camp-p-inst-dti-sw-blda-flr0"}});
    ServerMetadata meta{{"srv-g-01", {120, std::string("10.250.0.10"), std::string("R740")}}};
    auto g = build_server_graph(topo, meta);
    EXPECT_EQ(g.id, "core");
    ASSERT_EQ(g.children.size(), 2u);
    EXPECT_EQ(g.children[0].id, "campus-g");
    const auto* s1 = g.find("srv-g-01");
    ASSERT_TRUE(s1);
    EXPECT_EQ(s1->metadata.stream_count, 120);
    EXPECT_EQ(s1->metadata.ip, "10.250.0.10");
    EXPECT_EQ(g.find("srv-g-02")->metadata.stream_count, 0);
    EXPECT_TRUE(g.find(kSw)->find("srv-g-02"));
    EXPECT_EQ(g.size(), 9u);

    support::TempDir state;
    persist_server_graph(g, state.path());
    EXPECT_EQ(load_tree(server_tree_path(state.path())), g);
}

TEST(Topology, ServerMetadataRoundTrip) {
    ServerMetadata meta{{"a", {3, std::nullopt, std::string("X")}}, {"b", {0, std::string("10.0.0.1"), std::nullopt}}};
    auto back = parse_server_metadata(render_server_metadata(meta));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back["a"].stream_count, 3);
    EXPECT_EQ(back["a"].model, "X");
    EXPECT_EQ(back["b"].ip, "10.0.0.1");
    EXPECT_THROW(parse_server_metadata("servers: [1, 2]\n"), ConfigError);
}

TEST(Topology, SanitizeKeepsPathsInside) {
    EXPECT_EQ(sanitize_name("Gi1/0/2"), "Gi1_0_2");
    EXPECT_EQ(sanitize_name(".."), "_..");
    EXPECT_EQ(sanitize_name(""), "_");
    EXPECT_EQ(sanitize_name("a@b.c"), "a@b.c");
}
