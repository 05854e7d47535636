#include <gtest/gtest.h>

#include "body/error.hpp"
#include "body/fsio.hpp"
#include "body/integrity.hpp"
#include "support.hpp"

using namespace body;

namespace {

MacAddress mac(const char* s) { return MacAddress::parse(s); }

Registry registry_of(std::initializer_list<const char*> macs) {
    Registry r;
    int i = 1;
    for (const auto* m : macs) {
        AssetRecord a;
        a.mac = mac(m);
        a.ip = Ipv4(0x0a000000u + static_cast<std::uint32_t>(i));
        a.hostname = "camp-g-inst-a-cam-bldb-flr0-" + std::to_string(i++);
        a.location = parse_hostname(a.hostname);
        r.insert(a);
    }
    return r;
}

HilCandidate candidate(std::optional<const char*> m, const std::string& sw, const std::string& port) {
    HilCandidate c;
    if (m) c.mac = mac(*m);
    c.parent_switch = sw;
    c.port = port;
    c.oui_prefix = c.mac ? "02:1a:10" : "";
    c.oui_vendor = c.mac ? "Intelbras" : "unknown";
    c.reason = c.mac ? HilReason::unregistered : HilReason::ambiguous_uplink;
    return c;
}

}  // namespace

TEST(Lease, TransitionTableRows) {
    for (const auto& row : support::lease_table()) {
        LeaseState s{mac("02:1a:10:00:00:01"), row.tier, row.counter, "t0", false};
        auto next = step_lease(s, row.event, "t1");
        EXPECT_EQ(next.tier, row.next_tier) << to_string(row.tier) << "/" << row.counter << " " << to_string(row.event);
        EXPECT_EQ(next.consecutive_renewals, row.next_counter);
        EXPECT_EQ(next.surveillance, row.surveillance);
        EXPECT_EQ(next.last_seen, row.event == LeaseEvent::renewed ? "t1" : "t0");
    }
}

TEST(Lease, ExhaustiveSixStepSequencesMatchOracle) {
    const LeaseEvent events[] = {LeaseEvent::renewed, LeaseEvent::absent, LeaseEvent::registered};
    std::size_t sequences = 0;
    for (int code = 0; code < 729; ++code) {
        LeaseState impl{mac("02:1a:10:00:00:01"), LeaseTier::H12, 0, "", false};
        LeaseState oracle = impl;
        int c = code;
        for (int step = 0; step < 6; ++step, c /= 3) {
            auto e = events[c % 3];
            auto now = "t" + std::to_string(step);
            impl = step_lease(impl, e, now);
            oracle = support::lease_oracle(oracle, e, now);
            ASSERT_EQ(impl, oracle) << "sequence " << code << " step " << step;
        }
        ++sequences;
    }
    EXPECT_EQ(sequences, 729u);
}

TEST(Lease, ThresholdControlsPromotion) {
    LeaseState s;
    for (int i = 0; i < 3; ++i) s = step_lease(s, LeaseEvent::renewed, "t", 3);
    EXPECT_EQ(s.tier, LeaseTier::H24);
    s = step_lease(s, LeaseEvent::renewed, "t", 1);
    EXPECT_EQ(s.tier, LeaseTier::H48);
}

TEST(Lease, UpdateAppliesOncePerObservation) {
    auto reg = registry_of({"02:1a:10:00:00:01", "02:1a:10:00:00:02"});
    LeaseStore store;
    auto u = update_leases(store, reg, {}, "scan-1");
    EXPECT_TRUE(u.applied);
    EXPECT_EQ(store.leases.size(), 2u);
    EXPECT_EQ(store.leases.at(mac("02:1a:10:00:00:01")).tier, LeaseTier::H12);

    std::set<MacAddress> seen{mac("02:1a:10:00:00:01")};
    u = update_leases(store, reg, seen, "scan-2");
    EXPECT_EQ(u.surveillance, std::vector<MacAddress>{mac("02:1a:10:00:00:02")});
    auto before = store;
    u = update_leases(store, reg, seen, "scan-2");
    EXPECT_FALSE(u.applied);
    EXPECT_EQ(store, before);

    update_leases(store, reg, seen, "scan-3");
    EXPECT_EQ(store.leases.at(mac("02:1a:10:00:00:01")).tier, LeaseTier::H24);
    EXPECT_EQ(store.leases.at(mac("02:1a:10:00:00:01")).last_seen, "scan-3");
    // Still absent: already flagged, not reported again.
    EXPECT_TRUE(update_leases(store, reg, seen, "scan-4").surveillance.empty());

    auto smaller = registry_of({"02:1a:10:00:00:01"});
    update_leases(store, smaller, seen, "scan-5");
    EXPECT_EQ(store.leases.size(), 1u);
}

TEST(Lease, StorePersistsAndRendersReservations) {
    auto reg = registry_of({"02:1a:10:00:00:01", "02:1a:10:00:00:02"});
    LeaseStore store;
    std::set<MacAddress> seen{mac("02:1a:10:00:00:01")};
    for (int i = 0; i < 8; ++i) update_leases(store, reg, seen, "scan-" + std::to_string(i));
    EXPECT_EQ(store.leases.at(mac("02:1a:10:00:00:01")).tier, LeaseTier::STABLE);

    support::TempDir dir;
    write_if_changed(dir / "leases.json", serialize_leases(store));
    EXPECT_EQ(load_leases(dir / "leases.json"), store);
    EXPECT_TRUE(load_leases(dir / "missing.json").leases.empty());

    auto conf = render_reservations(reg, store);
    EXPECT_NE(conf.find("dhcp-host=02:1a:10:00:00:01,10.0.0.1,camp-g-inst-a-cam-bldb-flr0-1,infinite"),
              std::string::npos);
    EXPECT_NE(conf.find("02:1a:10:00:00:02,10.0.0.2,camp-g-inst-a-cam-bldb-flr0-2,12h"), std::string::npos);
    EXPECT_EQ(std::count(conf.begin(), conf.end(), '\n'), 3);
}

TEST(Alerts, AppendDeduplicatesByMacAndReason) {
    support::TempDir dir;
    auto log = dir / "alerts.ndjson";
    std::vector<AlertRecord> first = {{"t1", mac("02:1a:10:00:00:01"), "registered_absent", "sw", "Gi1/0/1"},
                                      {"t1", mac("02:1a:10:00:00:01"), "registered_absent", "sw", "Gi1/0/1"},
                                      {"t1", mac("02:1a:10:00:00:02"), "unregistered", "sw", "Gi1/0/2"}};
    EXPECT_EQ(append_alerts(log, first), 2u);
    EXPECT_EQ(append_alerts(log, first), 0u);
    std::vector<AlertRecord> more = {{"t2", mac("02:1a:10:00:00:01"), "unregistered", "sw", "Gi1/0/1"}};
    EXPECT_EQ(append_alerts(log, more), 1u);
    auto all = read_alerts(log);
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(all[2].ts, "t2");
    EXPECT_EQ(all[0].switch_id, "sw");

    write_if_changed(log, "{\"ts\": 1}\n");
    EXPECT_THROW(read_alerts(log), MalformedLine);
}

TEST(Hil, CandidatesDeduplicatedAcrossSwitches) {
    SwitchClassification a, b;
    a.switch_id = "sw-b";
    a.hil_candidates = {candidate("02:1a:10:00:00:01", "sw-b", "3")};
    b.switch_id = "sw-a";
    b.hil_candidates = {candidate("02:1a:10:00:00:01", "sw-a", "Gi1/0/2"), candidate(std::nullopt, "sw-a", "1,2")};
    auto out = collect_hil_candidates({a, b});
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].parent_switch, "sw-a");
    EXPECT_EQ(out[0].port, "1,2");
    EXPECT_EQ(out[1].port, "Gi1/0/2");
    EXPECT_EQ(out[1].also_seen, std::vector<std::string>{"sw-b"});
}

TEST(Hil, SortOrderIsSwitchPortMac) {
    std::vector<HilCandidate> v = {candidate("02:1a:10:00:00:09", "sw-b", "Gi1/0/10"),
                                   candidate("02:1a:10:00:00:03", "sw-b", "Gi1/0/2"),
                                   candidate("02:1a:10:00:00:02", "sw-b", "Gi1/0/2"),
                                   candidate("02:1a:10:00:00:01", "sw-a", "Gi1/0/48")};
    sort_candidates(v);
    EXPECT_EQ(v[0].parent_switch, "sw-a");
    EXPECT_EQ(v[1].mac, mac("02:1a:10:00:00:02"));
    EXPECT_EQ(v[2].mac, mac("02:1a:10:00:00:03"));
    EXPECT_EQ(v[3].port, "Gi1/0/10");
}

TEST(Hil, JsonReportRoundTrips) {
    support::Gen g(9);
    for (int i = 0; i < 50; ++i) {
        std::vector<HilCandidate> v;
        int n = g.uniform(0, 12);
        for (int k = 0; k < n; ++k) {
            HilCandidate c;
            if (g.chance(0.9)) c.mac = support::random_mac(g, 0x021a10);
            c.oui_vendor = g.chance(0.5) ? "Intelbras" : "unknown";
            c.oui_prefix = c.mac ? "02:1a:10" : "";
            c.port = support::dialect_port(static_cast<Dialect>(g.uniform(0, 2)), g.uniform(1, 48));
            c.parent_switch = "sw-" + std::to_string(g.uniform(0, 3));
            if (g.chance(0.7)) c.floor_hint = g.uniform(0, 5);
            c.reason = static_cast<HilReason>(g.uniform(0, 2));
            if (g.chance(0.2)) c.also_seen = {"sw-9"};
            v.push_back(c);
        }
        auto text = hil_report(v, ReportFormat::json);
        auto back = parse_hil_report_json(text);
        sort_candidates(v);
        ASSERT_EQ(back, v);
        EXPECT_EQ(hil_report(back, ReportFormat::json), text);
    }
    EXPECT_THROW(parse_hil_report_json("{\"candidates\": [{}]}"), Error);
}

TEST(Hil, TextReport) {
    auto text = hil_report({candidate("02:1a:10:00:00:01", "sw-a", "Gi1/0/2")}, ReportFormat::text);
    EXPECT_NE(text.find("HIL candidates: 1"), std::string::npos);
    EXPECT_NE(text.find("02:1a:10:00:00:01"), std::string::npos);
    EXPECT_NE(text.find("reason unregistered"), std::string::npos);
    EXPECT_NE(hil_report({}, ReportFormat::text).find("no unresolved endpoints"), std::string::npos);
}
