#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "body/classify.hpp"
#include "body/registry.hpp"

namespace body {

enum class LeaseEvent { renewed, absent, registered };
std::string_view to_string(LeaseEvent e);

struct LeaseState {
    MacAddress mac;
    LeaseTier tier = LeaseTier::H12;
    int consecutive_renewals = 0;
    std::string last_seen;
    bool surveillance = false;

    bool operator==(const LeaseState&) const = default;
};

constexpr int kDefaultPromotionThreshold = 2;

// Lease tier state machine. `threshold` consecutive renewals promote one
// tier; absence below STABLE raises the surveillance flag; registration
// restarts at H12.
LeaseState step_lease(LeaseState state, LeaseEvent event, std::string_view now = {},
                      int threshold = kDefaultPromotionThreshold);

struct LeaseStore {
    std::map<MacAddress, LeaseState> leases;
    std::string last_scan;  // observation time of the last applied scan

    bool operator==(const LeaseStore&) const = default;
};

LeaseStore load_leases(const std::filesystem::path& path);  // empty store when missing
std::string serialize_leases(const LeaseStore& store);

struct LeaseUpdate {
    bool applied = false;                  // false when `observed_at` was already applied
    std::vector<MacAddress> surveillance;  // registered MACs newly flagged this scan
};

// Registered MACs seen in the scan renew, the rest are absent. New registry
// entries start at H12 and MACs dropped from the registry are forgotten.
LeaseUpdate update_leases(LeaseStore& store, const Registry& registry, const std::set<MacAddress>& visible,
                          const std::string& observed_at, int threshold = kDefaultPromotionThreshold);

// dnsmasq reservations for every registered asset at its current tier.
// Unregistered MACs get no line, which denies them an address.
std::string render_reservations(const Registry& registry, const LeaseStore& store);

struct AlertRecord {
    std::string ts;
    MacAddress mac;
    std::string reason;
    std::string switch_id;
    std::string port;
};

// Appends records whose (mac, reason) is not yet in the log. Returns the
// number appended.
std::size_t append_alerts(const std::filesystem::path& log, const std::vector<AlertRecord>& records);
std::vector<AlertRecord> read_alerts(const std::filesystem::path& log);

// HIL candidates across switches, deduplicated by MAC: the first switch in
// id order keeps the candidate and later ones are listed in also_seen.
std::vector<HilCandidate> collect_hil_candidates(const std::vector<SwitchClassification>& switches);

std::vector<HilCandidate> scan_unregistered(const std::vector<SwitchProfile>& profiles, const Registry& registry,
                                            const TopoMap& topo, const ClassifyConfig& config);

// Orders by (parent_switch, port, mac).
void sort_candidates(std::vector<HilCandidate>& candidates);

enum class ReportFormat { text, json };

std::string hil_report(std::vector<HilCandidate> candidates, ReportFormat format);
std::vector<HilCandidate> parse_hil_report_json(std::string_view text);

}  // namespace body
