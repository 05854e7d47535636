#include "body/integrity.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

using nlohmann::json;

std::string_view to_string(LeaseEvent e) {
    switch (e) {
        case LeaseEvent::renewed: return "renewed";
        case LeaseEvent::absent: return "absent";
        case LeaseEvent::registered: return "registered";
    }
    return "renewed";
}

LeaseState step_lease(LeaseState state, LeaseEvent event, std::string_view now, int threshold) {
    switch (event) {
        case LeaseEvent::renewed:
            state.surveillance = false;
            if (!now.empty()) state.last_seen = std::string(now);
            if (state.tier == LeaseTier::STABLE) break;
            if (++state.consecutive_renewals >= threshold) {
                state.tier = static_cast<LeaseTier>(static_cast<int>(state.tier) + 1);
                state.consecutive_renewals = 0;
            }
            break;
        case LeaseEvent::absent:
            state.consecutive_renewals = 0;
            state.surveillance = state.tier != LeaseTier::STABLE;
            break;
        case LeaseEvent::registered:
            state.tier = LeaseTier::H12;
            state.consecutive_renewals = 0;
            state.surveillance = false;
            break;
    }
    return state;
}

LeaseStore load_leases(const std::filesystem::path& path) {
    LeaseStore store;
    if (!std::filesystem::is_regular_file(path)) return store;
    try {
        auto j = json::parse(read_file(path));
        store.last_scan = j.at("last_scan").get<std::string>();
        for (const auto& e : j.at("leases")) {
            LeaseState s;
            s.mac = MacAddress::parse(e.at("mac").get<std::string>());
            auto tier = lease_tier_from_string(e.at("tier").get<std::string>());
            if (!tier) throw Error(path.string() + ": unknown lease tier");
            s.tier = *tier;
            s.consecutive_renewals = e.at("consecutive_renewals").get<int>();
            s.last_seen = e.at("last_seen").get<std::string>();
            s.surveillance = e.at("surveillance").get<bool>();
            store.leases.emplace(s.mac, s);
        }
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    return store;
}

std::string serialize_leases(const LeaseStore& store) {
    json leases = json::array();
    for (const auto& [mac, s] : store.leases)
        leases.push_back({{"mac", mac.str()},
                          {"tier", to_string(s.tier)},
                          {"consecutive_renewals", s.consecutive_renewals},
                          {"last_seen", s.last_seen},
                          {"surveillance", s.surveillance}});
    return canonical_json({{"last_scan", store.last_scan}, {"leases", leases}});
}

LeaseUpdate update_leases(LeaseStore& store, const Registry& registry, const std::set<MacAddress>& visible,
                          const std::string& observed_at, int threshold) {
    LeaseUpdate update;
    if (!store.last_scan.empty() && store.last_scan == observed_at) return update;
    update.applied = true;
    for (auto it = store.leases.begin(); it != store.leases.end();) {
        if (!registry.lookup(it->first)) it = store.leases.erase(it);
        else ++it;
    }
    for (const auto* rec : registry.records()) {
        auto it = store.leases.find(rec->mac);
        if (it == store.leases.end()) {
            LeaseState fresh;
            fresh.mac = rec->mac;
            store.leases.emplace(rec->mac, step_lease(fresh, LeaseEvent::registered));
            continue;
        }
        bool was_flagged = it->second.surveillance;
        auto event = visible.count(rec->mac) ? LeaseEvent::renewed : LeaseEvent::absent;
        it->second = step_lease(it->second, event, observed_at, threshold);
        if (it->second.surveillance && !was_flagged) update.surveillance.push_back(rec->mac);
    }
    store.last_scan = observed_at;
    return update;
}

std::string render_reservations(const Registry& registry, const LeaseStore& store) {
    std::string out = "# static reservations; MACs without a line are denied an address\n";
    for (const auto* rec : registry.records()) {
        auto it = store.leases.find(rec->mac);
        auto tier = it == store.leases.end() ? LeaseTier::H12 : it->second.tier;
        out += render_dhcp_line(*rec, tier) + "\n";
    }
    return out;
}

namespace {

json alert_json(const AlertRecord& a) {
    return {{"ts", a.ts}, {"mac", a.mac.str()}, {"reason", a.reason}, {"switch", a.switch_id}, {"port", a.port}};
}

}  // namespace

std::vector<AlertRecord> read_alerts(const std::filesystem::path& log) {
    std::vector<AlertRecord> out;
    if (!std::filesystem::is_regular_file(log)) return out;
    std::istringstream in(read_file(log));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            auto j = json::parse(line);
            out.push_back({j.at("ts").get<std::string>(), MacAddress::parse(j.at("mac").get<std::string>()),
                           j.at("reason").get<std::string>(), j.at("switch").get<std::string>(),
                           j.at("port").get<std::string>()});
        } catch (const json::exception& e) {
            throw MalformedLine(log.string(), line_no, e.what());
        }
    }
    return out;
}

std::size_t append_alerts(const std::filesystem::path& log, const std::vector<AlertRecord>& records) {
    std::set<std::pair<MacAddress, std::string>> known;
    for (const auto& a : read_alerts(log)) known.emplace(a.mac, a.reason);
    std::string text;
    std::size_t n = 0;
    for (const auto& a : records) {
        if (!known.emplace(a.mac, a.reason).second) continue;
        text += alert_json(a).dump() + "\n";
        ++n;
    }
    if (n == 0) return 0;
    if (log.has_parent_path()) std::filesystem::create_directories(log.parent_path());
    std::ofstream out(log, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot append to " + log.string());
    out << text;
    return n;
}

std::vector<HilCandidate> collect_hil_candidates(const std::vector<SwitchClassification>& switches) {
    std::vector<const SwitchClassification*> ordered;
    for (const auto& s : switches) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->switch_id < b->switch_id; });
    std::vector<HilCandidate> out;
    std::map<MacAddress, std::size_t> by_mac;
    for (const auto* s : ordered) {
        for (const auto& c : s->hil_candidates) {
            if (!c.mac) {
                out.push_back(c);
                continue;
            }
            auto [it, fresh] = by_mac.emplace(*c.mac, out.size());
            if (fresh) {
                out.push_back(c);
            } else {
                auto& also = out[it->second].also_seen;
                if (std::find(also.begin(), also.end(), c.parent_switch) == also.end()) also.push_back(c.parent_switch);
            }
        }
    }
    sort_candidates(out);
    return out;
}

std::vector<HilCandidate> scan_unregistered(const std::vector<SwitchProfile>& profiles, const Registry& registry,
                                            const TopoMap& topo, const ClassifyConfig& config) {
    std::vector<SwitchClassification> switches;
    switches.reserve(profiles.size());
    for (const auto& p : profiles) switches.push_back(classify_switch(p, registry, topo, config));
    return collect_hil_candidates(switches);
}

void sort_candidates(std::vector<HilCandidate>& candidates) {
    std::stable_sort(candidates.begin(), candidates.end(), [](const HilCandidate& a, const HilCandidate& b) {
        if (a.parent_switch != b.parent_switch) return a.parent_switch < b.parent_switch;
        if (a.port != b.port) return port_less(a.port, b.port);
        return a.mac < b.mac;
    });
}

namespace {

json candidate_json(const HilCandidate& c) {
    return {{"mac", c.mac ? json(c.mac->str()) : json(nullptr)},
            {"oui_vendor", c.oui_vendor},
            {"oui_prefix", c.oui_prefix},
            {"port", c.port},
            {"parent_switch", c.parent_switch},
            {"floor_hint", c.floor_hint ? json(*c.floor_hint) : json(nullptr)},
            {"reason", to_string(c.reason)},
            {"also_seen", c.also_seen}};
}

}  // namespace

std::string hil_report(std::vector<HilCandidate> candidates, ReportFormat format) {
    sort_candidates(candidates);
    if (format == ReportFormat::json) {
        json list = json::array();
        for (const auto& c : candidates) list.push_back(candidate_json(c));
        return canonical_json({{"count", candidates.size()}, {"candidates", list}});
    }
    std::ostringstream out;
    out << "HIL candidates: " << candidates.size() << "\n";
    if (candidates.empty()) {
        out << "no unresolved endpoints\n";
        return out.str();
    }
    for (const auto& c : candidates) {
        out << "- " << (c.mac ? c.mac->str() : std::string("(uplink)")) << "  switch " << c.parent_switch << "  port "
            << c.port << "  vendor " << c.oui_vendor;
        if (!c.oui_prefix.empty()) out << " (" << c.oui_prefix << ")";
        out << "  floor " << (c.floor_hint ? std::to_string(*c.floor_hint) : std::string("?")) << "  reason "
            << to_string(c.reason);
        if (!c.also_seen.empty()) {
            out << "  also seen on";
            for (const auto& s : c.also_seen) out << " " << s;
        }
        out << "\n";
    }
    return out.str();
}

std::vector<HilCandidate> parse_hil_report_json(std::string_view text) {
    std::vector<HilCandidate> out;
    try {
        auto j = json::parse(text);
        for (const auto& e : j.at("candidates")) {
            HilCandidate c;
            if (!e.at("mac").is_null()) c.mac = MacAddress::parse(e.at("mac").get<std::string>());
            c.oui_vendor = e.at("oui_vendor").get<std::string>();
            c.oui_prefix = e.at("oui_prefix").get<std::string>();
            c.port = e.at("port").get<std::string>();
            c.parent_switch = e.at("parent_switch").get<std::string>();
            if (!e.at("floor_hint").is_null()) c.floor_hint = e.at("floor_hint").get<int>();
            auto reason = hil_reason_from_string(e.at("reason").get<std::string>());
            if (!reason) throw Error("unknown HIL reason in report");
            c.reason = *reason;
            c.also_seen = e.at("also_seen").get<std::vector<std::string>>();
            out.push_back(std::move(c));
        }
    } catch (const json::exception& e) {
        throw Error(std::string("HIL report JSON does not match schema: ") + e.what());
    }
    return out;
}

}  // namespace body
