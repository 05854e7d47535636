#include "body/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <future>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "body/fsio.hpp"
#include "body/view.hpp"

namespace body {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kUnmappedCampus = "_unmapped";

template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError& e) {
        throw StageError(name, e, true);
    } catch (const YAML::Exception& e) {
        throw StageError(name, e, true);
    } catch (const std::exception& e) {
        throw StageError(name, e, false);
    }
}

bool is_url(const std::string& s) { return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0; }

void copy_if_present(const fs::path& from, const fs::path& to) {
    if (fs::is_regular_file(from)) write_if_changed(to, read_file(from));
    else if (fs::exists(to)) fs::remove(to);
}

}  // namespace

std::string read_feed_file(const std::string& source) {
    if (is_url(source)) throw ConfigError("no HTTP client configured for feed " + source);
    return read_file(source);
}

fs::path sources_dir(const fs::path& state_dir) { return state_dir / "sources"; }
fs::path views_dir(const fs::path& state_dir) { return state_dir / "views"; }
fs::path leases_path(const fs::path& state_dir) { return state_dir / "leases.json"; }
fs::path alerts_path(const fs::path& state_dir) { return state_dir / "alerts.ndjson"; }
fs::path reservations_path(const fs::path& state_dir) { return state_dir / "dnsmasq_reservations.conf"; }
fs::path hil_report_path(const fs::path& state_dir) { return state_dir / "hil_report.json"; }
fs::path onboard_path(const fs::path& state_dir) { return state_dir / "_onboard.json"; }

PipelineConfig validate_config(PipelineConfig config) {
    config.state_dir = fs::absolute(config.state_dir).lexically_normal();
    if (fs::exists(config.state_dir) && !fs::is_directory(config.state_dir))
        throw ConfigError("state dir is not a directory: " + config.state_dir.string());
    if (config.fixtures_dir) {
        config.fixtures_dir = fs::absolute(*config.fixtures_dir).lexically_normal();
        if (!fs::is_regular_file(*config.fixtures_dir / "topo_map.yml"))
            throw ConfigError("fixtures dir has no topo_map.yml: " + config.fixtures_dir->string());
        if (!config.classify_config) {
            auto default_config = *config.fixtures_dir / "classify_config.yml";
            if (!fs::is_regular_file(default_config))
                throw ConfigError("no classify config given and none in " + config.fixtures_dir->string());
            config.classify_config = default_config;
        }
    } else if (!fs::is_regular_file(sources_dir(config.state_dir) / "topo_map.yml")) {
        throw ConfigError("state dir " + config.state_dir.string() + " holds no collected sources; pass --fixtures");
    }
    if (config.classify_config) {
        config.classify_config = fs::absolute(*config.classify_config).lexically_normal();
        if (!fs::is_regular_file(*config.classify_config))
            throw ConfigError("classify config not found: " + config.classify_config->string());
    }
    for (auto& feed : config.feeds) {
        if (is_url(feed)) continue;
        feed = fs::absolute(feed).lexically_normal().string();
        if (!fs::is_regular_file(feed)) throw ConfigError("verdict feed not found: " + feed);
    }
    if (config.promotion_threshold < 1) throw ConfigError("promotion threshold must be at least 1");
    return config;
}

std::string render_classify_config(const ClassifyConfig& config) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "overlay_vlan";
    if (config.overlay_vlan) out << YAML::Value << *config.overlay_vlan;
    else out << YAML::Value << "all";
    out << YAML::Key << "uplink_name_patterns" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : config.uplink_names.patterns()) out << YAML::DoubleQuoted << p;
    out << YAML::EndSeq;
    out << YAML::Key << "cascade_name_patterns" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& p : config.cascade_names.patterns()) out << YAML::DoubleQuoted << p;
    out << YAML::EndSeq;
    out << YAML::Key << "oui_csv" << YAML::Value << "oui.csv";
    out << YAML::Key << "wattage_csv" << YAML::Value << "wattage.csv";
    out << YAML::Key << "hostname_pattern" << YAML::Value << "hostname_pattern.txt";
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void snapshot_sources(const fs::path& corpus, const fs::path& classify_config, const fs::path& state_dir) {
    auto dir = sources_dir(state_dir);
    fs::create_directories(dir);
    load_topo_map(corpus / "topo_map.yml");
    write_if_changed(dir / "topo_map.yml", read_file(corpus / "topo_map.yml"));
    copy_if_present(corpus / "dnsmasq.conf", dir / "dnsmasq.conf");
    copy_if_present(corpus / "assets.csv", dir / "assets.csv");
    copy_if_present(corpus / "servers.yml", dir / "servers.yml");

    auto config = load_classify_config(classify_config);
    write_if_changed(dir / "oui.csv", config.oui.render_csv());
    write_if_changed(dir / "wattage.csv", config.wattage.render_csv());
    write_if_changed(dir / "hostname_pattern.txt", config.grammar.template_string() + "\n");
    write_if_changed(dir / "classify_config.yml", render_classify_config(config));

    auto feeds = dir / "feeds";
    std::set<std::string> wanted;
    for (const auto& entry : fs::directory_iterator(corpus)) {
        auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("verdicts", 0) == 0 && entry.path().extension() == ".json") {
            write_if_changed(feeds / name, read_file(entry.path()));
            wanted.insert(name);
        }
    }
    if (fs::is_directory(feeds))
        for (const auto& entry : fs::directory_iterator(feeds))
            if (!wanted.count(entry.path().filename().string())) fs::remove(entry.path());
}

std::map<std::string, std::string, std::less<>> load_uplink_overrides(const fs::path& state_dir) {
    std::map<std::string, std::string, std::less<>> out;
    auto path = onboard_path(state_dir);
    if (!fs::is_regular_file(path)) return out;
    try {
        auto j = json::parse(read_file(path));
        for (const auto& [id, port] : j.at("uplinks").items()) out.emplace(id, port.get<std::string>());
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return out;
}

void save_uplink_override(const fs::path& state_dir, const std::string& switch_id, const std::string& port) {
    auto overrides = load_uplink_overrides(state_dir);
    overrides[switch_id] = port;
    json uplinks = json::object();
    for (const auto& [id, p] : overrides) uplinks[id] = p;
    fs::create_directories(state_dir);
    write_if_changed(onboard_path(state_dir), canonical_json({{"uplinks", uplinks}}));
}

Sources load_sources(const fs::path& state_dir, const std::optional<fs::path>& classify_config) {
    auto dir = sources_dir(state_dir);
    Sources s;
    s.topo = load_topo_map(dir / "topo_map.yml");
    s.config = load_classify_config(classify_config.value_or(dir / "classify_config.yml"));
    auto dhcp = dir / "dnsmasq.conf";
    auto csv = dir / "assets.csv";
    s.registry = load_registry(fs::is_regular_file(dhcp) ? dhcp : fs::path(), fs::is_regular_file(csv) ? csv : fs::path(),
                               s.config.grammar);
    if (fs::is_regular_file(dir / "servers.yml")) s.servers = load_server_metadata(dir / "servers.yml");
    s.config.uplink_overrides = load_uplink_overrides(state_dir);
    return s;
}

CollectSummary collect_stage(const PipelineConfig& config) {
    if (!config.fixtures_dir) throw ConfigError("collect needs a fixtures dir");
    const auto& corpus = *config.fixtures_dir;
    snapshot_sources(corpus, config.classify_config.value_or(corpus / "classify_config.yml"), config.state_dir);

    auto topo = load_topo_map(corpus / "topo_map.yml");
    std::set<std::string> ids;
    for (const auto& id : topo.switch_ids()) ids.insert(id);
    for (const auto& id : list_fixture_switches(corpus)) ids.insert(id);
    if (config.switch_scope) {
        if (!ids.count(*config.switch_scope)) throw ConfigError("unknown switch: " + *config.switch_scope);
        ids = {*config.switch_scope};
    }

    ProfileStore store(config.state_dir);
    CollectSummary summary;
    for (const auto& id : ids) {
        std::optional<Dialect> dialect;
        if (fs::is_regular_file(corpus / id / "meta.yml")) dialect = read_fixture_meta(corpus / id).dialect;
        else if (store.contains(id)) dialect = store.load(id).vendor_dialect;
        if (!dialect) throw TransportUnavailable(id, "no recorded session and no persisted profile");
        ReplayTransport transport(corpus);
        auto result = collect_switch(id, *dialect, transport, store, config.clock);
        summary.collected.push_back(id);
        if (result.stale) summary.stale.push_back(id);
        summary.reports.emplace(id, std::move(result.report));
    }
    if (!config.switch_scope) {
        for (const auto& id : store.list())
            if (!ids.count(id)) fs::remove_all(store.path_for(id).parent_path());
    }
    return summary;
}

Analysis analyze(const Sources& sources, const fs::path& state_dir, const std::optional<std::string>& scope) {
    ProfileStore store(state_dir);
    Analysis a;
    std::vector<std::string> ids;
    if (scope) ids.push_back(*scope);
    else ids = store.list();
    for (const auto& id : ids) a.profiles.push_back(store.load(id));

    std::vector<std::future<SwitchClassification>> tasks;
    tasks.reserve(a.profiles.size());
    for (const auto& p : a.profiles)
        tasks.push_back(std::async(std::launch::async, [&sources, &p] {
            return classify_switch(p, sources.registry, sources.topo, sources.config);
        }));
    for (auto& t : tasks) a.classifications.push_back(t.get());

    a.hil = collect_hil_candidates(a.classifications);
    for (const auto& p : a.profiles) a.observed_at = std::max(a.observed_at, p.collected_at);
    return a;
}

std::string campus_of(const TopoMap& topo, const std::string& switch_id) {
    const auto* placement = topo.find_switch(switch_id);
    return placement ? placement->campus_id : kUnmappedCampus;
}

std::map<std::string, TopologyNode> build_trees(const Analysis& analysis, const Sources& sources) {
    std::map<std::string, TopologyNode> trees;
    for (const auto& c : analysis.classifications) {
        auto tier = sources.topo.tier_of(c.switch_id);
        auto kind = tier == Tier::distribution ? NodeKind::distribution_switch : NodeKind::access_switch;
        trees.emplace(c.switch_id, build_switch_tree(c, kind, sources.config.grammar));
    }
    return trees;
}

PersistStats build_stage(const std::map<std::string, TopologyNode>& trees, const Sources& sources,
                         const fs::path& state_dir, bool full) {
    PersistStats stats;
    std::set<fs::path> kept;
    for (const auto& [id, tree] : trees) {
        auto campus = campus_of(sources.topo, id);
        stats += persist_tree(tree, campus, state_dir);
        kept.insert(switch_tree_dir(state_dir, campus, id));
    }
    if (!full) return stats;
    stats += persist_server_graph(build_server_graph(sources.topo, sources.servers), state_dir);

    auto root = state_dir / "topology";
    for (const auto& campus : fs::directory_iterator(root)) {
        if (!campus.is_directory() || campus.path().filename() == "_srv") continue;
        for (const auto& sw : fs::directory_iterator(campus.path())) {
            if (kept.count(sw.path())) continue;
            stats.files_removed += static_cast<std::size_t>(fs::remove_all(sw.path()));
        }
        if (fs::is_empty(campus.path())) fs::remove(campus.path());
    }
    return stats;
}

VerdictFeed load_feeds(const PipelineConfig& config) {
    std::vector<std::string> feeds = config.feeds;
    if (feeds.empty()) {
        auto dir = sources_dir(config.state_dir) / "feeds";
        if (fs::is_directory(dir))
            for (const auto& entry : fs::directory_iterator(dir))
                if (entry.is_regular_file()) feeds.push_back(entry.path().string());
        std::sort(feeds.begin(), feeds.end());
    }
    VerdictFeed merged;
    for (const auto& source : feeds) {
        for (const auto& [host, level] : parse_verdict_feed(config.feed_loader(source))) {
            auto [it, fresh] = merged.emplace(host, level);
            if (!fresh) it->second = std::max(it->second, level);
        }
    }
    return merged;
}

namespace {

void collect_ids(const TopologyNode& n, std::set<std::string, std::less<>>& out) {
    out.insert(n.id);
    for (const auto& c : n.children) collect_ids(c, out);
}

}  // namespace

ColorSummary color_stage(const Sources& sources, const VerdictFeed& feed, const fs::path& state_dir,
                         const std::optional<std::string>& scope) {
    std::vector<fs::path> tree_files;
    auto root = state_dir / "topology";
    if (scope) {
        auto path = switch_tree_dir(state_dir, campus_of(sources.topo, *scope), *scope) / "_tree.json";
        if (!fs::is_regular_file(path)) throw MissingProfile(*scope);
        tree_files.push_back(path);
    } else if (fs::is_directory(root)) {
        for (const auto& campus : fs::directory_iterator(root)) {
            if (!campus.is_directory() || campus.path().filename() == "_srv") continue;
            for (const auto& sw : fs::directory_iterator(campus.path()))
                if (fs::is_regular_file(sw.path() / "_tree.json")) tree_files.push_back(sw.path() / "_tree.json");
        }
        std::sort(tree_files.begin(), tree_files.end());
    }

    auto out_dir = views_dir(state_dir);
    fs::create_directories(out_dir);
    ColorSummary summary;
    std::set<std::string, std::less<>> seen_ids;
    std::set<std::string> written;
    for (const auto& path : tree_files) {
        auto tree = load_tree(path);
        collect_ids(tree, seen_ids);
        auto coloring = propagate_colors(tree, feed);
        auto file = switch_view_file(tree.id);
        write_if_changed(out_dir / file, canonical_json(export_view(tree, coloring, ViewKind::switch_)));
        written.insert(file);
        ++summary.views_written;
    }
    if (!scope) {
        auto srv_path = server_tree_path(state_dir);
        auto tree = fs::is_regular_file(srv_path) ? load_tree(srv_path) : build_server_graph(sources.topo, sources.servers);
        collect_ids(tree, seen_ids);
        auto coloring = propagate_colors(tree, feed);
        write_if_changed(out_dir / server_view_file(),
                         canonical_json(export_view(tree, coloring, ViewKind::server, CampusPalette(sources.topo))));
        written.insert(server_view_file());
        ++summary.views_written;
        for (const auto& entry : fs::directory_iterator(out_dir))
            if (!written.count(entry.path().filename().string())) fs::remove(entry.path());
        for (const auto& [host, level] : feed)
            if (!seen_ids.count(host)) summary.unmatched.push_back(host);
    }
    return summary;
}

IntegritySummary integrity_stage(const Analysis& analysis, const Sources& sources, const fs::path& state_dir,
                                 int threshold, bool full) {
    IntegritySummary summary;
    std::vector<AlertRecord> alerts;
    for (const auto& c : analysis.hil)
        if (c.mac) alerts.push_back({analysis.observed_at, *c.mac, std::string(to_string(c.reason)), c.parent_switch, c.port});

    if (full) {
        std::set<MacAddress> visible;
        for (const auto& p : analysis.profiles)
            for (const auto& e : p.mac_table) visible.insert(e.mac);
        auto store = load_leases(leases_path(state_dir));
        auto update = update_leases(store, sources.registry, visible, analysis.observed_at, threshold);
        summary.leases_applied = update.applied;
        summary.surveillance = update.surveillance;
        for (const auto& mac : update.surveillance) {
            const auto* rec = sources.registry.lookup(mac);
            alerts.push_back({analysis.observed_at, mac, "registered_absent", "", rec ? rec->hostname : ""});
        }
        write_if_changed(leases_path(state_dir), serialize_leases(store));
        write_if_changed(reservations_path(state_dir), render_reservations(sources.registry, store));
        write_if_changed(hil_report_path(state_dir), hil_report(analysis.hil, ReportFormat::json));
    }
    summary.alerts_appended = append_alerts(alerts_path(state_dir), alerts);
    return summary;
}

double truncated_percent(std::size_t part, std::size_t whole) {
    if (whole == 0) return 100.0;
    return static_cast<double>(part * 10000 / whole) / 100.0;
}

std::size_t RunSummary::count(ResolutionStatus s) const {
    auto it = statuses.find(s);
    return it == statuses.end() ? 0 : it->second;
}

RunSummary summarize(const Analysis& analysis, const Sources& sources) {
    RunSummary s;
    std::map<MacAddress, ResolutionStatus> status_by_mac;
    for (const auto& c : analysis.classifications) {
        s.switches.push_back(c.switch_id);
        if (c.uplink_ambiguous()) s.ambiguous_uplinks.push_back(c.switch_id);
        for (const auto& r : c.resolutions) status_by_mac.emplace(r.mac, r.status);
    }
    for (const auto& [mac, status] : status_by_mac) ++s.statuses[status];
    s.hil = analysis.hil;

    const std::string aux_label = "Auxiliary Units";
    auto label_of = [&](const AssetRecord& rec) -> std::string {
        if (!rec.location) return "Nonconforming";
        if (sources.topo.is_auxiliary(rec.location->campus)) return aux_label;
        std::string up = rec.location->campus;
        for (auto& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        return "Campus " + up;
    };
    std::map<std::string, CampusRow> rows;
    for (const auto* rec : sources.registry.records()) {
        auto& row = rows[label_of(*rec)];
        ++row.registered;
        ++s.total.registered;
        auto it = status_by_mac.find(rec->mac);
        if (it != status_by_mac.end() && is_resolved(it->second)) {
            ++row.resolved;
            ++s.total.resolved;
        }
    }
    std::vector<std::string> order;
    for (const auto& c : sources.topo.campuses()) {
        if (sources.topo.is_auxiliary(c.campus_id)) continue;
        std::string up = c.campus_id;
        for (auto& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        order.push_back("Campus " + up);
    }
    order.push_back(aux_label);
    for (const auto& [label, row] : rows)
        if (std::find(order.begin(), order.end(), label) == order.end() && label != "Nonconforming") order.push_back(label);
    order.push_back("Nonconforming");
    for (const auto& label : order) {
        auto it = rows.find(label);
        if (it == rows.end() || it->second.registered == 0) continue;
        it->second.label = label;
        s.rows.push_back(it->second);
    }
    return s;
}

namespace {

std::string percent_text(std::size_t part, std::size_t whole) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", truncated_percent(part, whole));
    return buf;
}

json row_json(const CampusRow& r) {
    return {{"campus", r.label},
            {"registered", r.registered},
            {"resolved", r.resolved},
            {"accuracy_percent", truncated_percent(r.resolved, r.registered)}};
}

}  // namespace

std::string render_summary(const RunSummary& s, ReportFormat format) {
    if (format == ReportFormat::json) {
        json rows = json::array();
        for (const auto& r : s.rows) rows.push_back(row_json(r));
        json statuses = json::object();
        for (auto st : {ResolutionStatus::RESOLVED_DIRECT_POE, ResolutionStatus::RESOLVED_NOT_POE,
                        ResolutionStatus::UNREGISTERED_HIL, ResolutionStatus::UNKNOWN_HIL})
            statuses[std::string(to_string(st))] = s.count(st);
        return canonical_json({{"campuses", rows},
                               {"total", row_json(s.total)},
                               {"resolution", statuses},
                               {"hil_candidates", s.hil.size()},
                               {"switches", s.switches.size()},
                               {"stale_switches", s.stale_switches},
                               {"ambiguous_uplinks", s.ambiguous_uplinks},
                               {"unmatched_verdicts", s.unmatched_verdicts},
                               {"alerts_appended", s.alerts_appended}});
    }
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-20s %10s %10s %10s\n", "Campus", "Registered", "Resolved", "Accuracy");
    out << line;
    auto row = [&](const CampusRow& r) {
        std::snprintf(line, sizeof line, "%-20s %10zu %10zu %10s\n", r.label.c_str(), r.registered, r.resolved,
                      percent_text(r.resolved, r.registered).c_str());
        out << line;
    };
    for (const auto& r : s.rows) row(r);
    row(s.total);
    out << "\n";
    for (auto st : {ResolutionStatus::RESOLVED_DIRECT_POE, ResolutionStatus::RESOLVED_NOT_POE,
                    ResolutionStatus::UNREGISTERED_HIL, ResolutionStatus::UNKNOWN_HIL}) {
        std::snprintf(line, sizeof line, "%-20s %10zu\n", std::string(to_string(st)).c_str(), s.count(st));
        out << line;
    }
    std::snprintf(line, sizeof line, "%-20s %10zu\n", "HIL candidates", s.hil.size());
    out << line;
    std::snprintf(line, sizeof line, "%-20s %10zu\n", "Switches", s.switches.size());
    out << line;
    if (!s.stale_switches.empty()) {
        out << "stale profiles (transport unavailable):";
        for (const auto& id : s.stale_switches) out << " " << id;
        out << "\n";
    }
    if (!s.ambiguous_uplinks.empty()) {
        out << "ambiguous uplinks (run onboard):";
        for (const auto& id : s.ambiguous_uplinks) out << " " << id;
        out << "\n";
    }
    if (!s.unmatched_verdicts.empty()) out << "verdicts naming no node: " << s.unmatched_verdicts.size() << "\n";
    return out.str();
}

RunSummary run_pipeline(const PipelineConfig& input) {
    auto config = stage("config", [&] { return validate_config(input); });
    bool full = !config.switch_scope;
    CollectSummary collected;
    if (config.fixtures_dir) collected = stage("collect", [&] { return collect_stage(config); });
    auto sources = stage("load", [&] {
        return load_sources(config.state_dir, config.fixtures_dir ? std::nullopt : config.classify_config);
    });
    if (config.switch_scope && !ProfileStore(config.state_dir).contains(*config.switch_scope))
        throw StageError("classify", MissingProfile(*config.switch_scope), false);
    auto analysis = stage("classify", [&] { return analyze(sources, config.state_dir, config.switch_scope); });
    stage("build", [&] { return build_stage(build_trees(analysis, sources), sources, config.state_dir, full); });
    auto feed = stage("color", [&] { return load_feeds(config); });
    auto colored = stage("color", [&] { return color_stage(sources, feed, config.state_dir, config.switch_scope); });
    auto integrity = stage("integrity", [&] {
        return integrity_stage(analysis, sources, config.state_dir, config.promotion_threshold, full);
    });

    auto summary = summarize(analysis, sources);
    summary.stale_switches = collected.stale;
    summary.unmatched_verdicts = colored.unmatched;
    summary.alerts_appended = integrity.alerts_appended;
    return summary;
}

}  // namespace body
