#include "body_cli/cli.hpp"

#include <algorithm>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "body/fsio.hpp"
#include "body/pipeline.hpp"
#include "body/simulate.hpp"

namespace body::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string state_dir = "state";
    std::string config;
    std::string format = "text";
    std::vector<std::string> feeds;
    std::string fixtures;
    std::string switch_id;

    std::string spec;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool yes = false;
    std::string bind = "127.0.0.1";
    int port = 8080;
    std::string assets;
};

ReportFormat report_format(const Options& o) { return o.format == "json" ? ReportFormat::json : ReportFormat::text; }

PipelineConfig pipeline_config(const Options& o) {
    PipelineConfig c;
    c.state_dir = o.state_dir;
    if (!o.fixtures.empty()) c.fixtures_dir = o.fixtures;
    if (!o.config.empty()) c.classify_config = o.config;
    if (!o.switch_id.empty()) c.switch_scope = o.switch_id;
    c.feeds = o.feeds;
    c.feed_loader = fetch_feed;
    return c;
}

std::optional<std::string> scope(const Options& o) {
    return o.switch_id.empty() ? std::nullopt : std::optional(o.switch_id);
}

// Loads sources from an already collected state dir.
std::pair<PipelineConfig, Sources> from_state(const Options& o) {
    auto o2 = o;
    o2.fixtures.clear();
    auto config = validate_config(pipeline_config(o2));
    return {config, load_sources(config.state_dir, config.classify_config)};
}

int cmd_simulate(const Options& o, std::ostream& out) {
    auto spec = load_campus_spec(o.spec);
    if (o.seed) spec.seed = *o.seed;
    auto world = generate_campus(spec);
    write_world(world, o.out_dir);
    std::size_t visible = 0;
    for (const auto& e : world.truth.endpoints) visible += e.visible ? 1 : 0;
    out << world.switches.size() << " switches, " << world.registry.size() << " registered assets, " << visible
        << " visible endpoints written to " << o.out_dir << "\n";
    return kOk;
}

int cmd_collect(const Options& o, std::ostream& out) {
    auto config = validate_config(pipeline_config(o));
    auto summary = collect_stage(config);
    for (const auto& id : summary.collected) {
        bool stale = std::find(summary.stale.begin(), summary.stale.end(), id) != summary.stale.end();
        out << id << (stale ? "  stale (transport unavailable, persisted profile kept)" : "  collected");
        auto it = summary.reports.find(id);
        if (it != summary.reports.end() && !it->second.skips.empty()) out << "  " << it->second.skips.size() << " rows skipped";
        out << "\n";
    }
    return kOk;
}

int cmd_onboard(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
    if (o.fixtures.empty() || o.switch_id.empty()) throw ConfigError("onboard needs --fixtures and --switch");
    auto config = validate_config(pipeline_config(o));
    const auto& corpus = *config.fixtures_dir;
    snapshot_sources(corpus, *config.classify_config, config.state_dir);
    auto sources = load_sources(config.state_dir);

    auto staging_dir = config.state_dir / ".onboard";
    ProfileStore staging(staging_dir);
    if (!fs::is_regular_file(corpus / o.switch_id / "meta.yml"))
        throw TransportUnavailable(o.switch_id, "no recorded session in " + corpus.string());
    auto dialect = read_fixture_meta(corpus / o.switch_id).dialect;
    ReplayTransport transport(corpus);
    auto profile = assemble_profile(o.switch_id, dialect, transport, staging, nullptr, config.clock);

    std::optional<UplinkDecision> decision;
    std::vector<std::string> tied;
    try {
        auto cfg = sources.config;
        cfg.uplink_overrides.clear();
        decision = identify_uplink(profile, sources.topo, cfg);
    } catch (const AmbiguousUplink& e) {
        tied = e.tied_ports();
    }
    auto counts = macs_by_port(profile, sources.config.overlay_vlan);
    out << "switch " << o.switch_id << " (" << to_string(profile.vendor_dialect) << ", " << profile.model << ")\n";
    if (decision) {
        out << "uplink candidate: " << decision->port << "  evidence [" << to_string(decision->evidence) << "]  "
            << counts[decision->port].size() << " MACs\n";
    } else {
        out << "uplink ambiguous; tied ports:";
        for (const auto& p : tied) out << " " << p << " (" << counts[p].size() << " MACs)";
        out << "\n";
    }

    std::string chosen;
    if (o.yes) {
        if (!decision || decision->evidence != Evidence::lldp_name) {
            err << "--yes is only accepted when the uplink evidence is lldp_name; confirm interactively\n";
            fs::remove_all(staging_dir);
            return kConfigError;
        }
        chosen = decision->port;
    } else {
        out << (decision ? "confirm uplink [y = " + decision->port + ", or type a port, n = abort]: "
                         : std::string("type the uplink port (empty aborts): "));
        out.flush();
        std::string answer;
        std::getline(in, answer);
        answer = std::string(trim(answer));
        if (decision && (answer == "y" || answer == "Y" || answer == "yes")) chosen = decision->port;
        else if (!answer.empty() && answer != "n" && answer != "N" && profile.find_interface(answer)) chosen = answer;
        if (chosen.empty()) {
            err << "onboarding aborted; nothing committed\n";
            fs::remove_all(staging_dir);
            return kHardError;
        }
    }
    ProfileStore(config.state_dir).store(profile);
    save_uplink_override(config.state_dir, o.switch_id, chosen);
    fs::remove_all(staging_dir);
    out << "committed profile and uplink " << chosen << " for " << o.switch_id << "\n";
    return kOk;
}

int cmd_build(const Options& o, std::ostream& out) {
    auto [config, sources] = from_state(o);
    auto analysis = analyze(sources, config.state_dir, scope(o));
    auto stats = build_stage(build_trees(analysis, sources), sources, config.state_dir, !scope(o));
    out << analysis.classifications.size() << " switch trees; " << stats.files_written << " files written, "
        << stats.files_removed << " removed\n";
    return kOk;
}

int cmd_color(const Options& o, std::ostream& out) {
    auto [config, sources] = from_state(o);
    auto feed = load_feeds(config);
    auto summary = color_stage(sources, feed, config.state_dir, scope(o));
    out << summary.views_written << " views exported to " << views_dir(config.state_dir).string() << "\n";
    if (!summary.unmatched.empty()) out << summary.unmatched.size() << " verdicts name no node\n";
    return kOk;
}

int cmd_report(const Options& o, std::ostream& out) {
    auto [config, sources] = from_state(o);
    auto analysis = analyze(sources, config.state_dir, scope(o));
    out << render_summary(summarize(analysis, sources), report_format(o));
    return kOk;
}

int cmd_hil(const Options& o, std::ostream& out) {
    auto [config, sources] = from_state(o);
    auto analysis = analyze(sources, config.state_dir, scope(o));
    out << hil_report(analysis.hil, report_format(o));
    return kOk;
}

int cmd_run(const Options& o, std::ostream& out) {
    auto summary = run_pipeline(pipeline_config(o));
    out << render_summary(summary, report_format(o));
    return kOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
    auto views = views_dir(fs::absolute(o.state_dir));
    httplib::Server server;
    configure_view_server(server, views,
                          o.assets.empty() ? std::nullopt : std::optional<fs::path>(fs::absolute(o.assets)));
    out << "serving " << views.string() << " on http://" << o.bind << ":" << o.port << "\n";
    out.flush();
    if (!server.listen(o.bind, o.port)) throw Error("cannot listen on " + o.bind + ":" + std::to_string(o.port));
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Layer-2 topology inference for camera fabrics", "body"};
    app.require_subcommand(1);
    app.add_option("--state-dir", o.state_dir, "State directory")->capture_default_str();
    app.add_option("--config", o.config, "classify_config.yml");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("--feed", o.feeds, "Verdict feed file or http:// URL (repeatable)");

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic campus corpus");
    simulate->add_option("--spec", o.spec, "Campus spec YAML")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", o.out_dir, "Output corpus directory")->required();
    simulate->add_option("--seed", o.seed, "Override the campus spec seed");

    auto* collect = app.add_subcommand("collect", "Replay switch sessions into profiles");
    collect->add_option("--fixtures", o.fixtures, "Corpus directory")->required();
    collect->add_option("--switch", o.switch_id, "Only this switch");

    auto* onboard = app.add_subcommand("onboard", "Collect one switch and confirm its uplink");
    onboard->add_option("--fixtures", o.fixtures, "Corpus directory")->required();
    onboard->add_option("--switch", o.switch_id, "Switch to onboard")->required();
    onboard->add_flag("--yes", o.yes, "Accept an LLDP-identified uplink without prompting");

    auto* build = app.add_subcommand("build", "Classify profiles and write topology trees");
    build->add_option("--switch", o.switch_id, "Only this switch");
    auto* color = app.add_subcommand("color", "Color trees with verdicts and export views");
    color->add_option("--switch", o.switch_id, "Only this switch");
    auto* report = app.add_subcommand("report", "Per-campus resolution report");
    report->add_option("--switch", o.switch_id, "Only this switch");
    auto* hil = app.add_subcommand("hil", "Human-in-the-loop work orders");
    hil->add_option("--switch", o.switch_id, "Only this switch");

    auto* runc = app.add_subcommand("run", "collect, classify, build, color, integrity and report");
    runc->add_option("--fixtures", o.fixtures, "Corpus directory (omit to rebuild from state)");
    runc->add_option("--switch", o.switch_id, "Only this switch");

    auto* serve = app.add_subcommand("serve", "Serve view exports over HTTP");
    serve->add_option("--bind", o.bind, "Address")->capture_default_str();
    serve->add_option("--port", o.port, "Port")->capture_default_str();
    serve->add_option("--assets", o.assets, "Viewer assets directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(o, out);
        if (collect->parsed()) return cmd_collect(o, out);
        if (onboard->parsed()) return cmd_onboard(o, in, out, err);
        if (build->parsed()) return cmd_build(o, out);
        if (color->parsed()) return cmd_color(o, out);
        if (report->parsed()) return cmd_report(o, out);
        if (hil->parsed()) return cmd_hil(o, out);
        if (runc->parsed()) return cmd_run(o, out);
        if (serve->parsed()) return cmd_serve(o, out);
    } catch (const StageError& e) {
        err << "body: " << e.what() << "\n";
        return e.config_error() ? kConfigError : kHardError;
    } catch (const ConfigError& e) {
        err << "body: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "body: " << e.what() << "\n";
        return kHardError;
    }
    return kConfigError;
}

}  // namespace body::cli
