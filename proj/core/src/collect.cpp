#include "body/collect.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include <yaml-cpp/yaml.h>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

namespace {
constexpr Section kSections[] = {Section::mac_table, Section::interfaces, Section::poe, Section::lldp};
}

std::string transcript_file(Section section) {
    switch (section) {
        case Section::mac_table: return "mac_table.txt";
        case Section::interfaces: return "interfaces.txt";
        case Section::poe: return "poe.txt";
        case Section::lldp: return "lldp.txt";
    }
    return "mac_table.txt";
}

FixtureMeta read_fixture_meta(const std::filesystem::path& switch_dir) {
    auto path = switch_dir / "meta.yml";
    YAML::Node node;
    try {
        node = YAML::Load(read_file(path));
        FixtureMeta meta;
        meta.switch_id = node["switch_id"].as<std::string>();
        meta.dialect = dialect_from_string(node["dialect"].as<std::string>());
        if (node["collected_at"]) meta.collected_at = node["collected_at"].as<std::string>();
        return meta;
    } catch (const YAML::Exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string render_fixture_meta(const FixtureMeta& meta) {
    std::string out = "switch_id: " + meta.switch_id + "\n";
    out += "dialect: " + std::string(to_string(meta.dialect)) + "\n";
    if (meta.collected_at) out += "collected_at: \"" + *meta.collected_at + "\"\n";
    return out;
}

std::vector<std::string> list_fixture_switches(const std::filesystem::path& corpus_dir) {
    std::vector<std::string> ids;
    if (!std::filesystem::is_directory(corpus_dir)) return ids;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir))
        if (entry.is_directory() && std::filesystem::is_regular_file(entry.path() / "meta.yml"))
            ids.push_back(entry.path().filename().string());
    std::sort(ids.begin(), ids.end());
    return ids;
}

void ReplayTransport::open(const std::string& switch_id) {
    switch_dir_ = corpus_dir_ / switch_id;
    meta_.reset();
    if (!std::filesystem::is_regular_file(switch_dir_ / "meta.yml"))
        throw TransportUnavailable(switch_id, "no recorded session under " + switch_dir_.string());
    meta_ = read_fixture_meta(switch_dir_);
}

std::string ReplayTransport::run(const std::string& command) {
    if (!meta_) throw TransportUnavailable("<none>", "session not open");
    for (auto section : kSections) {
        if (collection_command(meta_->dialect, section) != command) continue;
        auto path = switch_dir_ / transcript_file(section);
        if (!std::filesystem::is_regular_file(path))
            throw TransportUnavailable(meta_->switch_id, "missing transcript " + path.string());
        return read_file(path);
    }
    throw TransportUnavailable(meta_->switch_id, "no transcript recorded for '" + command + "'");
}

std::string utc_now_iso8601() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

SwitchProfile assemble_profile(const std::string& switch_id, Dialect dialect, Transport& transport,
                               const ProfileStore& store, ParseReport* report, const Clock& clock) {
    transport.open(switch_id);
    CliBundle bundle;
    bundle.mac_table_text = transport.run(collection_command(dialect, Section::mac_table));
    bundle.interface_text = transport.run(collection_command(dialect, Section::interfaces));
    bundle.poe_text = transport.run(collection_command(dialect, Section::poe));
    bundle.lldp_text = transport.run(collection_command(dialect, Section::lldp));

    auto parsed = parse_cli_bundle(dialect, bundle);
    auto& profile = parsed.profile;
    profile.switch_id = switch_id;
    profile.collected_at = transport.capture_time().value_or(clock());
    profile.canonicalize();
    profile.validate();
    store.store(profile);
    if (report) *report = std::move(parsed.report);
    return profile;
}

CollectResult collect_switch(const std::string& switch_id, Dialect dialect, Transport& transport,
                             const ProfileStore& store, const Clock& clock) {
    CollectResult result;
    try {
        result.profile = assemble_profile(switch_id, dialect, transport, store, &result.report, clock);
    } catch (const TransportUnavailable&) {
        if (!store.contains(switch_id)) throw;
        result.profile = store.load(switch_id);
        result.stale = true;
    }
    return result;
}

}  // namespace body
