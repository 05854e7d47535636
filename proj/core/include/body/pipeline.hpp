#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "body/classify.hpp"
#include "body/collect.hpp"
#include "body/error.hpp"
#include "body/health.hpp"
#include "body/integrity.hpp"
#include "body/registry.hpp"
#include "body/topo_map.hpp"
#include "body/topology.hpp"

namespace body {

// Error raised inside one pipeline stage; what() is prefixed with the stage.
class StageError : public Error {
public:
    StageError(std::string stage, const std::exception& cause, bool config)
        : Error(stage + ": " + cause.what()), stage_(std::move(stage)), config_(config) {}
    const std::string& stage() const noexcept { return stage_; }
    bool config_error() const noexcept { return config_; }

private:
    std::string stage_;
    bool config_;
};

// Reads a verdict feed given as a file path or URL.
using FeedLoader = std::function<std::string(const std::string& source)>;
std::string read_feed_file(const std::string& source);

struct PipelineConfig {
    std::filesystem::path state_dir = "state";
    std::optional<std::filesystem::path> fixtures_dir;     // replay corpus; empty: use state only
    std::optional<std::filesystem::path> classify_config;  // default: corpus, then state snapshot
    std::vector<std::string> feeds;                        // default: feeds snapshotted from the corpus
    std::optional<std::string> switch_scope;
    int promotion_threshold = kDefaultPromotionThreshold;
    FeedLoader feed_loader = read_feed_file;
    Clock clock = utc_now_iso8601;
};

// Resolves paths to absolute form and checks that inputs exist. Throws
// ConfigError.
PipelineConfig validate_config(PipelineConfig config);

// Inputs snapshotted under <state>/sources so that later stages never touch
// the corpus.
std::filesystem::path sources_dir(const std::filesystem::path& state_dir);
std::filesystem::path views_dir(const std::filesystem::path& state_dir);
std::filesystem::path leases_path(const std::filesystem::path& state_dir);
std::filesystem::path alerts_path(const std::filesystem::path& state_dir);
std::filesystem::path reservations_path(const std::filesystem::path& state_dir);
std::filesystem::path hil_report_path(const std::filesystem::path& state_dir);
std::filesystem::path onboard_path(const std::filesystem::path& state_dir);

std::string render_classify_config(const ClassifyConfig& config);

struct Sources {
    Registry registry;
    TopoMap topo;
    ClassifyConfig config;
    ServerMetadata servers;
};

// Copies the corpus inputs into the state snapshot.
void snapshot_sources(const std::filesystem::path& corpus, const std::filesystem::path& classify_config,
                      const std::filesystem::path& state_dir);
Sources load_sources(const std::filesystem::path& state_dir,
                     const std::optional<std::filesystem::path>& classify_config = std::nullopt);

// Operator-confirmed uplinks, <state>/_onboard.json.
std::map<std::string, std::string, std::less<>> load_uplink_overrides(const std::filesystem::path& state_dir);
void save_uplink_override(const std::filesystem::path& state_dir, const std::string& switch_id,
                          const std::string& port);

struct CollectSummary {
    std::vector<std::string> collected;
    std::vector<std::string> stale;  // transport failed, persisted profile reused
    std::map<std::string, ParseReport> reports;
};

// Snapshots sources and replays every switch of the corpus (or the scoped one).
CollectSummary collect_stage(const PipelineConfig& config);

struct Analysis {
    std::vector<SwitchProfile> profiles;                // ordered by switch id
    std::vector<SwitchClassification> classifications;  // same order
    std::vector<HilCandidate> hil;
    std::string observed_at;  // latest collected_at among the profiles
};

// Classifies persisted profiles, one task per switch.
Analysis analyze(const Sources& sources, const std::filesystem::path& state_dir,
                 const std::optional<std::string>& scope = std::nullopt);

std::string campus_of(const TopoMap& topo, const std::string& switch_id);

// Switch trees keyed by switch id.
std::map<std::string, TopologyNode> build_trees(const Analysis& analysis, const Sources& sources);

// Writes the switch trees and server graph. Full runs prune topology of
// switches that are gone.
PersistStats build_stage(const std::map<std::string, TopologyNode>& trees, const Sources& sources,
                         const std::filesystem::path& state_dir, bool full);

VerdictFeed load_feeds(const PipelineConfig& config);

struct ColorSummary {
    std::size_t views_written = 0;
    std::vector<std::string> unmatched;  // feed entries naming no node in any view
};

// Colors every persisted tree and writes the view exports.
ColorSummary color_stage(const Sources& sources, const VerdictFeed& feed, const std::filesystem::path& state_dir,
                         const std::optional<std::string>& scope = std::nullopt);

struct IntegritySummary {
    bool leases_applied = false;
    std::vector<MacAddress> surveillance;
    std::size_t alerts_appended = 0;
};

IntegritySummary integrity_stage(const Analysis& analysis, const Sources& sources,
                                 const std::filesystem::path& state_dir, int threshold, bool full);

struct CampusRow {
    std::string label;
    std::size_t registered = 0;
    std::size_t resolved = 0;
};

// Percentage truncated to two decimals.
double truncated_percent(std::size_t part, std::size_t whole);

struct RunSummary {
    std::vector<CampusRow> rows;
    CampusRow total{"Total"};
    std::map<ResolutionStatus, std::size_t> statuses;
    std::vector<HilCandidate> hil;
    std::vector<std::string> switches;
    std::vector<std::string> stale_switches;
    std::vector<std::string> ambiguous_uplinks;
    std::vector<std::string> unmatched_verdicts;
    std::size_t alerts_appended = 0;

    std::size_t count(ResolutionStatus s) const;
};

// Table rows by campus of each registered hostname; auxiliary campuses are
// merged into one row.
RunSummary summarize(const Analysis& analysis, const Sources& sources);
std::string render_summary(const RunSummary& summary, ReportFormat format);

// collect (when a corpus is given) -> classify -> build -> color -> integrity.
RunSummary run_pipeline(const PipelineConfig& config);

}  // namespace body
