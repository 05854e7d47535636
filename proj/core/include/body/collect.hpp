#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "body/dialect.hpp"
#include "body/profile.hpp"

namespace body {

// Session contract for reaching a switch CLI.
class Transport {
public:
    virtual ~Transport() = default;
    // Throws TransportUnavailable when the switch cannot be reached.
    virtual void open(const std::string& switch_id) = 0;
    virtual std::string run(const std::string& command) = 0;
    // Capture time recorded with the transcripts, when the transport replays
    // a past session.
    virtual std::optional<std::string> capture_time() const { return std::nullopt; }
};

struct FixtureMeta {
    std::string switch_id;
    Dialect dialect = Dialect::dialect_a;
    std::optional<std::string> collected_at;
};

FixtureMeta read_fixture_meta(const std::filesystem::path& switch_dir);
std::string render_fixture_meta(const FixtureMeta& meta);

// Switch ids of every fixture directory (those holding a meta.yml), sorted.
std::vector<std::string> list_fixture_switches(const std::filesystem::path& corpus_dir);

// Replays transcripts from <corpus>/<switch_id>/{mac_table,interfaces,poe,lldp}.txt.
class ReplayTransport : public Transport {
public:
    explicit ReplayTransport(std::filesystem::path corpus_dir) : corpus_dir_(std::move(corpus_dir)) {}

    void open(const std::string& switch_id) override;
    std::string run(const std::string& command) override;
    std::optional<std::string> capture_time() const override { return meta_ ? meta_->collected_at : std::nullopt; }

    // Dialect recorded in meta.yml of the open switch.
    std::optional<Dialect> dialect() const { return meta_ ? std::optional(meta_->dialect) : std::nullopt; }

private:
    std::filesystem::path corpus_dir_;
    std::filesystem::path switch_dir_;
    std::optional<FixtureMeta> meta_;
};

std::string transcript_file(Section section);  // "mac_table.txt", ...

using Clock = std::function<std::string()>;
std::string utc_now_iso8601();

struct CollectResult {
    SwitchProfile profile;
    ParseReport report;
    bool stale = false;  // transport failed; profile is the last persisted one
};

// Runs the dialect's four collection commands, parses them, stamps the
// collection time and persists the profile before returning.
SwitchProfile assemble_profile(const std::string& switch_id, Dialect dialect, Transport& transport,
                               const ProfileStore& store, ParseReport* report = nullptr,
                               const Clock& clock = utc_now_iso8601);

// assemble_profile, falling back to the persisted profile when the transport
// is unavailable. Rethrows TransportUnavailable when nothing was persisted.
CollectResult collect_switch(const std::string& switch_id, Dialect dialect, Transport& transport,
                             const ProfileStore& store, const Clock& clock = utc_now_iso8601);

}  // namespace body
