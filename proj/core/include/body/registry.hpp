#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "body/hostname.hpp"
#include "body/mac.hpp"

namespace body {

class Ipv4 {
public:
    constexpr Ipv4() = default;
    constexpr explicit Ipv4(std::uint32_t value) : value_(value) {}
    static std::optional<Ipv4> parse(std::string_view s);
    std::string str() const;
    std::uint32_t value() const noexcept { return value_; }
    auto operator<=>(const Ipv4&) const = default;

private:
    std::uint32_t value_ = 0;
};

// DHCP lease tiers; STABLE renders as an infinite lease.
enum class LeaseTier { H12, H24, H48, STABLE };

std::string_view to_string(LeaseTier tier);
std::string_view lease_duration(LeaseTier tier);  // "12h", "24h", "48h", "infinite"
std::optional<LeaseTier> lease_tier_from_duration(std::string_view s);
std::optional<LeaseTier> lease_tier_from_string(std::string_view s);

enum class RecordSource { dhcp, glpi, both };
std::string_view to_string(RecordSource source);

struct AssetRecord {
    MacAddress mac;
    Ipv4 ip;
    std::string hostname;                       // as registered
    std::optional<PositionalHostname> location; // empty when non-conforming
    std::optional<std::string> model;
    std::optional<LeaseTier> lease;
    RecordSource source = RecordSource::dhcp;

    bool nonconforming() const noexcept { return !location.has_value(); }
    bool operator==(const AssetRecord&) const = default;
};

struct RegistryLoadStats {
    std::size_t dhcp_lines_accepted = 0;
    std::size_t export_rows_accepted = 0;
    std::size_t merged = 0;        // records present in both sources
    std::size_t nonconforming = 0;
};

// MAC-indexed asset registry, immutable after load.
class Registry {
public:
    Registry() = default;

    // Throws DuplicateMac when the MAC is already present.
    void insert(AssetRecord record);

    const AssetRecord* lookup(const MacAddress& mac) const;
    std::size_t size() const noexcept { return by_mac_.size(); }
    bool empty() const noexcept { return by_mac_.empty(); }

    // All records ordered by MAC.
    std::vector<const AssetRecord*> records() const;

    const RegistryLoadStats& stats() const noexcept { return stats_; }
    RegistryLoadStats& mutable_stats() noexcept { return stats_; }

private:
    std::unordered_map<MacAddress, AssetRecord> by_mac_;
    RegistryLoadStats stats_;
};

// Either path may be empty to skip that source. Throws DuplicateMac and
// MalformedLine.
Registry load_registry(const std::filesystem::path& dhcp_conf, const std::filesystem::path& asset_export,
                       const HostnameGrammar& grammar = default_grammar());

// Parsers over in-memory text; `origin` names the source in error messages.
std::vector<AssetRecord> parse_dhcp_conf(std::string_view text, const std::string& origin,
                                         const HostnameGrammar& grammar = default_grammar());
std::vector<AssetRecord> parse_asset_csv(std::string_view text, const std::string& origin,
                                         const HostnameGrammar& grammar = default_grammar());

std::string render_dhcp_line(const AssetRecord& record, LeaseTier tier);
std::string render_dhcp_conf(const std::vector<AssetRecord>& records);
std::string render_asset_csv(const std::vector<AssetRecord>& records);

// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace body
