#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "body/mac.hpp"

namespace body {

enum class DeviceClass { camera, switch_, server, nvr, unknown };

std::string_view to_string(DeviceClass c);
std::optional<DeviceClass> device_class_from_string(std::string_view s);

struct OuiEntry {
    std::uint32_t prefix = 0;  // first three octets, big-endian
    std::string vendor;
    DeviceClass device_class = DeviceClass::unknown;

    std::string prefix_str() const;  // "aa:bb:cc"
    bool operator==(const OuiEntry&) const = default;
};

// Vendor-prefix table for the constrained manufacturer subspace of the
// monitored fabric. CSV columns: prefix,vendor,device_class.
class OuiDatabase {
public:
    OuiDatabase() = default;
    explicit OuiDatabase(std::vector<OuiEntry> entries);

    static OuiDatabase parse_csv(std::string_view text, const std::string& origin = "oui.csv");
    static OuiDatabase load(const std::filesystem::path& path);

    const OuiEntry* lookup(const MacAddress& mac) const;
    const std::map<std::uint32_t, OuiEntry>& entries() const noexcept { return entries_; }
    std::string render_csv() const;

private:
    std::map<std::uint32_t, OuiEntry> entries_;
};

struct WattageRange {
    double min_w = 0.0;
    double max_w = 0.0;
    bool contains(double watts) const noexcept { return watts >= min_w && watts <= max_w; }
};

// Per-model PoE consumption profiles. CSV columns: model,min_w,max_w.
class WattageTable {
public:
    WattageTable() = default;
    explicit WattageTable(std::map<std::string, WattageRange, std::less<>> ranges) : ranges_(std::move(ranges)) {}

    static WattageTable parse_csv(std::string_view text, const std::string& origin = "wattage.csv");
    static WattageTable load(const std::filesystem::path& path);

    const WattageRange* find(std::string_view model) const;
    const std::map<std::string, WattageRange, std::less<>>& ranges() const noexcept { return ranges_; }
    std::string render_csv() const;

private:
    std::map<std::string, WattageRange, std::less<>> ranges_;
};

}  // namespace body
