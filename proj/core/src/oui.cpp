#include "body/oui.hpp"

#include <charconv>
#include <cstdio>

#include "body/error.hpp"
#include "body/fsio.hpp"
#include "body/registry.hpp"

namespace body {

std::string_view to_string(DeviceClass c) {
    switch (c) {
        case DeviceClass::camera: return "camera";
        case DeviceClass::switch_: return "switch";
        case DeviceClass::server: return "server";
        case DeviceClass::nvr: return "nvr";
        case DeviceClass::unknown: return "unknown";
    }
    return "unknown";
}

std::optional<DeviceClass> device_class_from_string(std::string_view s) {
    for (auto c : {DeviceClass::camera, DeviceClass::switch_, DeviceClass::server, DeviceClass::nvr,
                   DeviceClass::unknown})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

std::string OuiEntry::prefix_str() const {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x", (prefix >> 16) & 0xff, (prefix >> 8) & 0xff, prefix & 0xff);
    return buf;
}

namespace {

std::optional<std::uint32_t> parse_prefix(std::string_view s) {
    std::string digits;
    for (char c : s) {
        if (c == ':' || c == '-' || c == '.') continue;
        digits.push_back(c);
    }
    if (digits.size() != 6) return std::nullopt;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + 6, v, 16);
    if (ec != std::errc{} || ptr != digits.data() + 6) return std::nullopt;
    return v;
}

template <typename Fn>
void for_each_csv_row(std::string_view text, const std::string& origin, std::size_t columns,
                      const std::vector<std::string>& header, Fn&& fn) {
    std::size_t line_no = 0, pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        auto fields = split_csv_line(line);
        if (!header_seen && fields == header) {
            header_seen = true;
            continue;
        }
        header_seen = true;
        if (fields.size() != columns)
            throw MalformedLine(origin, line_no, "expected " + std::to_string(columns) + " fields");
        fn(line_no, fields);
    }
}

}  // namespace

OuiDatabase::OuiDatabase(std::vector<OuiEntry> entries) {
    for (auto& e : entries) {
        auto prefix = e.prefix;
        if (!entries_.emplace(prefix, std::move(e)).second)
            throw ConfigError("duplicate OUI prefix " + entries_.at(prefix).prefix_str());
    }
}

OuiDatabase OuiDatabase::parse_csv(std::string_view text, const std::string& origin) {
    std::vector<OuiEntry> entries;
    for_each_csv_row(text, origin, 3, {"prefix", "vendor", "device_class"},
                     [&](std::size_t line_no, const std::vector<std::string>& f) {
                         auto prefix = parse_prefix(f[0]);
                         if (!prefix) throw MalformedLine(origin, line_no, "invalid OUI prefix '" + f[0] + "'");
                         auto cls = device_class_from_string(f[2]);
                         if (!cls) throw MalformedLine(origin, line_no, "invalid device class '" + f[2] + "'");
                         entries.push_back({*prefix, f[1], *cls});
                     });
    return OuiDatabase(std::move(entries));
}

OuiDatabase OuiDatabase::load(const std::filesystem::path& path) {
    return parse_csv(read_file(path), path.string());
}

const OuiEntry* OuiDatabase::lookup(const MacAddress& mac) const {
    auto it = entries_.find(mac.oui());
    return it == entries_.end() ? nullptr : &it->second;
}

std::string OuiDatabase::render_csv() const {
    std::string out = "prefix,vendor,device_class\n";
    for (const auto& [prefix, e] : entries_)
        out += e.prefix_str() + "," + e.vendor + "," + std::string(to_string(e.device_class)) + "\n";
    return out;
}

WattageTable WattageTable::parse_csv(std::string_view text, const std::string& origin) {
    std::map<std::string, WattageRange, std::less<>> ranges;
    for_each_csv_row(text, origin, 3, {"model", "min_w", "max_w"},
                     [&](std::size_t line_no, const std::vector<std::string>& f) {
                         WattageRange r;
                         try {
                             r.min_w = std::stod(f[1]);
                             r.max_w = std::stod(f[2]);
                         } catch (const std::exception&) {
                             throw MalformedLine(origin, line_no, "invalid wattage bounds");
                         }
                         if (r.min_w < 0 || r.max_w < r.min_w)
                             throw MalformedLine(origin, line_no, "wattage bounds must satisfy 0 <= min <= max");
                         if (!ranges.emplace(f[0], r).second)
                             throw MalformedLine(origin, line_no, "duplicate model '" + f[0] + "'");
                     });
    return WattageTable(std::move(ranges));
}

WattageTable WattageTable::load(const std::filesystem::path& path) {
    return parse_csv(read_file(path), path.string());
}

const WattageRange* WattageTable::find(std::string_view model) const {
    auto it = ranges_.find(model);
    return it == ranges_.end() ? nullptr : &it->second;
}

std::string WattageTable::render_csv() const {
    std::string out = "model,min_w,max_w\n";
    char buf[64];
    for (const auto& [model, r] : ranges_) {
        std::snprintf(buf, sizeof buf, ",%.1f,%.1f\n", r.min_w, r.max_w);
        out += model + buf;
    }
    return out;
}

}  // namespace body
