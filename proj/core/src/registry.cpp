#include "body/registry.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

std::optional<Ipv4> Ipv4::parse(std::string_view s) {
    std::uint32_t value = 0;
    int parts = 0;
    std::size_t pos = 0;
    while (parts < 4) {
        auto dot = s.find('.', pos);
        auto piece = s.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        if (piece.empty() || piece.size() > 3) return std::nullopt;
        unsigned octet = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), octet);
        if (ec != std::errc{} || ptr != piece.data() + piece.size() || octet > 255) return std::nullopt;
        value = (value << 8) | octet;
        ++parts;
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    if (parts != 4 || s.find('.', pos) != std::string_view::npos) return std::nullopt;
    return Ipv4(value);
}

std::string Ipv4::str() const {
    return std::to_string(value_ >> 24) + "." + std::to_string((value_ >> 16) & 0xff) + "." +
           std::to_string((value_ >> 8) & 0xff) + "." + std::to_string(value_ & 0xff);
}

std::string_view to_string(LeaseTier tier) {
    switch (tier) {
        case LeaseTier::H12: return "H12";
        case LeaseTier::H24: return "H24";
        case LeaseTier::H48: return "H48";
        case LeaseTier::STABLE: return "STABLE";
    }
    return "H12";
}

std::string_view lease_duration(LeaseTier tier) {
    switch (tier) {
        case LeaseTier::H12: return "12h";
        case LeaseTier::H24: return "24h";
        case LeaseTier::H48: return "48h";
        case LeaseTier::STABLE: return "infinite";
    }
    return "12h";
}

std::optional<LeaseTier> lease_tier_from_duration(std::string_view s) {
    for (auto t : {LeaseTier::H12, LeaseTier::H24, LeaseTier::H48, LeaseTier::STABLE})
        if (lease_duration(t) == s) return t;
    return std::nullopt;
}

std::optional<LeaseTier> lease_tier_from_string(std::string_view s) {
    for (auto t : {LeaseTier::H12, LeaseTier::H24, LeaseTier::H48, LeaseTier::STABLE})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

std::string_view to_string(RecordSource source) {
    switch (source) {
        case RecordSource::dhcp: return "dhcp";
        case RecordSource::glpi: return "glpi";
        case RecordSource::both: return "both";
    }
    return "dhcp";
}

void Registry::insert(AssetRecord record) {
    auto mac = record.mac;
    auto [it, inserted] = by_mac_.emplace(mac, std::move(record));
    if (!inserted) throw DuplicateMac(mac.str());
}

const AssetRecord* Registry::lookup(const MacAddress& mac) const {
    auto it = by_mac_.find(mac);
    return it == by_mac_.end() ? nullptr : &it->second;
}

std::vector<const AssetRecord*> Registry::records() const {
    std::vector<const AssetRecord*> out;
    out.reserve(by_mac_.size());
    for (const auto& [mac, rec] : by_mac_) out.push_back(&rec);
    std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->mac < b->mac; });
    return out;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(line_no, line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
}

AssetRecord make_record(const std::string& origin, std::size_t line_no, std::string_view mac,
                        std::string_view ip, std::string_view hostname, const HostnameGrammar& grammar) {
    AssetRecord rec;
    try {
        rec.mac = normalize_mac(mac);
    } catch (const MalformedMac&) {
        throw MalformedLine(origin, line_no, "invalid MAC '" + std::string(mac) + "'");
    }
    auto addr = Ipv4::parse(ip);
    if (!addr) throw MalformedLine(origin, line_no, "invalid IPv4 address '" + std::string(ip) + "'");
    rec.ip = *addr;
    if (hostname.empty()) throw MalformedLine(origin, line_no, "empty hostname");
    rec.hostname = hostname;
    rec.location = grammar.parse(hostname);
    return rec;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::string(trim(field)));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::string(trim(field)));
    return fields;
}

std::vector<AssetRecord> parse_dhcp_conf(std::string_view text, const std::string& origin,
                                         const HostnameGrammar& grammar) {
    std::vector<AssetRecord> out;
    for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        auto line = trim(raw);
        if (line.empty() || line.front() == '#') return;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw MalformedLine(origin, line_no, "expected <option>=<value>");
        auto key = trim(line.substr(0, eq));
        // Other dnsmasq directives are tolerated and ignored.
        if (key != "dhcp-host") return;
        auto fields = split(line.substr(eq + 1), ',');
        if (fields.size() != 4)
            throw MalformedLine(origin, line_no, "dhcp-host needs <mac>,<ipv4>,<hostname>,<lease>");
        auto rec = make_record(origin, line_no, fields[0], fields[1], fields[2], grammar);
        auto lease = lease_tier_from_duration(fields[3]);
        if (!lease) throw MalformedLine(origin, line_no, "invalid lease '" + std::string(fields[3]) + "'");
        rec.lease = lease;
        rec.source = RecordSource::dhcp;
        out.push_back(std::move(rec));
    });
    return out;
}

std::vector<AssetRecord> parse_asset_csv(std::string_view text, const std::string& origin,
                                         const HostnameGrammar& grammar) {
    std::vector<AssetRecord> out;
    bool header_seen = false;
    for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        auto line = trim(raw);
        if (line.empty()) return;
        auto fields = split_csv_line(line);
        if (!header_seen) {
            if (fields != std::vector<std::string>{"mac", "ip", "hostname", "model"})
                throw MalformedLine(origin, line_no, "expected header mac,ip,hostname,model");
            header_seen = true;
            return;
        }
        if (fields.size() != 4) throw MalformedLine(origin, line_no, "expected 4 fields");
        auto rec = make_record(origin, line_no, fields[0], fields[1], fields[2], grammar);
        if (!fields[3].empty()) rec.model = fields[3];
        rec.source = RecordSource::glpi;
        out.push_back(std::move(rec));
    });
    return out;
}

Registry load_registry(const std::filesystem::path& dhcp_conf, const std::filesystem::path& asset_export,
                       const HostnameGrammar& grammar) {
    std::vector<AssetRecord> dhcp, glpi;
    if (!dhcp_conf.empty()) dhcp = parse_dhcp_conf(read_file(dhcp_conf), dhcp_conf.string(), grammar);
    if (!asset_export.empty()) glpi = parse_asset_csv(read_file(asset_export), asset_export.string(), grammar);

    Registry registry;
    auto& stats = registry.mutable_stats();
    stats.dhcp_lines_accepted = dhcp.size();
    stats.export_rows_accepted = glpi.size();

    std::map<MacAddress, AssetRecord> merged;
    for (auto& rec : dhcp) {
        auto mac = rec.mac;
        if (!merged.emplace(mac, std::move(rec)).second) throw DuplicateMac(mac.str());
    }
    std::map<MacAddress, bool> seen_in_export;
    for (auto& rec : glpi) {
        if (!seen_in_export.emplace(rec.mac, true).second) throw DuplicateMac(rec.mac.str());
        auto it = merged.find(rec.mac);
        if (it == merged.end()) {
            auto mac = rec.mac;
            merged.emplace(mac, std::move(rec));
            continue;
        }
        // The DHCP resolver is authoritative for address and name; the
        // asset export contributes the model.
        it->second.source = RecordSource::both;
        if (rec.model) it->second.model = rec.model;
        ++stats.merged;
    }
    for (auto& [mac, rec] : merged) {
        if (rec.nonconforming()) ++stats.nonconforming;
        registry.insert(std::move(rec));
    }
    return registry;
}

std::string render_dhcp_line(const AssetRecord& record, LeaseTier tier) {
    return "dhcp-host=" + record.mac.str() + "," + record.ip.str() + "," + record.hostname + "," +
           std::string(lease_duration(tier));
}

std::string render_dhcp_conf(const std::vector<AssetRecord>& records) {
    std::string out = "# static reservations, one per registered asset\n";
    for (const auto& r : records) out += render_dhcp_line(r, r.lease.value_or(LeaseTier::H12)) + "\n";
    return out;
}

std::string render_asset_csv(const std::vector<AssetRecord>& records) {
    std::string out = "mac,ip,hostname,model\n";
    for (const auto& r : records) {
        std::string model = r.model.value_or("");
        if (model.find_first_of(",\"") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : model) quoted += (c == '"') ? std::string("\"\"") : std::string(1, c);
            model = quoted + "\"";
        }
        out += r.mac.str() + "," + r.ip.str() + "," + r.hostname + "," + model + "\n";
    }
    return out;
}

}  // namespace body
