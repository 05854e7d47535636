#include "body/dialect.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <tuple>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

std::string_view to_string(Section s) {
    switch (s) {
        case Section::mac_table: return "mac_table";
        case Section::interfaces: return "interfaces";
        case Section::poe: return "poe";
        case Section::lldp: return "lldp";
    }
    return "mac_table";
}

const SectionCounts& ParseReport::counts(Section s) const {
    switch (s) {
        case Section::mac_table: return mac_table;
        case Section::interfaces: return interfaces;
        case Section::poe: return poe;
        case Section::lldp: return lldp;
    }
    return mac_table;
}

namespace {

enum class Field { port, mac, vlan, status, speed, admin, oper, power, poe_class, neighbor, neighbor_port };
enum class Attr { model, firmware, serial, poe_budget };

struct Binding {
    Field field;
    int group = 0;    // column mode
    std::string key;  // key/value mode
};

struct AttrRule {
    std::regex pattern;
    std::vector<std::pair<Attr, int>> groups;
};

struct SectionGrammar {
    std::vector<AttrRule> attributes;
    std::vector<std::regex> ignore;
    std::optional<std::regex> header;
    std::regex row;
    bool key_value = false;  // row regex captures a "k=v, k=v" body in group 1
    std::vector<Binding> bindings;
};

struct Vocabulary {
    std::set<std::string, std::less<>> link_up, link_down;
    std::set<std::string, std::less<>> admin_on, admin_off;
    std::set<std::string, std::less<>> oper_on, oper_off;
    std::set<std::string, std::less<>> no_class;
};

struct DialectGrammar {
    SectionGrammar mac_table, interfaces, poe, lldp;
    Vocabulary vocab;
    std::map<Section, std::string> commands;
};

std::regex re(const char* pattern) { return std::regex(pattern, std::regex::ECMAScript | std::regex::optimize); }

Binding col(Field f, int group) { return Binding{f, group, {}}; }
Binding key(Field f, std::string k) { return Binding{f, 0, std::move(k)}; }

const std::regex& separator() {
    static const std::regex r = re(R"(^[-+\s]+$)");
    return r;
}

DialectGrammar make_dialect_a() {
    DialectGrammar g;
    g.interfaces.attributes = {{re(R"(^System Model\s*:\s*(.+)$)"), {{Attr::model, 1}}},
                               {re(R"(^Firmware Version\s*:\s*(.+)$)"), {{Attr::firmware, 1}}},
                               {re(R"(^Serial Number\s*:\s*(.+)$)"), {{Attr::serial, 1}}}};
    g.interfaces.ignore = {separator()};
    g.interfaces.header = re(R"(^Port\s+Status\s+Vlan\s+Duplex\s+Speed\s+Type$)");
    g.interfaces.row = re(R"(^(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)$)");
    g.interfaces.bindings = {col(Field::port, 1), col(Field::status, 2), col(Field::speed, 5)};

    g.mac_table.ignore = {separator(), re(R"(^Mac Address Table$)"), re(R"(^Total Mac Addresses.*$)")};
    g.mac_table.header = re(R"(^Vlan\s+Mac Address\s+Type\s+Ports$)");
    g.mac_table.row = re(R"(^(\S+)\s+(\S+)\s+(\S+)\s+(\S+)$)");
    g.mac_table.bindings = {col(Field::vlan, 1), col(Field::mac, 2), col(Field::port, 4)};

    g.poe.attributes = {{re(R"(^\d+\s+([0-9.]+)\s+[0-9.]+\s+[0-9.]+$)"), {{Attr::poe_budget, 1}}}};
    g.poe.ignore = {separator(), re(R"(^Module\s+Available\s+Used\s+Remaining$)"), re(R"(^\(Watts\)(\s+\(Watts\))*$)")};
    g.poe.header = re(R"(^Interface\s+Admin\s+Oper\s+Power\s+Device\s+Class\s+Max$)");
    g.poe.row = re(R"(^(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)$)");
    g.poe.bindings = {col(Field::port, 1), col(Field::admin, 2), col(Field::oper, 3), col(Field::power, 4),
                      col(Field::poe_class, 6)};

    g.lldp.ignore = {separator(), re(R"(^Capability codes:.*$)"), re(R"(^\(R\) Router.*$)"),
                     re(R"(^\(W\) WLAN.*$)"), re(R"(^Total entries displayed:.*$)"),
                     re(R"(^% LLDP is not enabled$)")};
    g.lldp.header = re(R"(^Device ID\s+Local Intf\s+Hold-time\s+Capability\s+Port ID$)");
    g.lldp.row = re(R"(^(\S+)\s+(\S+)\s+(\d+)\s+(\S+)\s+(\S+)$)");
    g.lldp.bindings = {col(Field::neighbor, 1), col(Field::port, 2), col(Field::neighbor_port, 5)};

    g.vocab.link_up = {"connected"};
    g.vocab.link_down = {"notconnect", "disabled", "err-disabled"};
    g.vocab.admin_on = {"auto", "static"};
    g.vocab.admin_off = {"off"};
    g.vocab.oper_on = {"on"};
    g.vocab.oper_off = {"off", "searching", "faulty"};
    g.vocab.no_class = {"n/a"};
    g.commands = {{Section::mac_table, "show mac address-table"},
                  {Section::interfaces, "show interfaces status"},
                  {Section::poe, "show power inline"},
                  {Section::lldp, "show lldp neighbors"}};
    return g;
}

DialectGrammar make_dialect_b() {
    DialectGrammar g;
    auto banner = re(R"(^Status and Counters - .*$)");
    g.interfaces.attributes = {{re(R"(^Product Model\s*:\s*(.+)$)"), {{Attr::model, 1}}},
                               {re(R"(^Firmware Revision\s*:\s*(.+)$)"), {{Attr::firmware, 1}}},
                               {re(R"(^Serial Number\s*:\s*(.+)$)"), {{Attr::serial, 1}}}};
    g.interfaces.ignore = {separator(), banner};
    g.interfaces.header = re(R"(^Port\s+Type\s+Enabled\s+Status\s+Mode$)");
    g.interfaces.row = re(R"(^(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)$)");
    g.interfaces.bindings = {col(Field::port, 1), col(Field::status, 4), col(Field::speed, 5)};

    g.mac_table.ignore = {separator(), banner};
    g.mac_table.header = re(R"(^MAC Address\s+Port\s+VLAN$)");
    g.mac_table.row = re(R"(^(\S+)\s+(\S+)\s+(\S+)$)");
    g.mac_table.bindings = {col(Field::mac, 1), col(Field::port, 2), col(Field::vlan, 3)};

    g.poe.attributes = {{re(R"(^Total Available Power\s*:\s*([0-9.]+)\s*W$)"), {{Attr::poe_budget, 1}}}};
    g.poe.ignore = {separator(), banner, re(R"(^Total Power Drawn\s*:.*$)")};
    g.poe.header = re(R"(^Port\s+PoE\s+Status\s+Class\s+Draw\(W\)$)");
    g.poe.row = re(R"(^(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)$)");
    g.poe.bindings = {col(Field::port, 1), col(Field::admin, 2), col(Field::oper, 3), col(Field::poe_class, 4),
                      col(Field::power, 5)};

    g.lldp.ignore = {separator(), re(R"(^LLDP Remote Devices Information$)")};
    g.lldp.header = re(R"(^LocalPort\s+\|\s+ChassisId\s+PortId\s+SysName$)");
    g.lldp.row = re(R"(^(\S+)\s+\|\s+(\S+)\s+(\S+)\s+(\S+)$)");
    g.lldp.bindings = {col(Field::port, 1), col(Field::neighbor_port, 3), col(Field::neighbor, 4)};

    g.vocab.link_up = {"Up"};
    g.vocab.link_down = {"Down"};
    g.vocab.admin_on = {"Yes"};
    g.vocab.admin_off = {"No"};
    g.vocab.oper_on = {"Delivering"};
    g.vocab.oper_off = {"Searching", "Disabled", "Fault"};
    g.vocab.no_class = {"-"};
    g.commands = {{Section::mac_table, "show mac-address"},
                  {Section::interfaces, "show interfaces brief"},
                  {Section::poe, "show power-over-ethernet brief"},
                  {Section::lldp, "show lldp info remote-device"}};
    return g;
}

DialectGrammar make_dialect_c() {
    DialectGrammar g;
    auto comment = re(R"(^#.*$)");
    auto record = re(R"(^\{(.*)\}$)");
    g.interfaces.attributes = {{re(R"(^system \{model=([^,}]*), firmware=([^,}]*), serial=([^,}]*)\}$)"),
                                {{Attr::model, 1}, {Attr::firmware, 2}, {Attr::serial, 3}}}};
    g.interfaces.ignore = {comment};
    g.interfaces.row = record;
    g.interfaces.key_value = true;
    g.interfaces.bindings = {key(Field::port, "port"), key(Field::status, "link"), key(Field::speed, "speed")};

    g.mac_table.ignore = {comment};
    g.mac_table.row = record;
    g.mac_table.key_value = true;
    g.mac_table.bindings = {key(Field::mac, "mac"), key(Field::port, "port"), key(Field::vlan, "vlan")};

    g.poe.attributes = {{re(R"(^poe_system \{budget=([0-9.]+)\}$)"), {{Attr::poe_budget, 1}}}};
    g.poe.ignore = {comment};
    g.poe.row = record;
    g.poe.key_value = true;
    g.poe.bindings = {key(Field::port, "port"), key(Field::admin, "poe"), key(Field::oper, "state"),
                      key(Field::poe_class, "class"), key(Field::power, "power")};

    g.lldp.ignore = {comment};
    g.lldp.row = record;
    g.lldp.key_value = true;
    g.lldp.bindings = {key(Field::port, "local_port"), key(Field::neighbor, "sys_name"),
                       key(Field::neighbor_port, "remote_port")};

    g.vocab.link_up = {"up"};
    g.vocab.link_down = {"down"};
    g.vocab.admin_on = {"enabled"};
    g.vocab.admin_off = {"disabled"};
    g.vocab.oper_on = {"delivering"};
    g.vocab.oper_off = {"searching", "disabled", "fault"};
    g.vocab.no_class = {"none"};
    g.commands = {{Section::mac_table, "fdb show"},
                  {Section::interfaces, "interface show"},
                  {Section::poe, "poe show"},
                  {Section::lldp, "lldp neighbor show"}};
    return g;
}

const DialectGrammar& grammar_for(Dialect d) {
    static const DialectGrammar a = make_dialect_a();
    static const DialectGrammar b = make_dialect_b();
    static const DialectGrammar c = make_dialect_c();
    switch (d) {
        case Dialect::dialect_a: return a;
        case Dialect::dialect_b: return b;
        case Dialect::dialect_c: return c;
    }
    throw UnknownDialect(std::to_string(static_cast<int>(d)));
}

using Row = std::map<Field, std::string>;

struct RawRow {
    std::size_t line_no;
    std::string text;
    std::optional<Row> fields;  // empty when the row did not match the grammar
};

struct RawSection {
    std::vector<RawRow> rows;
    std::map<Attr, std::string> attributes;
};

std::optional<Row> split_key_values(std::string_view body, const std::vector<Binding>& bindings) {
    std::map<std::string, std::string, std::less<>> kv;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto comma = body.find(',', pos);
        auto piece = trim(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (!piece.empty()) {
            auto eq = piece.find('=');
            if (eq == std::string_view::npos) return std::nullopt;
            kv.emplace(std::string(trim(piece.substr(0, eq))), std::string(trim(piece.substr(eq + 1))));
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    Row row;
    for (const auto& b : bindings) {
        auto it = kv.find(b.key);
        if (it == kv.end()) return std::nullopt;
        row[b.field] = it->second;
    }
    return row;
}

RawSection scan_section(const SectionGrammar& g, Section section, std::string_view text) {
    RawSection out;
    bool header_seen = false;
    std::size_t line_no = 0, pos = 0;
    std::smatch m;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        std::string line(trim(raw));
        if (line.empty()) continue;

        bool consumed = false;
        for (const auto& rule : g.attributes) {
            if (std::regex_match(line, m, rule.pattern)) {
                for (const auto& [attr, group] : rule.groups) out.attributes[attr] = std::string(trim(m[group].str()));
                consumed = true;
                break;
            }
        }
        if (consumed) continue;
        if (std::any_of(g.ignore.begin(), g.ignore.end(), [&](const auto& r) { return std::regex_match(line, r); }))
            continue;
        if (g.header && std::regex_match(line, *g.header)) {
            header_seen = true;
            continue;
        }
        if (g.header && !header_seen)
            throw ParseFailure(std::string(to_string(section)), line_no, "data before table header");

        RawRow row{line_no, line, std::nullopt};
        if (std::regex_match(line, m, g.row)) {
            if (g.key_value) {
                row.fields = split_key_values(m[1].str(), g.bindings);
            } else {
                Row fields;
                for (const auto& b : g.bindings) fields[b.field] = m[b.group].str();
                row.fields = std::move(fields);
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        double v = std::stod(std::string(s), &used);
        if (used != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Speed columns differ by vendor ("a-1000", "1000FDx", "1000", "auto").
int parse_speed(std::string_view s) {
    auto b = s.find_first_of("0123456789");
    if (b == std::string_view::npos) return 0;
    auto e = s.find_first_not_of("0123456789", b);
    return parse_int(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b)).value_or(0);
}

class Accountant {
public:
    Accountant(ParseReport& report, Section section, SectionCounts& counts)
        : report_(report), section_(section), counts_(counts) {}

    void accept() { ++counts_.rows, ++counts_.accepted; }
    void skip(const RawRow& row, std::string reason) {
        ++counts_.rows, ++counts_.skipped;
        report_.skips.push_back({section_, row.line_no, std::move(reason), row.text});
    }

private:
    ParseReport& report_;
    Section section_;
    SectionCounts& counts_;
};

}  // namespace

std::string collection_command(Dialect dialect, Section section) {
    return grammar_for(dialect).commands.at(section);
}

ParsedBundle parse_cli_bundle(Dialect dialect, const CliBundle& bundle) {
    const auto& g = grammar_for(dialect);
    const auto& vocab = g.vocab;
    ParsedBundle out;
    auto& profile = out.profile;
    auto& report = out.report;
    profile.vendor_dialect = dialect;

    // Interfaces first: every other section references them.
    auto ifs = scan_section(g.interfaces, Section::interfaces, bundle.interface_text);
    Accountant if_acct(report, Section::interfaces, report.interfaces);
    std::map<std::string, std::size_t, std::less<>> port_index;
    for (const auto& row : ifs.rows) {
        if (!row.fields) {
            if_acct.skip(row, "unrecognized row");
            continue;
        }
        const auto& f = *row.fields;
        const auto& status = f.at(Field::status);
        bool up = vocab.link_up.count(status) > 0;
        if (!up && !vocab.link_down.count(status)) {
            if_acct.skip(row, "unknown link status '" + status + "'");
            continue;
        }
        if (port_index.count(f.at(Field::port))) {
            if_acct.skip(row, "duplicate interface");
            continue;
        }
        InterfaceState iface;
        iface.port = f.at(Field::port);
        iface.link_up = up;
        iface.speed_mbps = up ? parse_speed(f.at(Field::speed)) : 0;
        port_index.emplace(iface.port, profile.interfaces.size());
        profile.interfaces.push_back(std::move(iface));
        if_acct.accept();
    }
    if (auto it = ifs.attributes.find(Attr::model); it != ifs.attributes.end()) profile.model = it->second;
    if (auto it = ifs.attributes.find(Attr::firmware); it != ifs.attributes.end()) profile.firmware = it->second;
    if (auto it = ifs.attributes.find(Attr::serial); it != ifs.attributes.end()) profile.serial = it->second;

    auto poe = scan_section(g.poe, Section::poe, bundle.poe_text);
    Accountant poe_acct(report, Section::poe, report.poe);
    if (auto it = poe.attributes.find(Attr::poe_budget); it != poe.attributes.end())
        profile.poe_budget_watts = parse_double(it->second).value_or(0.0);
    for (const auto& row : poe.rows) {
        if (!row.fields) {
            poe_acct.skip(row, "unrecognized row");
            continue;
        }
        const auto& f = *row.fields;
        auto idx = port_index.find(f.at(Field::port));
        if (idx == port_index.end()) {
            poe_acct.skip(row, "unknown port");
            continue;
        }
        const auto& admin = f.at(Field::admin);
        const auto& oper = f.at(Field::oper);
        bool capable = vocab.admin_on.count(admin) > 0;
        bool delivering = vocab.oper_on.count(oper) > 0;
        if ((!capable && !vocab.admin_off.count(admin)) || (!delivering && !vocab.oper_off.count(oper))) {
            poe_acct.skip(row, "unknown PoE state");
            continue;
        }
        auto power = parse_double(f.at(Field::power));
        if (!power || *power < 0.0) {
            poe_acct.skip(row, "invalid power draw");
            continue;
        }
        std::optional<int> cls;
        if (!vocab.no_class.count(f.at(Field::poe_class))) {
            cls = parse_int(f.at(Field::poe_class));
            if (!cls) {
                poe_acct.skip(row, "invalid PoE class");
                continue;
            }
        }
        auto& iface = profile.interfaces[idx->second];
        if (delivering && (!capable || !(*power > 0.0) || !iface.link_up)) {
            poe_acct.skip(row, "inconsistent PoE delivery state");
            continue;
        }
        iface.poe = PoeState{capable, delivering, *power, cls};
        poe_acct.accept();
    }

    auto macs = scan_section(g.mac_table, Section::mac_table, bundle.mac_table_text);
    Accountant mac_acct(report, Section::mac_table, report.mac_table);
    std::set<std::tuple<std::string, MacAddress, int>> seen_rows;
    for (const auto& row : macs.rows) {
        if (!row.fields) {
            mac_acct.skip(row, "unrecognized row");
            continue;
        }
        const auto& f = *row.fields;
        auto vlan = parse_int(f.at(Field::vlan));
        if (!vlan) {
            mac_acct.skip(row, "non-numeric VLAN");
            continue;
        }
        MacAddress mac;
        try {
            mac = normalize_mac(f.at(Field::mac));
        } catch (const MalformedMac&) {
            mac_acct.skip(row, "malformed MAC");
            continue;
        }
        if (!port_index.count(f.at(Field::port))) {
            mac_acct.skip(row, "unknown port");
            continue;
        }
        if (!seen_rows.emplace(f.at(Field::port), mac, *vlan).second) {
            mac_acct.skip(row, "duplicate row");
            continue;
        }
        profile.mac_table.push_back({f.at(Field::port), mac, *vlan});
        mac_acct.accept();
    }

    auto lldp = scan_section(g.lldp, Section::lldp, bundle.lldp_text);
    Accountant lldp_acct(report, Section::lldp, report.lldp);
    for (const auto& row : lldp.rows) {
        if (!row.fields) {
            lldp_acct.skip(row, "unrecognized row");
            continue;
        }
        const auto& f = *row.fields;
        if (!port_index.count(f.at(Field::port))) {
            lldp_acct.skip(row, "unknown port");
            continue;
        }
        LldpNeighbor n{f.at(Field::port), f.at(Field::neighbor), f.at(Field::neighbor_port)};
        if (std::find(profile.lldp_neighbors.begin(), profile.lldp_neighbors.end(), n) != profile.lldp_neighbors.end()) {
            lldp_acct.skip(row, "duplicate row");
            continue;
        }
        profile.lldp_neighbors.push_back(std::move(n));
        lldp_acct.accept();
    }

    profile.canonicalize();
    return out;
}

}  // namespace body
