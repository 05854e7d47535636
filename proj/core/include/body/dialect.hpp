#pragma once

#include <string>
#include <vector>

#include "body/profile.hpp"

namespace body {

// Raw transcripts of the four collection commands of one session.
struct CliBundle {
    std::string mac_table_text;
    std::string interface_text;
    std::string poe_text;
    std::string lldp_text;
};

enum class Section { mac_table, interfaces, poe, lldp };
std::string_view to_string(Section s);

// A data row that could not be turned into a profile entry.
struct RowSkip {
    Section section = Section::mac_table;
    std::size_t line_no = 0;
    std::string reason;
    std::string text;
};

struct SectionCounts {
    std::size_t rows = 0;
    std::size_t accepted = 0;
    std::size_t skipped = 0;
};

struct ParseReport {
    SectionCounts mac_table, interfaces, poe, lldp;
    std::vector<RowSkip> skips;

    const SectionCounts& counts(Section s) const;
};

struct ParsedBundle {
    SwitchProfile profile;  // switch_id and collected_at left empty
    ParseReport report;
};

// The command each dialect's collection session issues per section.
std::string collection_command(Dialect dialect, Section section);

// Parses all four sections. Partial or inconsistent rows become RowSkips;
// ParseFailure is reserved for sections whose table structure is unreadable.
ParsedBundle parse_cli_bundle(Dialect dialect, const CliBundle& bundle);

}  // namespace body
