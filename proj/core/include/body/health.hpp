#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "body/topology.hpp"

namespace body {

enum class Level { Green = 0, Amber = 1, Red = 2 };
enum class VerdictSource { monitor_feed, propagated, inherited, default_ };

std::string_view to_string(Level level);         // "green", "amber", "red"
std::string_view monitor_string(Level level);    // "OK", "WARNING", "CRITICAL"
std::string_view to_string(VerdictSource source);

struct HealthVerdict {
    Level level = Level::Green;
    VerdictSource source = VerdictSource::default_;

    bool operator==(const HealthVerdict&) const = default;
};

// Node id -> level, as reported by the monitoring platform.
using VerdictFeed = std::map<std::string, Level, std::less<>>;

// JSON object of "<hostname>": "OK" | "WARNING" | "CRITICAL". Throws
// MalformedFeed otherwise.
VerdictFeed parse_verdict_feed(std::string_view json_text);
VerdictFeed load_verdict_feed(const std::filesystem::path& path);
std::string render_verdict_feed(const VerdictFeed& feed);

// Clamp applied to severity arriving from children.
Level cap_amber(Level level);

struct NodeColor {
    HealthVerdict effective;     // upward propagation, drives the border
    HealthVerdict display_fill;  // downward inheritance for verdict-less leaves
};

struct Coloring {
    std::map<std::string, NodeColor, std::less<>> nodes;
    std::vector<std::string> unmatched;  // feed entries naming no node in the tree

    const NodeColor* find(std::string_view id) const;
    bool operator==(const Coloring&) const = default;
};

Coloring propagate_colors(const TopologyNode& tree, const VerdictFeed& verdicts);

// Effective levels above Green, in feed form.
VerdictFeed as_feed(const Coloring& coloring);

}  // namespace body
