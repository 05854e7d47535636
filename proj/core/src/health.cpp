#include "body/health.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "body/error.hpp"
#include "body/fsio.hpp"

namespace body {

using nlohmann::json;

std::string_view to_string(Level level) {
    switch (level) {
        case Level::Green: return "green";
        case Level::Amber: return "amber";
        case Level::Red: return "red";
    }
    return "green";
}

std::string_view monitor_string(Level level) {
    switch (level) {
        case Level::Green: return "OK";
        case Level::Amber: return "WARNING";
        case Level::Red: return "CRITICAL";
    }
    return "OK";
}

std::string_view to_string(VerdictSource source) {
    switch (source) {
        case VerdictSource::monitor_feed: return "monitor_feed";
        case VerdictSource::propagated: return "propagated";
        case VerdictSource::inherited: return "inherited";
        case VerdictSource::default_: return "default";
    }
    return "default";
}

VerdictFeed parse_verdict_feed(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw MalformedFeed(std::string("verdict feed is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw MalformedFeed("verdict feed must be a JSON object");
    VerdictFeed feed;
    for (const auto& [host, value] : j.items()) {
        if (!value.is_string()) throw MalformedFeed("verdict for " + host + " is not a string");
        const auto& s = value.get_ref<const std::string&>();
        if (s == "OK") feed[host] = Level::Green;
        else if (s == "WARNING") feed[host] = Level::Amber;
        else if (s == "CRITICAL") feed[host] = Level::Red;
        else throw MalformedFeed("invalid level '" + s + "' for " + host);
    }
    return feed;
}

VerdictFeed load_verdict_feed(const std::filesystem::path& path) { return parse_verdict_feed(read_file(path)); }

std::string render_verdict_feed(const VerdictFeed& feed) {
    json j = json::object();
    for (const auto& [host, level] : feed) j[host] = monitor_string(level);
    return canonical_json(j);
}

Level cap_amber(Level level) { return std::min(level, Level::Amber); }

const NodeColor* Coloring::find(std::string_view id) const {
    auto it = nodes.find(id);
    return it == nodes.end() ? nullptr : &it->second;
}

namespace {

bool is_switch(NodeKind k) { return k == NodeKind::access_switch || k == NodeKind::distribution_switch; }

HealthVerdict color_up(const TopologyNode& node, const VerdictFeed& verdicts, Coloring& out,
                       std::set<std::string, std::less<>>& matched) {
    HealthVerdict v;
    if (auto it = verdicts.find(node.id); it != verdicts.end()) {
        v = {it->second, VerdictSource::monitor_feed};
        matched.insert(it->first);
    }
    for (const auto& c : node.children) {
        auto child = color_up(c, verdicts, out, matched);
        auto lifted = cap_amber(child.level);
        if (lifted > v.level) v = {lifted, VerdictSource::propagated};
    }
    out.nodes[node.id].effective = v;
    return v;
}

void fill_down(const TopologyNode& node, const HealthVerdict& switch_color, Coloring& out) {
    auto& self = out.nodes[node.id];
    auto inherited = is_switch(node.kind) ? self.effective : switch_color;
    if (node.children.empty() && self.effective.source != VerdictSource::monitor_feed)
        self.display_fill = {inherited.level, VerdictSource::inherited};
    else
        self.display_fill = self.effective;
    for (const auto& c : node.children) fill_down(c, inherited, out);
}

}  // namespace

Coloring propagate_colors(const TopologyNode& tree, const VerdictFeed& verdicts) {
    Coloring out;
    std::set<std::string, std::less<>> matched;
    color_up(tree, verdicts, out, matched);
    fill_down(tree, out.nodes[tree.id].effective, out);
    for (const auto& [host, level] : verdicts)
        if (!matched.count(host)) out.unmatched.push_back(host);
    return out;
}

VerdictFeed as_feed(const Coloring& coloring) {
    VerdictFeed feed;
    for (const auto& [id, color] : coloring.nodes)
        if (color.effective.level != Level::Green) feed[id] = color.effective.level;
    return feed;
}

}  // namespace body
