#include "body/view.hpp"

namespace body {

using nlohmann::json;

namespace {
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22"};
constexpr const char* kNoCampus = "#7f7f7f";

void emit(const TopologyNode& node, const std::string* parent, const Coloring& coloring, ViewKind kind,
          const CampusPalette& palette, json& nodes, json& edges) {
    const auto* color = coloring.find(node.id);
    HealthVerdict effective = color ? color->effective : HealthVerdict{};
    HealthVerdict fill = color ? color->display_fill : HealthVerdict{};

    const auto& m = node.metadata;
    json tooltip = {{"name", node.label}};
    if (m.ip) tooltip["ip"] = *m.ip;
    if (m.mac) tooltip["mac"] = *m.mac;
    if (m.model) tooltip["model"] = *m.model;
    if (node.kind == NodeKind::unresolved_mac) {
        tooltip["oui_vendor"] = m.oui_vendor.value_or("unknown");
        if (m.parent_switch) tooltip["parent_switch"] = *m.parent_switch;
        if (m.port) tooltip["port"] = *m.port;
    }
    if (node.kind == NodeKind::server && m.stream_count) tooltip["stream_count"] = *m.stream_count;

    json n = {{"id", node.id},
              {"kind", to_string(node.kind)},
              {"label", node.label},
              {"fill", kind == ViewKind::server ? palette.color(m.campus.value_or(""))
                                                : std::string(to_string(fill.level))},
              {"border", to_string(effective.level)},
              {"tooltip", tooltip}};
    nodes.push_back(std::move(n));
    if (parent) edges.push_back({{"source", *parent}, {"target", node.id}});
    for (const auto& c : node.children) emit(c, &node.id, coloring, kind, palette, nodes, edges);
}

}  // namespace

CampusPalette::CampusPalette(const TopoMap& topo) {
    std::size_t i = 0;
    for (const auto& campus : topo.campuses())
        colors_[campus.campus_id] = kPalette[i++ % std::size(kPalette)];
}

std::string CampusPalette::color(std::string_view campus) const {
    auto it = colors_.find(campus);
    return it == colors_.end() ? kNoCampus : it->second;
}

json export_view(const TopologyNode& root, const Coloring& coloring, ViewKind kind, const CampusPalette& palette) {
    json nodes = json::array();
    json edges = json::array();
    emit(root, nullptr, coloring, kind, palette, nodes, edges);
    return {{"nodes", nodes}, {"edges", edges}};
}

json empty_view() { return {{"nodes", json::array()}, {"edges", json::array()}}; }

std::string server_view_file() { return "view_srv.json"; }

std::string switch_view_file(std::string_view switch_id) {
    return "view_sw_" + sanitize_name(switch_id) + ".json";
}

}  // namespace body
