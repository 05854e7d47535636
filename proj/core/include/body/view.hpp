#pragma once

#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "body/health.hpp"
#include "body/topo_map.hpp"
#include "body/topology.hpp"

namespace body {

enum class ViewKind { server, switch_ };

// Fill colors per campus, assigned in campus id order.
class CampusPalette {
public:
    CampusPalette() = default;
    explicit CampusPalette(const TopoMap& topo);

    std::string color(std::string_view campus) const;

private:
    std::map<std::string, std::string, std::less<>> colors_;
};

// Flat node/edge document for the viewer:
//   {nodes: [{id, kind, label, fill, border, tooltip{}}], edges: [{source, target}]}
// Nodes are listed in pre-order. Server views fill by campus; switch views
// fill by the inherited health color. Borders carry the effective health.
nlohmann::json export_view(const TopologyNode& root, const Coloring& coloring, ViewKind kind,
                           const CampusPalette& palette = {});
nlohmann::json empty_view();

std::string server_view_file();                       // "view_srv.json"
std::string switch_view_file(std::string_view switch_id);  // "view_sw_<id>.json"

}  // namespace body
