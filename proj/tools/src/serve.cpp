#include <regex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "body/error.hpp"
#include "body/fsio.hpp"
#include "body/pipeline.hpp"
#include "body_cli/cli.hpp"

namespace body::cli {

namespace fs = std::filesystem;

std::string fetch_feed(const std::string& source) {
    static const std::regex url(R"(^(http://[^/]+)(/.*)?$)");
    if (source.rfind("https://", 0) == 0) throw ConfigError("https feeds are not supported: " + source);
    std::smatch m;
    if (!std::regex_match(source, m, url)) return read_feed_file(source);
    httplib::Client client(m[1].str());
    client.set_connection_timeout(5);
    client.set_read_timeout(10);
    auto path = m[2].matched ? m[2].str() : std::string("/");
    auto res = client.Get(path);
    if (!res) throw Error("feed " + source + ": " + httplib::to_string(res.error()));
    if (res->status != 200) throw Error("feed " + source + ": HTTP " + std::to_string(res->status));
    return res->body;
}

void configure_view_server(httplib::Server& server, const fs::path& views,
                           const std::optional<fs::path>& assets) {
    server.Get("/views", [views](const httplib::Request&, httplib::Response& res) {
        nlohmann::json list = nlohmann::json::array();
        if (fs::is_directory(views)) {
            std::vector<std::string> names;
            for (const auto& e : fs::directory_iterator(views))
                if (e.is_regular_file() && e.path().extension() == ".json") names.push_back(e.path().filename().string());
            std::sort(names.begin(), names.end());
            for (const auto& n : names) list.push_back(n);
        }
        res.set_content(canonical_json({{"views", list}}), "application/json");
    });
    server.Get(R"(/views/(view_[A-Za-z0-9._@-]+\.json))", [views](const httplib::Request& req, httplib::Response& res) {
        auto path = views / req.matches[1].str();
        if (!fs::is_regular_file(path)) {
            res.status = 404;
            res.set_content("no such view\n", "text/plain");
            return;
        }
        res.set_content(read_file(path), "application/json");
    });
    if (assets && fs::is_directory(*assets)) {
        server.set_mount_point("/", assets->string());
    } else {
        server.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("view exports under /views\n", "text/plain");
        });
    }
}

}  // namespace body::cli
