#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace body::cli {

// Exit codes of the `body` binary.
constexpr int kOk = 0;
constexpr int kHardError = 1;
constexpr int kConfigError = 2;

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

// Feed loader accepting file paths and http:// URLs.
std::string fetch_feed(const std::string& source);

// Routes: GET /views (index), GET /views/<file> (view JSON), and static
// viewer assets mounted at / when an assets dir is given.
void configure_view_server(httplib::Server& server, const std::filesystem::path& views,
                           const std::optional<std::filesystem::path>& assets);

}  // namespace body::cli
