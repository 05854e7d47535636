#pragma once

#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace body {

enum class Role { sw, cam, srv, nvr };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view s);

// Device name that encodes its physical location.
struct PositionalHostname {
    std::string campus;
    std::string institute;
    Role role = Role::cam;
    std::string building;
    int floor = 0;
    std::optional<int> index;

    // Floor-group key, e.g. "bldb-flr0".
    std::string floor_key() const;

    bool operator==(const PositionalHostname&) const = default;
};

// Positional naming grammar compiled from a template such as
//   camp-{campus}-inst-{institute}-{role}-bld{building}-flr{floor}[-{index}]
// Tokens are lowercase alphanumeric; floor and index are decimal; role is one
// of sw|cam|srv|nvr; a bracketed segment is optional. Index renders with at
// least two digits.
class HostnameGrammar {
public:
    static constexpr std::string_view kDefaultTemplate =
        "camp-{campus}-inst-{institute}-{role}-bld{building}-flr{floor}[-{index}]";

    HostnameGrammar() : HostnameGrammar(std::string(kDefaultTemplate)) {}
    explicit HostnameGrammar(std::string tmpl);

    // Reads the template from the first non-comment line of a pattern file.
    static HostnameGrammar from_file(const std::filesystem::path& path);

    std::optional<PositionalHostname> parse(std::string_view raw) const;
    std::string render(const PositionalHostname& h) const;

    const std::string& template_string() const noexcept { return template_; }

private:
    enum class Field { campus, institute, role, building, floor, index };
    std::string template_;
    std::regex regex_;
    std::vector<Field> captures_;
};

const HostnameGrammar& default_grammar();

inline std::optional<PositionalHostname> parse_hostname(std::string_view raw) {
    return default_grammar().parse(raw);
}
inline std::string render_hostname(const PositionalHostname& h) { return default_grammar().render(h); }

}  // namespace body
