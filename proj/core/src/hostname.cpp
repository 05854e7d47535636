#include "body/hostname.hpp"

#include <charconv>
#include <fstream>

#include "body/error.hpp"

namespace body {
namespace {

constexpr std::string_view kToken = "([a-z0-9]+)";
constexpr std::string_view kNumber = "([0-9]+)";
constexpr std::string_view kRole = "(sw|cam|srv|nvr)";

std::string regex_escape(char c) {
    static constexpr std::string_view special = R"(\^$.|?*+()[]{})";
    if (special.find(c) != std::string_view::npos) return std::string("\\") + c;
    return std::string(1, c);
}

std::optional<int> to_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

std::string_view to_string(Role role) {
    switch (role) {
        case Role::sw: return "sw";
        case Role::cam: return "cam";
        case Role::srv: return "srv";
        case Role::nvr: return "nvr";
    }
    return "cam";
}

std::optional<Role> role_from_string(std::string_view s) {
    if (s == "sw") return Role::sw;
    if (s == "cam") return Role::cam;
    if (s == "srv") return Role::srv;
    if (s == "nvr") return Role::nvr;
    return std::nullopt;
}

std::string PositionalHostname::floor_key() const {
    return "bld" + building + "-flr" + std::to_string(floor);
}

HostnameGrammar::HostnameGrammar(std::string tmpl) : template_(std::move(tmpl)) {
    std::string pattern = "^";
    bool in_optional = false;
    bool saw_campus = false, saw_role = false, saw_floor = false;
    for (std::size_t i = 0; i < template_.size(); ++i) {
        char c = template_[i];
        if (c == '[') {
            if (in_optional) throw ConfigError("nested optional segment in hostname template");
            in_optional = true;
            pattern += "(?:";
        } else if (c == ']') {
            if (!in_optional) throw ConfigError("unbalanced ']' in hostname template");
            in_optional = false;
            pattern += ")?";
        } else if (c == '{') {
            auto close = template_.find('}', i);
            if (close == std::string::npos) throw ConfigError("unterminated placeholder in hostname template");
            std::string_view name(template_.data() + i + 1, close - i - 1);
            i = close;
            if (name == "campus") {
                captures_.push_back(Field::campus), pattern += kToken, saw_campus = true;
            } else if (name == "institute") {
                captures_.push_back(Field::institute), pattern += kToken;
            } else if (name == "role") {
                captures_.push_back(Field::role), pattern += kRole, saw_role = true;
            } else if (name == "building") {
                captures_.push_back(Field::building), pattern += kToken;
            } else if (name == "floor") {
                captures_.push_back(Field::floor), pattern += kNumber, saw_floor = true;
            } else if (name == "index") {
                captures_.push_back(Field::index), pattern += kNumber;
            } else {
                throw ConfigError("unknown hostname placeholder {" + std::string(name) + "}");
            }
        } else {
            pattern += regex_escape(c);
        }
    }
    if (in_optional) throw ConfigError("unbalanced '[' in hostname template");
    if (!saw_campus || !saw_role || !saw_floor)
        throw ConfigError("hostname template must contain {campus}, {role} and {floor}");
    pattern += "$";
    regex_ = std::regex(pattern, std::regex::ECMAScript | std::regex::optimize);
}

HostnameGrammar HostnameGrammar::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read hostname pattern file " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        return HostnameGrammar(line);
    }
    throw ConfigError("hostname pattern file is empty: " + path.string());
}

std::optional<PositionalHostname> HostnameGrammar::parse(std::string_view raw) const {
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_match(raw.begin(), raw.end(), m, regex_)) return std::nullopt;
    PositionalHostname h;
    for (std::size_t i = 0; i < captures_.size(); ++i) {
        const auto& sub = m[i + 1];
        if (!sub.matched) continue;
        std::string_view value(&*sub.first, static_cast<std::size_t>(sub.length()));
        switch (captures_[i]) {
            case Field::campus: h.campus = value; break;
            case Field::institute: h.institute = value; break;
            case Field::role: h.role = *role_from_string(value); break;
            case Field::building: h.building = value; break;
            case Field::floor: {
                auto v = to_int(value);
                if (!v) return std::nullopt;
                h.floor = *v;
                break;
            }
            case Field::index: {
                auto v = to_int(value);
                if (!v) return std::nullopt;
                h.index = *v;
                break;
            }
        }
    }
    return h;
}

std::string HostnameGrammar::render(const PositionalHostname& h) const {
    std::string out;
    std::string segment;
    bool in_optional = false;
    bool segment_complete = true;
    auto emit = [&](const std::string& s) { (in_optional ? segment : out) += s; };
    for (std::size_t i = 0; i < template_.size(); ++i) {
        char c = template_[i];
        if (c == '[') {
            in_optional = true;
            segment.clear();
            segment_complete = true;
        } else if (c == ']') {
            in_optional = false;
            if (segment_complete) out += segment;
        } else if (c == '{') {
            auto close = template_.find('}', i);
            std::string_view name(template_.data() + i + 1, close - i - 1);
            i = close;
            if (name == "campus") emit(h.campus);
            else if (name == "institute") emit(h.institute);
            else if (name == "role") emit(std::string(to_string(h.role)));
            else if (name == "building") emit(h.building);
            else if (name == "floor") emit(std::to_string(h.floor));
            else if (name == "index") {
                if (h.index) {
                    auto s = std::to_string(*h.index);
                    if (s.size() < 2) s.insert(0, 2 - s.size(), '0');
                    emit(s);
                } else {
                    segment_complete = false;
                }
            }
        } else {
            emit(std::string(1, c));
        }
    }
    return out;
}

const HostnameGrammar& default_grammar() {
    static const HostnameGrammar grammar;
    return grammar;
}

}  // namespace body
