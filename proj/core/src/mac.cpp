#include "body/mac.hpp"

#include "body/error.hpp"

namespace body {
namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// Collects exactly 12 hex digits, checking separators against the layout
// implied by the input length.
bool collect_digits(std::string_view raw, std::array<int, 12>& digits) {
    std::size_t group = 0;
    char sep = 0;
    switch (raw.size()) {
        case 17:  // aa:bb:cc:dd:ee:ff or AA-BB-CC-DD-EE-FF
            group = 2;
            sep = raw[2];
            if (sep != ':' && sep != '-') return false;
            break;
        case 14:  // aabb.ccdd.eeff
            group = 4;
            sep = '.';
            break;
        case 12:
            break;
        default:
            return false;
    }
    std::size_t n = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (group != 0 && (i + 1) % (group + 1) == 0) {
            if (raw[i] != sep) return false;
            continue;
        }
        int v = hex_value(raw[i]);
        if (v < 0) return false;
        digits[n++] = v;
    }
    return n == 12;
}

constexpr char kHex[] = "0123456789abcdef";

}  // namespace

MacAddress MacAddress::parse(std::string_view raw) {
    std::array<int, 12> digits{};
    if (!collect_digits(raw, digits)) throw MalformedMac(std::string(raw));
    Octets octets{};
    for (std::size_t i = 0; i < 6; ++i)
        octets[i] = static_cast<std::uint8_t>(digits[2 * i] * 16 + digits[2 * i + 1]);
    return MacAddress(octets);
}

std::string MacAddress::str() const {
    std::string out;
    out.reserve(17);
    for (std::size_t i = 0; i < 6; ++i) {
        if (i) out.push_back(':');
        out.push_back(kHex[octets_[i] >> 4]);
        out.push_back(kHex[octets_[i] & 0xf]);
    }
    return out;
}

std::string MacAddress::dotted() const {
    std::string out;
    out.reserve(14);
    for (std::size_t i = 0; i < 6; ++i) {
        if (i == 2 || i == 4) out.push_back('.');
        out.push_back(kHex[octets_[i] >> 4]);
        out.push_back(kHex[octets_[i] & 0xf]);
    }
    return out;
}

std::string MacAddress::dashed() const {
    static constexpr char kUpper[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(17);
    for (std::size_t i = 0; i < 6; ++i) {
        if (i) out.push_back('-');
        out.push_back(kUpper[octets_[i] >> 4]);
        out.push_back(kUpper[octets_[i] & 0xf]);
    }
    return out;
}

std::string MacAddress::bare() const {
    std::string out;
    out.reserve(12);
    for (auto b : octets_) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xf]);
    }
    return out;
}

MacAddress normalize_mac(std::string_view raw) { return MacAddress::parse(raw); }

}  // namespace body
