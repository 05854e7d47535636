#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace body {

// 48-bit hardware address. Ordering is byte-lexicographic; the canonical
// text form is lowercase colon-separated hex.
class MacAddress {
public:
    using Octets = std::array<std::uint8_t, 6>;

    constexpr MacAddress() = default;
    constexpr explicit MacAddress(const Octets& octets) : octets_(octets) {}

    // Accepts aa:bb:cc:dd:ee:ff, AA-BB-CC-DD-EE-FF, aabb.ccdd.eeff and
    // aabbccddeeff (any case). Throws MalformedMac otherwise.
    static MacAddress parse(std::string_view raw);

    const Octets& octets() const noexcept { return octets_; }
    std::uint32_t oui() const noexcept {
        return (std::uint32_t{octets_[0]} << 16) | (std::uint32_t{octets_[1]} << 8) | octets_[2];
    }

    std::string str() const;
    // Dotted form used by dialect_a (aabb.ccdd.eeff).
    std::string dotted() const;
    // Uppercase dash form (AA-BB-CC-DD-EE-FF).
    std::string dashed() const;
    // Bare hex, no separators.
    std::string bare() const;

    auto operator<=>(const MacAddress&) const = default;

private:
    Octets octets_{};
};

MacAddress normalize_mac(std::string_view raw);

}  // namespace body

template <>
struct std::hash<body::MacAddress> {
    std::size_t operator()(const body::MacAddress& mac) const noexcept {
        std::uint64_t v = 0;
        for (auto b : mac.octets()) v = (v << 8) | b;
        return std::hash<std::uint64_t>{}(v);
    }
};
