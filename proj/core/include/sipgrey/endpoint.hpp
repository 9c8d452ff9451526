#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sipgrey {

// UDP endpoint. Addresses are IPv4 only; port 0 is reserved and never valid
// for a peer.
struct Endpoint {
    std::uint32_t ip = 0;  // host byte order
    std::uint16_t port = 0;

    auto operator<=>(const Endpoint&) const = default;
};

std::string ip_to_string(std::uint32_t ip);
std::optional<std::uint32_t> ip_from_string(std::string_view dotted);

std::string to_string(const Endpoint& ep);
std::optional<Endpoint> endpoint_from_string(std::string_view text);

}  // namespace sipgrey
