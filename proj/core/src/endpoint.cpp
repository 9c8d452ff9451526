#include "sipgrey/endpoint.hpp"

#include <cstdio>
#include <cstdlib>

namespace sipgrey {

std::string ip_to_string(std::uint32_t ip) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (ip >> 24) & 0xff, (ip >> 16) & 0xff,
                  (ip >> 8) & 0xff, ip & 0xff);
    return buf;
}

std::optional<std::uint32_t> ip_from_string(std::string_view dotted) {
    std::uint32_t parts[4];
    int part = 0;
    std::uint32_t value = 0;
    int digits = 0;
    for (char c : dotted) {
        if (c >= '0' && c <= '9') {
            value = value * 10 + static_cast<std::uint32_t>(c - '0');
            if (++digits > 3 || value > 255) return std::nullopt;
        } else if (c == '.') {
            if (digits == 0 || part >= 3) return std::nullopt;
            parts[part++] = value;
            value = 0;
            digits = 0;
        } else {
            return std::nullopt;
        }
    }
    if (digits == 0 || part != 3) return std::nullopt;
    parts[3] = value;
    return (parts[0] << 24) | (parts[1] << 16) | (parts[2] << 8) | parts[3];
}

std::string to_string(const Endpoint& ep) {
    return ip_to_string(ep.ip) + ":" + std::to_string(ep.port);
}

std::optional<Endpoint> endpoint_from_string(std::string_view text) {
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto ip = ip_from_string(text.substr(0, colon));
    if (!ip) return std::nullopt;
    auto port_text = text.substr(colon + 1);
    if (port_text.empty()) return std::nullopt;
    std::uint32_t port = 0;
    for (char c : port_text) {
        if (c < '0' || c > '9') return std::nullopt;
        port = port * 10 + static_cast<std::uint32_t>(c - '0');
        if (port > 65535) return std::nullopt;
    }
    if (port == 0) return std::nullopt;
    return Endpoint{*ip, static_cast<std::uint16_t>(port)};
}

}  // namespace sipgrey
