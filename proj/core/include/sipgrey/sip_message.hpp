#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sipgrey/endpoint.hpp"

namespace sipgrey {

enum class MessageKind { Request, Response };

enum class SipMethod { Register, Invite, Ack, Bye, Cancel, Other };

SipMethod method_from_token(std::string_view token);

// Decoded view of one SIP datagram, reduced to the fields the pinhole
// decision path needs. Everything else in the packet is ignored.
struct SipMessage {
    MessageKind kind = MessageKind::Request;
    SipMethod method = SipMethod::Other;
    std::string method_token;  // original spelling, also kept for Other
    std::optional<int> status_code;  // responses only, 100..699
    std::string call_id;
    std::string via_branch;  // topmost Via only
    std::string from_tag;
    std::optional<std::string> to_tag;
    std::uint32_t cseq_number = 0;
    std::string cseq_method;
    std::string request_uri;  // empty for responses
    bool is_emergency = false;
    Endpoint src;
    Endpoint dst;
    std::size_t length_bytes = 0;
};

enum class ParseFailure {
    NotSip,           // start line is not a SIP request or status line
    MissingHeader,    // a required header is absent
    MalformedHeader,  // a required header is present but unusable
    Truncated,        // datagram ends before the start line does
};

struct ParseError {
    ParseFailure reason = ParseFailure::NotSip;
    std::string header;  // offending header name where applicable
};

using ParseResult = std::variant<SipMessage, ParseError>;

inline bool parse_ok(const ParseResult& r) { return std::holds_alternative<SipMessage>(r); }

// Markers checked against the request URI to classify a request as an
// emergency call. Matching is plain case-insensitive substring search.
const std::vector<std::string>& default_emergency_markers();

bool detect_emergency(std::string_view request_uri,
                      const std::vector<std::string>& markers = default_emergency_markers());

// Parses one UDP datagram. Tolerant of header order, casing, compact header
// names and bare-LF line endings; strict about the headers the decision path
// depends on (Call-ID, Via branch, From tag, CSeq).
ParseResult parse_datagram(std::string_view payload, Endpoint src, Endpoint dst,
                           const std::vector<std::string>& emergency_markers =
                               default_emergency_markers());

// Renders a message back to wire format. parse_datagram(render_datagram(m))
// reproduces every semantic field of m.
std::string render_datagram(const SipMessage& msg);

}  // namespace sipgrey
