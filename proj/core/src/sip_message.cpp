#include "sipgrey/sip_message.hpp"

#include <algorithm>
#include <cctype>

namespace sipgrey {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (lower(a[i]) != lower(b[i])) return false;
    return true;
}

bool icontains(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return false;
    if (needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        std::size_t j = 0;
        while (j < needle.size() && lower(haystack[i + j]) == lower(needle[j])) ++j;
        if (j == needle.size()) return true;
    }
    return false;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// Splits off the next line, accepting CRLF or a bare LF.
std::string_view next_line(std::string_view& rest) {
    auto nl = rest.find('\n');
    std::string_view line;
    if (nl == std::string_view::npos) {
        line = rest;
        rest = {};
    } else {
        line = rest.substr(0, nl);
        rest.remove_prefix(nl + 1);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

// Extracts a ;name=value parameter from a header body. Parameter names are
// case-insensitive; the value runs to the next ';' or ',' or end of line.
std::optional<std::string> header_param(std::string_view body, std::string_view name) {
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto semi = body.find(';', pos);
        if (semi == std::string_view::npos) break;
        auto param = body.substr(semi + 1);
        auto end = param.find_first_of(";,");
        if (end != std::string_view::npos) param = param.substr(0, end);
        param = trim(param);
        auto eq = param.find('=');
        if (eq != std::string_view::npos && iequals(trim(param.substr(0, eq)), name)) {
            auto value = trim(param.substr(eq + 1));
            return std::string(value);
        }
        pos = semi + 1;
    }
    return std::nullopt;
}

struct HeaderSet {
    std::optional<std::string> call_id, via, from, to, cseq;
};

bool header_matches(std::string_view name, std::string_view full, std::string_view compact) {
    return iequals(name, full) || iequals(name, compact);
}

ParseError missing(const char* name) { return {ParseFailure::MissingHeader, name}; }
ParseError malformed(const char* name) { return {ParseFailure::MalformedHeader, name}; }

}  // namespace

SipMethod method_from_token(std::string_view token) {
    if (iequals(token, "REGISTER")) return SipMethod::Register;
    if (iequals(token, "INVITE")) return SipMethod::Invite;
    if (iequals(token, "ACK")) return SipMethod::Ack;
    if (iequals(token, "BYE")) return SipMethod::Bye;
    if (iequals(token, "CANCEL")) return SipMethod::Cancel;
    return SipMethod::Other;
}

const std::vector<std::string>& default_emergency_markers() {
    static const std::vector<std::string> markers = {"urn:service:sos", "sos@", ";sos"};
    return markers;
}

bool detect_emergency(std::string_view request_uri, const std::vector<std::string>& markers) {
    for (const auto& marker : markers)
        if (icontains(request_uri, marker)) return true;
    return false;
}

ParseResult parse_datagram(std::string_view payload, Endpoint src, Endpoint dst,
                           const std::vector<std::string>& emergency_markers) {
    SipMessage msg;
    msg.src = src;
    msg.dst = dst;
    msg.length_bytes = payload.size();

    if (payload.empty() || payload.find('\n') == std::string_view::npos)
        return ParseError{ParseFailure::Truncated, ""};

    std::string_view rest = payload;
    std::string_view start = next_line(rest);

    if (start.starts_with("SIP/2.0 ")) {
        msg.kind = MessageKind::Response;
        auto body = start.substr(8);
        int code = 0;
        std::size_t i = 0;
        while (i < body.size() && body[i] >= '0' && body[i] <= '9')
            code = code * 10 + (body[i++] - '0');
        if (i != 3 || code < 100 || code > 699) return ParseError{ParseFailure::NotSip, ""};
        msg.status_code = code;
    } else {
        // request-line: METHOD SP URI SP SIP/2.0
        auto sp1 = start.find(' ');
        auto sp2 = sp1 == std::string_view::npos ? sp1 : start.find(' ', sp1 + 1);
        if (sp2 == std::string_view::npos || !iequals(trim(start.substr(sp2 + 1)), "SIP/2.0"))
            return ParseError{ParseFailure::NotSip, ""};
        msg.kind = MessageKind::Request;
        msg.method_token = std::string(start.substr(0, sp1));
        msg.method = method_from_token(msg.method_token);
        msg.request_uri = std::string(trim(start.substr(sp1 + 1, sp2 - sp1 - 1)));
        if (msg.method_token.empty() || msg.request_uri.empty())
            return ParseError{ParseFailure::NotSip, ""};
    }

    HeaderSet hs;
    while (!rest.empty()) {
        std::string_view line = next_line(rest);
        if (line.empty()) break;  // end of headers, body follows
        auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;  // ignore junk lines
        auto name = trim(line.substr(0, colon));
        auto body = trim(line.substr(colon + 1));
        if (header_matches(name, "Call-ID", "i")) {
            if (!hs.call_id) hs.call_id = std::string(body);
        } else if (header_matches(name, "Via", "v")) {
            if (!hs.via) hs.via = std::string(body);  // topmost only
        } else if (header_matches(name, "From", "f")) {
            if (!hs.from) hs.from = std::string(body);
        } else if (header_matches(name, "To", "t")) {
            if (!hs.to) hs.to = std::string(body);
        } else if (iequals(name, "CSeq")) {
            if (!hs.cseq) hs.cseq = std::string(body);
        }
    }

    if (!hs.call_id) return missing("Call-ID");
    if (!hs.via) return missing("Via");
    if (!hs.from) return missing("From");
    if (!hs.cseq) return missing("CSeq");

    msg.call_id = std::string(trim(*hs.call_id));
    if (msg.call_id.empty()) return malformed("Call-ID");

    auto branch = header_param(*hs.via, "branch");
    if (!branch || branch->empty()) return malformed("Via");
    msg.via_branch = *branch;

    auto from_tag = header_param(*hs.from, "tag");
    if (!from_tag || from_tag->empty()) return malformed("From");
    msg.from_tag = *from_tag;

    if (hs.to) {
        if (auto tag = header_param(*hs.to, "tag"); tag && !tag->empty()) msg.to_tag = *tag;
    }

    // CSeq: number SP method
    {
        std::string_view body = trim(*hs.cseq);
        std::size_t i = 0;
        std::uint64_t num = 0;
        while (i < body.size() && body[i] >= '0' && body[i] <= '9') {
            num = num * 10 + static_cast<std::uint64_t>(body[i++] - '0');
            if (num > 0xffffffffull) return malformed("CSeq");
        }
        if (i == 0) return malformed("CSeq");
        auto method = trim(body.substr(i));
        if (method.empty()) return malformed("CSeq");
        msg.cseq_number = static_cast<std::uint32_t>(num);
        msg.cseq_method = std::string(method);
    }

    if (msg.kind == MessageKind::Request) {
        // The CSeq method mirrors the request method on anything a compliant
        // stack emits; a mismatch means the packet is not usable for keying.
        if (!iequals(msg.cseq_method, msg.method_token)) return malformed("CSeq");
        msg.is_emergency = detect_emergency(msg.request_uri, emergency_markers);
    } else {
        msg.method = method_from_token(msg.cseq_method);
        msg.method_token = msg.cseq_method;
    }

    return msg;
}

namespace {

const char* reason_phrase(int code) {
    switch (code) {
        case 100: return "Trying";
        case 180: return "Ringing";
        case 200: return "OK";
        case 404: return "Not Found";
        case 408: return "Request Timeout";
        case 486: return "Busy Here";
        case 487: return "Request Terminated";
        case 503: return "Service Unavailable";
        default: return "Unspecified";
    }
}

}  // namespace

std::string render_datagram(const SipMessage& msg) {
    std::string out;
    out.reserve(320);
    if (msg.kind == MessageKind::Request) {
        out += msg.method_token;
        out += ' ';
        out += msg.request_uri;
        out += " SIP/2.0\r\n";
    } else {
        out += "SIP/2.0 ";
        out += std::to_string(msg.status_code.value_or(200));
        out += ' ';
        out += reason_phrase(msg.status_code.value_or(200));
        out += "\r\n";
    }
    out += "Via: SIP/2.0/UDP " + to_string(msg.src) + ";branch=" + msg.via_branch + "\r\n";
    out += "From: <sip:" + ip_to_string(msg.src.ip) + ">;tag=" + msg.from_tag + "\r\n";
    out += "To: <sip:" + ip_to_string(msg.dst.ip) + ">";
    if (msg.to_tag) out += ";tag=" + *msg.to_tag;
    out += "\r\n";
    out += "Call-ID: " + msg.call_id + "\r\n";
    out += "CSeq: " + std::to_string(msg.cseq_number) + " " + msg.cseq_method + "\r\n";
    out += "Max-Forwards: 70\r\n";
    out += "Content-Length: 0\r\n\r\n";
    return out;
}

}  // namespace sipgrey
