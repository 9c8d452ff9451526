#include "sipgrey/pinhole_key.hpp"

#include <cstdio>

namespace sipgrey {

PinholeKey derive_key(const SipMessage& msg, KeyStrategy strategy) {
    switch (strategy) {
        case KeyStrategy::SourceIp:
            return SourceIpKey{msg.src.ip};
        case KeyStrategy::Transaction:
            return TransactionKey{msg.src.ip, msg.via_branch, msg.cseq_method};
        case KeyStrategy::Session:
            return SessionKey{msg.call_id, msg.from_tag};
    }
    return SourceIpKey{msg.src.ip};
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

void mix(std::uint64_t& h, std::string_view data) {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
}

void mix_u32(std::uint64_t& h, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        h ^= (v >> shift) & 0xff;
        h *= kFnvPrime;
    }
}

}  // namespace

std::uint64_t key_hash(const PinholeKey& key) {
    std::uint64_t h = kFnvOffset;
    h ^= static_cast<std::uint64_t>(key.index()) + 1;
    h *= kFnvPrime;
    if (const auto* s = std::get_if<SourceIpKey>(&key)) {
        mix_u32(h, s->ip);
    } else if (const auto* t = std::get_if<TransactionKey>(&key)) {
        mix_u32(h, t->ip);
        mix(h, t->branch);
        h *= kFnvPrime;  // separator between variable-length fields
        mix(h, t->cseq_method);
    } else if (const auto* se = std::get_if<SessionKey>(&key)) {
        mix(h, se->call_id);
        h *= kFnvPrime;
        mix(h, se->from_tag);
    }
    return h;
}

std::string key_digest(const PinholeKey& key) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(key_hash(key)));
    return buf;
}

}  // namespace sipgrey
