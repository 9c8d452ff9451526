#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "sipgrey/sip_message.hpp"

namespace sipgrey {

// Granularity of the pinhole a sighting opens. Coarser keys admit more
// follow-up traffic per opened hole; finer keys force more repetition on the
// sender.
enum class KeyStrategy { SourceIp, Transaction, Session };

struct SourceIpKey {
    std::uint32_t ip = 0;
    auto operator<=>(const SourceIpKey&) const = default;
};

// Branch alone does not prove ownership, so the source address stays part of
// the key: a retransmission must come from the same host to match.
struct TransactionKey {
    std::uint32_t ip = 0;
    std::string branch;
    std::string cseq_method;
    auto operator<=>(const TransactionKey&) const = default;
};

struct SessionKey {
    std::string call_id;
    std::string from_tag;
    auto operator<=>(const SessionKey&) const = default;
};

using PinholeKey = std::variant<SourceIpKey, TransactionKey, SessionKey>;

PinholeKey derive_key(const SipMessage& msg, KeyStrategy strategy);

// Stable 64-bit digest, printable as 16 hex chars. Used to reference keys in
// logs and CSV exports without dumping raw header values.
std::uint64_t key_hash(const PinholeKey& key);
std::string key_digest(const PinholeKey& key);

struct PinholeKeyHash {
    std::size_t operator()(const PinholeKey& key) const { return key_hash(key); }
};

}  // namespace sipgrey
