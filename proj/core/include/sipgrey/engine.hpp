#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sipgrey/firewall_types.hpp"
#include "sipgrey/pinhole_key.hpp"
#include "sipgrey/sip_message.hpp"

namespace sipgrey {

// When the engine asks for a firewall rule. Immediate opens on the first
// sighting of a key; Deferred waits for proof of retransmission and opens on
// the second, so single-shot senders never cost a rule.
enum class OpeningPolicy { Immediate, Deferred };

enum class RecordState { Greylisted, Open };

struct PinholeRecord {
    PinholeKey key;
    std::uint64_t sightings = 0;
    RecordState state = RecordState::Greylisted;
    double first_seen = 0.0;
    double last_hit = 0.0;
    std::optional<double> opened_at;
};

enum class FilterAction { Drop, Pass };

struct Decision {
    FilterAction action = FilterAction::Drop;
    std::optional<RuleUpdate> rule_request;
};

struct EngineConfig {
    KeyStrategy strategy = KeyStrategy::SourceIp;
    OpeningPolicy policy = OpeningPolicy::Immediate;
    double expiry_after_idle_s = 3600.0;

    bool operator==(const EngineConfig&) const = default;
};

struct EngineStats {
    std::uint64_t records = 0;
    std::uint64_t open = 0;
    std::uint64_t greylisted = 0;
    std::uint64_t installs_requested = 0;
    std::uint64_t removals_requested = 0;
};

// Greylisting core. Tracks one record per key, decides drop/pass per packet
// and emits rule install/remove requests. Pass is only granted when the
// firewall actually has the rule in place, which the engine checks through
// the injected view; until then retransmissions keep being dropped.
class PinholeEngine {
  public:
    // Returns whether the rule for `key` is installed and effective at `now`.
    using RuleView = std::function<bool(const PinholeKey&, double)>;

    explicit PinholeEngine(EngineConfig config, RuleView rule_installed = {});

    // msg must be a parsed inbound request. Responses and outbound traffic
    // never reach the engine.
    Decision process_packet(const SipMessage& msg, double now);

    struct ExpiryResult {
        std::vector<PinholeKey> removed;
        std::vector<RuleUpdate> rule_requests;  // removals for records that were Open
    };

    // Drops records idle for strictly longer than expiry_after_idle_s. A
    // record whose last_hit is exactly expiry_after_idle_s old survives.
    ExpiryResult expire(double now);

    EngineStats stats() const;

    const PinholeRecord* find(const PinholeKey& key) const;
    const EngineConfig& config() const { return config_; }

  private:
    EngineConfig config_;
    RuleView rule_installed_;
    std::unordered_map<PinholeKey, PinholeRecord, PinholeKeyHash> records_;
    std::unordered_map<PinholeKey, std::uint64_t, PinholeKeyHash> admitted_order_;
    std::uint64_t next_order_ = 0;
    std::uint64_t installs_requested_ = 0;
    std::uint64_t removals_requested_ = 0;
};

}  // namespace sipgrey
