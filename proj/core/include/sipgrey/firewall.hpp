#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sipgrey/firewall_types.hpp"
#include "sipgrey/pinhole_key.hpp"
#include "sipgrey/sip_message.hpp"

namespace sipgrey {

struct InstallRecord {
    PinholeKey key;
    double requested_at = 0.0;
    double installed_at = 0.0;
};

struct FirewallCounters {
    std::uint64_t installs_accepted = 0;
    std::uint64_t installs_ignored = 0;  // duplicates of installed/pending keys
    std::uint64_t removals_accepted = 0;
    std::uint64_t batches_pushed = 0;  // non-empty batches only
    std::uint64_t ticks = 0;
};

// Default-deny packet filter with simulated rule-apply latency. Service is
// strictly serialized, so the moment every accepted update takes effect is
// fixed as soon as it is scheduled; state queries just compare against the
// caller's clock. Nothing here depends on wall time.
class SimFirewall {
  public:
    SimFirewall(ControllerMode mode, LatencyModel latency);

    // Hands one rule update to the controller. RealTime mode starts serving
    // it as soon as the backend is free; Batched mode holds it for the next
    // tick. Install requests for keys already installed or pending are
    // ignored. `now` must not go backwards across calls.
    void submit(const RuleUpdate& update, double now);

    // Batched mode: pushes everything accumulated since the previous tick as
    // one batch. The batch occupies the backend for its full cost and all its
    // updates take effect together when it completes. No-op when nothing has
    // accumulated.
    void tick(double now);

    // True when a rule for `key` has taken effect by `now` (boundary
    // inclusive) and has not been removed by `now`.
    bool rule_active(const PinholeKey& key, double now) const;

    // Would this packet get through at `now`? Default deny.
    bool permits(const SipMessage& msg, KeyStrategy strategy, double now) const;

    // Returns updates that have taken effect by `now` and have not been
    // reported by an earlier call, in service order.
    std::vector<InstallRecord> process_queue(double now);

    double busy_until() const { return busy_until_; }
    std::uint64_t installed_count(double now) const;
    std::uint64_t pending_count(double now) const;
    bool drained(double now) const;
    std::uint64_t accumulated() const { return accum_.size(); }

    const std::vector<InstallRecord>& installed_log() const { return installed_log_; }
    const std::vector<InstallRecord>& removal_log() const { return removal_log_; }
    const FirewallCounters& counters() const { return counters_; }
    const ControllerMode& mode() const { return mode_; }
    const LatencyModel& latency() const { return latency_; }

  private:
    struct RuleSlot {
        double installed_at = 0.0;
        double removed_at = -1.0;  // < 0: no removal scheduled
        bool removal_scheduled = false;
    };

    void schedule(const RuleUpdate& update, double start);

    ControllerMode mode_;
    LatencyModel latency_;
    std::unordered_map<PinholeKey, RuleSlot, PinholeKeyHash> rules_;
    std::vector<RuleUpdate> accum_;  // batched mode, waiting for next tick
    double busy_until_ = 0.0;
    std::int64_t net_scheduled_ = 0;  // installs minus removals already scheduled
    std::vector<InstallRecord> installed_log_;
    std::vector<InstallRecord> removal_log_;
    std::size_t report_cursor_ = 0;
    FirewallCounters counters_;
};

}  // namespace sipgrey
