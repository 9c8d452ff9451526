#include "sipgrey/firewall.hpp"

#include <algorithm>
#include <limits>

namespace sipgrey {

namespace {
constexpr double kNotYet = std::numeric_limits<double>::infinity();
}

SimFirewall::SimFirewall(ControllerMode mode, LatencyModel latency)
    : mode_(mode), latency_(latency) {}

void SimFirewall::submit(const RuleUpdate& update, double now) {
    if (update.op == RuleOp::Install) {
        auto it = rules_.find(update.key);
        if (it != rules_.end() && !it->second.removal_scheduled) {
            counters_.installs_ignored += 1;
            return;
        }
        counters_.installs_accepted += 1;
        if (it != rules_.end()) rules_.erase(it);  // reinstall after removal
        if (mode_.kind == ControllerMode::Kind::Batched) {
            rules_.emplace(update.key, RuleSlot{kNotYet, -1.0, false});
            accum_.push_back(update);
        } else {
            schedule(update, std::max(now, busy_until_));
        }
        return;
    }

    // Removal. Unknown or already-scheduled keys are ignored.
    auto it = rules_.find(update.key);
    if (it == rules_.end() || it->second.removal_scheduled) return;
    it->second.removal_scheduled = true;
    counters_.removals_accepted += 1;
    if (mode_.kind == ControllerMode::Kind::Batched)
        accum_.push_back(update);
    else
        schedule(update, std::max(now, busy_until_));
}

// RealTime service: one update occupies the backend for the affine cost at
// the rule count in effect when its turn comes.
void SimFirewall::schedule(const RuleUpdate& update, double start) {
    std::uint64_t n = net_scheduled_ < 0 ? 0 : static_cast<std::uint64_t>(net_scheduled_);
    double done = start + latency_.realtime_cost(n);
    busy_until_ = done;
    if (update.op == RuleOp::Install) {
        rules_[update.key] = RuleSlot{done, -1.0, false};
        installed_log_.push_back({update.key, update.requested_at, done});
        net_scheduled_ += 1;
    } else {
        rules_[update.key].removed_at = done;
        removal_log_.push_back({update.key, update.requested_at, done});
        net_scheduled_ -= 1;
    }
}

void SimFirewall::tick(double now) {
    counters_.ticks += 1;
    if (accum_.empty()) return;

    std::uint64_t n = net_scheduled_ < 0 ? 0 : static_cast<std::uint64_t>(net_scheduled_);
    double start = std::max(now, busy_until_);
    double done = start + latency_.batch_cost(n);
    busy_until_ = done;
    counters_.batches_pushed += 1;

    for (const auto& update : accum_) {
        auto& slot = rules_[update.key];
        if (update.op == RuleOp::Install) {
            slot.installed_at = done;
            slot.removed_at = -1.0;  // a reinstall in the same batch outlives the removal
            installed_log_.push_back({update.key, update.requested_at, done});
            net_scheduled_ += 1;
        } else {
            slot.removed_at = done;
            removal_log_.push_back({update.key, update.requested_at, done});
            net_scheduled_ -= 1;
        }
    }
    accum_.clear();
}

bool SimFirewall::rule_active(const PinholeKey& key, double now) const {
    auto it = rules_.find(key);
    if (it == rules_.end()) return false;
    const RuleSlot& slot = it->second;
    if (slot.installed_at > now) return false;
    if (slot.removed_at >= 0.0 && slot.removed_at <= now) return false;
    return true;
}

bool SimFirewall::permits(const SipMessage& msg, KeyStrategy strategy, double now) const {
    return rule_active(derive_key(msg, strategy), now);
}

std::vector<InstallRecord> SimFirewall::process_queue(double now) {
    std::vector<InstallRecord> out;
    while (report_cursor_ < installed_log_.size() &&
           installed_log_[report_cursor_].installed_at <= now) {
        out.push_back(installed_log_[report_cursor_]);
        ++report_cursor_;
    }
    return out;
}

namespace {

std::uint64_t count_at_or_before(const std::vector<InstallRecord>& log, double now) {
    auto it = std::upper_bound(log.begin(), log.end(), now,
                               [](double t, const InstallRecord& r) { return t < r.installed_at; });
    return static_cast<std::uint64_t>(it - log.begin());
}

}  // namespace

std::uint64_t SimFirewall::installed_count(double now) const {
    std::uint64_t installs = count_at_or_before(installed_log_, now);
    std::uint64_t removals = count_at_or_before(removal_log_, now);
    return installs >= removals ? installs - removals : 0;
}

std::uint64_t SimFirewall::pending_count(double now) const {
    std::uint64_t effective = count_at_or_before(installed_log_, now);
    return accum_.size() + (installed_log_.size() - effective);
}

bool SimFirewall::drained(double now) const {
    return accum_.empty() && busy_until_ <= now;
}

}  // namespace sipgrey
