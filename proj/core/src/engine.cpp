#include "sipgrey/engine.hpp"

#include <algorithm>

namespace sipgrey {

PinholeEngine::PinholeEngine(EngineConfig config, RuleView rule_installed)
    : config_(config), rule_installed_(std::move(rule_installed)) {}

Decision PinholeEngine::process_packet(const SipMessage& msg, double now) {
    PinholeKey key = derive_key(msg, config_.strategy);
    auto [it, inserted] = records_.try_emplace(key);
    PinholeRecord& rec = it->second;

    if (inserted) {
        rec.key = key;
        rec.first_seen = now;
        admitted_order_.emplace(key, next_order_++);
    }
    rec.sightings += 1;
    rec.last_hit = now;

    if (rec.state == RecordState::Greylisted) {
        bool open_now = config_.policy == OpeningPolicy::Immediate
                            ? rec.sightings >= 1
                            : rec.sightings >= 2;
        if (!open_now) return {FilterAction::Drop, std::nullopt};
        rec.state = RecordState::Open;
        rec.opened_at = now;
        installs_requested_ += 1;
        // The packet that triggers the opening is itself still dropped; only
        // traffic arriving after the rule is in place goes through.
        return {FilterAction::Drop, RuleUpdate{RuleOp::Install, key, now}};
    }

    bool installed = rule_installed_ && rule_installed_(key, now);
    return {installed ? FilterAction::Pass : FilterAction::Drop, std::nullopt};
}

PinholeEngine::ExpiryResult PinholeEngine::expire(double now) {
    // Collect first, sorted by admission order so removal requests come out
    // in a reproducible sequence regardless of hash layout.
    std::vector<std::pair<std::uint64_t, PinholeKey>> stale;
    for (const auto& [key, rec] : records_) {
        if (now - rec.last_hit > config_.expiry_after_idle_s)
            stale.emplace_back(admitted_order_.at(key), key);
    }
    std::sort(stale.begin(), stale.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    ExpiryResult result;
    for (const auto& [order, key] : stale) {
        auto it = records_.find(key);
        if (it->second.state == RecordState::Open) {
            result.rule_requests.push_back({RuleOp::Remove, key, now});
            removals_requested_ += 1;
        }
        result.removed.push_back(key);
        records_.erase(it);
        admitted_order_.erase(key);
    }
    return result;
}

EngineStats PinholeEngine::stats() const {
    EngineStats s;
    s.records = records_.size();
    for (const auto& [key, rec] : records_) {
        if (rec.state == RecordState::Open)
            s.open += 1;
        else
            s.greylisted += 1;
    }
    s.installs_requested = installs_requested_;
    s.removals_requested = removals_requested_;
    return s;
}

const PinholeRecord* PinholeEngine::find(const PinholeKey& key) const {
    auto it = records_.find(key);
    return it == records_.end() ? nullptr : &it->second;
}

}  // namespace sipgrey
