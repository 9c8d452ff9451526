#include "sipgrey/scenario.hpp"

#include <stdexcept>

namespace sipgrey {

namespace {

std::vector<std::uint64_t> ten_seeds() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

UaSpec registering_ua() {
    UaSpec ua;
    ua.behavior = UaSpec::Behavior::Register;
    return ua;
}

UaSpec calling_ua(bool emergency) {
    UaSpec ua;
    ua.behavior = UaSpec::Behavior::Call;
    ua.emergency = emergency;
    return ua;
}

AttackerSpec spoof_flood(double rate_rps, std::uint64_t total) {
    AttackerSpec atk;
    atk.kind = AttackerSpec::Kind::SpoofFlood;
    atk.rate_rps = rate_rps;
    atk.total = total;
    return atk;
}

// a handful of UAs registering and calling while a spoofed flood runs
std::vector<UaSpec> mixed_uas() {
    return {registering_ua(), registering_ua(), calling_ua(false),
            calling_ua(false), calling_ua(true),  calling_ua(true)};
}

Scenario operation() {
    Scenario sc;
    sc.name = "operation";
    sc.horizon_s = 60.0;
    sc.uas = mixed_uas();
    sc.attackers = {spoof_flood(20.0, 1200)};
    sc.seeds = ten_seeds();
    return sc;
}

Scenario setup_delay() {
    Scenario sc;
    sc.name = "setup-delay";
    sc.horizon_s = 60.0;
    for (int i = 0; i < 10; ++i) sc.uas.push_back(calling_ua(false));
    for (int i = 0; i < 10; ++i) sc.uas.push_back(calling_ua(true));
    sc.seeds = ten_seeds();
    return sc;
}

Scenario perf_realtime_10k() {
    Scenario sc;
    sc.name = "perf-realtime-10k";
    sc.horizon_s = 400.0;
    sc.attackers = {spoof_flood(500.0, 10000)};
    return sc;
}

Scenario perf_batched_10k() {
    Scenario sc;
    sc.name = "perf-batched-10k";
    sc.horizon_s = 60.0;
    sc.controller = ControllerMode::batched(1.0);
    sc.attackers = {spoof_flood(500.0, 10000)};
    return sc;
}

Scenario perf_batched_50k() {
    Scenario sc;
    sc.name = "perf-batched-50k";
    sc.horizon_s = 300.0;
    sc.controller = ControllerMode::batched(1.0);
    sc.attackers = {spoof_flood(500.0, 50000)};
    return sc;
}

Scenario rate_halving() {
    Scenario sc;
    sc.name = "rate-halving";
    sc.horizon_s = 60.0;
    sc.engine.strategy = KeyStrategy::Transaction;
    sc.latency = LatencyModel::zero();
    AttackerSpec atk;
    atk.kind = AttackerSpec::Kind::ConformingFlood;
    atk.rate_rps = 1000.0;
    atk.total = 10000;
    atk.repeats = 1;
    atk.gap_s = 0.5;
    sc.attackers = {atk};
    return sc;
}

Scenario deferred() {
    Scenario sc;
    sc.name = "deferred";
    sc.horizon_s = 60.0;
    sc.engine.policy = OpeningPolicy::Deferred;
    sc.uas = mixed_uas();
    sc.attackers = {spoof_flood(20.0, 1200)};
    sc.seeds = ten_seeds();
    return sc;
}

Scenario deferred_spoof() {
    Scenario sc;
    sc.name = "deferred-spoof";
    sc.horizon_s = 60.0;
    sc.engine.policy = OpeningPolicy::Deferred;
    sc.attackers = {spoof_flood(500.0, 10000)};
    return sc;
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> catalog = {
        {"operation", "mixed legit traffic under a spoofed flood, per-update rule pushes"},
        {"setup-delay", "call setup delays on an idle, protected network"},
        {"perf-realtime-10k", "10000 spoofed sources at 500 msg/s, per-update rule pushes"},
        {"perf-batched-10k", "10000 spoofed sources at 500 msg/s, rules batched every second"},
        {"perf-batched-50k", "50000 spoofed sources at 500 msg/s, rules batched every second"},
        {"rate-halving", "conforming flood against per-transaction pinholes, zero-cost backend"},
        {"deferred", "mixed traffic with pinholes opened on the second sighting"},
        {"deferred-spoof", "spoofed flood against the deferred policy, no rules expected"},
    };
    return catalog;
}

bool is_preset(const std::string& name) {
    for (const auto& info : preset_catalog())
        if (info.name == name) return true;
    return false;
}

Scenario preset_scenario(const std::string& name) {
    if (name == "operation") return operation();
    if (name == "setup-delay") return setup_delay();
    if (name == "perf-realtime-10k") return perf_realtime_10k();
    if (name == "perf-batched-10k") return perf_batched_10k();
    if (name == "perf-batched-50k") return perf_batched_50k();
    if (name == "rate-halving") return rate_halving();
    if (name == "deferred") return deferred();
    if (name == "deferred-spoof") return deferred_spoof();
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace sipgrey
