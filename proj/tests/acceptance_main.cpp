// Acceptance checks for the shipped presets. Each criterion prints one
// [PASS]/[FAIL] line with the measured numbers; the exit code is the number
// of failed criteria. Tolerances are pinned here, not configurable.

#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sipgrey/metrics.hpp"
#include "sipgrey/simulator.hpp"
#include "support/properties.hpp"

using namespace sipgrey;

namespace {

// setup delay targets, seconds
constexpr double kSetupNormal = 0.64;
constexpr double kSetupEmergency = 0.71;
constexpr double kSetupTol = 0.02;

// real-time ramp, 10k rules
constexpr double kRampDoneMin = 170.0;
constexpr double kRampDoneMax = 210.0;
constexpr double kRealtimeFirstRps = 191.0;
constexpr double kRealtimeLastRps = 28.0;
constexpr double kSpeedTol = 0.25;  // relative

// batched push, 10k rules
constexpr double kBatchDoneMin = 20.0;
constexpr double kBatchDoneMax = 23.0;
constexpr double kBatchFirstRps = 500.0;
constexpr double kBatchLastRps = 433.0;

// batched push, 50k rules
constexpr double kWorstLagRef = 68.0;  // relative tolerance kSpeedTol
constexpr std::uint64_t kCrossoverRef = 18000;
constexpr std::uint64_t kCrossoverTol = 4000;

// deferred opening
constexpr double kDeferredDelayMax = 2.0;

bool within_rel(double value, double reference, double tol) {
    return std::fabs(value - reference) <= tol * reference;
}

struct Outcome {
    bool ok = true;
    std::string detail;
};

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

Outcome quiet_network_operation() {
    Scenario sc = preset_scenario("operation");
    std::uint64_t fp = 0, fn = 0;
    for (std::uint64_t seed : sc.seeds) {
        RunReport report = analyze(run_scenario(sc, seed));
        fp += report.false_positives;
        fn += report.false_negatives;
    }
    Outcome out;
    out.ok = fp == 0 && fn == 0;
    out.detail = fmt("legit given up=%llu attack passed=%llu over %zu seeds (want 0 and 0)",
                     (unsigned long long)fp, (unsigned long long)fn, sc.seeds.size());
    return out;
}

Outcome setup_delay() {
    Scenario sc = preset_scenario("setup-delay");
    double normal_sum = 0.0, emergency_sum = 0.0;
    std::uint64_t normal_n = 0, emergency_n = 0, gave_up = 0;
    for (std::uint64_t seed : sc.seeds) {
        RunLog log = run_scenario(sc, seed);
        for (const auto& txn : log.transactions) {
            if (txn.gave_up) gave_up += 1;
            if (!txn.first_reply_s) continue;
            double delay = *txn.first_reply_s - txn.start_s;
            if (txn.emergency) {
                emergency_sum += delay;
                emergency_n += 1;
            } else {
                normal_sum += delay;
                normal_n += 1;
            }
        }
    }
    double normal_mean = normal_n ? normal_sum / (double)normal_n : 0.0;
    double emergency_mean = emergency_n ? emergency_sum / (double)emergency_n : 0.0;
    Outcome out;
    out.ok = gave_up == 0 && normal_n > 0 && emergency_n > 0 &&
             std::fabs(normal_mean - kSetupNormal) <= kSetupTol &&
             std::fabs(emergency_mean - kSetupEmergency) <= kSetupTol;
    out.detail = fmt("normal=%.4fs emergency=%.4fs (want %.2f and %.2f within %.2f)",
                     normal_mean, emergency_mean, kSetupNormal, kSetupEmergency, kSetupTol);
    return out;
}

Outcome realtime_ramp_10k() {
    Scenario sc = preset_scenario("perf-realtime-10k");
    RunReport report = analyze(run_scenario(sc, sc.seeds.front()));
    Outcome out;
    double done = report.install_done_s.value_or(0.0);
    double first = report.capacity ? report.capacity->initial_rps : 0.0;
    double last = report.capacity ? report.capacity->final_rps : 0.0;
    out.ok = report.rules_installed == 10000 && done >= kRampDoneMin && done <= kRampDoneMax &&
             within_rel(first, kRealtimeFirstRps, kSpeedTol) &&
             within_rel(last, kRealtimeLastRps, kSpeedTol);
    out.detail = fmt("done=%.1fs first=%.1f/s last=%.1f/s (want %.0f-%.0f s, %.0f and %.0f "
                     "within %.0f%%)",
                     done, first, last, kRampDoneMin, kRampDoneMax, kRealtimeFirstRps,
                     kRealtimeLastRps, kSpeedTol * 100.0);
    return out;
}

Outcome batched_push_10k() {
    Scenario sc = preset_scenario("perf-batched-10k");
    RunReport report = analyze(run_scenario(sc, sc.seeds.front()));
    Outcome out;
    double done = report.install_done_s.value_or(0.0);
    double first = report.capacity ? report.capacity->initial_rps : 0.0;
    double last = report.capacity ? report.capacity->final_rps : 0.0;
    out.ok = report.rules_installed == 10000 && done >= kBatchDoneMin && done <= kBatchDoneMax &&
             within_rel(first, kBatchFirstRps, kSpeedTol) &&
             within_rel(last, kBatchLastRps, kSpeedTol);
    out.detail = fmt("done=%.2fs first=%.1f/s last=%.1f/s (want %.0f-%.0f s, %.0f and %.0f "
                     "within %.0f%%)",
                     done, first, last, kBatchDoneMin, kBatchDoneMax, kBatchFirstRps,
                     kBatchLastRps, kSpeedTol * 100.0);
    return out;
}

Outcome batched_push_50k() {
    Scenario sc = preset_scenario("perf-batched-50k");
    RunReport report = analyze(run_scenario(sc, sc.seeds.front()));
    Outcome out;
    double lag = report.worst_install_lag_s;
    bool lag_ok = within_rel(lag, kWorstLagRef, kSpeedTol);
    bool cross_ok = false;
    unsigned long long cross = 0;
    if (report.backlog_crossover) {
        cross = *report.backlog_crossover;
        cross_ok = cross >= kCrossoverRef - kCrossoverTol && cross <= kCrossoverRef + kCrossoverTol;
    }
    out.ok = report.rules_installed == 50000 && lag_ok && cross_ok;
    out.detail = fmt("worst lag=%.1fs crossover after %llu installs (want %.0fs within %.0f%%, "
                     "%llu within %llu)",
                     lag, cross, kWorstLagRef, kSpeedTol * 100.0,
                     (unsigned long long)kCrossoverRef, (unsigned long long)kCrossoverTol);
    return out;
}

Outcome conforming_flood_halved() {
    Scenario sc = preset_scenario("rate-halving");
    RunLog log = run_scenario(sc, sc.seeds.front());
    std::map<int, std::uint64_t> per_second;
    std::set<std::string> passed_txns;
    std::uint64_t passed_rows = 0;
    std::uint64_t sent_rows = 0;
    for (const auto& row : log.events) {
        if (row.kind != LogKind::Arrival || row.origin != TrafficOrigin::Attacker) continue;
        sent_rows += 1;
        if (row.action != "pass") continue;
        passed_rows += 1;
        per_second[(int)std::floor(row.time_s)] += 1;
        passed_txns.insert(row.txn);
    }
    bool interior_ok = true;
    for (int bin = 1; bin <= 9; ++bin)
        if (per_second[bin] != 500) interior_ok = false;
    bool edges_ok = per_second[0] == 250 && per_second[10] == 250;
    Outcome out;
    out.ok = interior_ok && edges_ok && passed_rows == sent_rows / 2 &&
             passed_txns.size() == 5000 && passed_rows == 5000;
    out.detail = fmt("passed %llu of %llu packets, %zu distinct requests, interior seconds "
                     "%s 500/s (want exactly half at 500/s)",
                     (unsigned long long)passed_rows, (unsigned long long)sent_rows,
                     passed_txns.size(), interior_ok ? "hold" : "break");
    return out;
}

Outcome deferred_opening() {
    Scenario spoof = preset_scenario("deferred-spoof");
    RunReport spoof_report = analyze(run_scenario(spoof, spoof.seeds.front()));
    bool spoof_ok = spoof_report.rules_requested == 0 && spoof_report.rules_installed == 0;

    Scenario mixed = preset_scenario("deferred");
    std::uint64_t fp = 0, answered = 0;
    double worst_delay = 0.0;
    for (std::uint64_t seed : mixed.seeds) {
        RunLog log = run_scenario(mixed, seed);
        for (const auto& txn : log.transactions) {
            if (txn.gave_up) fp += 1;
            if (!txn.first_reply_s) continue;
            answered += 1;
            worst_delay = std::max(worst_delay, *txn.first_reply_s - txn.start_s);
        }
    }
    bool mixed_ok = fp == 0 && answered > 0 && worst_delay < kDeferredDelayMax;
    Outcome out;
    out.ok = spoof_ok && mixed_ok;
    out.detail = fmt("spoofed flood rules requested=%llu installed=%llu (want 0); callers: "
                     "%llu answered, worst delay %.2fs (want < %.0fs), %llu given up",
                     (unsigned long long)spoof_report.rules_requested,
                     (unsigned long long)spoof_report.rules_installed,
                     (unsigned long long)answered, worst_delay, kDeferredDelayMax,
                     (unsigned long long)fp);
    return out;
}

Outcome property_suites() {
    struct Prop {
        const char* name;
        std::optional<std::string> error;
    };
    Prop checks[] = {
        {"parser round trip", props::parser_round_trip(0xACCE5501, 2000)},
        {"single install per key", props::engine_single_install(0xACCE5502, 80)},
        {"greylist matches replay oracle", props::greylist_matches_replay(0xACCE5503, 80)},
        {"expiry boundary", props::expiry_boundary()},
        {"deterministic runs", props::runs_are_deterministic()},
    };
    Outcome out;
    std::string failed;
    for (const auto& p : checks) {
        if (p.error) {
            out.ok = false;
            failed += fmt(" [%s: %s]", p.name, p.error->c_str());
        }
    }
    out.detail = out.ok ? fmt("%zu properties hold", std::size(checks))
                        : "failing:" + failed;
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"operation under spoofed flood: no caller lost, no packet leaked",
         quiet_network_operation},
        {"call setup delay through the filter", setup_delay},
        {"real-time install ramp, 10k rules", realtime_ramp_10k},
        {"batched install push, 10k rules", batched_push_10k},
        {"batched install backlog, 50k rules", batched_push_50k},
        {"conforming flood halved", conforming_flood_halved},
        {"deferred opening starves spoofed sources", deferred_opening},
        {"property suites", property_suites},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Outcome out = criterion.run();
        std::printf("[%s] %s: %s\n", out.ok ? "PASS" : "FAIL", criterion.name,
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.ok) failures += 1;
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", std::size(criteria) - (std::size_t)failures,
                std::size(criteria));
    return failures;
}
