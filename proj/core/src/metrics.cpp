#include "sipgrey/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sipgrey {

namespace {

DelayStats delay_stats(std::vector<double>& delays) {
    DelayStats out;
    out.count = delays.size();
    if (delays.empty()) return out;
    std::sort(delays.begin(), delays.end());
    double sum = 0.0;
    for (double d : delays) sum += d;
    out.mean_s = sum / static_cast<double>(delays.size());
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(delays.size())));
    if (rank == 0) rank = 1;
    out.p95_s = delays[rank - 1];
    out.max_s = delays.back();
    return out;
}

// installs with installed_at <= t; the log is in service order, so times
// never decrease.
std::uint64_t count_at(const std::vector<InstallRecord>& log, double t) {
    auto it = std::upper_bound(log.begin(), log.end(), t,
                               [](double v, const InstallRecord& r) { return v < r.installed_at; });
    return static_cast<std::uint64_t>(it - log.begin());
}

CapacityEstimate capacity_estimate(const std::vector<InstallRecord>& installs,
                                   std::uint64_t window) {
    CapacityEstimate cap;
    cap.window = window;
    std::uint64_t n = installs.size();
    if (n < 2 || window < 2) {
        cap.flagged = true;
        return cap;
    }
    std::uint64_t w = std::min(window, n);
    cap.flagged = n < 2 * window;

    auto slope = [&](std::uint64_t first_idx, std::uint64_t last_idx) {
        double t0 = installs[first_idx].installed_at;
        double t1 = installs[last_idx].installed_at;
        if (t1 <= t0) {
            cap.flagged = true;
            return 0.0;
        }
        double c0 = static_cast<double>(count_at(installs, t0));
        double c1 = static_cast<double>(count_at(installs, t1));
        return (c1 - c0) / (t1 - t0);
    };

    cap.initial_rps = slope(0, w - 1);
    cap.final_rps = slope(n - w, n - 1);
    return cap;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

RunReport analyze(const RunLog& log, const AnalyzeConfig& config) {
    RunReport report;
    report.scenario = log.meta.scenario;
    report.seed = log.meta.seed;
    report.truncated = log.meta.truncated;

    for (const auto& txn : log.transactions)
        if (txn.gave_up) report.false_positives += 1;

    for (const auto& row : log.events)
        if (row.kind == LogKind::Arrival && row.origin == TrafficOrigin::Attacker &&
            row.action == "pass")
            report.false_negatives += 1;

    std::vector<double> normal, emergency;
    for (const auto& txn : log.transactions) {
        if (!txn.first_reply_s) continue;
        double delay = *txn.first_reply_s - txn.start_s;
        (txn.emergency ? emergency : normal).push_back(delay);
    }
    report.delay_normal = delay_stats(normal);
    report.delay_emergency = delay_stats(emergency);

    report.rules_requested = log.meta.engine.installs_requested;
    report.rules_installed = log.installs.size();
    report.rules_removed = log.removals.size();

    for (const auto& rec : log.installs) {
        double lag = rec.installed_at - rec.requested_at;
        report.worst_install_lag_s = std::max(report.worst_install_lag_s, lag);
        if (report.install_timeline.empty() ||
            report.install_timeline.back().time_s != rec.installed_at)
            report.install_timeline.push_back({rec.installed_at, 0});
        report.install_timeline.back().installed += 1;
    }
    std::uint64_t running = 0;
    for (auto& point : report.install_timeline) {
        running += point.installed;
        point.installed = running;
    }
    if (!log.installs.empty()) {
        report.install_done_s = log.installs.back().installed_at;
        report.capacity = capacity_estimate(log.installs, config.capacity_window);
    }

    if (log.meta.controller.kind == ControllerMode::Kind::Batched) {
        double limit = 2.0 * log.meta.controller.interval_s;
        for (std::size_t i = 0; i < log.installs.size(); ++i) {
            if (log.installs[i].installed_at - log.installs[i].requested_at > limit) {
                report.backlog_crossover = static_cast<std::uint64_t>(i);
                break;
            }
        }
    }
    return report;
}

std::string timeline_csv(const RunReport& report) {
    std::string out = "time_s,installed\n";
    for (const auto& point : report.install_timeline) {
        out += format_seconds(point.time_s);
        out += ',';
        out += std::to_string(point.installed);
        out += '\n';
    }
    return out;
}

std::string summary_csv(const RunReport& report) {
    std::string out = "metric,value\n";
    auto kv = [&out](const char* key, const std::string& value) {
        out += key;
        out += ',';
        out += value;
        out += '\n';
    };
    kv("scenario", report.scenario);
    kv("seed", std::to_string(report.seed));
    kv("false_positives", std::to_string(report.false_positives));
    kv("false_negatives", std::to_string(report.false_negatives));
    kv("delay_normal_count", std::to_string(report.delay_normal.count));
    kv("delay_normal_mean_s", num(report.delay_normal.mean_s));
    kv("delay_normal_p95_s", num(report.delay_normal.p95_s));
    kv("delay_normal_max_s", num(report.delay_normal.max_s));
    kv("delay_emergency_count", std::to_string(report.delay_emergency.count));
    kv("delay_emergency_mean_s", num(report.delay_emergency.mean_s));
    kv("delay_emergency_p95_s", num(report.delay_emergency.p95_s));
    kv("delay_emergency_max_s", num(report.delay_emergency.max_s));
    kv("rules_requested", std::to_string(report.rules_requested));
    kv("rules_installed", std::to_string(report.rules_installed));
    kv("rules_removed", std::to_string(report.rules_removed));
    if (report.install_done_s) kv("install_done_s", num(*report.install_done_s));
    if (report.capacity) {
        kv("capacity_initial_rps", num(report.capacity->initial_rps));
        kv("capacity_final_rps", num(report.capacity->final_rps));
        kv("capacity_window", std::to_string(report.capacity->window));
        kv("capacity_flagged", report.capacity->flagged ? "1" : "0");
    }
    kv("worst_install_lag_s", num(report.worst_install_lag_s));
    if (report.backlog_crossover) kv("backlog_crossover", std::to_string(*report.backlog_crossover));
    kv("truncated", report.truncated ? "1" : "0");
    return out;
}

std::string summary_text(const RunReport& report) {
    std::string out;
    char buf[160];
    auto line = [&out, &buf](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof(buf), fmt, args...);
        out += buf;
        out += '\n';
    };
    line("scenario %s seed %llu%s", report.scenario.c_str(),
         static_cast<unsigned long long>(report.seed), report.truncated ? " (truncated)" : "");
    line("legit given up   %llu", static_cast<unsigned long long>(report.false_positives));
    line("attack passed    %llu", static_cast<unsigned long long>(report.false_negatives));
    auto delays = [&](const char* label, const DelayStats& d) {
        if (d.count == 0)
            line("%s none", label);
        else
            line("%s n=%llu mean=%.3fs p95=%.3fs max=%.3fs", label,
                 static_cast<unsigned long long>(d.count), d.mean_s, d.p95_s, d.max_s);
    };
    delays("setup normal    ", report.delay_normal);
    delays("setup emergency ", report.delay_emergency);
    line("rules requested=%llu installed=%llu removed=%llu",
         static_cast<unsigned long long>(report.rules_requested),
         static_cast<unsigned long long>(report.rules_installed),
         static_cast<unsigned long long>(report.rules_removed));
    if (report.install_done_s) line("last install at  %.3fs", *report.install_done_s);
    if (report.capacity)
        line("install speed    first/last %llu: %.1f/%.1f rules/s%s",
             static_cast<unsigned long long>(report.capacity->window),
             report.capacity->initial_rps, report.capacity->final_rps,
             report.capacity->flagged ? " (short run, indicative)" : "");
    line("worst install lag %.3fs", report.worst_install_lag_s);
    if (report.backlog_crossover)
        line("backlog passed 2x tick interval after %llu installs",
             static_cast<unsigned long long>(*report.backlog_crossover));
    return out;
}

}  // namespace sipgrey
