#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sipgrey/run_log.hpp"

namespace sipgrey {

struct DelayStats {
    std::uint64_t count = 0;
    double mean_s = 0.0;
    double p95_s = 0.0;  // nearest-rank
    double max_s = 0.0;
};

// Slopes of the cumulative-install curve over the first and last `window`
// installs. `flagged` means the run was too small for the two windows to be
// disjoint (or a slope was degenerate) and the numbers are indicative only.
struct CapacityEstimate {
    double initial_rps = 0.0;
    double final_rps = 0.0;
    std::uint64_t window = 0;
    bool flagged = false;
};

struct TimelinePoint {
    double time_s = 0.0;
    std::uint64_t installed = 0;  // cumulative
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;

    // UA transactions that gave up before getting any reply.
    std::uint64_t false_positives = 0;
    // Attack packets that made it through the filter.
    std::uint64_t false_negatives = 0;

    DelayStats delay_normal;
    DelayStats delay_emergency;

    std::uint64_t rules_requested = 0;
    std::uint64_t rules_installed = 0;
    std::uint64_t rules_removed = 0;

    // Time the last install took effect; absent when nothing was installed.
    std::optional<double> install_done_s;
    std::vector<TimelinePoint> install_timeline;
    std::optional<CapacityEstimate> capacity;

    double worst_install_lag_s = 0.0;
    // Batched runs: installs that took effect before the first one whose lag
    // exceeded twice the tick interval. Absent when the backlog never grew
    // that far (or the controller is real-time).
    std::optional<std::uint64_t> backlog_crossover;

    bool truncated = false;
};

struct AnalyzeConfig {
    std::uint64_t capacity_window = 1000;
};

RunReport analyze(const RunLog& log, const AnalyzeConfig& config = {});

// columns: time_s,installed
std::string timeline_csv(const RunReport& report);
// rows: metric,value
std::string summary_csv(const RunReport& report);
// the same content arranged for reading
std::string summary_text(const RunReport& report);

}  // namespace sipgrey
