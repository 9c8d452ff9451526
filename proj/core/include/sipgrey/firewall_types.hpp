#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sipgrey/pinhole_key.hpp"

namespace sipgrey {

enum class RuleOp { Install, Remove };

struct RuleUpdate {
    RuleOp op = RuleOp::Install;
    PinholeKey key;
    double requested_at = 0.0;
};

// How rule updates reach the packet filter: one at a time as they arrive, or
// accumulated and pushed once per interval.
struct ControllerMode {
    enum class Kind { RealTime, Batched };
    Kind kind = Kind::RealTime;
    double interval_s = 1.0;  // Batched only

    static ControllerMode realtime() { return {Kind::RealTime, 1.0}; }
    static ControllerMode batched(double interval_s) { return {Kind::Batched, interval_s}; }

    bool operator==(const ControllerMode&) const = default;
};

// Cost of applying rule updates to a netfilter-style backend where every
// update rewrites the whole rule set: the price of one update grows with the
// number of rules already installed. A batch pays the rewrite once for all
// updates it carries, regardless of batch size.
//
//   realtime: one update with n rules installed costs
//       per_rule_base_s + per_existing_rule_s * n
//   batched: one batch pushed with n rules installed costs
//       per_batch_base_s + per_batch_per_existing_rule_s * n
struct LatencyModel {
    double per_rule_base_s = 0.0;
    double per_existing_rule_s = 0.0;
    double per_batch_base_s = 0.0;
    double per_batch_per_existing_rule_s = 0.0;

    double realtime_cost(std::uint64_t installed) const {
        return per_rule_base_s + per_existing_rule_s * static_cast<double>(installed);
    }
    double batch_cost(std::uint64_t installed) const {
        return per_batch_base_s + per_batch_per_existing_rule_s * static_cast<double>(installed);
    }

    static LatencyModel zero() { return {}; }

    bool operator==(const LatencyModel&) const = default;
};

// One row of a capacity measurement: how fast rules went in at the start and
// at the end of a run that installed `rules` rules, arriving at
// `push_rate_rps`.
struct CapacityRow {
    ControllerMode::Kind mode = ControllerMode::Kind::RealTime;
    double rules = 0.0;
    double initial_speed_rps = 0.0;
    double final_speed_rps = 0.0;
};

struct CalibrationInput {
    std::vector<CapacityRow> table;
    double push_rate_rps = 500.0;
    double batch_interval_s = 1.0;
    // Installed-rule count up to which the batched backend keeps pace with
    // the push rate. Anchors the batched fit, since keep-up-limited speed
    // readings say nothing about the true batch cost.
    double keepup_ceiling_rules = 18000.0;
    // A batched speed reading below this fraction of the push rate is taken
    // as a saturated-throughput observation; above it the run was keeping up
    // and the reading only bounds the cost from above.
    double saturation_threshold = 0.75;
};

struct CalibrationResidual {
    std::string label;
    double observed_rps = 0.0;
    double predicted_rps = 0.0;
};

struct Calibration {
    LatencyModel model;
    std::vector<CalibrationResidual> residuals;
};

// Reference measurements of dynamic rule loading against an iptables
// backend, used to fit the default latency model.
CalibrationInput reference_capacity_measurements();

// Least-squares fit of the affine cost model to capacity measurements.
// Throws std::invalid_argument when the input pins down no usable fit or
// produces negative coefficients.
Calibration calibrate(const CalibrationInput& input);

LatencyModel default_latency_model();

}  // namespace sipgrey
