#include "sipgrey/firewall_types.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sipgrey {

CalibrationInput reference_capacity_measurements() {
    CalibrationInput input;
    input.table = {
        {ControllerMode::Kind::RealTime, 10000.0, 191.0, 28.0},
        {ControllerMode::Kind::Batched, 10000.0, 500.0, 433.0},
        {ControllerMode::Kind::Batched, 50000.0, 499.0, 184.0},
    };
    input.push_rate_rps = 500.0;
    input.batch_interval_s = 1.0;
    input.keepup_ceiling_rules = 18000.0;
    return input;
}

namespace {

struct Point {
    double n = 0.0;     // rules installed when the cost was observed
    double cost = 0.0;  // seconds
};

// Ordinary least squares for cost = intercept + slope * n. Exact when given
// two points.
void fit_line(const std::vector<Point>& pts, double& intercept, double& slope) {
    if (pts.size() < 2) throw std::invalid_argument("calibrate: need at least two cost points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        sx += p.n;
        sy += p.cost;
        sxx += p.n * p.n;
        sxy += p.n * p.cost;
    }
    double count = static_cast<double>(pts.size());
    double denom = count * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("calibrate: degenerate cost points");
    slope = (count * sxy - sx * sy) / denom;
    intercept = (sy - slope * sx) / count;
    if (intercept < 0.0 || slope < 0.0)
        throw std::invalid_argument("calibrate: fit produced a negative coefficient");
}

}  // namespace

Calibration calibrate(const CalibrationInput& input) {
    Calibration out;

    // Realtime rows give direct per-rule costs: the inverse of the install
    // speed at a known installed count.
    std::vector<Point> realtime;
    for (const auto& row : input.table) {
        if (row.mode != ControllerMode::Kind::RealTime) continue;
        if (row.initial_speed_rps <= 0.0 || row.final_speed_rps <= 0.0)
            throw std::invalid_argument("calibrate: non-positive speed");
        realtime.push_back({0.0, 1.0 / row.initial_speed_rps});
        realtime.push_back({row.rules, 1.0 / row.final_speed_rps});
    }
    fit_line(realtime, out.model.per_rule_base_s, out.model.per_existing_rule_s);

    // Batched rows need classification. While the backend keeps up, the
    // measured speed equals the push rate no matter what a batch costs, so
    // only clearly saturated readings convert to cost points. The keep-up
    // ceiling supplies the second point: at that count a batch takes exactly
    // one interval.
    double batch_rules = input.push_rate_rps * input.batch_interval_s;
    std::vector<Point> batched;
    batched.push_back({input.keepup_ceiling_rules, input.batch_interval_s});
    for (const auto& row : input.table) {
        if (row.mode != ControllerMode::Kind::Batched) continue;
        if (row.final_speed_rps <= 0.0)
            throw std::invalid_argument("calibrate: non-positive speed");
        if (row.final_speed_rps < input.saturation_threshold * input.push_rate_rps)
            batched.push_back({row.rules, batch_rules / row.final_speed_rps});
    }
    fit_line(batched, out.model.per_batch_base_s, out.model.per_batch_per_existing_rule_s);

    // Residuals against every reading, including the ones the fit had to
    // treat as keep-up-limited.
    auto predicted_batched = [&](double n) {
        double cost = out.model.batch_cost(static_cast<std::uint64_t>(n));
        return cost <= input.batch_interval_s ? input.push_rate_rps : batch_rules / cost;
    };
    for (const auto& row : input.table) {
        char label[64];
        if (row.mode == ControllerMode::Kind::RealTime) {
            out.residuals.push_back({"realtime initial", row.initial_speed_rps,
                                     1.0 / out.model.realtime_cost(0)});
            std::snprintf(label, sizeof(label), "realtime final at %.0f", row.rules);
            out.residuals.push_back({label, row.final_speed_rps,
                                     1.0 / out.model.realtime_cost(
                                               static_cast<std::uint64_t>(row.rules))});
        } else {
            std::snprintf(label, sizeof(label), "batched initial, %.0f-rule run", row.rules);
            out.residuals.push_back({label, row.initial_speed_rps, predicted_batched(0)});
            std::snprintf(label, sizeof(label), "batched final, %.0f-rule run", row.rules);
            out.residuals.push_back({label, row.final_speed_rps, predicted_batched(row.rules)});
        }
    }
    return out;
}

LatencyModel default_latency_model() {
    static const LatencyModel model = calibrate(reference_capacity_measurements()).model;
    return model;
}

}  // namespace sipgrey
