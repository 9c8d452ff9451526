#include <stdexcept>

#include "doctest.h"
#include "sipgrey/firewall_types.hpp"

using namespace sipgrey;

namespace {

// What a run that installs `count` rules one by one should take end to end:
// the k-th update costs base + per_rule * (k - 1).
double serial_install_span(const LatencyModel& m, std::uint64_t count) {
    double base = m.per_rule_base_s * static_cast<double>(count);
    double growth =
        m.per_existing_rule_s * 0.5 * static_cast<double>(count) * static_cast<double>(count - 1);
    return base + growth;
}

}  // namespace

TEST_CASE("reference fit reproduces the per-update cost line exactly") {
    Calibration cal = calibrate(reference_capacity_measurements());
    const LatencyModel& m = cal.model;

    // two realtime readings pin the line: cost(0) = 1/191, cost(10000) = 1/28
    double expected_base = 1.0 / 191.0;
    double expected_slope = (1.0 / 28.0 - 1.0 / 191.0) / 10000.0;
    CHECK(m.per_rule_base_s == doctest::Approx(expected_base).epsilon(1e-12));
    CHECK(m.per_existing_rule_s == doctest::Approx(expected_slope).epsilon(1e-12));

    CHECK(1.0 / m.realtime_cost(0) == doctest::Approx(191.0).epsilon(1e-9));
    CHECK(1.0 / m.realtime_cost(10000) == doctest::Approx(28.0).epsilon(1e-9));
}

TEST_CASE("reference fit anchors the batch cost on the keep-up ceiling") {
    CalibrationInput input = reference_capacity_measurements();
    Calibration cal = calibrate(input);
    const LatencyModel& m = cal.model;

    // two points pin the line: cost(18000) = 1 interval, cost(50000) = 500/184
    double slope = (500.0 / 184.0 - 1.0) / (50000.0 - 18000.0);
    double base = 1.0 - slope * 18000.0;
    CHECK(m.per_batch_per_existing_rule_s == doctest::Approx(slope).epsilon(1e-12));
    CHECK(m.per_batch_base_s == doctest::Approx(base).epsilon(1e-12));

    // the 433-rules/s reading is keep-up limited, not a cost observation:
    // at 10000 installed a batch still fits the interval comfortably
    CHECK(m.batch_cost(10000) < input.batch_interval_s);
    CHECK(m.batch_cost(18000) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.batch_cost(50000) == doctest::Approx(500.0 / 184.0).epsilon(1e-12));
}

TEST_CASE("fitted coefficients, frozen") {
    const LatencyModel m = default_latency_model();
    CHECK(m.per_rule_base_s == doctest::Approx(0.0052356021).epsilon(1e-7));
    CHECK(m.per_existing_rule_s == doctest::Approx(3.0478684e-06).epsilon(1e-7));
    CHECK(m.per_batch_base_s == doctest::Approx(0.0339673913).epsilon(1e-7));
    CHECK(m.per_batch_per_existing_rule_s == doctest::Approx(5.3668478e-05).epsilon(1e-7));
}

TEST_CASE("serial install spans implied by the model") {
    const LatencyModel m = default_latency_model();
    CHECK(serial_install_span(m, 1000) == doctest::Approx(6.758).epsilon(1e-3));
    CHECK(serial_install_span(m, 10000) == doctest::Approx(204.734).epsilon(1e-3));

    // pushing 10000 rules one by one takes minutes; the last thousand go in
    // far slower than the first thousand
    double first_k = 1000.0 / serial_install_span(m, 1000);
    double last_k =
        1000.0 / (serial_install_span(m, 10000) - serial_install_span(m, 9000));
    CHECK(first_k > 4.0 * last_k);
}

TEST_CASE("residual table covers every reading, honest about keep-up rows") {
    Calibration cal = calibrate(reference_capacity_measurements());
    REQUIRE(cal.residuals.size() == 6);  // two per table row

    bool saw_keepup_row = false;
    for (const auto& r : cal.residuals) {
        CHECK(!r.label.empty());
        CHECK(r.predicted_rps > 0.0);
        if (r.label == "batched final, 10000-rule run") {
            saw_keepup_row = true;
            CHECK(r.observed_rps == 433.0);
            // the model predicts full keep-up there; the gap stays visible
            CHECK(r.predicted_rps == 500.0);
        }
    }
    CHECK(saw_keepup_row);
}

TEST_CASE("degenerate inputs are rejected") {
    CalibrationInput empty;
    CHECK_THROWS_AS(calibrate(empty), std::invalid_argument);

    // no saturated batched reading leaves one point: not fittable
    CalibrationInput only_keepup = reference_capacity_measurements();
    only_keepup.table = {{ControllerMode::Kind::RealTime, 10000.0, 191.0, 28.0},
                         {ControllerMode::Kind::Batched, 10000.0, 500.0, 433.0}};
    CHECK_THROWS_AS(calibrate(only_keepup), std::invalid_argument);

    // speeds that get faster as the table grows imply a negative cost slope
    CalibrationInput backwards = reference_capacity_measurements();
    backwards.table[0] = {ControllerMode::Kind::RealTime, 10000.0, 28.0, 191.0};
    CHECK_THROWS_AS(calibrate(backwards), std::invalid_argument);

    CalibrationInput zero_speed = reference_capacity_measurements();
    zero_speed.table[0].final_speed_rps = 0.0;
    CHECK_THROWS_AS(calibrate(zero_speed), std::invalid_argument);
}

TEST_CASE("explicit zero model costs nothing") {
    LatencyModel zero = LatencyModel::zero();
    CHECK(zero.realtime_cost(0) == 0.0);
    CHECK(zero.realtime_cost(100000) == 0.0);
    CHECK(zero.batch_cost(100000) == 0.0);
}
