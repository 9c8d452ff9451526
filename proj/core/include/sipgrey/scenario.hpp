#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sipgrey/engine.hpp"
#include "sipgrey/firewall_types.hpp"

namespace sipgrey {

struct UaSpec {
    enum class Behavior { Register, Call };
    Behavior behavior = Behavior::Call;
    bool emergency = false;
    double t1_s = 0.5;
    double give_up_after_s = 32.0;  // 64 * t1 by default
    // When absent, drawn per seed from [0, horizon/2) so the transaction can
    // finish inside the horizon.
    std::optional<double> start_s;

    bool operator==(const UaSpec&) const = default;
};

struct AttackerSpec {
    enum class Kind {
        SpoofFlood,      // fresh spoofed source per packet, never repeats
        FixedSpoofSet,   // spoofed source drawn from a fixed pool
        ConformingFlood  // plays by the rules: repeats each request
    };
    Kind kind = Kind::SpoofFlood;
    double rate_rps = 500.0;  // total message budget per second
    std::uint64_t total = 10000;  // total messages, not distinct requests
    std::uint64_t pool_size = 16;  // FixedSpoofSet
    std::uint32_t repeats = 1;     // ConformingFlood: copies after the first
    double gap_s = 0.5;            // ConformingFlood: spacing between copies
    double start_s = 0.0;

    bool operator==(const AttackerSpec&) const = default;
};

struct ProxyModel {
    double delay_normal_s = 0.14;
    double delay_emergency_s = 0.21;

    bool operator==(const ProxyModel&) const = default;
};

struct Scenario {
    std::string name = "unnamed";
    double horizon_s = 60.0;
    EngineConfig engine;
    ControllerMode controller;
    // Unset means "fit from the reference capacity measurements".
    std::optional<LatencyModel> latency;
    ProxyModel proxy;
    std::vector<UaSpec> uas;
    std::vector<AttackerSpec> attackers;
    std::vector<std::uint64_t> seeds = {1};
    std::string outputs_dir;  // empty: resolved by the caller
    bool protection_enabled = true;
    double expiry_sweep_every_s = 60.0;

    bool operator==(const Scenario&) const = default;
};

struct ScenarioError : std::runtime_error {
    int line;
    ScenarioError(const std::string& what, int line_no)
        : std::runtime_error(what), line(line_no) {}
};

// Flat key = value text with repeatable [ua] and [attacker] blocks. Unknown
// keys and unusable values fail with the offending line number.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& sc);

// Sanity checks beyond syntax: positive horizon and rates, non-empty seeds.
void validate_scenario(const Scenario& sc);

// Resolves the latency model, calibrating when none is pinned.
LatencyModel scenario_latency(const Scenario& sc);

struct PresetInfo {
    std::string name;
    std::string summary;
};

const std::vector<PresetInfo>& preset_catalog();
bool is_preset(const std::string& name);
Scenario preset_scenario(const std::string& name);

}  // namespace sipgrey
