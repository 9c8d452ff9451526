#include "sipgrey/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sipgrey {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& what, int line) { throw ScenarioError(what, line); }

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) fail("not a number: '" + v + "'", line);
        return d;
    } catch (const ScenarioError&) {
        throw;
    } catch (...) {
        fail("not a number: '" + v + "'", line);
    }
}

std::uint64_t parse_u64(const std::string& v, int line) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        fail("not a non-negative integer: '" + v + "'", line);
    return out;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    fail("expected on/off: '" + v + "'", line);
}

const char* to_text(KeyStrategy s) {
    switch (s) {
        case KeyStrategy::SourceIp: return "source_ip";
        case KeyStrategy::Transaction: return "transaction";
        case KeyStrategy::Session: return "session";
    }
    return "?";
}

const char* to_text(OpeningPolicy p) {
    return p == OpeningPolicy::Immediate ? "immediate" : "deferred";
}

const char* to_text(UaSpec::Behavior b) {
    return b == UaSpec::Behavior::Register ? "register" : "call";
}

const char* to_text(AttackerSpec::Kind k) {
    switch (k) {
        case AttackerSpec::Kind::SpoofFlood: return "spoof_flood";
        case AttackerSpec::Kind::FixedSpoofSet: return "fixed_spoof_set";
        case AttackerSpec::Kind::ConformingFlood: return "conforming_flood";
    }
    return "?";
}

std::string format_number(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;  // 40 chars always fit the shortest form
    return {buf, end};
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
    Scenario sc;
    sc.seeds.clear();

    enum class Section { Global, Ua, Attacker } section = Section::Global;
    bool latency_explicit = false;
    LatencyModel lm;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[ua]") {
                sc.uas.emplace_back();
                section = Section::Ua;
            } else if (line == "[attacker]") {
                sc.attackers.emplace_back();
                section = Section::Attacker;
            } else {
                fail("unknown section " + line, line_no);
            }
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value", line_no);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("empty key", line_no);
        if (value.empty()) fail("empty value for '" + key + "'", line_no);

        if (section == Section::Ua) {
            UaSpec& ua = sc.uas.back();
            if (key == "behavior") {
                if (value == "call") ua.behavior = UaSpec::Behavior::Call;
                else if (value == "register") ua.behavior = UaSpec::Behavior::Register;
                else fail("unknown behavior '" + value + "'", line_no);
            } else if (key == "emergency") {
                ua.emergency = parse_bool(value, line_no);
            } else if (key == "t1_s") {
                ua.t1_s = parse_double(value, line_no);
            } else if (key == "give_up_after_s") {
                ua.give_up_after_s = parse_double(value, line_no);
            } else if (key == "start_s") {
                ua.start_s = parse_double(value, line_no);
            } else {
                fail("unknown [ua] key '" + key + "'", line_no);
            }
            continue;
        }

        if (section == Section::Attacker) {
            AttackerSpec& at = sc.attackers.back();
            if (key == "kind") {
                if (value == "spoof_flood") at.kind = AttackerSpec::Kind::SpoofFlood;
                else if (value == "fixed_spoof_set") at.kind = AttackerSpec::Kind::FixedSpoofSet;
                else if (value == "conforming_flood")
                    at.kind = AttackerSpec::Kind::ConformingFlood;
                else fail("unknown attacker kind '" + value + "'", line_no);
            } else if (key == "rate_rps") {
                at.rate_rps = parse_double(value, line_no);
            } else if (key == "total") {
                at.total = parse_u64(value, line_no);
            } else if (key == "pool_size") {
                at.pool_size = parse_u64(value, line_no);
            } else if (key == "repeats") {
                at.repeats = static_cast<std::uint32_t>(parse_u64(value, line_no));
            } else if (key == "gap_s") {
                at.gap_s = parse_double(value, line_no);
            } else if (key == "start_s") {
                at.start_s = parse_double(value, line_no);
            } else {
                fail("unknown [attacker] key '" + key + "'", line_no);
            }
            continue;
        }

        if (key == "name") {
            sc.name = value;
        } else if (key == "horizon_s") {
            sc.horizon_s = parse_double(value, line_no);
        } else if (key == "strategy") {
            if (value == "source_ip") sc.engine.strategy = KeyStrategy::SourceIp;
            else if (value == "transaction") sc.engine.strategy = KeyStrategy::Transaction;
            else if (value == "session") sc.engine.strategy = KeyStrategy::Session;
            else fail("unknown strategy '" + value + "'", line_no);
        } else if (key == "policy") {
            if (value == "immediate") sc.engine.policy = OpeningPolicy::Immediate;
            else if (value == "deferred") sc.engine.policy = OpeningPolicy::Deferred;
            else fail("unknown policy '" + value + "'", line_no);
        } else if (key == "expiry_after_idle_s") {
            sc.engine.expiry_after_idle_s = parse_double(value, line_no);
        } else if (key == "expiry_sweep_every_s") {
            sc.expiry_sweep_every_s = parse_double(value, line_no);
        } else if (key == "controller") {
            if (value == "realtime") sc.controller.kind = ControllerMode::Kind::RealTime;
            else if (value == "batched") sc.controller.kind = ControllerMode::Kind::Batched;
            else fail("unknown controller '" + value + "'", line_no);
        } else if (key == "batch_interval_s") {
            sc.controller.interval_s = parse_double(value, line_no);
        } else if (key == "latency") {
            if (value == "calibrate") latency_explicit = false;
            else if (value == "explicit") latency_explicit = true;
            else fail("latency must be calibrate or explicit", line_no);
        } else if (key == "latency_per_rule_base_s") {
            lm.per_rule_base_s = parse_double(value, line_no);
        } else if (key == "latency_per_existing_rule_s") {
            lm.per_existing_rule_s = parse_double(value, line_no);
        } else if (key == "latency_per_batch_base_s") {
            lm.per_batch_base_s = parse_double(value, line_no);
        } else if (key == "latency_per_batch_per_existing_rule_s") {
            lm.per_batch_per_existing_rule_s = parse_double(value, line_no);
        } else if (key == "proxy_delay_normal_s") {
            sc.proxy.delay_normal_s = parse_double(value, line_no);
        } else if (key == "proxy_delay_emergency_s") {
            sc.proxy.delay_emergency_s = parse_double(value, line_no);
        } else if (key == "protection") {
            sc.protection_enabled = parse_bool(value, line_no);
        } else if (key == "outputs") {
            sc.outputs_dir = value;
        } else if (key == "seeds") {
            std::istringstream seeds(value);
            std::string tok;
            while (seeds >> tok) {
                if (!tok.empty() && tok.back() == ',') tok.pop_back();
                if (tok.empty()) continue;
                sc.seeds.push_back(parse_u64(tok, line_no));
            }
            if (sc.seeds.empty()) fail("seeds list is empty", line_no);
        } else {
            fail("unknown key '" + key + "'", line_no);
        }
    }

    if (latency_explicit) sc.latency = lm;
    if (sc.seeds.empty()) sc.seeds = {1};
    validate_scenario(sc);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file: " + path, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
    std::string out;
    auto kv = [&out](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    kv("name", sc.name);
    kv("horizon_s", format_number(sc.horizon_s));
    kv("strategy", to_text(sc.engine.strategy));
    kv("policy", to_text(sc.engine.policy));
    kv("expiry_after_idle_s", format_number(sc.engine.expiry_after_idle_s));
    kv("expiry_sweep_every_s", format_number(sc.expiry_sweep_every_s));
    kv("controller",
       sc.controller.kind == ControllerMode::Kind::RealTime ? "realtime" : "batched");
    kv("batch_interval_s", format_number(sc.controller.interval_s));
    if (sc.latency) {
        kv("latency", "explicit");
        kv("latency_per_rule_base_s", format_number(sc.latency->per_rule_base_s));
        kv("latency_per_existing_rule_s", format_number(sc.latency->per_existing_rule_s));
        kv("latency_per_batch_base_s", format_number(sc.latency->per_batch_base_s));
        kv("latency_per_batch_per_existing_rule_s",
           format_number(sc.latency->per_batch_per_existing_rule_s));
    } else {
        kv("latency", "calibrate");
    }
    kv("proxy_delay_normal_s", format_number(sc.proxy.delay_normal_s));
    kv("proxy_delay_emergency_s", format_number(sc.proxy.delay_emergency_s));
    kv("protection", sc.protection_enabled ? "on" : "off");
    {
        std::string seeds;
        for (auto s : sc.seeds) {
            if (!seeds.empty()) seeds += ' ';
            seeds += std::to_string(s);
        }
        kv("seeds", seeds);
    }
    if (!sc.outputs_dir.empty()) kv("outputs", sc.outputs_dir);

    for (const auto& ua : sc.uas) {
        out += "\n[ua]\n";
        kv("behavior", to_text(ua.behavior));
        kv("emergency", ua.emergency ? "on" : "off");
        kv("t1_s", format_number(ua.t1_s));
        kv("give_up_after_s", format_number(ua.give_up_after_s));
        if (ua.start_s) kv("start_s", format_number(*ua.start_s));
    }
    for (const auto& at : sc.attackers) {
        out += "\n[attacker]\n";
        kv("kind", to_text(at.kind));
        kv("rate_rps", format_number(at.rate_rps));
        kv("total", std::to_string(at.total));
        kv("pool_size", std::to_string(at.pool_size));
        kv("repeats", std::to_string(at.repeats));
        kv("gap_s", format_number(at.gap_s));
        kv("start_s", format_number(at.start_s));
    }
    return out;
}

void validate_scenario(const Scenario& sc) {
    auto check = [](bool ok, const std::string& what) {
        if (!ok) throw ScenarioError(what, 0);
    };
    check(sc.horizon_s > 0.0, "horizon_s must be positive");
    check(sc.engine.expiry_after_idle_s > 0.0, "expiry_after_idle_s must be positive");
    check(sc.expiry_sweep_every_s > 0.0, "expiry_sweep_every_s must be positive");
    check(!sc.seeds.empty(), "seeds must not be empty");
    if (sc.controller.kind == ControllerMode::Kind::Batched)
        check(sc.controller.interval_s > 0.0, "batch_interval_s must be positive");
    for (const auto& ua : sc.uas) {
        check(ua.t1_s > 0.0, "ua t1_s must be positive");
        check(ua.give_up_after_s > 0.0, "ua give_up_after_s must be positive");
        if (ua.start_s) {
            check(*ua.start_s >= 0.0, "ua start_s must not be negative");
            check(*ua.start_s < sc.horizon_s, "ua start_s must fall inside the horizon");
        }
    }
    for (const auto& at : sc.attackers) {
        check(at.rate_rps > 0.0, "attacker rate_rps must be positive");
        check(at.start_s >= 0.0, "attacker start_s must not be negative");
        if (at.kind == AttackerSpec::Kind::FixedSpoofSet)
            check(at.pool_size >= 1, "attacker pool_size must be at least 1");
        if (at.kind == AttackerSpec::Kind::ConformingFlood)
            check(at.gap_s > 0.0, "attacker gap_s must be positive");
    }
    if (sc.latency) {
        check(sc.latency->per_rule_base_s >= 0.0 && sc.latency->per_existing_rule_s >= 0.0 &&
                  sc.latency->per_batch_base_s >= 0.0 &&
                  sc.latency->per_batch_per_existing_rule_s >= 0.0,
              "latency coefficients must not be negative");
    }
}

LatencyModel scenario_latency(const Scenario& sc) {
    return sc.latency ? *sc.latency : default_latency_model();
}

}  // namespace sipgrey
