#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sipgrey/engine.hpp"
#include "sipgrey/firewall.hpp"

namespace sipgrey {

enum class LogKind {
    Arrival,      // an inbound request hit the filter (action: pass|drop)
    ProxyReply,   // the proxy answered a passed request
    BatchTick,    // batched controller tick (action: rules pushed)
    ExpirySweep,  // idle-record expiry pass (action: records removed)
    RuleInstalled,
    RuleRemoved,
    GiveUp,       // a UA abandoned its transaction
};

const char* to_string(LogKind kind);

enum class TrafficOrigin { Ua, Attacker, Proxy, System };

struct LogRow {
    double time_s = 0.0;
    LogKind kind = LogKind::Arrival;
    TrafficOrigin origin = TrafficOrigin::System;
    std::string src;
    std::string dst;
    std::string method;
    bool emergency = false;
    std::string txn;  // via branch, empty for non-packet rows
    std::string key_digest;
    std::string action;
};

// Outcome of one UA transaction, from first send to first reply or abandon.
struct TxnOutcome {
    std::string txn;
    SipMethod method = SipMethod::Invite;
    bool emergency = false;
    double start_s = 0.0;
    std::optional<double> first_reply_s;
    bool gave_up = false;
    std::uint32_t retransmissions = 0;
};

struct RunMeta {
    std::string scenario;
    std::uint64_t seed = 0;
    double horizon_s = 0.0;
    KeyStrategy strategy = KeyStrategy::SourceIp;
    OpeningPolicy policy = OpeningPolicy::Immediate;
    ControllerMode controller;
    LatencyModel latency;
    bool protection_enabled = true;
    bool truncated = false;  // horizon hit with traffic still pending
    EngineStats engine;
    FirewallCounters firewall;
};

// Complete record of one simulated run. Event rows are in dispatch order;
// rule rows are in service order. Two runs of the same scenario and seed
// produce identical logs.
struct RunLog {
    RunMeta meta;
    std::vector<LogRow> events;
    std::vector<InstallRecord> installs;
    std::vector<InstallRecord> removals;
    std::vector<TxnOutcome> transactions;
};

// columns: time_s,kind,src,dst,method,key_digest,action
std::string events_csv(const RunLog& log);
// columns: key_digest,requested_at_s,installed_at_s
std::string rules_csv(const RunLog& log);

std::string format_seconds(double value);

}  // namespace sipgrey
