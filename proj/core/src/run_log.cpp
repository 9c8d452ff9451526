#include "sipgrey/run_log.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace sipgrey {

const char* to_string(LogKind kind) {
    switch (kind) {
        case LogKind::Arrival: return "arrival";
        case LogKind::ProxyReply: return "proxy_reply";
        case LogKind::BatchTick: return "batch_tick";
        case LogKind::ExpirySweep: return "expiry_sweep";
        case LogKind::RuleInstalled: return "rule_installed";
        case LogKind::RuleRemoved: return "rule_removed";
        case LogKind::GiveUp: return "give_up";
    }
    return "?";
}

std::string format_seconds(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string events_csv(const RunLog& log) {
    // Rule rows are folded in so the export is one time-ordered stream. Ties
    // keep event rows first, then rule rows in service order.
    std::string out = "time_s,kind,src,dst,method,key_digest,action\n";
    auto emit = [&out](double t, const char* kind, const std::string& src,
                       const std::string& dst, const std::string& method,
                       const std::string& digest, const std::string& action) {
        out += format_seconds(t);
        out += ',';
        out += kind;
        out += ',';
        out += src;
        out += ',';
        out += dst;
        out += ',';
        out += method;
        out += ',';
        out += digest;
        out += ',';
        out += action;
        out += '\n';
    };

    std::size_t install_i = 0, removal_i = 0;
    auto flush_rules_until = [&](double t) {
        while (install_i < log.installs.size() || removal_i < log.removals.size()) {
            bool take_install =
                install_i < log.installs.size() &&
                (removal_i >= log.removals.size() ||
                 log.installs[install_i].installed_at <= log.removals[removal_i].installed_at);
            const InstallRecord& rec =
                take_install ? log.installs[install_i] : log.removals[removal_i];
            if (rec.installed_at >= t) break;
            emit(rec.installed_at, take_install ? "rule_installed" : "rule_removed", "", "", "",
                 key_digest(rec.key), take_install ? "install" : "remove");
            (take_install ? install_i : removal_i) += 1;
        }
    };

    for (const auto& row : log.events) {
        flush_rules_until(row.time_s);
        emit(row.time_s, to_string(row.kind), row.src, row.dst, row.method, row.key_digest,
             row.action);
    }
    flush_rules_until(std::numeric_limits<double>::infinity());
    return out;
}

std::string rules_csv(const RunLog& log) {
    std::string out = "key_digest,requested_at_s,installed_at_s\n";
    for (const auto& rec : log.installs) {
        out += key_digest(rec.key);
        out += ',';
        out += format_seconds(rec.requested_at);
        out += ',';
        out += format_seconds(rec.installed_at);
        out += '\n';
    }
    return out;
}

}  // namespace sipgrey
