#include "sipgrey/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "sipgrey/firewall.hpp"

namespace sipgrey {

namespace {

// splitmix64, used to derive independent per-actor streams from the run seed.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct Rng {
    std::uint64_t state;
    std::uint64_t next() { return state = mix64(state); }
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    std::uint64_t next_below(std::uint64_t bound) { return bound ? next() % bound : 0; }
};

enum class EventKind { PacketArrival, RetransmitTimer, BatchTick, ExpirySweep, ProxyReply };

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::PacketArrival;
    // PacketArrival
    std::string bytes;
    Endpoint src, dst;
    TrafficOrigin origin = TrafficOrigin::System;
    int attacker = -1;          // emitting attacker, -1 for UA traffic
    std::uint64_t counter = 0;  // emission index (distinct request for ConformingFlood)
    std::uint32_t copy = 0;     // ConformingFlood: which copy of the request
    // RetransmitTimer / ProxyReply
    std::string txn;
    double offset = 0.0;  // RetransmitTimer: offset this timer represents
    bool emergency = false;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

struct UaTxn {
    int ua = -1;
    std::string branch;
    SipMethod method = SipMethod::Invite;
    bool emergency = false;
    double start = 0.0;
    double t1 = 0.5;
    double give_up_after = 32.0;
    std::string bytes;
    Endpoint src;
    bool answered = false;
    double first_reply = 0.0;
    bool gave_up = false;
    std::uint32_t retransmissions = 0;
};

struct AttackerState {
    AttackerSpec spec;
    Rng rng{0};
    std::uint64_t emitted = 0;  // messages actually scheduled so far
};

Endpoint proxy_endpoint() { return {*ip_from_string("192.168.56.10"), 5060}; }

Endpoint ua_endpoint(int index) {
    return {*ip_from_string("192.168.56.20") + static_cast<std::uint32_t>(index), 5060};
}

class Simulation {
  public:
    Simulation(const Scenario& sc, std::uint64_t seed)
        : sc_(sc),
          seed_(seed),
          fw_(sc.controller, scenario_latency(sc)),
          engine_(sc.engine, [this](const PinholeKey& key, double now) {
              return fw_.rule_active(key, now);
          }) {}

    RunLog run();

  private:
    void push(Event ev) {
        ev.seq = next_seq_++;
        queue_.push(std::move(ev));
    }

    void seed_actors();
    void schedule_attack(int index, std::uint64_t counter, double time);
    SipMessage build_attack_message(AttackerState& at, std::uint64_t counter);
    void handle_arrival(const Event& ev, double now);
    void handle_timer(const Event& ev, double now);
    void handle_tick(double now);
    void handle_sweep(double now);
    void handle_reply(const Event& ev, double now);
    void submit_rule(const RuleUpdate& update, double now);
    void log_row(LogRow row) { log_.events.push_back(std::move(row)); }

    const Scenario& sc_;
    std::uint64_t seed_;
    SimFirewall fw_;
    PinholeEngine engine_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t next_seq_ = 0;
    std::vector<UaTxn> txns_;
    std::unordered_map<std::string, std::size_t> txn_by_branch_;
    std::vector<AttackerState> attackers_;
    bool tick_scheduled_ = false;
    RunLog log_;
};

void Simulation::seed_actors() {
    for (std::size_t i = 0; i < sc_.uas.size(); ++i) {
        const UaSpec& spec = sc_.uas[i];
        Rng rng{mix64(seed_ ^ (0x5541ull << 32) ^ static_cast<std::uint64_t>(i))};
        double start = spec.start_s ? *spec.start_s : rng.next_unit() * sc_.horizon_s * 0.5;

        UaTxn txn;
        txn.ua = static_cast<int>(i);
        txn.branch = "z9hG4bK-ua" + std::to_string(i) + "-s" + std::to_string(seed_);
        txn.method = spec.behavior == UaSpec::Behavior::Register ? SipMethod::Register
                                                                 : SipMethod::Invite;
        txn.emergency = spec.behavior == UaSpec::Behavior::Call && spec.emergency;
        txn.start = start;
        txn.t1 = spec.t1_s;
        txn.give_up_after = spec.give_up_after_s;
        txn.src = ua_endpoint(static_cast<int>(i));

        SipMessage msg;
        msg.kind = MessageKind::Request;
        msg.method = txn.method;
        msg.method_token = txn.method == SipMethod::Register ? "REGISTER" : "INVITE";
        msg.request_uri = txn.method == SipMethod::Register ? "sip:registrar.example.org"
                          : txn.emergency                   ? "urn:service:sos"
                                                            : "sip:callee@example.org";
        msg.call_id = "ua" + std::to_string(i) + "-s" + std::to_string(seed_);
        msg.via_branch = txn.branch;
        msg.from_tag = "ua" + std::to_string(i) + "tag";
        msg.cseq_number = 1;
        msg.cseq_method = msg.method_token;
        msg.is_emergency = txn.emergency;
        msg.src = txn.src;
        msg.dst = proxy_endpoint();
        txn.bytes = render_datagram(msg);

        std::size_t idx = txns_.size();
        txns_.push_back(txn);
        txn_by_branch_.emplace(txn.branch, idx);

        Event send;
        send.time = start;
        send.kind = EventKind::PacketArrival;
        send.bytes = txns_[idx].bytes;
        send.src = txn.src;
        send.dst = proxy_endpoint();
        send.origin = TrafficOrigin::Ua;
        push(std::move(send));

        Event timer;
        timer.time = start + spec.t1_s;
        timer.kind = EventKind::RetransmitTimer;
        timer.txn = txn.branch;
        timer.offset = spec.t1_s;
        push(std::move(timer));
    }

    for (std::size_t i = 0; i < sc_.attackers.size(); ++i) {
        AttackerState state;
        state.spec = sc_.attackers[i];
        state.rng = Rng{mix64(seed_ ^ (0x4154ull << 32) ^ static_cast<std::uint64_t>(i))};
        attackers_.push_back(std::move(state));
        if (sc_.attackers[i].total > 0)
            schedule_attack(static_cast<int>(i), 0, sc_.attackers[i].start_s);
    }

    if (sc_.expiry_sweep_every_s <= sc_.horizon_s && sc_.protection_enabled) {
        Event sweep;
        sweep.time = sc_.expiry_sweep_every_s;
        sweep.kind = EventKind::ExpirySweep;
        push(std::move(sweep));
    }
}

// Builds and enqueues one attack message. For ConformingFlood `counter`
// indexes distinct requests; the copies are scheduled alongside the first
// copy. Other kinds emit exactly one message per counter value.
void Simulation::schedule_attack(int index, std::uint64_t counter, double time) {
    AttackerState& at = attackers_[static_cast<std::size_t>(index)];
    const AttackerSpec& spec = at.spec;

    SipMessage msg = build_attack_message(at, counter);
    std::string bytes = render_datagram(msg);

    auto enqueue = [&](double when, std::uint32_t copy) {
        Event ev;
        ev.time = when;
        ev.kind = EventKind::PacketArrival;
        ev.bytes = bytes;
        ev.src = msg.src;
        ev.dst = msg.dst;
        ev.origin = TrafficOrigin::Attacker;
        ev.attacker = index;
        ev.counter = counter;
        ev.copy = copy;
        push(std::move(ev));
    };

    if (spec.kind == AttackerSpec::Kind::ConformingFlood) {
        std::uint64_t group = spec.repeats + 1;
        std::uint64_t budget_left = spec.total - at.emitted;
        std::uint64_t copies = std::min<std::uint64_t>(group, budget_left);
        for (std::uint64_t c = 0; c < copies; ++c)
            enqueue(time + spec.gap_s * static_cast<double>(c), static_cast<std::uint32_t>(c));
        at.emitted += copies;
    } else {
        enqueue(time, 0);
        at.emitted += 1;
    }
}

SipMessage Simulation::build_attack_message(AttackerState& at, std::uint64_t counter) {
    const AttackerSpec& spec = at.spec;
    SipMessage msg;
    msg.kind = MessageKind::Request;
    msg.method = SipMethod::Invite;
    msg.method_token = "INVITE";
    msg.request_uri = "sip:target@example.org";
    msg.cseq_number = 1;
    msg.cseq_method = "INVITE";
    msg.dst = proxy_endpoint();

    std::string tag = std::to_string(counter);
    switch (spec.kind) {
        case AttackerSpec::Kind::SpoofFlood:
            // fresh address per message, never reused
            msg.src = {*ip_from_string("10.0.0.1") + static_cast<std::uint32_t>(counter), 5060};
            break;
        case AttackerSpec::Kind::FixedSpoofSet:
            msg.src = {*ip_from_string("10.99.0.1") +
                           static_cast<std::uint32_t>(at.rng.next_below(spec.pool_size)),
                       5060};
            break;
        case AttackerSpec::Kind::ConformingFlood:
            msg.src = {*ip_from_string("203.0.113.5"), 5060};
            break;
    }
    msg.call_id = "atk-" + tag;
    msg.via_branch = "z9hG4bK-atk-" + tag;
    msg.from_tag = "atag" + tag;
    msg.is_emergency = false;
    return msg;
}

void Simulation::submit_rule(const RuleUpdate& update, double now) {
    fw_.submit(update, now);
    if (sc_.controller.kind == ControllerMode::Kind::Batched && fw_.accumulated() > 0 &&
        !tick_scheduled_) {
        double interval = sc_.controller.interval_s;
        Event tick;
        tick.time = (std::floor(now / interval) + 1.0) * interval;
        tick.kind = EventKind::BatchTick;
        push(std::move(tick));
        tick_scheduled_ = true;
    }
}

void Simulation::handle_arrival(const Event& ev, double now) {
    ParseResult parsed = parse_datagram(ev.bytes, ev.src, ev.dst);

    LogRow row;
    row.time_s = now;
    row.kind = LogKind::Arrival;
    row.origin = ev.origin;
    row.src = to_string(ev.src);
    row.dst = to_string(ev.dst);

    if (const auto* err = std::get_if<ParseError>(&parsed)) {
        (void)err;
        row.action = "drop";
        row.method = "?";
        log_row(std::move(row));
        return;  // unparseable datagrams never touch the engine
    }

    const SipMessage& msg = std::get<SipMessage>(parsed);
    row.method = msg.method_token;
    row.emergency = msg.is_emergency;
    row.txn = msg.via_branch;

    bool pass;
    if (!sc_.protection_enabled) {
        pass = true;
    } else {
        Decision decision = engine_.process_packet(msg, now);
        if (decision.rule_request) submit_rule(*decision.rule_request, now);
        pass = decision.action == FilterAction::Pass;
        row.key_digest = key_digest(derive_key(msg, sc_.engine.strategy));
    }
    row.action = pass ? "pass" : "drop";
    log_row(std::move(row));

    if (pass) {
        Event reply;
        reply.time =
            now + (msg.is_emergency ? sc_.proxy.delay_emergency_s : sc_.proxy.delay_normal_s);
        reply.kind = EventKind::ProxyReply;
        reply.txn = msg.via_branch;
        reply.emergency = msg.is_emergency;
        reply.src = ev.src;  // reply goes back where the request came from
        push(std::move(reply));
    }

    // attacker emission chains: next message follows its own clock
    if (ev.attacker >= 0) {
        AttackerState& at = attackers_[static_cast<std::size_t>(ev.attacker)];
        const AttackerSpec& spec = at.spec;
        if (spec.kind == AttackerSpec::Kind::ConformingFlood) {
            // only the first copy of a request advances the chain
            if (ev.copy == 0 && at.emitted < spec.total) {
                double group = static_cast<double>(spec.repeats + 1);
                double next =
                    spec.start_s + static_cast<double>(ev.counter + 1) * group / spec.rate_rps;
                schedule_attack(ev.attacker, ev.counter + 1, next);
            }
        } else if (at.emitted < spec.total && ev.counter + 1 == at.emitted) {
            double next = spec.start_s + static_cast<double>(at.emitted) / spec.rate_rps;
            schedule_attack(ev.attacker, at.emitted, next);
        }
    }
}

void Simulation::handle_timer(const Event& ev, double now) {
    auto it = txn_by_branch_.find(ev.txn);
    if (it == txn_by_branch_.end()) return;
    UaTxn& txn = txns_[it->second];
    if (txn.answered || txn.gave_up) return;

    if (ev.offset >= txn.give_up_after) {
        txn.gave_up = true;
        LogRow row;
        row.time_s = now;
        row.kind = LogKind::GiveUp;
        row.origin = TrafficOrigin::Ua;
        row.src = to_string(txn.src);
        row.dst = to_string(proxy_endpoint());
        row.method = txn.method == SipMethod::Register ? "REGISTER" : "INVITE";
        row.emergency = txn.emergency;
        row.txn = txn.branch;
        row.action = "abandoned";
        log_row(std::move(row));
        return;
    }

    txn.retransmissions += 1;
    Event resend;
    resend.time = now;
    resend.kind = EventKind::PacketArrival;
    resend.bytes = txn.bytes;
    resend.src = txn.src;
    resend.dst = proxy_endpoint();
    resend.origin = TrafficOrigin::Ua;
    handle_arrival(resend, now);

    double next_offset = 2.0 * ev.offset + txn.t1;
    Event timer;
    timer.kind = EventKind::RetransmitTimer;
    timer.txn = txn.branch;
    timer.offset = std::min(next_offset, txn.give_up_after);
    timer.time = txn.start + timer.offset;
    push(std::move(timer));
}

void Simulation::handle_tick(double now) {
    tick_scheduled_ = false;
    std::uint64_t pushed = fw_.accumulated();
    fw_.tick(now);
    LogRow row;
    row.time_s = now;
    row.kind = LogKind::BatchTick;
    row.action = "pushed=" + std::to_string(pushed);
    log_row(std::move(row));
}

void Simulation::handle_sweep(double now) {
    auto result = engine_.expire(now);
    for (const auto& request : result.rule_requests) submit_rule(request, now);
    LogRow row;
    row.time_s = now;
    row.kind = LogKind::ExpirySweep;
    row.action = "removed=" + std::to_string(result.removed.size());
    log_row(std::move(row));

    double next = now + sc_.expiry_sweep_every_s;
    if (next <= sc_.horizon_s) {
        Event sweep;
        sweep.time = next;
        sweep.kind = EventKind::ExpirySweep;
        push(std::move(sweep));
    }
}

void Simulation::handle_reply(const Event& ev, double now) {
    LogRow row;
    row.time_s = now;
    row.kind = LogKind::ProxyReply;
    row.origin = TrafficOrigin::Proxy;
    row.src = to_string(proxy_endpoint());
    row.dst = to_string(ev.src);
    row.method = "200";
    row.emergency = ev.emergency;
    row.txn = ev.txn;
    row.action = "reply";
    log_row(std::move(row));

    auto it = txn_by_branch_.find(ev.txn);
    if (it == txn_by_branch_.end()) return;
    UaTxn& txn = txns_[it->second];
    if (!txn.answered) {
        txn.answered = true;
        txn.first_reply = now;
    }
}

RunLog Simulation::run() {
    seed_actors();

    bool truncated = false;
    while (!queue_.empty()) {
        Event ev = queue_.top();
        queue_.pop();
        double now = ev.time;

        if (now > sc_.horizon_s) {
            if (ev.kind == EventKind::BatchTick) {
                handle_tick(now);  // flush the final partial interval
                continue;
            }
            if (ev.kind == EventKind::ExpirySweep) continue;
            truncated = true;
            break;
        }

        switch (ev.kind) {
            case EventKind::PacketArrival: handle_arrival(ev, now); break;
            case EventKind::RetransmitTimer: handle_timer(ev, now); break;
            case EventKind::BatchTick: handle_tick(now); break;
            case EventKind::ExpirySweep: handle_sweep(now); break;
            case EventKind::ProxyReply: handle_reply(ev, now); break;
        }
    }

    log_.meta.scenario = sc_.name;
    log_.meta.seed = seed_;
    log_.meta.horizon_s = sc_.horizon_s;
    log_.meta.strategy = sc_.engine.strategy;
    log_.meta.policy = sc_.engine.policy;
    log_.meta.controller = sc_.controller;
    log_.meta.latency = fw_.latency();
    log_.meta.protection_enabled = sc_.protection_enabled;
    log_.meta.truncated = truncated || fw_.accumulated() > 0;
    log_.meta.engine = engine_.stats();
    log_.meta.firewall = fw_.counters();
    log_.installs = fw_.installed_log();
    log_.removals = fw_.removal_log();
    for (const auto& txn : txns_) {
        TxnOutcome outcome;
        outcome.txn = txn.branch;
        outcome.method = txn.method;
        outcome.emergency = txn.emergency;
        outcome.start_s = txn.start;
        if (txn.answered) outcome.first_reply_s = txn.first_reply;
        outcome.gave_up = txn.gave_up;
        outcome.retransmissions = txn.retransmissions;
        log_.transactions.push_back(std::move(outcome));
    }
    return std::move(log_);
}

}  // namespace

RunLog run_scenario(const Scenario& scenario, std::uint64_t seed) {
    validate_scenario(scenario);
    Simulation sim(scenario, seed);
    return sim.run();
}

}  // namespace sipgrey
