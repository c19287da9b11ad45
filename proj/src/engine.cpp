#include "ndmlnr/engine.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <variant>

#include "ndmlnr/trace.hpp"

namespace ndmlnr {

namespace {

// Tie-break rank at equal timestamps. Deliveries precede timers so that a
// forward sent at time t lands in a neighbor's NIT before that neighbor's
// own timer expiring at t is served.
enum class EventKind : int {
    kDelivery = 0,
    kWaitTimer = 1,
    kWindowClose = 2,
    kSampleTick = 3,
    kMotionTick = 4,
    kDataEmit = 5,
};

struct RrepPacket {
    RoundKey round;
    std::vector<NodeId> path;
    double bandwidth = 0.0;
    std::size_t hop_index = 0;  // receiver's position in path
};

struct NodeOffPacket {
    RoundKey round;
    std::vector<NodeId> path;
    double bandwidth = 0.0;
    NodeId reporter = 0;
};

struct RouteDisablePacket {
    RoundKey round;
    std::vector<NodeId> path;
    double bandwidth = 0.0;
    std::size_t hop_index = 0;  // receiver's position in path
};

struct DataPacket {
    std::size_t flow_index = 0;
    long seq = 0;
    std::vector<NodeId> path;
    std::size_t hop_index = 0;  // receiver's position in path
};

using Packet = std::variant<RouteRequest, RrepPacket, NodeOffPacket, RouteDisablePacket, DataPacket>;

struct Delivery {
    NodeId sender = 0;
    NodeId receiver = 0;
    bool addressed = false;
    Packet packet;
};

struct WaitTimerFire { NodeId node; RoundKey round; };
struct WindowCloseFire { NodeId node; RoundKey round; };
struct FlowStart { std::size_t workload_index; };
struct DataEmitFire { std::size_t workload_index; long seq; };
struct InstallCommit { NodeId source; RoundKey round; };
struct Tick {};

using Payload = std::variant<Delivery, WaitTimerFire, WindowCloseFire, FlowStart, DataEmitFire,
                             InstallCommit, Tick>;

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::kDelivery;
    std::uint64_t seq = 0;
    Payload payload;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
        return a.seq > b.seq;
    }
};

struct PendingRreq {
    NeighborInfoEntry entry;
    RouteRequest rreq;
};

// Per-round state at an intermediate node. `closed` flips when the wait
// timer fires; later copies of the round are dropped.
struct RoundState {
    std::vector<PendingRreq> nit;
    bool timer_started = false;
    bool closed = false;
};

struct DestRoundState {
    std::vector<RouteCandidate> candidates;
    bool window_open = false;
    bool closed = false;
};

// A route this node relays for, learned while passing the RREP back.
struct ThruRoute {
    std::vector<NodeId> path;
    double bandwidth = 0.0;
    NodeId pred = 0;
    NodeId succ = 0;
    bool active = true;
    bool reported = false;  // NODEOFF already sent for this route
};

struct InstalledRoute {
    RoundKey round;
    std::vector<NodeId> path;
    double bandwidth = 0.0;
    RouteStatus status = RouteStatus::kBackup;
    std::size_t report_index = 0;  // position in the request's route list
};

struct ArrivedRrep {
    std::vector<NodeId> path;
    double bandwidth = 0.0;
    std::uint64_t arrival = 0;
};

struct FlowState {
    int next_request_id = 1;
    bool discovery_pending = false;
    std::vector<InstalledRoute> routes;
    // RREPs of one round arriving at the same instant install together,
    // ranked by bandwidth, once every delivery at that instant is in.
    std::map<RoundKey, std::vector<ArrivedRrep>> arrived;
    std::set<RoundKey> commit_scheduled;
};

struct Node {
    NodeId id = 0;
    NodeKinematics kin;
    EnergyState energy;
    std::map<RoundKey, RoundState> rounds;
    std::map<RoundKey, DestRoundState> dest_rounds;
    std::map<std::pair<RoundKey, std::vector<NodeId>>, ThruRoute> thru;
    std::map<NodeId, FlowState> flows;  // keyed by flow destination
};

const char* status_name(RouteStatus s) {
    switch (s) {
        case RouteStatus::kPrimary: return "primary";
        case RouteStatus::kBackup: return "backup";
        case RouteStatus::kDisabled: return "disabled";
    }
    return "?";
}

std::string join_ids(const std::vector<NodeId>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i != 0) s += ',';
        s += std::to_string(ids[i]);
    }
    return s;
}

class Engine {
public:
    explicit Engine(const Scenario& scenario) : sc_(scenario) {}

    RunResult run() {
        if (auto errors = validate(sc_); !errors.empty()) {
            std::string msg = "scenario validation failed:";
            for (const auto& e : errors) msg += "\n  " + e;
            throw std::invalid_argument(msg);
        }
        init();
        while (!queue_.empty()) {
            Event ev = queue_.top();
            if (ev.time > sc_.duration) break;
            queue_.pop();
            now_ = ev.time;
            dispatch(ev);
        }
        finalize_report();
        return {trace_.lines(), report_};
    }

private:
    // --- setup -----------------------------------------------------------

    void init() {
        for (const auto& spec : sc_.nodes) {
            Node n;
            n.id = spec.id;
            n.kin = spec.kinematics;
            n.kin.heading = normalize_heading(n.kin.heading);
            n.energy = make_energy_state(spec.initial_energy, sc_.energy);
            nodes_[spec.id] = std::move(n);
        }
        rng_.seed(sc_.seed);
        for (auto& [id, n] : nodes_) {
            trace(0.0, id, "NODE_INIT",
                  {{"x", n.kin.x}, {"y", n.kin.y}, {"speed", n.kin.speed},
                   {"heading", n.kin.heading}, {"residual", n.energy.residual}});
        }
        const double t0 = sc_.energy.sample_period;
        if (t0 < sc_.duration) {
            schedule(t0, EventKind::kSampleTick, Tick{});
            schedule(t0, EventKind::kMotionTick, Tick{});
        }
        for (std::size_t i = 0; i < sc_.workload.size(); ++i) {
            const auto& w = sc_.workload[i];
            schedule(w.time, EventKind::kDataEmit, FlowStart{i});
            if (w.rate > 0.0) {
                schedule_emission(i, 0);
            }
        }
    }

    void schedule_emission(std::size_t windex, long seq) {
        const auto& w = sc_.workload[windex];
        const double period = 1.0 / w.rate;
        double t = w.time + static_cast<double>(seq) * period;
        if (w.jitter > 0.0) {
            t += std::uniform_real_distribution<double>(0.0, w.jitter * period)(rng_);
        }
        if (t <= sc_.duration) {
            schedule(t, EventKind::kDataEmit, DataEmitFire{windex, seq});
        }
    }

    // --- event plumbing --------------------------------------------------

    void schedule(double time, EventKind kind, Payload payload) {
        queue_.push(Event{quantize_time(time), kind, next_seq_++, std::move(payload)});
    }

    void dispatch(Event& ev) {
        std::visit(
            [&](auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, Delivery>) {
                    on_delivery(p);
                } else if constexpr (std::is_same_v<T, WaitTimerFire>) {
                    on_wait_timer(p);
                } else if constexpr (std::is_same_v<T, WindowCloseFire>) {
                    on_window_close(p);
                } else if constexpr (std::is_same_v<T, FlowStart>) {
                    on_flow_start(p);
                } else if constexpr (std::is_same_v<T, DataEmitFire>) {
                    on_data_emit(p);
                } else if constexpr (std::is_same_v<T, InstallCommit>) {
                    on_install_commit(p);
                } else {
                    if (ev.kind == EventKind::kSampleTick) {
                        on_sample_tick();
                    } else {
                        on_motion_tick();
                    }
                }
            },
            ev.payload);
    }

    void trace(double t, std::optional<NodeId> node, std::string_view event, Detail detail) {
        trace_.emit(t, node, event, detail);
    }

    // --- energy ----------------------------------------------------------

    // Returns false when the node is (now) dead. The traced amount is the
    // energy actually drawn, clamped by the residual, so the trace total
    // reconciles exactly with the residual decrease.
    bool charge_node(Node& n, double amount, const char* reason) {
        if (!n.energy.alive) return false;
        if (amount <= 0.0) return true;
        const double drawn = std::min(amount, n.energy.residual);
        n.energy = ndmlnr::charge(n.energy, amount);
        trace(now_, n.id, "ENERGY_CHARGE",
              {{"amount", drawn}, {"reason", reason}, {"residual", n.energy.residual}});
        if (!n.energy.alive) trace(now_, n.id, "NODE_DEATH", Detail::object());
        return n.energy.alive;
    }

    // --- radio -----------------------------------------------------------

    std::vector<NodeId> in_range_neighbors(const Node& from) const {
        std::vector<NodeId> out;
        for (const auto& [id, n] : nodes_) {
            if (id == from.id || !n.energy.alive) continue;
            if (in_range(from.kin, n.kin, sc_.radio)) out.push_back(id);
        }
        return out;
    }

    LinkMetrics metrics_between(const Node& from, const Node& to) const {
        return link_metrics(sc_.metric_mode, sc_.link_table, sc_.radio, from.id,
                            from.kin, to.id, to.kin, to.energy.drain_rate);
    }

    // Neighbors that are alive, in range, off the path, and whose link from
    // `from` clears the stability gate.
    std::vector<NodeId> eligible_neighbors(const Node& from, const std::vector<NodeId>& exclude) {
        std::vector<NodeId> out;
        for (const auto& [id, n] : nodes_) {
            if (id == from.id || !n.energy.alive) continue;
            if (std::find(exclude.begin(), exclude.end(), id) != exclude.end()) continue;
            if (!in_range(from.kin, n.kin, sc_.radio)) continue;
            if (link_eligible(metrics_between(from, n), sc_.protocol)) out.push_back(id);
        }
        return out;
    }

    // Physical broadcast: every alive in-range node gets a delivery event;
    // only addressees process the packet, the rest merely overhear.
    void broadcast(Node& sender, const Packet& packet, const std::vector<NodeId>& addressees) {
        charge_node(sender, sc_.energy.tx_cost, "tx");
        for (const auto& [id, n] : nodes_) {
            if (id == sender.id || !n.energy.alive) continue;
            if (!in_range(sender.kin, n.kin, sc_.radio)) continue;
            const bool addressed =
                std::find(addressees.begin(), addressees.end(), id) != addressees.end();
            schedule(now_ + sc_.radio.hop_delay, EventKind::kDelivery,
                     Delivery{sender.id, id, addressed, packet});
        }
    }

    // Unicast with reachability checks; failures are traced per packet kind.
    bool send_unicast(Node& from, NodeId to, const Packet& packet) {
        const Node& target = nodes_.at(to);
        const char* failure = nullptr;
        if (!target.energy.alive) {
            failure = "dead_hop";
        } else if (!in_range(from.kin, target.kin, sc_.radio)) {
            failure = "out_of_range";
        }
        if (failure != nullptr) {
            trace_unicast_drop(packet, failure);
            return false;
        }
        broadcast(from, packet, {to});
        return true;
    }

    void trace_unicast_drop(const Packet& packet, const char* reason) {
        if (const auto* r = std::get_if<RrepPacket>(&packet)) {
            trace(now_, r->path.back(), "RREP_DROP",
                  {{"src", r->round.source}, {"dst", r->round.destination},
                   {"id", r->round.request_id}, {"path", path_to_string(r->path)},
                   {"reason", reason}});
        } else if (const auto* d = std::get_if<DataPacket>(&packet)) {
            const auto& w = sc_.workload[d->flow_index];
            trace(now_, w.source, "DATA_DROP",
                  {{"src", w.source}, {"dst", w.destination},
                   {"flow", static_cast<int>(d->flow_index)}, {"seq", d->seq},
                   {"reason", reason}});
        } else if (const auto* o = std::get_if<NodeOffPacket>(&packet)) {
            trace(now_, o->reporter, "CONTROL_DROP",
                  {{"kind", "nodeoff"}, {"path", path_to_string(o->path)}, {"reason", reason}});
        } else if (const auto* rd = std::get_if<RouteDisablePacket>(&packet)) {
            trace(now_, rd->round.source, "CONTROL_DROP",
                  {{"kind", "routedisable"}, {"path", path_to_string(rd->path)},
                   {"reason", reason}});
        }
    }

    // --- delivery handling -----------------------------------------------

    void on_delivery(Delivery& d) {
        auto it = nodes_.find(d.receiver);
        assert(it != nodes_.end());
        Node& n = it->second;
        if (!n.energy.alive) {
            trace(now_, n.id, "DELIVER_SUPPRESSED", {{"from", d.sender}});
            return;
        }
        const bool survived =
            charge_node(n, d.addressed ? sc_.energy.rx_cost : sc_.energy.overhear_cost,
                        d.addressed ? "rx" : "overhear");
        if (!d.addressed) return;
        if (!survived) {
            trace_unicast_drop(d.packet, "dead_hop");
            return;
        }
        std::visit(
            [&](auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, RouteRequest>) {
                    on_rreq(n, p, d.sender);
                } else if constexpr (std::is_same_v<T, RrepPacket>) {
                    on_rrep(n, p);
                } else if constexpr (std::is_same_v<T, NodeOffPacket>) {
                    on_nodeoff(n, p);
                } else if constexpr (std::is_same_v<T, RouteDisablePacket>) {
                    on_routedisable(n, p, d.sender);
                } else if constexpr (std::is_same_v<T, DataPacket>) {
                    on_data(n, p);
                }
            },
            d.packet);
    }

    // --- RREQ flooding -----------------------------------------------------

    Detail round_detail(const RoundKey& k) const {
        return {{"src", k.source}, {"dst", k.destination}, {"id", k.request_id}};
    }

    void on_rreq(Node& n, const RouteRequest& rreq, NodeId sender) {
        const RoundKey key = rreq.round();
        if (n.id == rreq.destination) {
            on_rreq_at_destination(n, rreq, sender, key);
            return;
        }
        auto& rs = n.rounds[key];
        auto drop = [&](const char* reason) {
            Detail det = round_detail(key);
            det["from"] = sender;
            det["reason"] = reason;
            trace(now_, n.id, "RREQ_DROP", det);
        };
        if (rs.closed) return drop("round_closed");
        if (std::find(rreq.path.begin(), rreq.path.end(), n.id) != rreq.path.end())
            return drop("loop");
        if (sc_.protocol.ttl_limit > 0 && rreq.hops >= sc_.protocol.ttl_limit)
            return drop("ttl");

        // The incoming link is judged with the forwarder's advertised motion
        // state and this node's own drain rate.
        NodeKinematics fwd_kin{rreq.fwd_x, rreq.fwd_y, rreq.fwd_speed, rreq.fwd_heading};
        const LinkMetrics m = link_metrics(sc_.metric_mode, sc_.link_table, sc_.radio,
                                           sender, fwd_kin, n.id, n.kin,
                                           n.energy.drain_rate);
        NeighborInfoEntry entry;
        entry.source = key.source;
        entry.destination = key.destination;
        entry.request_id = key.request_id;
        entry.hops = rreq.hops + 1;
        entry.lsd = entry_lsd(rreq, m);
        entry.bandwidth = rreq.bandwidth + m.bandwidth;
        entry.previous_hop = sender;
        entry.arrival_seq = next_arrival_++;

        Detail det = round_detail(key);
        det["from"] = sender;
        det["hops"] = entry.hops;
        det["lsd"] = metric_value(entry.lsd);
        det["bw"] = entry.bandwidth;
        trace(now_, n.id, "RREQ_RECV", det);

        rs.nit.push_back(PendingRreq{entry, rreq});
        if (!rs.timer_started) {
            rs.timer_started = true;
            schedule(now_ + sc_.protocol.wait_period, EventKind::kWaitTimer,
                     WaitTimerFire{n.id, key});
        }
    }

    double entry_lsd(const RouteRequest& rreq, const LinkMetrics& m) const {
        if (sc_.protocol.lsd_mode == LsdMode::kLastHop || rreq.hops == 0) return m.lsd;
        return std::min(rreq.lsd, m.lsd);
    }

    void on_rreq_at_destination(Node& n, const RouteRequest& rreq, NodeId sender,
                                const RoundKey& key) {
        auto& ds = n.dest_rounds[key];
        auto drop = [&](const char* reason) {
            Detail det = round_detail(key);
            det["from"] = sender;
            det["reason"] = reason;
            trace(now_, n.id, "RREQ_DROP", det);
        };
        if (ds.closed) return drop("window_closed");
        if (std::find(rreq.path.begin(), rreq.path.end(), n.id) != rreq.path.end())
            return drop("loop");
        if (sc_.protocol.ttl_limit > 0 && rreq.hops >= sc_.protocol.ttl_limit)
            return drop("ttl");

        NodeKinematics fwd_kin{rreq.fwd_x, rreq.fwd_y, rreq.fwd_speed, rreq.fwd_heading};
        const LinkMetrics m = link_metrics(sc_.metric_mode, sc_.link_table, sc_.radio,
                                           sender, fwd_kin, n.id, n.kin,
                                           n.energy.drain_rate);
        RouteCandidate cand;
        cand.path = rreq.path;
        cand.path.push_back(n.id);
        cand.bandwidth = rreq.bandwidth + m.bandwidth;
        cand.hops = rreq.hops + 1;
        cand.arrival_seq = next_arrival_++;

        Detail det = round_detail(key);
        det["from"] = sender;
        det["path"] = path_to_string(cand.path);
        det["bw"] = cand.bandwidth;
        det["hops"] = cand.hops;
        det["lsd"] = metric_value(entry_lsd(rreq, m));
        trace(now_, n.id, "DEST_CANDIDATE", det);

        ds.candidates.push_back(std::move(cand));
        if (!ds.window_open) {
            ds.window_open = true;
            schedule(now_ + sc_.protocol.dest_window, EventKind::kWindowClose,
                     WindowCloseFire{n.id, key});
        }
    }

    void on_wait_timer(const WaitTimerFire& f) {
        Node& n = nodes_.at(f.node);
        auto& rs = n.rounds.at(f.round);
        rs.closed = true;
        if (!n.energy.alive || rs.nit.empty()) {
            if (!n.energy.alive) trace(now_, n.id, "SEND_SUPPRESSED", {{"kind", "rreq_forward"}});
            rs.nit.clear();
            return;
        }
        const PendingRreq* winner = &rs.nit.front();
        for (const auto& p : rs.nit) {
            if (rreq_preferred(p.entry, winner->entry)) winner = &p;
        }
        {
            Detail det = round_detail(f.round);
            det["from"] = winner->entry.previous_hop;
            det["hops"] = winner->entry.hops;
            det["lsd"] = metric_value(winner->entry.lsd);
            det["bw"] = winner->entry.bandwidth;
            trace(now_, n.id, "NIT_SELECT", det);
        }

        RouteRequest out = winner->rreq;
        out.path.push_back(n.id);
        out.hops = winner->entry.hops;
        out.bandwidth = winner->entry.bandwidth;
        out.lsd = winner->entry.lsd;
        out.fwd_x = n.kin.x;
        out.fwd_y = n.kin.y;
        out.fwd_speed = n.kin.speed;
        out.fwd_heading = n.kin.heading;

        const auto addressees = eligible_neighbors(n, out.path);
        if (addressees.empty()) {
            Detail det = round_detail(f.round);
            det["path"] = path_to_string(out.path);
            trace(now_, n.id, "RREQ_DEAD_END", det);
        } else {
            Detail det = round_detail(f.round);
            det["path"] = path_to_string(out.path);
            det["bw"] = out.bandwidth;
            det["lsd"] = metric_value(out.lsd);
            det["hops"] = out.hops;
            det["addr"] = join_ids(addressees);
            trace(now_, n.id, "RREQ_FORWARD", det);
            report_.counts.rreq_sent++;
            broadcast(n, out, addressees);
        }
        rs.nit.clear();  // round state is kept only for the closed flag
        rs.nit.shrink_to_fit();
    }

    // --- destination selection and RREP ----------------------------------

    void on_window_close(const WindowCloseFire& f) {
        Node& n = nodes_.at(f.node);
        auto& ds = n.dest_rounds.at(f.round);
        ds.closed = true;
        {
            Detail det = round_detail(f.round);
            det["candidates"] = static_cast<int>(ds.candidates.size());
            trace(now_, n.id, "DEST_WINDOW_CLOSE", det);
        }
        if (!n.energy.alive) {
            trace(now_, n.id, "SEND_SUPPRESSED", {{"kind", "rrep"}});
            return;
        }
        if (ds.candidates.empty()) {
            Detail det = round_detail(f.round);
            det["reason"] = "no_candidates";
            trace(now_, n.id, "DISCOVERY_FAIL", det);
            clear_pending(f.round);
            return;
        }
        DisjointSelection sel = select_node_disjoint(ds.candidates);
        for (const auto& acc : sel.accepted) {
            Detail det = round_detail(f.round);
            det["path"] = path_to_string(acc.path);
            det["bw"] = acc.bandwidth;
            trace(now_, n.id, "ROUTE_ACCEPT", det);
        }
        for (const auto& [rej, shared] : sel.rejected) {
            Detail det = round_detail(f.round);
            det["path"] = path_to_string(rej.path);
            det["bw"] = rej.bandwidth;
            det["shared"] = shared;
            trace(now_, n.id, "ROUTE_REJECT", det);
        }
        for (const auto& acc : sel.accepted) {
            Detail det = round_detail(f.round);
            det["path"] = path_to_string(acc.path);
            det["bw"] = acc.bandwidth;
            trace(now_, n.id, "RREP_SEND", det);
            report_.counts.rrep_sent++;
            RrepPacket rrep{f.round, acc.path, acc.bandwidth, acc.path.size() - 2};
            send_unicast(n, acc.path[acc.path.size() - 2], rrep);
        }
        ds.candidates.clear();
        ds.candidates.shrink_to_fit();
    }

    void on_rrep(Node& n, const RrepPacket& pkt) {
        assert(pkt.path[pkt.hop_index] == n.id);
        if (pkt.hop_index == 0) {
            install_route(n, pkt);
            return;
        }
        {
            Detail det = round_detail(pkt.round);
            det["path"] = path_to_string(pkt.path);
            det["bw"] = pkt.bandwidth;
            trace(now_, n.id, "RREP_RECV", det);
        }
        ThruRoute tr;
        tr.path = pkt.path;
        tr.bandwidth = pkt.bandwidth;
        tr.pred = pkt.path[pkt.hop_index - 1];
        tr.succ = pkt.path[pkt.hop_index + 1];
        n.thru[{pkt.round, pkt.path}] = tr;

        RrepPacket next = pkt;
        next.hop_index--;
        send_unicast(n, pkt.path[pkt.hop_index - 1], next);
    }

    void install_route(Node& src, const RrepPacket& pkt) {
        FlowState& flow = src.flows[pkt.round.destination];
        if (pkt.round.request_id != flow.next_request_id - 1) {
            Detail det = round_detail(pkt.round);
            det["path"] = path_to_string(pkt.path);
            det["reason"] = "stale_round";
            trace(now_, src.id, "RREP_DROP", det);
            return;
        }
        {
            Detail det = round_detail(pkt.round);
            det["path"] = path_to_string(pkt.path);
            det["bw"] = pkt.bandwidth;
            trace(now_, src.id, "RREP_RECV", det);
        }
        flow.arrived[pkt.round].push_back(ArrivedRrep{pkt.path, pkt.bandwidth, next_arrival_++});
        if (flow.commit_scheduled.insert(pkt.round).second) {
            // Ranked after every delivery pending at this instant.
            schedule(now_, EventKind::kDataEmit, InstallCommit{src.id, pkt.round});
        }
    }

    void on_install_commit(const InstallCommit& c) {
        Node& src = nodes_.at(c.source);
        FlowState& flow = src.flows[c.round.destination];
        flow.commit_scheduled.erase(c.round);
        auto batch = std::move(flow.arrived[c.round]);
        flow.arrived.erase(c.round);
        if (!src.energy.alive || batch.empty()) return;
        flow.discovery_pending = false;

        std::sort(batch.begin(), batch.end(), [](const ArrivedRrep& a, const ArrivedRrep& b) {
            if (a.bandwidth != b.bandwidth) return a.bandwidth > b.bandwidth;
            return a.arrival < b.arrival;
        });
        for (const auto& arrived : batch) {
            InstalledRoute route;
            route.round = c.round;
            route.path = arrived.path;
            route.bandwidth = arrived.bandwidth;

            InstalledRoute* primary = nullptr;
            for (auto& r : flow.routes) {
                if (r.status == RouteStatus::kPrimary) primary = &r;
            }
            if (primary == nullptr) {
                route.status = RouteStatus::kPrimary;
            } else if (arrived.bandwidth > primary->bandwidth) {
                primary->status = RouteStatus::kBackup;
                set_report_status(*primary, "backup");
                Detail det = round_detail(primary->round);
                det["path"] = path_to_string(primary->path);
                det["role"] = "backup";
                trace(now_, src.id, "ROLE_CHANGE", det);
                route.status = RouteStatus::kPrimary;
            } else {
                route.status = RouteStatus::kBackup;
            }

            Detail det = round_detail(c.round);
            det["path"] = path_to_string(arrived.path);
            det["bw"] = arrived.bandwidth;
            det["role"] = status_name(route.status);
            trace(now_, src.id, "ROUTE_INSTALL", det);

            route.report_index = add_report_route(c.round, arrived.path, arrived.bandwidth,
                                                  status_name(route.status));
            flow.routes.push_back(std::move(route));
        }
    }

    // --- maintenance -------------------------------------------------------

    void on_sample_tick() {
        for (auto& [id, n] : nodes_) {
            if (!n.energy.alive) continue;
            charge_node(n, sc_.energy.idle_rate * sc_.energy.sample_period, "idle");
            if (!n.energy.alive) continue;
            const double window = n.energy.window_consumed;
            n.energy = sample_drain_rate(n.energy, sc_.energy);
            trace(now_, id, "ENERGY_SAMPLE",
                  {{"dr", n.energy.drain_rate}, {"window", window},
                   {"residual", n.energy.residual}});
        }
        for (auto& [id, n] : nodes_) {
            if (!n.energy.alive) continue;
            monitor_node(n);
        }
        const double next = now_ + sc_.energy.sample_period;
        if (next < sc_.duration) schedule(next, EventKind::kSampleTick, Tick{});
    }

    // A relay judges its own health per route as the stability of the link
    // it receives on, using its own drain rate, and reports upstream when
    // that drops below the threshold.
    void monitor_node(Node& n) {
        for (auto& [key, rt] : n.thru) {
            if (!rt.active || rt.reported) continue;
            const Node& pred = nodes_.at(rt.pred);
            double lsd;
            if (!pred.energy.alive || !in_range(pred.kin, n.kin, sc_.radio)) {
                lsd = 0.0;  // the link is already gone
            } else {
                lsd = link_metrics(sc_.metric_mode, sc_.link_table, sc_.radio, rt.pred,
                                   pred.kin, n.id, n.kin, n.energy.drain_rate)
                          .lsd;
            }
            if (lsd < sc_.protocol.lsd_threshold) {
                rt.reported = true;
                Detail det = round_detail(key.first);
                det["path"] = path_to_string(rt.path);
                det["link"] = std::to_string(rt.pred) + "-" + std::to_string(n.id);
                det["lsd"] = metric_value(lsd);
                det["to"] = rt.pred;
                trace(now_, n.id, "NODEOFF", det);
                report_.counts.nodeoff_sent++;
                send_unicast(n, rt.pred,
                             NodeOffPacket{key.first, rt.path, rt.bandwidth, n.id});
            }
        }
    }

    void on_nodeoff(Node& n, const NodeOffPacket& pkt) {
        Detail det = round_detail(pkt.round);
        det["path"] = path_to_string(pkt.path);
        det["from"] = pkt.reporter;
        trace(now_, n.id, "NODEOFF_RECV", det);
        deactivate_thru(n, pkt.round, pkt.path);

        if (n.id == pkt.round.source) {
            apply_route_disable(n, pkt.round, pkt.path);
            return;
        }
        const auto pos = std::find(pkt.path.begin(), pkt.path.end(), n.id);
        assert(pos != pkt.path.end() && pos != pkt.path.begin());
        const std::size_t idx = static_cast<std::size_t>(pos - pkt.path.begin());
        Detail rd = round_detail(pkt.round);
        rd["path"] = path_to_string(pkt.path);
        rd["to"] = pkt.path[idx - 1];
        trace(now_, n.id, "ROUTEDISABLE", rd);
        report_.counts.routedisable_sent++;
        send_unicast(n, pkt.path[idx - 1],
                     RouteDisablePacket{pkt.round, pkt.path, pkt.bandwidth, idx - 1});
    }

    void on_routedisable(Node& n, const RouteDisablePacket& pkt, NodeId sender) {
        Detail det = round_detail(pkt.round);
        det["path"] = path_to_string(pkt.path);
        det["from"] = sender;
        trace(now_, n.id, "ROUTEDISABLE_RECV", det);
        deactivate_thru(n, pkt.round, pkt.path);

        if (pkt.hop_index == 0) {
            apply_route_disable(n, pkt.round, pkt.path);
            return;
        }
        RouteDisablePacket next = pkt;
        next.hop_index--;
        send_unicast(n, pkt.path[pkt.hop_index - 1], next);
    }

    void deactivate_thru(Node& n, const RoundKey& round, const std::vector<NodeId>& path) {
        auto it = n.thru.find({round, path});
        if (it != n.thru.end()) it->second.active = false;
    }

    void apply_route_disable(Node& src, const RoundKey& round, const std::vector<NodeId>& path) {
        FlowState& flow = src.flows[round.destination];
        InstalledRoute* route = nullptr;
        for (auto& r : flow.routes) {
            if (r.round == round && r.path == path && r.status != RouteStatus::kDisabled)
                route = &r;
        }
        if (route == nullptr) return;  // duplicate notice, already disabled

        const bool was_primary = route->status == RouteStatus::kPrimary;
        route->status = RouteStatus::kDisabled;
        set_report_status(*route, "disabled");
        set_report_disabled_at(*route, now_);
        Detail det = round_detail(round);
        det["path"] = path_to_string(path);
        det["bw"] = route->bandwidth;
        trace(now_, src.id, "ROUTE_DISABLED", det);

        if (was_primary) {
            InstalledRoute* best = nullptr;
            for (auto& r : flow.routes) {
                if (r.status != RouteStatus::kBackup) continue;
                if (best == nullptr || r.bandwidth > best->bandwidth) best = &r;
            }
            if (best != nullptr) {
                best->status = RouteStatus::kPrimary;
                set_report_status(*best, "primary");
                Detail p = round_detail(best->round);
                p["path"] = path_to_string(best->path);
                p["bw"] = best->bandwidth;
                trace(now_, src.id, "PROMOTE", p);
            }
        }
        bool any_active = false;
        for (const auto& r : flow.routes) {
            if (r.status != RouteStatus::kDisabled) any_active = true;
        }
        if (!any_active && !flow.discovery_pending) {
            originate_discovery(src, round.destination);
        }
    }

    // --- discovery origination and the data plane --------------------------

    void on_flow_start(const FlowStart& f) {
        const auto& w = sc_.workload[f.workload_index];
        originate_discovery(nodes_.at(w.source), w.destination);
    }

    void originate_discovery(Node& src, NodeId dst) {
        if (!src.energy.alive) {
            trace(now_, src.id, "DISCOVERY_FAIL",
                  {{"src", src.id}, {"dst", dst}, {"id", 0}, {"reason", "source_dead"}});
            return;
        }
        FlowState& flow = src.flows[dst];
        const int id = flow.next_request_id++;
        const RoundKey round{src.id, dst, id};
        flow.discovery_pending = true;
        add_report_request(round, now_);

        RouteRequest rreq;
        rreq.source = src.id;
        rreq.destination = dst;
        rreq.request_id = id;
        rreq.ttl = sc_.protocol.ttl_limit;
        rreq.hops = 0;
        rreq.bandwidth = 0.0;
        rreq.lsd = 0.0;
        rreq.path = {src.id};
        rreq.fwd_x = src.kin.x;
        rreq.fwd_y = src.kin.y;
        rreq.fwd_speed = src.kin.speed;
        rreq.fwd_heading = src.kin.heading;

        const auto addressees = eligible_neighbors(src, rreq.path);
        if (addressees.empty()) {
            Detail det = round_detail(round);
            det["reason"] = "no_eligible_neighbor";
            trace(now_, src.id, "DISCOVERY_FAIL", det);
            flow.discovery_pending = false;
            return;
        }
        Detail det = round_detail(round);
        det["path"] = path_to_string(rreq.path);
        det["addr"] = join_ids(addressees);
        trace(now_, src.id, "RREQ_ORIGINATE", det);
        report_.counts.rreq_sent++;
        broadcast(src, rreq, addressees);
    }

    void clear_pending(const RoundKey& round) {
        // Bookkeeping shortcut: the source never hears about an empty window,
        // but leaving the flag set would block rediscovery forever.
        auto it = nodes_.find(round.source);
        if (it == nodes_.end()) return;
        auto fit = it->second.flows.find(round.destination);
        if (fit == it->second.flows.end()) return;
        if (fit->second.next_request_id - 1 == round.request_id) {
            fit->second.discovery_pending = false;
        }
    }

    void on_data_emit(const DataEmitFire& f) {
        schedule_emission(f.workload_index, f.seq + 1);
        const auto& w = sc_.workload[f.workload_index];
        Node& src = nodes_.at(w.source);
        auto drop = [&](const char* reason) {
            trace(now_, w.source, "DATA_DROP",
                  {{"src", w.source}, {"dst", w.destination},
                   {"flow", static_cast<int>(f.workload_index)}, {"seq", f.seq},
                   {"reason", reason}});
        };
        if (!src.energy.alive) return drop("source_dead");
        auto fit = src.flows.find(w.destination);
        const InstalledRoute* primary = nullptr;
        if (fit != src.flows.end()) {
            for (const auto& r : fit->second.routes) {
                if (r.status == RouteStatus::kPrimary) primary = &r;
            }
        }
        if (primary == nullptr) return drop("no_route");
        trace(now_, w.source, "DATA_EMIT",
              {{"src", w.source}, {"dst", w.destination},
               {"flow", static_cast<int>(f.workload_index)}, {"seq", f.seq},
               {"path", path_to_string(primary->path)}});
        report_.counts.data_emitted++;
        DataPacket pkt{f.workload_index, f.seq, primary->path, 1};
        send_unicast(src, primary->path[1], pkt);
    }

    void on_data(Node& n, const DataPacket& pkt) {
        assert(pkt.path[pkt.hop_index] == n.id);
        const auto& w = sc_.workload[pkt.flow_index];
        if (pkt.hop_index + 1 == pkt.path.size()) {
            trace(now_, n.id, "DATA_DELIVERED",
                  {{"src", w.source}, {"dst", w.destination},
                   {"flow", static_cast<int>(pkt.flow_index)}, {"seq", pkt.seq},
                   {"path", path_to_string(pkt.path)}});
            report_.counts.data_delivered++;
            return;
        }
        DataPacket next = pkt;
        next.hop_index++;
        send_unicast(n, pkt.path[pkt.hop_index + 1], next);
    }

    void on_motion_tick() {
        for (auto& [id, n] : nodes_) {
            if (!n.energy.alive) continue;
            n.kin = advance(n.kin, sc_.energy.sample_period);
            trace(now_, id, "MOTION", {{"x", n.kin.x}, {"y", n.kin.y}});
        }
        const double next = now_ + sc_.energy.sample_period;
        if (next < sc_.duration) schedule(next, EventKind::kMotionTick, Tick{});
    }

    // --- report ------------------------------------------------------------

    void add_report_request(const RoundKey& round, double t) {
        RequestRecord rec;
        rec.source = round.source;
        rec.destination = round.destination;
        rec.request_id = round.request_id;
        rec.originated_at = t;
        request_index_[round] = report_.requests.size();
        report_.requests.push_back(std::move(rec));
    }

    std::size_t add_report_route(const RoundKey& round, const std::vector<NodeId>& path,
                                 double bw, const char* status) {
        RequestRecord& req = report_.requests.at(request_index_.at(round));
        if (!req.latency) req.latency = now_ - req.originated_at;
        RouteRecord route;
        route.path = path_to_string(path);
        route.bandwidth = bw;
        route.installed_at = now_;
        route.final_status = status;
        req.routes.push_back(std::move(route));
        return req.routes.size() - 1;
    }

    RouteRecord& report_route(const InstalledRoute& r) {
        RequestRecord& req = report_.requests.at(request_index_.at(r.round));
        return req.routes.at(r.report_index);
    }

    void set_report_status(const InstalledRoute& r, const char* status) {
        report_route(r).final_status = status;
    }

    void set_report_disabled_at(const InstalledRoute& r, double t) {
        report_route(r).disabled_at = t;
    }

    void finalize_report() {
        report_.final_time = trace_.empty() ? 0.0 : trace_.last_time();
        report_.trace_records = trace_.size();
        for (auto& req : report_.requests) {
            req.failed = req.routes.empty();
            for (auto& route : req.routes) {
                const double end = route.disabled_at ? *route.disabled_at : report_.final_time;
                route.lifetime = end - route.installed_at;
            }
        }
        for (const auto& [id, n] : nodes_) {
            report_.final_residual[id] = n.energy.residual;
        }
    }

    // --- members -----------------------------------------------------------

    Scenario sc_;
    std::map<NodeId, Node> nodes_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_arrival_ = 1;
    double now_ = 0.0;
    std::mt19937_64 rng_;
    TraceWriter trace_;
    RunReport report_;
    std::map<RoundKey, std::size_t> request_index_;
};

}  // namespace

RunResult run(const Scenario& scenario) {
    Engine engine(scenario);
    return engine.run();
}

}  // namespace ndmlnr
