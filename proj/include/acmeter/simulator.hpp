#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "acmeter/power.hpp"
#include "acmeter/rng.hpp"
#include "acmeter/topology.hpp"

namespace acmeter {

/// Basic Access DCF timing and traffic parameters (802.11b long preamble).
struct SimConfig {
  double data_rate_bps = 11e6;
  double basic_rate_bps = 1e6;
  int payload_bytes = 1500;
  int ack_bytes = 14;
  int cw_min = 31;
  int cw_max = 1023;
  double slot_s = 20e-6;
  double sifs_s = 10e-6;
  double difs_s = 50e-6;
  double plcp_s = 192e-6;
  int ifq_len = 50;
  double offered_load_pps = 55.0;  // per link transmitter, Poisson
  double sim_time_s = 120.0;
  double sir_capture_db = 10.0;
  int retry_limit = 7;
  std::uint32_t seed = 1;

  double data_tx_s() const { return payload_bytes * 8.0 / data_rate_bps; }
  double ack_tx_s() const { return ack_bytes * 8.0 / basic_rate_bps; }
  double data_frame_s() const { return plcp_s + data_tx_s(); }
  double ack_frame_s() const { return plcp_s + ack_tx_s(); }
  double ack_timeout_s() const { return sifs_s + ack_frame_s() + 2.0 * slot_s; }

  void validate() const {
    if (!(cw_min < cw_max)) throw std::invalid_argument("sim config: cw_min must be < cw_max");
    for (double d : {slot_s, sifs_s, difs_s, plcp_s, data_rate_bps, basic_rate_bps, sim_time_s})
      if (!(d > 0.0)) throw std::invalid_argument("sim config: durations and rates must be > 0");
    if (ifq_len < 1) throw std::invalid_argument("sim config: ifq_len must be >= 1");
    if (!(offered_load_pps > 0.0)) throw std::invalid_argument("sim config: offered load must be > 0");
  }
};

struct LinkStats {
  int link_id = 0;
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t drop_queue = 0;   // IFQ overflow on arrival
  std::int64_t drop_retry = 0;   // retry limit exceeded
  std::int64_t collisions = 0;   // DATA attempts that drew no ACK
  std::int64_t retransmissions = 0;
  std::int64_t queued_at_end = 0;
  std::int64_t in_flight_at_end = 0;
};

struct SimResult {
  double aggregated_throughput_bps = 0.0;
  std::vector<LinkStats> per_link;
  std::int64_t total_delivered = 0;
  std::int64_t total_collisions = 0;
  std::int64_t total_drops = 0;
  int max_concurrent_tx_per_node = 0;  // mutual exclusion witness, must stay 1
};

namespace sim_detail {

enum class FrameKind { data, ack };

struct Transmission {
  int id = 0;
  FrameKind kind = FrameKind::data;
  int link = 0;
  int src_node = 0;
  double start = 0.0;
  double end = 0.0;
};

enum class EventKind { arrival, difs_done, backoff_fire, tx_commit, tx_end, ack_start, ack_timeout };

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::arrival;
  int link = -1;
  std::uint64_t token = 0;
  int tx_id = -1;

  bool operator>(const Event& o) const { return std::tie(time, seq) > std::tie(o.time, o.seq); }
};

enum class MacState { idle, wait_idle, difs, backoff, tx, wait_ack };

struct LinkMac {
  MacState state = MacState::idle;
  std::deque<double> queue;  // arrival times of waiting packets
  bool has_current = false;
  int cw = 31;
  int attempts = 0;    // transmissions of the current packet so far
  int backoff = -1;    // remaining slots, -1 = draw afresh
  double backoff_resume = 0.0;
  std::uint64_t token = 0;      // invalidates stale difs/backoff events
  std::uint64_t ack_token = 0;  // invalidates stale ack timeouts
};

struct NodeState {
  bool transmitting = false;
  int sense_count = 0;  // ongoing foreign transmissions at or above the CS threshold
  int locked_tx = -1;
  int lock_iface = 0;  // radio the locked frame is being received on
  bool lock_corrupted = false;
  double lock_signal = 0.0;

  bool medium_busy() const { return transmitting || sense_count > 0; }
};

}  // namespace sim_detail

/// Event-driven CSMA/CA Basic Access simulator. Geometry follows the same
/// directional model as the graphs: a transmission radiates through its
/// serving interface; carrier sensing at a node goes through whichever of
/// its interfaces faces the source; a frame being received is corrupted only
/// by what the receiving radio itself hears. Interference is pairwise: each
/// overlapping transmission is tested against the locked frame one at a
/// time, never summed. Deterministic for a fixed seed.
class Simulator {
 public:
  Simulator(const Topology& topo, const PowerAssignment& power, const SimConfig& cfg)
      : topo_(topo), cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    topo_.validate();
    const int n_links = static_cast<int>(topo_.links.size());
    const int n_nodes = static_cast<int>(topo_.nodes.size());
    for (int i = 0; i < n_nodes; ++i) node_index_[topo_.nodes[i].id] = i;
    nodes_.resize(n_nodes);
    macs_.resize(n_links);
    stats_.resize(n_links);
    for (auto& m : macs_) m.cw = cfg_.cw_min;

    // Receive powers are static per (source endpoint, listening node,
    // listening interface); a link has two endpoints that ever transmit,
    // its DATA and its ACK side.
    auto empty_table = [&] {
      std::vector<std::vector<std::vector<double>>> t(n_links);
      for (int li = 0; li < n_links; ++li) {
        t[li].resize(n_nodes);
        for (int ni = 0; ni < n_nodes; ++ni) t[li][ni].assign(topo_.nodes[ni].interfaces.size(), 0.0);
      }
      return t;
    };
    via_data_ = empty_table();
    via_ack_ = empty_table();
    sense_data_.assign(n_links, std::vector<double>(n_nodes, 0.0));
    sense_ack_.assign(n_links, std::vector<double>(n_nodes, 0.0));
    facing_data_.assign(n_links, std::vector<int>(n_nodes, 0));
    facing_ack_.assign(n_links, std::vector<int>(n_nodes, 0));

    for (int li = 0; li < n_links; ++li) {
      const Link& l = topo_.links[li];
      stats_[li].link_id = l.id;
      link_row_[l.id] = li;
      auto fill = [&](const NodeSpec& src, int src_iface, double p, auto& via, auto& sense, auto& facing) {
        for (int ni = 0; ni < n_nodes; ++ni) {
          const NodeSpec& n = topo_.nodes[ni];
          if (n.id == src.id) continue;
          for (std::size_t f = 0; f < n.interfaces.size(); ++f) {
            const double v =
                received_power(src.interfaces.at(src_iface), n.interfaces[f], src.pos, n.pos, p, topo_.env);
            via[li][ni][f] = v;
            if (v > sense[li][ni]) {
              sense[li][ni] = v;
              facing[li][ni] = static_cast<int>(f);
            }
          }
        }
      };
      fill(topo_.node(l.tx_node), l.tx_interface, power.at(l.tx_node, l.tx_interface), via_data_, sense_data_,
           facing_data_);
      fill(topo_.node(l.rx_node), l.rx_interface, power.at(l.rx_node, l.rx_interface), via_ack_, sense_ack_,
           facing_ack_);
      if (via_data_[li][node_index_.at(l.rx_node)][l.rx_interface] < topo_.env.rx_threshold_w ||
          via_ack_[li][node_index_.at(l.tx_node)][l.tx_interface] < topo_.env.rx_threshold_w)
        throw std::runtime_error("link " + std::to_string(l.id) + " not viable under this power assignment");
    }
    sir_k_ = db_to_linear(cfg_.sir_capture_db);
  }

  SimResult run() {
    for (int li = 0; li < static_cast<int>(topo_.links.size()); ++li) {
      double t = exponential(rng_, 1.0 / cfg_.offered_load_pps);
      while (t <= cfg_.sim_time_s) {
        push({t, next_seq(), sim_detail::EventKind::arrival, li});
        t += exponential(rng_, 1.0 / cfg_.offered_load_pps);
      }
    }
    while (!events_.empty()) {
      const sim_detail::Event ev = events_.top();
      if (ev.time > cfg_.sim_time_s) break;
      events_.pop();
      now_ = ev.time;
      dispatch(ev);
    }
    return finish();
  }

 private:
  using Event = sim_detail::Event;
  using EventKind = sim_detail::EventKind;
  using FrameKind = sim_detail::FrameKind;
  using MacState = sim_detail::MacState;
  using NodeState = sim_detail::NodeState;
  using Transmission = sim_detail::Transmission;

  std::uint64_t next_seq() { return seq_++; }
  void push(Event ev) { events_.push(ev); }

  int node_row(int node_id) const { return node_index_.at(node_id); }

  double sense_power(const Transmission& tx, int nr) const {
    const auto& table = tx.kind == FrameKind::data ? sense_data_ : sense_ack_;
    return table[link_row_.at(tx.link)][nr];
  }
  double power_via(const Transmission& tx, int nr, int iface) const {
    const auto& table = tx.kind == FrameKind::data ? via_data_ : via_ack_;
    return table[link_row_.at(tx.link)][nr][iface];
  }
  int facing_iface(const Transmission& tx, int nr) const {
    const auto& table = tx.kind == FrameKind::data ? facing_data_ : facing_ack_;
    return table[link_row_.at(tx.link)][nr];
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::arrival: on_arrival(ev.link); break;
      case EventKind::difs_done: on_difs_done(ev.link, ev.token); break;
      case EventKind::backoff_fire: on_backoff_fire(ev.link, ev.token); break;
      case EventKind::tx_commit: on_tx_commit(ev.tx_id); break;
      case EventKind::tx_end: on_tx_end(ev.tx_id); break;
      case EventKind::ack_start: on_ack_start(ev.link, ev.token); break;
      case EventKind::ack_timeout: on_ack_timeout(ev.link, ev.token); break;
    }
  }

  // ---- traffic ----

  void on_arrival(int li) {
    auto& mac = macs_[li];
    auto& st = stats_[li];
    ++st.generated;
    if (!mac.has_current) {
      mac.has_current = true;
      mac.attempts = 0;
      mac.cw = cfg_.cw_min;
      mac.backoff = -1;
      begin_access(li);
    } else if (static_cast<int>(mac.queue.size()) < cfg_.ifq_len) {
      mac.queue.push_back(now_);
    } else {
      ++st.drop_queue;
    }
  }

  // ---- medium access ----

  bool medium_busy(int li) const { return nodes_[node_row(topo_.links[li].tx_node)].medium_busy(); }

  void begin_access(int li) {
    auto& mac = macs_[li];
    if (medium_busy(li)) {
      mac.state = MacState::wait_idle;
      return;
    }
    enter_difs(li);
  }

  void enter_difs(int li) {
    auto& mac = macs_[li];
    mac.state = MacState::difs;
    ++mac.token;
    push({now_ + cfg_.difs_s, next_seq(), EventKind::difs_done, li, mac.token});
  }

  void on_difs_done(int li, std::uint64_t token) {
    auto& mac = macs_[li];
    if (mac.state != MacState::difs || mac.token != token) return;
    if (mac.backoff < 0) mac.backoff = uniform_int(rng_, 0, mac.cw);
    if (mac.backoff == 0) {
      start_data_tx(li);
      return;
    }
    mac.state = MacState::backoff;
    mac.backoff_resume = now_;
    ++mac.token;
    push({now_ + mac.backoff * cfg_.slot_s, next_seq(), EventKind::backoff_fire, li, mac.token});
  }

  void on_backoff_fire(int li, std::uint64_t token) {
    auto& mac = macs_[li];
    if (mac.state != MacState::backoff || mac.token != token) return;
    mac.backoff = 0;
    start_data_tx(li);
  }

  void medium_became_busy(int node_row_idx) {
    for (int li : tx_links_at(node_row_idx)) {
      auto& mac = macs_[li];
      if (mac.state == MacState::difs) {
        ++mac.token;
        mac.state = MacState::wait_idle;
      } else if (mac.state == MacState::backoff) {
        const int elapsed = static_cast<int>((now_ - mac.backoff_resume) / cfg_.slot_s + 1e-9);
        mac.backoff = std::max(0, mac.backoff - elapsed);
        ++mac.token;
        mac.state = MacState::wait_idle;
      }
    }
  }

  void medium_became_idle(int node_row_idx) {
    for (int li : tx_links_at(node_row_idx)) {
      auto& mac = macs_[li];
      if (mac.state == MacState::wait_idle) enter_difs(li);
    }
  }

  const std::vector<int>& tx_links_at(int node_row_idx) {
    if (tx_links_by_node_.empty()) {
      tx_links_by_node_.resize(topo_.nodes.size());
      for (int li = 0; li < static_cast<int>(topo_.links.size()); ++li)
        tx_links_by_node_[node_row(topo_.links[li].tx_node)].push_back(li);
    }
    return tx_links_by_node_[node_row_idx];
  }

  // ---- transmissions ----

  void start_data_tx(int li) {
    auto& mac = macs_[li];
    const Link& l = topo_.links[li];
    const int nr = node_row(l.tx_node);
    if (nodes_[nr].transmitting) {  // mutual exclusion on a node
      mac.state = MacState::wait_idle;
      return;
    }
    ++mac.attempts;
    if (mac.attempts > 1) ++stats_[li].retransmissions;
    mac.state = MacState::tx;
    begin_transmission(FrameKind::data, li, l.tx_node, cfg_.data_frame_s());
  }

  void on_ack_start(int li, std::uint64_t) {
    const Link& l = topo_.links[li];
    const int nr = node_row(l.rx_node);
    if (nodes_[nr].transmitting) return;  // busy with another response, ACK withheld
    begin_transmission(FrameKind::ack, li, l.rx_node, cfg_.ack_frame_s());
  }

  void begin_transmission(FrameKind kind, int li, int src_node, double duration) {
    const int nr = node_row(src_node);
    NodeState& node = nodes_[nr];
    node.transmitting = true;
    concurrent_tx_[nr] += 1;
    max_concurrent_ = std::max(max_concurrent_, concurrent_tx_[nr]);
    // transmitting cancels any reception in progress at this node
    node.locked_tx = -1;
    medium_became_busy(nr);

    Transmission tx;
    tx.id = next_tx_id_++;
    tx.kind = kind;
    tx.link = topo_.links[li].id;
    tx.src_node = src_node;
    tx.start = now_;
    tx.end = now_ + duration;
    pending_commit_[tx.id] = tx;
    push({now_, next_seq(), EventKind::tx_commit, li, 0, tx.id});
    push({tx.end, next_seq(), EventKind::tx_end, li, 0, tx.id});
  }

  /// Sense and lock effects of a transmission, applied after every frame
  /// scheduled at the same instant has started so that simultaneous
  /// transmitters collide instead of deferring to each other.
  void on_tx_commit(int tx_id) {
    auto it = pending_commit_.find(tx_id);
    if (it == pending_commit_.end()) return;
    const Transmission tx = it->second;
    pending_commit_.erase(it);
    ongoing_[tx.id] = tx;
    for (std::size_t nr = 0; nr < nodes_.size(); ++nr) {
      if (topo_.nodes[nr].id == tx.src_node) continue;
      NodeState& node = nodes_[nr];
      if (sense_power(tx, static_cast<int>(nr)) >= topo_.env.cs_threshold_w) {
        const bool was_busy = node.medium_busy();
        ++node.sense_count;
        if (!was_busy) medium_became_busy(static_cast<int>(nr));
      }
      update_lock_on_start(static_cast<int>(nr), tx);
    }
  }

  /// A receiver holds one frame at a time, on the radio facing its source.
  /// A newcomer above the decode level locks a free node; it corrupts a held
  /// frame when the pairwise SIR through the holding radio drops below K;
  /// and it may be captured in place of a frame that is already corrupted,
  /// judged against everything still on the air.
  void update_lock_on_start(int nr, const Transmission& tx) {
    NodeState& node = nodes_[nr];
    if (node.transmitting) return;
    const double p_best = sense_power(tx, nr);
    if (p_best >= topo_.env.rx_threshold_w && (node.locked_tx < 0 || node.lock_corrupted)) {
      node.locked_tx = tx.id;
      node.lock_iface = facing_iface(tx, nr);
      node.lock_signal = p_best;
      node.lock_corrupted = sir_fails(nr, tx.id, p_best, node.lock_iface);
    } else if (node.locked_tx >= 0 && !node.lock_corrupted) {
      // interference as seen by the radio holding the current frame; the
      // newcomer's own preamble was missed, so it is never captured here
      const double p_at_lock = power_via(tx, nr, node.lock_iface);
      if (node.lock_signal < sir_k_ * p_at_lock) node.lock_corrupted = true;
    }
  }

  bool sir_fails(int nr, int tx_id, double signal, int iface) const {
    for (const auto& [id, other] : ongoing_) {
      if (id == tx_id || other.src_node == topo_.nodes[nr].id) continue;
      if (signal < sir_k_ * power_via(other, nr, iface)) return true;
    }
    return false;
  }

  void on_tx_end(int tx_id) {
    const auto it = ongoing_.find(tx_id);
    if (it == ongoing_.end()) return;
    const Transmission tx = it->second;
    ongoing_.erase(it);

    const int src_row = node_row(tx.src_node);
    nodes_[src_row].transmitting = false;
    concurrent_tx_[src_row] -= 1;
    if (!nodes_[src_row].medium_busy()) medium_became_idle(src_row);

    for (std::size_t nr = 0; nr < nodes_.size(); ++nr) {
      if (topo_.nodes[nr].id == tx.src_node) continue;
      NodeState& node = nodes_[nr];
      if (sense_power(tx, static_cast<int>(nr)) >= topo_.env.cs_threshold_w) {
        --node.sense_count;
        if (!node.medium_busy()) medium_became_idle(static_cast<int>(nr));
      }
      if (node.locked_tx == tx.id) {
        node.locked_tx = -1;
        const bool ok = !node.lock_corrupted && !node.transmitting;
        if (ok) deliver(tx, static_cast<int>(nr));
      }
    }

    if (tx.kind == FrameKind::data) {
      const int li = link_row_.at(tx.link);
      auto& mac = macs_[li];
      if (mac.state == MacState::tx) {
        mac.state = MacState::wait_ack;
        ++mac.ack_token;
        push({now_ + cfg_.ack_timeout_s(), next_seq(), EventKind::ack_timeout, li, mac.ack_token});
      }
    }
  }

  void deliver(const Transmission& tx, int nr) {
    const int li = link_row_.at(tx.link);
    const Link& l = topo_.links[li];
    if (tx.kind == FrameKind::data) {
      if (topo_.nodes[nr].id != l.rx_node) return;  // overheard by a third party
      // Receiver-side silence: a receiver that still senses a foreign
      // transmission ignores the DATA and withholds the ACK.
      if (nodes_[nr].medium_busy()) return;
      push({now_ + cfg_.sifs_s, next_seq(), EventKind::ack_start, li, 0});
    } else {
      if (topo_.nodes[nr].id != l.tx_node) return;
      auto& mac = macs_[li];
      if (mac.state != MacState::wait_ack) return;
      ++mac.ack_token;  // cancel the pending timeout
      ++stats_[li].delivered;
      complete_current(li);
    }
  }

  void on_ack_timeout(int li, std::uint64_t token) {
    auto& mac = macs_[li];
    if (mac.state != MacState::wait_ack || mac.ack_token != token) return;
    ++stats_[li].collisions;
    if (mac.attempts > cfg_.retry_limit) {
      ++stats_[li].drop_retry;
      complete_current(li);
      return;
    }
    mac.cw = std::min(2 * mac.cw + 1, cfg_.cw_max);
    mac.backoff = -1;
    begin_access(li);
  }

  void complete_current(int li) {
    auto& mac = macs_[li];
    mac.cw = cfg_.cw_min;
    mac.attempts = 0;
    mac.backoff = -1;
    if (!mac.queue.empty()) {
      mac.queue.pop_front();
      mac.has_current = true;
      begin_access(li);
    } else {
      mac.has_current = false;
      mac.state = MacState::idle;
    }
  }

  SimResult finish() {
    SimResult r;
    r.per_link = stats_;
    for (std::size_t li = 0; li < macs_.size(); ++li) {
      auto& st = r.per_link[li];
      st.queued_at_end = static_cast<std::int64_t>(macs_[li].queue.size());
      st.in_flight_at_end = macs_[li].has_current ? 1 : 0;
      r.total_delivered += st.delivered;
      r.total_collisions += st.collisions;
      r.total_drops += st.drop_queue + st.drop_retry;
    }
    r.aggregated_throughput_bps =
        static_cast<double>(r.total_delivered) * cfg_.payload_bytes * 8.0 / cfg_.sim_time_s;
    r.max_concurrent_tx_per_node = max_concurrent_;
    return r;
  }

  Topology topo_;
  SimConfig cfg_;
  std::mt19937 rng_;
  double sir_k_ = 10.0;
  double now_ = 0.0;
  std::uint64_t seq_ = 0;
  int next_tx_id_ = 0;
  int max_concurrent_ = 0;

  std::map<int, int> node_index_;
  std::map<int, int> link_row_;
  std::vector<sim_detail::NodeState> nodes_;
  std::vector<sim_detail::LinkMac> macs_;
  std::vector<LinkStats> stats_;
  std::vector<std::vector<std::vector<double>>> via_data_;  // [link][node][iface]
  std::vector<std::vector<std::vector<double>>> via_ack_;
  std::vector<std::vector<double>> sense_data_;  // best interface, [link][node]
  std::vector<std::vector<double>> sense_ack_;
  std::vector<std::vector<int>> facing_data_;
  std::vector<std::vector<int>> facing_ack_;
  std::vector<std::vector<int>> tx_links_by_node_;
  std::map<int, sim_detail::Transmission> pending_commit_;
  std::map<int, sim_detail::Transmission> ongoing_;
  std::map<int, int> concurrent_tx_;
  std::priority_queue<sim_detail::Event, std::vector<sim_detail::Event>, std::greater<>> events_;
};

inline SimResult simulate(const Topology& topo, const PowerAssignment& power, const SimConfig& cfg) {
  return Simulator(topo, power, cfg).run();
}

}  // namespace acmeter
