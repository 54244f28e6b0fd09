#include "rps/dcf_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "rps/errors.hpp"
#include "rps/polling.hpp"
#include "rps/sim/calendar.hpp"
#include "rps/sim/replications.hpp"

namespace rps::dcfsim {

namespace {

struct NodeState {
  std::deque<double> backlog;  // arrival timestamps (us)
  int stage = 0;
  long long counter = 0;
  bool contending = false;
};

class DcfRun {
 public:
  DcfRun(const DcfSimConfig& cfg, sim::RngStream& stream)
      : cfg_(cfg),
        stream_(stream),
        dur_(dcf::slot_durations(cfg.params)),
        horizon_us_(cfg.horizon_s * 1e6),
        warmup_us_(cfg.warmup_s * 1e6),
        nodes_(cfg.n) {}

  DcfSimReport run() {
    const int W = cfg_.params.cw_min_W;
    if (cfg_.traffic == Traffic::saturated) {
      for (auto& node : nodes_) {
        node.contending = true;
        node.counter = static_cast<long long>(
            stream_.uniform_int(static_cast<std::uint64_t>(W)));
      }
    } else {
      for (int i = 0; i < cfg_.n; ++i)
        calendar_.push(next_interarrival(i), i);
    }

    double t = 0.0;  // us
    std::vector<int> transmitters;
    while (t < horizon_us_) {
      if (cfg_.traffic == Traffic::poisson) ingest(t);

      int contenders = 0;
      transmitters.clear();
      for (int i = 0; i < cfg_.n; ++i) {
        if (!nodes_[i].contending) continue;
        ++contenders;
        if (nodes_[i].counter == 0) transmitters.push_back(i);
      }

      if (contenders == 0) {
        // Nothing on the air: jump straight to the next arrival, which
        // starts a fresh slot grid.
        if (calendar_.empty()) break;
        const double ta = std::min(calendar_.peek().time, horizon_us_);
        add_empty(t, ta);
        t = ta;
        if (t >= horizon_us_) break;
        continue;
      }

      const bool measured = t >= warmup_us_;
      if (transmitters.empty()) {
        for (auto& node : nodes_)
          if (node.contending) --node.counter;
        account_idle(measured);
        t += dur_.t_idle;
      } else {
        // Non-transmitting contenders survive one slot and decrement;
        // transmitters still sit at counter == 0 and re-sample below.
        decrement_survivors();
        if (transmitters.size() == 1) {
          const int i = transmitters.front();
          const double t_end = t + dur_.t_success;
          record_attempts(1, false, measured);
          complete_success(i, t_end);
          account_success(measured);
          t = t_end;
        } else {
          record_attempts(static_cast<int>(transmitters.size()), true,
                          measured);
          for (int i : transmitters) {
            NodeState& node = nodes_[i];
            node.stage = std::min(node.stage + 1, cfg_.params.max_stage_m);
            node.counter = sample_backoff(node.stage);
          }
          account_collision(measured);
          t += dur_.t_collision;
        }
      }
    }
    return build_report(t);
  }

 private:
  double next_interarrival(int i) const {
    // lambda is in pkts/s; timestamps are microseconds.
    return sim::sample_exponential(stream_, cfg_.lambda(i)) * 1e6;
  }

  double next_interarrival_from(double now, int i) const {
    return now + sim::sample_exponential(stream_, cfg_.lambda(i)) * 1e6;
  }

  long long sample_backoff(int stage) {
    const std::uint64_t cw = static_cast<std::uint64_t>(cfg_.params.cw_min_W)
                             << stage;
    return static_cast<long long>(stream_.uniform_int(cw));
  }

  void ingest(double t) {
    while (!calendar_.empty() && calendar_.peek().time <= t) {
      const auto ev = calendar_.pop();
      const int i = ev.payload;
      NodeState& node = nodes_[i];
      node.backlog.push_back(ev.time);
      if (!node.contending) {
        node.contending = true;
        node.stage = 0;
        node.counter = sample_backoff(0);
      }
      calendar_.push(next_interarrival_from(ev.time, i), i);
    }
  }

  void decrement_survivors() {
    for (int i = 0; i < cfg_.n; ++i) {
      NodeState& node = nodes_[i];
      if (!node.contending || node.counter == 0) continue;
      --node.counter;
    }
  }

  void complete_success(int i, double t_end) {
    NodeState& node = nodes_[i];
    node.stage = 0;
    if (cfg_.traffic == Traffic::saturated) {
      node.counter = sample_backoff(0);
      if (t_end > warmup_us_ && t_end <= horizon_us_) ++delivered_[i];
      return;
    }
    const double arrival = node.backlog.front();
    node.backlog.pop_front();
    if (arrival >= warmup_us_ && t_end <= horizon_us_) {
      sojourn_sum_[i] += (t_end - arrival) * 1e-6;
      ++sojourn_count_[i];
    }
    if (t_end > warmup_us_ && t_end <= horizon_us_) ++delivered_[i];
    if (!node.backlog.empty()) {
      node.counter = sample_backoff(0);
    } else {
      node.contending = false;
    }
  }

  void record_attempts(int count, bool collided, bool measured) {
    total_attempts_ += count;
    if (collided) total_collided_ += count;
    if (measured) {
      attempts_win_ += count;
      if (collided) collided_win_ += count;
    }
  }

  void account_idle(bool measured) {
    ++total_idle_;
    total_slotted_ += dur_.t_idle;
    if (measured) ++idle_win_;
  }
  void account_success(bool measured) {
    ++total_success_;
    total_slotted_ += dur_.t_success;
    if (measured) ++success_win_;
  }
  void account_collision(bool measured) {
    ++total_collision_;
    total_slotted_ += dur_.t_collision;
    if (measured) ++collision_win_;
  }

  void add_empty(double from, double to) {
    total_empty_ += to - from;
  }

  DcfSimReport build_report(double t_final) {
    const double window_s = cfg_.horizon_s - cfg_.warmup_s;
    DcfSimReport rep;
    rep.nodes.resize(cfg_.n);
    for (int i = 0; i < cfg_.n; ++i) {
      DcfNodeStats& out = rep.nodes[i];
      out.sojourn_count = sojourn_count_[i];
      out.mean_sojourn_s = sojourn_count_[i] > 0
                               ? sojourn_sum_[i] / sojourn_count_[i]
                               : std::numeric_limits<double>::quiet_NaN();
      out.delivered = delivered_[i];
      out.throughput_pps = static_cast<double>(delivered_[i]) / window_s;
    }
    rep.aggregate_throughput_pps =
        static_cast<double>(success_win_) / window_s;
    const long long slots_win = idle_win_ + success_win_ + collision_win_;
    rep.beta_hat = slots_win > 0 ? static_cast<double>(attempts_win_) /
                                       (static_cast<double>(cfg_.n) *
                                        static_cast<double>(slots_win))
                                 : std::numeric_limits<double>::quiet_NaN();
    rep.p_hat = attempts_win_ > 0
                    ? static_cast<double>(collided_win_) /
                          static_cast<double>(attempts_win_)
                    : std::numeric_limits<double>::quiet_NaN();
    rep.idle_slots = idle_win_;
    rep.success_slots = success_win_;
    rep.collision_slots = collision_win_;
    rep.total_idle_slots = total_idle_;
    rep.total_success_slots = total_success_;
    rep.total_collision_slots = total_collision_;
    rep.total_slotted_time_us = total_slotted_;
    rep.total_empty_time_us = total_empty_;
    rep.final_time_us = t_final;
    return rep;
  }

  const DcfSimConfig& cfg_;
  sim::RngStream& stream_;
  const dcf::SlotDurations dur_;
  const double horizon_us_;
  const double warmup_us_;
  std::vector<NodeState> nodes_;
  sim::EventCalendar<int> calendar_;

  std::vector<double> sojourn_sum_ = std::vector<double>(cfg_.n, 0.0);
  std::vector<long long> sojourn_count_ = std::vector<long long>(cfg_.n, 0);
  std::vector<long long> delivered_ = std::vector<long long>(cfg_.n, 0);
  long long idle_win_ = 0, success_win_ = 0, collision_win_ = 0;
  long long total_idle_ = 0, total_success_ = 0, total_collision_ = 0;
  long long attempts_win_ = 0, collided_win_ = 0;
  long long total_attempts_ = 0, total_collided_ = 0;
  double total_slotted_ = 0.0;
  double total_empty_ = 0.0;
};

std::uint64_t row_seed(std::uint64_t seed, std::size_t row) {
  return seed + static_cast<std::uint64_t>(row) * 0x9E3779B97F4A7C15ull;
}

}  // namespace

void DcfSimConfig::validate() const {
  params.validate();
  if (n < 2) throw ConfigError("dcf sim needs n >= 2");
  if (!(horizon_s > warmup_s) || warmup_s < 0)
    throw ConfigError("need horizon > warmup >= 0");
  if (traffic == Traffic::poisson) {
    if (lambda.size() != n)
      throw ConfigError("poisson mode needs one lambda per node");
    if (!(lambda > 0.0).all())
      throw ConfigError("poisson arrival rates must be positive");
  }
}

DcfSimReport simulate_dcf(const DcfSimConfig& cfg, sim::RngStream& stream) {
  cfg.validate();
  return DcfRun(cfg, stream).run();
}

DcfSimSummary run_dcf_replications(const DcfSimConfig& cfg, int reps,
                                   std::uint64_t master_seed) {
  cfg.validate();
  const int n = cfg.n;
  auto experiment = [&cfg, n](sim::RngStream& stream) {
    const DcfSimReport rep = simulate_dcf(cfg, stream);
    std::vector<double> metrics;
    metrics.reserve(2 * n + 4);
    double pooled_sum = 0.0;
    long long pooled_count = 0;
    for (int i = 0; i < n; ++i) {
      metrics.push_back(rep.nodes[i].mean_sojourn_s);
      if (rep.nodes[i].sojourn_count > 0) {
        pooled_sum += rep.nodes[i].mean_sojourn_s * rep.nodes[i].sojourn_count;
        pooled_count += rep.nodes[i].sojourn_count;
      }
    }
    for (int i = 0; i < n; ++i) metrics.push_back(rep.nodes[i].throughput_pps);
    metrics.push_back(pooled_count > 0
                          ? pooled_sum / static_cast<double>(pooled_count)
                          : std::numeric_limits<double>::quiet_NaN());
    metrics.push_back(rep.aggregate_throughput_pps);
    metrics.push_back(rep.beta_hat);
    metrics.push_back(rep.p_hat);
    return metrics;
  };
  const auto per_metric = sim::run_replications(experiment, reps, master_seed);

  DcfSimSummary summary;
  summary.sojourn.assign(per_metric.begin(), per_metric.begin() + n);
  summary.throughput.assign(per_metric.begin() + n,
                            per_metric.begin() + 2 * n);
  summary.pooled_sojourn = per_metric[2 * n];
  summary.aggregate_throughput = per_metric[2 * n + 1];
  summary.beta_hat = per_metric[2 * n + 2];
  summary.p_hat = per_metric[2 * n + 3];
  return summary;
}

namespace {

SweepRow run_sweep_point(int n, double lambda_per_node,
                         const dcf::DcfParams& params, int reps,
                         std::uint64_t seed, double horizon_s,
                         double warmup_s, double x) {
  SweepRow row;
  row.x = x;
  const double capacity = dcf::aggregate_throughput(n, params);
  const double offered = lambda_per_node * n;
  row.stable = offered < capacity;
  if (!row.stable) {
    row.sim_delay_ms = std::numeric_limits<double>::quiet_NaN();
    row.ci_halfwidth_ms = std::numeric_limits<double>::quiet_NaN();
    row.analytic_ms = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  DcfSimConfig cfg;
  cfg.n = n;
  cfg.params = params;
  cfg.traffic = Traffic::poisson;
  cfg.lambda = Eigen::ArrayXd::Constant(n, lambda_per_node);
  cfg.horizon_s = horizon_s;
  cfg.warmup_s = warmup_s;
  const DcfSimSummary summary = run_dcf_replications(cfg, reps, seed);
  const auto ci = sim::ci95(summary.pooled_sojourn);
  row.sim_delay_ms = ci.mean * 1e3;
  row.ci_halfwidth_ms = ci.halfwidth * 1e3;
  row.analytic_ms =
      polling::mean_delay_zero_switchover(cfg.lambda, capacity) * 1e3;
  return row;
}

}  // namespace

std::vector<SweepRow> delay_vs_load_sweep(int n,
                                          const Eigen::ArrayXd& lambda_grid,
                                          const dcf::DcfParams& params,
                                          int reps, std::uint64_t seed,
                                          double horizon_s, double warmup_s) {
  std::vector<SweepRow> rows;
  rows.reserve(lambda_grid.size());
  for (int k = 0; k < lambda_grid.size(); ++k)
    rows.push_back(run_sweep_point(n, lambda_grid(k), params, reps,
                                   row_seed(seed, k), horizon_s, warmup_s,
                                   lambda_grid(k)));
  return rows;
}

std::vector<SweepRow> delay_vs_n_sweep(double lambda_per_node,
                                       const std::vector<int>& n_grid,
                                       const dcf::DcfParams& params, int reps,
                                       std::uint64_t seed, double horizon_s,
                                       double warmup_s) {
  std::vector<SweepRow> rows;
  rows.reserve(n_grid.size());
  for (std::size_t k = 0; k < n_grid.size(); ++k)
    rows.push_back(run_sweep_point(n_grid[k], lambda_per_node, params, reps,
                                   row_seed(seed, k), horizon_s, warmup_s,
                                   static_cast<double>(n_grid[k])));
  return rows;
}

}  // namespace rps::dcfsim
