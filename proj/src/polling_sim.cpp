#include "rps/polling_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "rps/errors.hpp"
#include "rps/sim/calendar.hpp"
#include "rps/sim/replications.hpp"

namespace rps::pollsim {

namespace {

void check_moments(const Eigen::ArrayXd& mean, const Eigen::ArrayXd& m2,
                   Dist dist, const char* what) {
  const double factor = dist == Dist::deterministic ? 1.0 : 2.0;
  for (int i = 0; i < mean.size(); ++i) {
    const double expect = factor * mean(i) * mean(i);
    if (std::abs(m2(i) - expect) > 1e-9 * std::max(expect, 1e-300))
      throw ConfigError(std::string(what) +
                        " second moment inconsistent with distribution");
  }
}

struct QueueState {
  std::deque<double> backlog;  // arrival timestamps (s)
  long long in_system = 0;     // backlog plus any packet in service
  double last_change = 0.0;
  double area_in_system = 0.0;  // integral over the measurement window
  double time_nonempty = 0.0;
  double sojourn_sum = 0.0;
  long long sojourn_count = 0;
  long long served_window = 0;
  long long polls = 0;
  long long polls_nonempty = 0;
  double qlen_at_poll_sum = 0.0;
};

class PollingRun {
 public:
  PollingRun(const PollingSimConfig& cfg, sim::RngStream& stream)
      : cfg_(cfg),
        stream_(stream),
        horizon_(cfg.horizon_s),
        warmup_(cfg.warmup_s),
        queues_(cfg.base.n()) {}

  PollingSimReport run() {
    const int n = cfg_.base.n();
    for (int i = 0; i < n; ++i)
      calendar_.push(sim::sample_exponential(stream_, cfg_.base.lambda(i)), i);

    if (cfg_.mode == Mode::zero_switchover)
      run_zero();
    else
      run_lee();

    for (auto& q : queues_) integrate_to(q, horizon_);
    return build_report();
  }

 private:
  // Clip the piecewise-constant in_system trajectory to the window.
  void integrate_to(QueueState& q, double now) {
    const double a = std::max(q.last_change, warmup_);
    const double b = std::min(now, horizon_);
    if (b > a) {
      q.area_in_system += static_cast<double>(q.in_system) * (b - a);
      if (q.in_system > 0) q.time_nonempty += b - a;
    }
    q.last_change = now;
  }

  void process_arrival(double time, int i) {
    QueueState& q = queues_[i];
    integrate_to(q, time);
    ++q.in_system;
    q.backlog.push_back(time);
    calendar_.push(time + sim::sample_exponential(stream_, cfg_.base.lambda(i)),
                   i);
  }

  // Arrivals at exactly `tmax` wait for the inclusive top-of-loop ingest,
  // so a service completion at the same instant is processed first.
  void ingest(double tmax, bool inclusive) {
    while (!calendar_.empty() &&
           (inclusive ? calendar_.peek().time <= tmax
                      : calendar_.peek().time < tmax)) {
      const auto ev = calendar_.pop();
      process_arrival(ev.time, ev.payload);
    }
  }

  double draw_service(int i) {
    const double mean = cfg_.base.service_mean(i);
    if (cfg_.service_dist == Dist::deterministic) return mean;
    return sim::sample_exponential(stream_, 1.0 / mean);
  }

  double draw_switch(int i) {
    const double mean = cfg_.base.switch_mean(i);
    if (cfg_.switch_dist == Dist::deterministic) return mean;
    return sim::sample_exponential(stream_, 1.0 / mean);
  }

  int pick_gamma() {
    const double u = stream_.uniform();
    double acc = 0.0;
    for (int i = 0; i < cfg_.base.n(); ++i) {
      acc += cfg_.base.gamma(i);
      if (u <= acc) return i;
    }
    return cfg_.base.n() - 1;
  }

  // Serves the head packet of queue j starting at *t; advances *t.
  void serve_one(int j, double* t) {
    QueueState& q = queues_[j];
    const double arrival = q.backlog.front();
    q.backlog.pop_front();
    const double depart = *t + draw_service(j);
    ingest(depart, false);
    integrate_to(q, depart);
    --q.in_system;
    busy_time_ += std::max(0.0, std::min(depart, horizon_) -
                                    std::max(*t, warmup_));
    if (arrival >= warmup_ && depart <= horizon_) {
      q.sojourn_sum += depart - arrival;
      ++q.sojourn_count;
    }
    if (depart > warmup_ && depart <= horizon_) ++q.served_window;
    *t = depart;
  }

  void run_zero() {
    double t = 0.0;
    std::vector<int> nonempty;
    while (true) {
      ingest(t, true);
      if (t >= horizon_) break;
      nonempty.clear();
      for (int i = 0; i < cfg_.base.n(); ++i)
        if (!queues_[i].backlog.empty()) nonempty.push_back(i);
      if (nonempty.empty()) {
        if (calendar_.empty()) break;
        const double ta = calendar_.peek().time;
        if (ta >= horizon_) break;
        t = ta;
        continue;
      }
      const int j =
          nonempty[stream_.uniform_int(static_cast<std::uint64_t>(nonempty.size()))];
      serve_one(j, &t);
    }
  }

  void run_lee() {
    double t = 0.0;
    while (true) {
      ingest(t, true);
      if (t >= horizon_) break;
      const int j = pick_gamma();
      QueueState& q = queues_[j];
      if (t >= warmup_) {
        ++q.polls;
        q.qlen_at_poll_sum += static_cast<double>(q.backlog.size());
        if (!q.backlog.empty()) ++q.polls_nonempty;
      }
      if (!q.backlog.empty()) serve_one(j, &t);
      const double t_next = t + draw_switch(j);
      ingest(t_next, false);
      t = t_next;
    }
  }

  PollingSimReport build_report() const {
    const double window = horizon_ - warmup_;
    PollingSimReport rep;
    rep.queues.resize(queues_.size());
    long long served_total = 0;
    for (std::size_t i = 0; i < queues_.size(); ++i) {
      const QueueState& q = queues_[i];
      QueueSimStats& out = rep.queues[i];
      out.mean_sojourn_s =
          q.sojourn_count > 0 ? q.sojourn_sum / q.sojourn_count
                              : std::numeric_limits<double>::quiet_NaN();
      if (cfg_.mode == Mode::lee) {
        out.mean_qlen = q.polls > 0 ? q.qlen_at_poll_sum / q.polls : 0.0;
        out.frac_nonempty =
            q.polls > 0 ? static_cast<double>(q.polls_nonempty) / q.polls : 0.0;
      } else {
        out.mean_qlen = q.area_in_system / window;
        out.frac_nonempty = q.time_nonempty / window;
      }
      out.served = q.served_window;
      served_total += q.served_window;
    }
    rep.served_rate_pps = static_cast<double>(served_total) / window;
    rep.busy_fraction = busy_time_ / window;
    return rep;
  }

  const PollingSimConfig& cfg_;
  sim::RngStream& stream_;
  const double horizon_;
  const double warmup_;
  std::vector<QueueState> queues_;
  sim::EventCalendar<int> calendar_;
  double busy_time_ = 0.0;
};

}  // namespace

void PollingSimConfig::validate() const {
  base.validate();
  if (!(horizon_s > warmup_s) || warmup_s < 0)
    throw ConfigError("need horizon > warmup >= 0");
  if (mode == Mode::zero_switchover) {
    if ((base.switch_mean != 0.0).any() || (base.switch_m2 != 0.0).any())
      throw ConfigError("zero_switchover mode requires all s_i = 0");
  } else {
    if (!(base.switch_mean > 0.0).all())
      throw ConfigError("lee mode requires all s_i > 0");
    check_moments(base.switch_mean, base.switch_m2, switch_dist, "switchover");
  }
  check_moments(base.service_mean, base.service_m2, service_dist, "service");
}

PollingSimReport simulate_polling(const PollingSimConfig& cfg,
                                  sim::RngStream& stream) {
  cfg.validate();
  return PollingRun(cfg, stream).run();
}

PollingSimSummary run_polling_replications(const PollingSimConfig& cfg,
                                           int reps,
                                           std::uint64_t master_seed) {
  cfg.validate();
  const int n = cfg.base.n();
  auto experiment = [&cfg, n](sim::RngStream& stream) {
    const PollingSimReport rep = simulate_polling(cfg, stream);
    std::vector<double> metrics;
    metrics.reserve(3 * n + 2);
    for (int i = 0; i < n; ++i) metrics.push_back(rep.queues[i].mean_sojourn_s);
    for (int i = 0; i < n; ++i) metrics.push_back(rep.queues[i].mean_qlen);
    for (int i = 0; i < n; ++i) metrics.push_back(rep.queues[i].frac_nonempty);
    metrics.push_back(rep.served_rate_pps);
    metrics.push_back(rep.busy_fraction);
    return metrics;
  };
  const auto per_metric = sim::run_replications(experiment, reps, master_seed);

  PollingSimSummary summary;
  summary.sojourn.assign(per_metric.begin(), per_metric.begin() + n);
  summary.qlen.assign(per_metric.begin() + n, per_metric.begin() + 2 * n);
  summary.nonempty.assign(per_metric.begin() + 2 * n,
                          per_metric.begin() + 3 * n);
  summary.served_rate = per_metric[3 * n];
  summary.busy_fraction = per_metric[3 * n + 1];
  return summary;
}

}  // namespace rps::pollsim
