#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "bandit/conjugate.hpp"
#include "bandit/error.hpp"
#include "bandit/instance.hpp"
#include "bandit/policy.hpp"
#include "bandit/rng.hpp"

namespace bandit {

enum class Algorithm { double_sampling, thompson, bayes_ucb };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::double_sampling, Algorithm::thompson,
                                               Algorithm::bayes_ucb};

inline std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::double_sampling: return "double-sampling";
    case Algorithm::thompson: return "thompson";
    case Algorithm::bayes_ucb: return "bayes-ucb";
  }
  return "unknown";
}

inline std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  for (const auto algo : kAllAlgorithms) {
    if (name == algorithm_name(algo)) return algo;
  }
  return std::nullopt;
}

enum class RegretMode { pseudo, observed };

/// One benchmark run: an instance, a policy, and the experiment scales.
struct ExperimentConfig {
  BanditInstance instance = BernoulliBandit({0.4, 0.8});
  Algorithm algorithm = Algorithm::double_sampling;
  std::size_t horizon = 1500;
  std::size_t realizations = 500;
  std::uint64_t seed = 1;
  PolicyConfig policy;
  RegretMode regret_mode = RegretMode::pseudo;
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
  unsigned threads = 0;  // 0 -> hardware concurrency

  void validate() const {
    if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
    if (realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
    if (!(prior_alpha > 0.0) || !(prior_beta > 0.0)) {
      throw std::invalid_argument("config: prior parameters must be > 0");
    }
    policy.validate();
  }
};

/// Per-step record of one episode. The diagnostic fields are filled for
/// double sampling only.
struct RegretTrace {
  std::vector<ArmIndex> arms;
  std::vector<double> rewards;
  std::vector<double> optimal_mean;   // mu*_t
  std::vector<double> step_regret;
  std::vector<double> cum_regret;
  std::vector<std::size_t> n_candidates;
  std::vector<double> p_fa;
  Eigen::ArrayXXd p_hat;      // T x A
  Eigen::ArrayXXd sigma_hat;  // T x A

  std::size_t length() const { return arms.size(); }
};

namespace detail {

// Stream-domain tags; environment draws share a domain across algorithms so
// compared runs see identical rewards (common random numbers), while each
// policy owns its own stream.
inline constexpr std::uint64_t kEnvDomain = 0x656e7669726f6eull;
inline constexpr std::uint64_t kPolicyDomain = 0x706f6c696379ull;
inline constexpr std::uint64_t kSweepDomain = 0x7377656570ull;

inline std::uint64_t algorithm_tag(Algorithm algo) {
  return static_cast<std::uint64_t>(algo) + 1;
}

}  // namespace detail

/// Runs one episode. Fully deterministic in (config, realization): the
/// policy stream is keyed by (seed, realization, algorithm) and each step's
/// environment draws by (seed, realization, t) only, so different policies
/// compared under one seed face the same contexts and reward noise.
inline RegretTrace run_episode(const ExperimentConfig& cfg, std::uint64_t realization) {
  cfg.validate();
  const auto& instance = cfg.instance;
  const std::size_t arms = num_arms(instance);
  const bool contextual = is_contextual(instance);
  const Eigen::Index dim = context_dim(instance);
  const std::size_t horizon = cfg.horizon;

  PosteriorState post =
      contextual
          ? PosteriorState(NIGPosterior::prior(arms, dim, cfg.prior_alpha, cfg.prior_beta))
          : PosteriorState(BetaPosterior::prior(arms, cfg.prior_alpha, cfg.prior_beta));

  rng::RngStream policy_rng(
      cfg.seed,
      rng::derive_seed(detail::kPolicyDomain, realization, detail::algorithm_tag(cfg.algorithm)));

  const bool diagnostics = cfg.algorithm == Algorithm::double_sampling;
  RegretTrace trace;
  trace.arms.reserve(horizon);
  trace.rewards.reserve(horizon);
  trace.optimal_mean.reserve(horizon);
  trace.step_regret.reserve(horizon);
  trace.cum_regret.reserve(horizon);
  if (diagnostics) {
    trace.n_candidates.reserve(horizon);
    trace.p_fa.reserve(horizon);
    trace.p_hat.resize(static_cast<Eigen::Index>(horizon), static_cast<Eigen::Index>(arms));
    trace.sigma_hat.resize(static_cast<Eigen::Index>(horizon), static_cast<Eigen::Index>(arms));
  }

  double cumulative = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    rng::SplitMix64 env(rng::derive_seed(cfg.seed, detail::kEnvDomain, realization, t));
    std::optional<Context> context;
    if (contextual) context = generate_context(dim, env);

    ArmIndex played = 0;
    try {
      switch (cfg.algorithm) {
        case Algorithm::double_sampling: {
          auto decision = double_sampling_select(post, context, cfg.policy, policy_rng);
          played = decision.chosen;
          trace.n_candidates.push_back(decision.n_candidates);
          trace.p_fa.push_back(decision.p_fa);
          for (std::size_t a = 0; a < arms; ++a) {
            trace.p_hat(static_cast<Eigen::Index>(t - 1), static_cast<Eigen::Index>(a)) =
                decision.estimate.p_hat[a];
            trace.sigma_hat(static_cast<Eigen::Index>(t - 1), static_cast<Eigen::Index>(a)) =
                decision.estimate.sigma_hat[a];
          }
          break;
        }
        case Algorithm::thompson:
          played = thompson_select(post, context, policy_rng);
          break;
        case Algorithm::bayes_ucb:
          played = bayes_ucb_select(post, t, context);
          break;
      }

      const double reward = draw_reward(instance, played, context, env);
      const double mu_star = expected_reward(instance, optimal_arm(instance, context), context);
      const double increment = cfg.regret_mode == RegretMode::pseudo
                                   ? mu_star - expected_reward(instance, played, context)
                                   : mu_star - reward;

      if (contextual) {
        post = nig_sequential_update(std::move(std::get<NIGPosterior>(post)), played, *context,
                                     reward);
      } else {
        post = beta_sequential_update(std::move(std::get<BetaPosterior>(post)), played, reward);
      }

      cumulative += increment;
      trace.arms.push_back(played);
      trace.rewards.push_back(reward);
      trace.optimal_mean.push_back(mu_star);
      trace.step_regret.push_back(increment);
      trace.cum_regret.push_back(cumulative);
    } catch (const numerical_error& err) {
      throw numerical_error("realization " + std::to_string(realization) + ", step " +
                            std::to_string(t) + ": " + err.what());
    }
  }
  return trace;
}

/// Pointwise mean and population standard deviation of cumulative regret.
struct AggregateCurve {
  std::vector<double> mean;
  std::vector<double> stddev;
};

inline AggregateCurve aggregate(const std::vector<RegretTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  const std::size_t horizon = traces.front().length();
  for (const auto& trace : traces) {
    if (trace.length() != horizon) throw std::invalid_argument("aggregate: mismatched lengths");
  }
  AggregateCurve curve;
  curve.mean.assign(horizon, 0.0);
  curve.stddev.assign(horizon, 0.0);
  const double r = static_cast<double>(traces.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    double sum = 0.0;
    for (const auto& trace : traces) sum += trace.cum_regret[t];
    const double mean = sum / r;
    double sq = 0.0;
    for (const auto& trace : traces) {
      const double d = trace.cum_regret[t] - mean;
      sq += d * d;
    }
    curve.mean[t] = mean;
    curve.stddev[t] = std::sqrt(sq / r);
  }
  return curve;
}

/// Delta = r_ds / r_other - 1; undefined when the reference regret is not
/// positive (flagged, never silently dropped).
inline std::optional<double> relative_regret_diff(double r_ds, double r_other) {
  if (!(r_other > 0.0)) return std::nullopt;
  return r_ds / r_other - 1.0;
}

namespace detail {

inline double bernoulli_kl(double p, double q) {
  if (p == q) return 0.0;
  if (q <= 0.0 || q >= 1.0) return std::numeric_limits<double>::infinity();
  double kl = 0.0;
  if (p > 0.0) kl += p * std::log(p / q);
  if (p < 1.0) kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return kl;
}

}  // namespace detail

/// Problem difficulty index: the minimum KL divergence from a suboptimal
/// arm's reward distribution to the optimal arm's. For contextual
/// Gaussian arms the conditional KL is averaged over the uniform context in
/// closed form via E[x x^T] = I/12 + J/4, with the optimal arm taken as the
/// one with the largest context-averaged expected reward.
inline double min_kl(const BanditInstance& instance) {
  if (const auto* b = std::get_if<BernoulliBandit>(&instance)) {
    const ArmIndex star = optimal_arm(instance);
    double best = std::numeric_limits<double>::infinity();
    for (ArmIndex a = 0; a < b->num_arms(); ++a) {
      if (a == star) continue;
      best = std::min(best, detail::bernoulli_kl(b->success_prob(a), b->success_prob(star)));
    }
    return best;
  }

  const auto& g = std::get<LinearGaussianBandit>(instance);
  const Eigen::Index d = g.context_dim();
  ArmIndex star = 0;
  double best_mean = g.weights(0).sum();
  for (ArmIndex a = 1; a < g.num_arms(); ++a) {
    const double mean = g.weights(a).sum();
    if (mean > best_mean) {
      best_mean = mean;
      star = a;
    }
  }
  const Eigen::MatrixXd second_moment = Eigen::MatrixXd::Identity(d, d) / 12.0 +
                                        Eigen::MatrixXd::Ones(d, d) / 4.0;
  double best = std::numeric_limits<double>::infinity();
  const double sigma_star = g.noise_std(star);
  for (ArmIndex a = 0; a < g.num_arms(); ++a) {
    if (a == star) continue;
    const Eigen::VectorXd delta = g.weights(a) - g.weights(star);
    const double gap2 = delta.dot(second_moment * delta);
    const double sigma_a = g.noise_std(a);
    const double kl = std::log(sigma_star / sigma_a) +
                      (sigma_a * sigma_a + gap2) / (2.0 * sigma_star * sigma_star) - 0.5;
    best = std::min(best, kl);
  }
  return best;
}

/// Deterministic work-sharing loop. Results must be written to per-index
/// slots; the schedule never affects the output.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw > 0 ? hw : 1;
  }
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Runs all realizations of one configuration; traces come back indexed by
/// realization, independent of scheduling.
inline std::vector<RegretTrace> run_experiment(const ExperimentConfig& cfg,
                                               std::uint64_t realization_base = 0,
                                               bool derived_ids = false) {
  cfg.validate();
  std::vector<RegretTrace> traces(cfg.realizations);
  parallel_for(cfg.realizations, cfg.threads, [&](std::size_t r) {
    const std::uint64_t id = derived_ids
                                 ? rng::derive_seed(detail::kSweepDomain, realization_base, r)
                                 : realization_base + r;
    traces[r] = run_episode(cfg, id);
  });
  return traces;
}

/// Parameter grid for the sweep benchmark. Bernoulli points enumerate all
/// per-arm assignments from theta_values; Gaussian points enumerate per-arm
/// (weight vector, sigma) combinations from the per-coordinate weight grid
/// and the sigma grid.
struct GridSpec {
  bool gaussian = false;
  std::size_t arms = 2;
  std::vector<double> theta_values;
  std::vector<double> weight_values;
  std::vector<double> sigma_values;
  Eigen::Index dim = 2;
  std::size_t eval_t = 0;  // 0 -> horizon

  void validate() const {
    if (arms < 2) throw std::invalid_argument("grid: need at least 2 arms");
    if (gaussian) {
      if (weight_values.empty() || sigma_values.empty()) {
        throw std::invalid_argument("grid: empty gaussian grid");
      }
      if (dim < 1) throw std::invalid_argument("grid: context dimension must be >= 1");
      for (double s : sigma_values) {
        if (!(s > 0.0)) throw std::invalid_argument("grid: sigma grid values must be > 0");
      }
    } else if (theta_values.empty()) {
      throw std::invalid_argument("grid: empty theta grid");
    }
  }

  std::size_t per_arm_options() const {
    if (!gaussian) return theta_values.size();
    std::size_t w = 1;
    for (Eigen::Index i = 0; i < dim; ++i) w *= weight_values.size();
    return w * sigma_values.size();
  }

  std::size_t num_points() const {
    std::size_t n = 1;
    for (std::size_t a = 0; a < arms; ++a) n *= per_arm_options();
    return n;
  }

  std::vector<std::string> param_names() const {
    std::vector<std::string> names;
    for (std::size_t a = 0; a < arms; ++a) {
      if (!gaussian) {
        names.push_back("theta" + std::to_string(a));
      } else {
        for (Eigen::Index i = 0; i < dim; ++i) {
          names.push_back("w" + std::to_string(a) + "_" + std::to_string(i));
        }
        names.push_back("sigma" + std::to_string(a));
      }
    }
    return names;
  }

  /// Decodes grid point `index` (mixed-radix, arm 0 slowest) into an
  /// instance plus the flat parameter vector in param_names() order.
  std::pair<BanditInstance, std::vector<double>> point(std::size_t index) const {
    const std::size_t options = per_arm_options();
    std::vector<std::size_t> arm_code(arms);
    for (std::size_t a = arms; a-- > 0;) {
      arm_code[a] = index % options;
      index /= options;
    }
    std::vector<double> params;
    if (!gaussian) {
      std::vector<double> theta(arms);
      for (std::size_t a = 0; a < arms; ++a) {
        theta[a] = theta_values[arm_code[a]];
        params.push_back(theta[a]);
      }
      return {BernoulliBandit(theta), params};
    }
    std::vector<Eigen::VectorXd> weights(arms);
    std::vector<double> sigmas(arms);
    for (std::size_t a = 0; a < arms; ++a) {
      std::size_t code = arm_code[a];
      sigmas[a] = sigma_values[code % sigma_values.size()];
      code /= sigma_values.size();
      Eigen::VectorXd w(dim);
      for (Eigen::Index i = dim; i-- > 0;) {
        w[i] = weight_values[code % weight_values.size()];
        code /= weight_values.size();
      }
      weights[a] = w;
      for (Eigen::Index i = 0; i < dim; ++i) params.push_back(w[i]);
      params.push_back(sigmas[a]);
    }
    return {LinearGaussianBandit(weights, sigmas), params};
  }
};

struct SweepRow {
  std::size_t point_index = 0;
  std::vector<double> params;
  double kl = 0.0;
  std::optional<double> delta_ts;
  std::optional<double> delta_bucb;
  double regret_ds = 0.0;
  double regret_ts = 0.0;
  double regret_bucb = 0.0;
};

struct SweepResult {
  std::vector<std::string> param_names;
  std::vector<SweepRow> rows;  // sorted by kl ascending
};

/// Runs the three algorithms over every grid point with matched seeds and
/// reports relative regret differences at eval_t, indexed by min-KL.
inline SweepResult run_sweep(const GridSpec& grid, const ExperimentConfig& base) {
  grid.validate();
  base.validate();
  const std::size_t eval_t = grid.eval_t == 0 ? base.horizon : grid.eval_t;
  if (eval_t < 1 || eval_t > base.horizon) {
    throw std::invalid_argument("sweep: eval_t must lie in [1, horizon]");
  }

  SweepResult result;
  result.param_names = grid.param_names();
  result.rows.reserve(grid.num_points());

  for (std::size_t index = 0; index < grid.num_points(); ++index) {
    auto [instance, params] = grid.point(index);
    SweepRow row;
    row.point_index = index;
    row.params = std::move(params);
    row.kl = min_kl(instance);

    double regret[3] = {0.0, 0.0, 0.0};
    for (const auto algo : kAllAlgorithms) {
      ExperimentConfig cfg = base;
      cfg.instance = instance;
      cfg.algorithm = algo;
      const auto traces = run_experiment(cfg, index, /*derived_ids=*/true);
      double sum = 0.0;
      for (const auto& trace : traces) sum += trace.cum_regret[eval_t - 1];
      regret[static_cast<std::size_t>(algo)] = sum / static_cast<double>(traces.size());
    }
    row.regret_ds = regret[static_cast<std::size_t>(Algorithm::double_sampling)];
    row.regret_ts = regret[static_cast<std::size_t>(Algorithm::thompson)];
    row.regret_bucb = regret[static_cast<std::size_t>(Algorithm::bayes_ucb)];
    row.delta_ts = relative_regret_diff(row.regret_ds, row.regret_ts);
    row.delta_bucb = relative_regret_diff(row.regret_ds, row.regret_bucb);
    result.rows.push_back(std::move(row));
  }

  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.kl < b.kl; });
  return result;
}

}  // namespace bandit
