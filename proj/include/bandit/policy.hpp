#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "bandit/conjugate.hpp"
#include "bandit/instance.hpp"
#include "bandit/numerics.hpp"
#include "bandit/rng.hpp"

namespace bandit {

/// Knobs of the double-sampling policy. The candidate-count rule is
/// N = clamp(ceil(n_scale * ln(1 / max(p_fa, p_fa_floor))), 1, n_max);
/// the floor defaults to 1/mc_samples (the estimator's resolution) and the
/// cap to mc_samples. Ties are always broken uniformly at random.
struct PolicyConfig {
  std::size_t mc_samples = 1000;
  double n_scale = 1.0;
  double p_fa_floor = 0.0;   // 0 -> 1 / mc_samples
  std::size_t n_max = 0;     // 0 -> mc_samples

  double resolved_floor() const {
    return p_fa_floor > 0.0 ? p_fa_floor : 1.0 / static_cast<double>(mc_samples);
  }
  std::size_t resolved_n_max() const { return n_max > 0 ? n_max : mc_samples; }

  void validate() const {
    if (mc_samples < 1) throw std::invalid_argument("policy config: mc_samples must be >= 1");
    if (!(n_scale > 0.0)) throw std::invalid_argument("policy config: n_scale must be > 0");
    const double floor = resolved_floor();
    if (!(floor > 0.0 && floor < 1.0)) {
      throw std::invalid_argument("policy config: p_fa_floor must lie in (0,1)");
    }
  }
};

/// Monte-Carlo estimate of each arm's probability of being optimal.
/// sigma_hat is the per-sample indicator standard deviation, so
/// sigma_hat^2 == p_hat (1 - p_hat) holds by construction.
struct OptimalityEstimate {
  std::vector<double> p_hat;
  std::vector<double> sigma_hat;
  ArmIndex best_arm = 0;
  double best_prob = 0.0;
  std::size_t sample_count = 0;
};

/// One double-sampling decision with its diagnostics.
struct PolicyDecision {
  ArmIndex chosen = 0;
  std::size_t n_candidates = 1;
  double p_fa = 1.0;
  std::vector<double> per_arm_p_fa;
  OptimalityEstimate estimate;
};

namespace detail {

/// argmax with uniformly random tie-breaking (single pass, reservoir rule).
template <class G>
ArmIndex argmax_random_ties(const std::vector<double>& values, G& gen) {
  ArmIndex winner = 0;
  double best = values[0];
  std::size_t ties = 1;
  for (ArmIndex a = 1; a < values.size(); ++a) {
    if (values[a] > best) {
      best = values[a];
      winner = a;
      ties = 1;
    } else if (values[a] == best) {
      ++ties;
      if (rng::uniform_index(gen, ties) == 0) winner = a;
    }
  }
  return winner;
}

inline void mean_rewards_for_sample(const BetaSamples& samples, std::size_t m,
                                    const std::optional<Context>&, std::vector<double>& mu) {
  for (std::size_t a = 0; a < samples.arms(); ++a) {
    mu[a] = samples.theta(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(a));
  }
}

}  // namespace detail

/// Per-sample winners of argmax_a mu_a(theta^(m)) reduced to the first- and
/// second-order statistics p_hat and sigma_hat, plus the leading arm. For
/// contextual samples mu is evaluated at the step's context.
template <class G>
OptimalityEstimate estimate_optimality(const ParameterSamples& samples,
                                       const std::optional<Context>& context, G& gen) {
  const std::size_t m_count = sample_count(samples);
  const std::size_t arms = sample_arms(samples);
  if (m_count == 0) throw std::invalid_argument("estimate_optimality: empty sample set");

  std::vector<double> wins(arms, 0.0);
  std::vector<double> mu(arms);

  if (const auto* ns = std::get_if<NIGSamples>(&samples)) {
    if (!context) throw std::invalid_argument("estimate_optimality: contextual samples need a context");
    // mu(m, a) = w_a^(m) . x, batched per arm.
    Eigen::MatrixXd mus(static_cast<Eigen::Index>(m_count), static_cast<Eigen::Index>(arms));
    for (std::size_t a = 0; a < arms; ++a) {
      if (ns->weights[a].cols() != context->size()) {
        throw std::invalid_argument("estimate_optimality: context dimension mismatch");
      }
      mus.col(static_cast<Eigen::Index>(a)) = ns->weights[a] * (*context);
    }
    for (std::size_t m = 0; m < m_count; ++m) {
      for (std::size_t a = 0; a < arms; ++a) {
        mu[a] = mus(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(a));
      }
      wins[detail::argmax_random_ties(mu, gen)] += 1.0;
    }
  } else {
    const auto& bs = std::get<BetaSamples>(samples);
    for (std::size_t m = 0; m < m_count; ++m) {
      detail::mean_rewards_for_sample(bs, m, context, mu);
      wins[detail::argmax_random_ties(mu, gen)] += 1.0;
    }
  }

  OptimalityEstimate est;
  est.sample_count = m_count;
  est.p_hat.resize(arms);
  est.sigma_hat.resize(arms);
  for (std::size_t a = 0; a < arms; ++a) {
    const double p = wins[a] / static_cast<double>(m_count);
    est.p_hat[a] = p;
    est.sigma_hat[a] = std::sqrt(p * (1.0 - p));
    if (p > est.best_prob || a == 0) {
      est.best_prob = p;
      est.best_arm = a;
    }
  }
  return est;
}

/// Probability that each arm's optimality probability exceeds the leader's,
/// under the truncated-Gaussian surrogate for the estimator distribution:
///   p_fa(a) = 1 - F(p_hat*; N(p_hat_a, sigma_hat_a^2) truncated to [0,1])
/// A zero sigma_hat is treated as a point mass. Returns the per-arm vector
/// and its mean over the A-1 non-leading arms.
inline std::pair<std::vector<double>, double> false_alarm_probs(const OptimalityEstimate& est) {
  const std::size_t arms = est.p_hat.size();
  if (arms < 2) throw std::invalid_argument("false_alarm_probs: need at least 2 arms");

  std::vector<double> per_arm(arms);
  double sum_others = 0.0;
  for (std::size_t a = 0; a < arms; ++a) {
    double p_fa;
    if (est.sigma_hat[a] == 0.0) {
      p_fa = est.p_hat[a] < est.best_prob ? 0.0 : 1.0;
    } else {
      const numerics::TruncatedGaussianSpec spec{est.p_hat[a], est.sigma_hat[a], 0.0, 1.0};
      p_fa = numerics::truncated_normal_sf(est.best_prob, spec);
    }
    per_arm[a] = p_fa;
    if (a != est.best_arm) sum_others += p_fa;
  }
  return {std::move(per_arm), sum_others / static_cast<double>(arms - 1)};
}

/// Candidate count N from the mean false-alarm probability.
inline std::size_t num_candidates(double p_fa, const PolicyConfig& cfg) {
  cfg.validate();
  const double clamped = std::max(std::min(p_fa, 1.0), cfg.resolved_floor());
  const double raw = std::ceil(cfg.n_scale * (-std::log(clamped)));
  const auto cap = cfg.resolved_n_max();
  if (!(raw > 1.0)) return 1;
  return raw >= static_cast<double>(cap) ? cap : static_cast<std::size_t>(raw);
}

/// The double-sampling step: M posterior draws feed the optimality
/// estimate, the false-alarm mean sets N, N candidate arms are drawn from
/// Categorical(p_hat), and the mode of the candidates is played.
template <class G>
PolicyDecision double_sampling_select(const PosteriorState& post,
                                      const std::optional<Context>& context,
                                      const PolicyConfig& cfg, G& gen) {
  cfg.validate();
  const auto samples = sample_posterior(post, cfg.mc_samples, gen);
  PolicyDecision decision;
  decision.estimate = estimate_optimality(samples, context, gen);
  auto [per_arm, p_fa] = false_alarm_probs(decision.estimate);
  decision.per_arm_p_fa = std::move(per_arm);
  decision.p_fa = p_fa;
  decision.n_candidates = num_candidates(p_fa, cfg);

  const auto& p_hat = decision.estimate.p_hat;
  std::vector<double> counts(p_hat.size(), 0.0);
  for (std::size_t n = 0; n < decision.n_candidates; ++n) {
    double u = rng::uniform01(gen);
    ArmIndex pick = p_hat.size() - 1;
    for (std::size_t a = 0; a < p_hat.size(); ++a) {
      u -= p_hat[a];
      if (u < 0.0) {
        pick = a;
        break;
      }
    }
    counts[pick] += 1.0;
  }
  decision.chosen = detail::argmax_random_ties(counts, gen);
  return decision;
}

/// Thompson sampling: a single posterior draw played greedily.
template <class G>
ArmIndex thompson_select(const PosteriorState& post, const std::optional<Context>& context,
                         G& gen) {
  const auto samples = sample_posterior(post, 1, gen);
  return estimate_optimality(samples, context, gen).best_arm;
}

/// Bayes-UCB: play the arm with the highest posterior quantile of its
/// expected reward at level 1 - 1/t. Beta quantile for Bernoulli arms;
/// for linear-Gaussian arms, x . w is Student-t with 2 alpha dof, location
/// x . u and scale sqrt(beta/alpha * x . V x). Deterministic; ties resolve
/// to the lowest index.
inline ArmIndex bayes_ucb_select(const PosteriorState& post, std::size_t t,
                                 const std::optional<Context>& context = std::nullopt) {
  if (t < 1) throw std::invalid_argument("bayes_ucb_select: t must be >= 1");
  constexpr double kMinQuantile = 1e-12;  // t = 1 would otherwise ask for quantile 0
  const double q =
      std::clamp(1.0 - 1.0 / static_cast<double>(t), kMinQuantile, 1.0 - kMinQuantile);

  const std::size_t arms = num_arms(post);
  ArmIndex best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < arms; ++a) {
    double index;
    if (const auto* bp = std::get_if<BetaPosterior>(&post)) {
      index = numerics::beta_quantile(q, bp->alpha[a], bp->beta[a]);
    } else {
      const auto& np = std::get<NIGPosterior>(post);
      if (!context) throw std::invalid_argument("bayes_ucb_select: contextual posterior needs a context");
      if (context->size() != np.dim()) {
        throw std::invalid_argument("bayes_ucb_select: context dimension mismatch");
      }
      const auto& state = np.arm(a);
      const double location = context->dot(state.mean);
      const double quad = context->dot(state.chol.solve(*context));  // x . V x
      const double scale2 = state.beta / state.alpha * quad;
      if (scale2 > 0.0) {
        index = numerics::student_t_quantile(q, 2.0 * state.alpha, location, std::sqrt(scale2));
      } else {
        index = location;  // zero context: the posterior of x . w is a point mass
      }
    }
    if (index > best_index) {
      best_index = index;
      best = a;
    }
  }
  return best;
}

}  // namespace bandit
