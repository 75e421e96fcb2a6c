#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bandit/error.hpp"
#include "bandit/history.hpp"
#include "bandit/instance.hpp"
#include "bandit/rng.hpp"

namespace bandit {

/// Per-arm Beta(alpha, beta) posterior for Bernoulli rewards.
struct BetaPosterior {
  std::vector<double> alpha;
  std::vector<double> beta;

  static BetaPosterior prior(std::size_t arms, double alpha0 = 1.0, double beta0 = 1.0) {
    if (arms < 2) throw std::invalid_argument("beta posterior: need at least 2 arms");
    if (!(alpha0 > 0.0) || !(beta0 > 0.0)) {
      throw std::invalid_argument("beta posterior: prior parameters must be > 0");
    }
    return {std::vector<double>(arms, alpha0), std::vector<double>(arms, beta0)};
  }

  std::size_t num_arms() const { return alpha.size(); }
};

namespace detail {

inline void check_binary_reward(double y) {
  if (y != 0.0 && y != 1.0) {
    throw std::invalid_argument("beta update: reward must be 0 or 1");
  }
}

}  // namespace detail

/// alpha_a += y, beta_a += 1 - y for the played arm only.
inline BetaPosterior beta_sequential_update(BetaPosterior post, ArmIndex arm, double reward) {
  detail::check_binary_reward(reward);
  if (arm >= post.num_arms()) throw std::invalid_argument("beta update: arm out of range");
  post.alpha[arm] += reward;
  post.beta[arm] += 1.0 - reward;
  return post;
}

/// alpha_a = alpha_{a,0} + sum of that arm's rewards, beta_a likewise for
/// failures. Identical to folding the sequential update over the history.
inline BetaPosterior beta_batch_update(BetaPosterior prior, const History& history) {
  for (std::size_t t = 0; t < history.size(); ++t) {
    const double y = history.rewards()[t];
    detail::check_binary_reward(y);
    const ArmIndex a = history.arms()[t];
    if (a >= prior.num_arms()) throw std::invalid_argument("beta update: arm out of range");
    prior.alpha[a] += y;
    prior.beta[a] += 1.0 - y;
  }
  return prior;
}

/// Per-arm Normal-Inverse-Gamma posterior for linear-Gaussian rewards,
/// kept in precision form: the updates are additive in V^{-1} and the
/// factorization is reused for solves and sampling. V is materialized on
/// demand only.
class NIGPosterior {
 public:
  struct ArmState {
    Eigen::VectorXd mean;        // u_a
    Eigen::MatrixXd precision;   // V_a^{-1}
    double alpha = 1.0;
    double beta = 1.0;
    Eigen::LLT<Eigen::MatrixXd> chol;  // factorization of the precision

    void refactor(const std::string& where) {
      chol.compute(precision);
      if (chol.info() != Eigen::Success) {
        throw numerical_error("nig posterior: precision not positive definite (" + where + ")");
      }
    }
  };

  static NIGPosterior prior(std::size_t arms, Eigen::Index dim, double alpha0 = 1.0,
                            double beta0 = 1.0) {
    if (arms < 2) throw std::invalid_argument("nig posterior: need at least 2 arms");
    if (dim < 1) throw std::invalid_argument("nig posterior: dimension must be >= 1");
    if (!(alpha0 > 0.0) || !(beta0 > 0.0)) {
      throw std::invalid_argument("nig posterior: prior parameters must be > 0");
    }
    NIGPosterior post;
    post.dim_ = dim;
    post.arms_.resize(arms);
    for (auto& arm : post.arms_) {
      arm.mean = Eigen::VectorXd::Zero(dim);
      arm.precision = Eigen::MatrixXd::Identity(dim, dim);
      arm.alpha = alpha0;
      arm.beta = beta0;
      arm.refactor("prior");
    }
    return post;
  }

  std::size_t num_arms() const { return arms_.size(); }
  Eigen::Index dim() const { return dim_; }
  const ArmState& arm(ArmIndex a) const { return arms_.at(a); }
  ArmState& arm(ArmIndex a) { return arms_.at(a); }

  /// V_a, materialized from the stored factorization.
  Eigen::MatrixXd covariance(ArmIndex a) const {
    return arms_.at(a).chol.solve(Eigen::MatrixXd::Identity(dim_, dim_));
  }

 private:
  std::vector<ArmState> arms_;
  Eigen::Index dim_ = 0;
};

/// Rank-one conjugate update of the played arm:
///   V^{-1} += x x^T
///   u      = V_new (V^{-1}_old u_old + x y)
///   alpha += 1/2
///   beta  += (y - x . u_old)^2 / (2 (1 + x . V_old x))
inline NIGPosterior nig_sequential_update(NIGPosterior post, ArmIndex arm, const Context& x,
                                          double reward) {
  if (arm >= post.num_arms()) throw std::invalid_argument("nig update: arm out of range");
  if (x.size() != post.dim()) throw std::invalid_argument("nig update: context dimension mismatch");

  auto& state = post.arm(arm);
  const double residual = reward - x.dot(state.mean);
  const double leverage = x.dot(state.chol.solve(x));  // x . V_old x
  const Eigen::VectorXd information = state.precision * state.mean + x * reward;

  state.precision.noalias() += x * x.transpose();
  state.refactor("sequential update");
  state.mean = state.chol.solve(information);
  state.alpha += 0.5;
  state.beta += residual * residual / (2.0 * (1.0 + leverage));
  if (!(state.beta > 0.0) || !std::isfinite(state.beta)) {
    throw numerical_error("nig posterior: beta became non-positive or non-finite");
  }
  return post;
}

/// Batch form over each arm's observation set t_a:
///   V^{-1}_t = V^{-1}_0 + X X^T,  u_t = V_t (V^{-1}_0 u_0 + X y)
///   alpha_t = alpha_0 + |t_a| / 2
///   beta_t  = beta_0 + (y.y + u_0 . V^{-1}_0 u_0 - u_t . V^{-1}_t u_t) / 2
inline NIGPosterior nig_batch_update(NIGPosterior prior, const History& history) {
  if (history.size() == 0) return prior;
  if (!history.contextual()) {
    throw std::invalid_argument("nig batch update: history has no contexts");
  }
  for (ArmIndex a = 0; a < prior.num_arms(); ++a) {
    const auto times = history.times_of(a);
    if (times.empty()) continue;
    auto& state = prior.arm(a);

    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(prior.dim(), prior.dim());
    Eigen::VectorXd xy = Eigen::VectorXd::Zero(prior.dim());
    double yy = 0.0;
    for (const auto t : times) {
      const Context& x = history.contexts()[t];
      if (x.size() != prior.dim()) {
        throw std::invalid_argument("nig batch update: context dimension mismatch");
      }
      const double y = history.rewards()[t];
      scatter.noalias() += x * x.transpose();
      xy.noalias() += x * y;
      yy += y * y;
    }

    const double prior_quad = state.mean.dot(state.precision * state.mean);
    const Eigen::VectorXd information = state.precision * state.mean + xy;

    state.precision += scatter;
    state.refactor("batch update");
    state.mean = state.chol.solve(information);
    const double post_quad = state.mean.dot(state.precision * state.mean);

    state.alpha += 0.5 * static_cast<double>(times.size());
    state.beta += 0.5 * (yy + prior_quad - post_quad);
    if (!(state.beta > 0.0) || !std::isfinite(state.beta)) {
      throw numerical_error("nig posterior: beta became non-positive or non-finite");
    }
  }
  return prior;
}

using PosteriorState = std::variant<BetaPosterior, NIGPosterior>;

inline std::size_t num_arms(const PosteriorState& post) {
  return std::visit([](const auto& p) { return p.num_arms(); }, post);
}

/// M joint draws from a Beta posterior; theta(m, a) is arm a's success
/// probability in sample m.
struct BetaSamples {
  Eigen::ArrayXXd theta;  // M x A

  std::size_t count() const { return static_cast<std::size_t>(theta.rows()); }
  std::size_t arms() const { return static_cast<std::size_t>(theta.cols()); }
};

/// M joint draws from an NIG posterior; per arm, row m of weights[a] is
/// w_a^{(m)} and sigma2(m, a) the matching noise variance.
struct NIGSamples {
  std::vector<Eigen::MatrixXd> weights;  // per arm: M x d
  Eigen::ArrayXXd sigma2;                // M x A

  std::size_t count() const { return static_cast<std::size_t>(sigma2.rows()); }
  std::size_t arms() const { return weights.size(); }
};

using ParameterSamples = std::variant<BetaSamples, NIGSamples>;

inline std::size_t sample_count(const ParameterSamples& samples) {
  return std::visit([](const auto& s) { return s.count(); }, samples);
}

inline std::size_t sample_arms(const ParameterSamples& samples) {
  return std::visit([](const auto& s) { return s.arms(); }, samples);
}

/// Draw M parameter samples from the posterior. Beta arms are sampled as a
/// ratio of gamma draws; NIG arms draw sigma^2 from the inverse gamma and
/// then w = u + sigma L^{-T} z through the stored precision factorization.
template <class G>
ParameterSamples sample_posterior(const PosteriorState& post, std::size_t m_samples, G& gen) {
  if (m_samples < 1) throw std::invalid_argument("sample_posterior: need at least one sample");

  if (const auto* bp = std::get_if<BetaPosterior>(&post)) {
    const std::size_t arms = bp->num_arms();
    BetaSamples out;
    out.theta.resize(static_cast<Eigen::Index>(m_samples), static_cast<Eigen::Index>(arms));
    for (std::size_t a = 0; a < arms; ++a) {
      const double alpha = bp->alpha[a];
      const double beta = bp->beta[a];
      for (std::size_t m = 0; m < m_samples; ++m) {
        out.theta(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(a)) =
            rng::beta_draw(gen, alpha, beta);
      }
    }
    return out;
  }

  const auto& np = std::get<NIGPosterior>(post);
  const std::size_t arms = np.num_arms();
  const Eigen::Index d = np.dim();
  NIGSamples out;
  out.sigma2.resize(static_cast<Eigen::Index>(m_samples), static_cast<Eigen::Index>(arms));
  out.weights.reserve(arms);
  Eigen::VectorXd z(d);
  for (std::size_t a = 0; a < arms; ++a) {
    const auto& state = np.arm(a);
    Eigen::MatrixXd w(static_cast<Eigen::Index>(m_samples), d);
    const auto upper = state.chol.matrixU();
    for (std::size_t m = 0; m < m_samples; ++m) {
      const double sigma2 = state.beta / rng::gamma_draw(gen, state.alpha);
      out.sigma2(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(a)) = sigma2;
      for (Eigen::Index i = 0; i < d; ++i) z[i] = rng::normal(gen);
      // Cov(L^{-T} z) = (L L^T)^{-1} = V, so u + sigma L^{-T} z ~ N(u, sigma^2 V).
      w.row(static_cast<Eigen::Index>(m)) =
          (state.mean + std::sqrt(sigma2) * upper.solve(z)).transpose();
    }
    out.weights.push_back(std::move(w));
  }
  return out;
}

}  // namespace bandit
