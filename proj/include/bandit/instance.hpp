#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bandit/rng.hpp"

namespace bandit {

using ArmIndex = std::size_t;
using Context = Eigen::VectorXd;

/// Ground-truth Bernoulli bandit: arm a rewards 1 with probability theta[a].
class BernoulliBandit {
 public:
  explicit BernoulliBandit(std::vector<double> theta) : theta_(std::move(theta)) {
    if (theta_.size() < 2) throw std::invalid_argument("bernoulli bandit: need at least 2 arms");
    for (std::size_t a = 0; a < theta_.size(); ++a) {
      if (!(theta_[a] >= 0.0 && theta_[a] <= 1.0)) {
        throw std::invalid_argument("bernoulli bandit: theta[" + std::to_string(a) +
                                    "] outside [0,1]");
      }
    }
  }

  std::size_t num_arms() const { return theta_.size(); }
  double success_prob(ArmIndex a) const { return theta_.at(a); }
  const std::vector<double>& theta() const { return theta_; }

 private:
  std::vector<double> theta_;
};

/// Ground-truth contextual bandit: arm a rewards N(x . w_a, sigma_a^2).
class LinearGaussianBandit {
 public:
  LinearGaussianBandit(std::vector<Eigen::VectorXd> weights, std::vector<double> noise_std)
      : weights_(std::move(weights)), noise_std_(std::move(noise_std)) {
    if (weights_.size() < 2) throw std::invalid_argument("gaussian bandit: need at least 2 arms");
    if (noise_std_.size() != weights_.size()) {
      throw std::invalid_argument("gaussian bandit: one noise std per arm required");
    }
    const Eigen::Index d = weights_.front().size();
    if (d < 1) throw std::invalid_argument("gaussian bandit: context dimension must be >= 1");
    for (std::size_t a = 0; a < weights_.size(); ++a) {
      if (weights_[a].size() != d) {
        throw std::invalid_argument("gaussian bandit: weight vectors must share one dimension");
      }
      if (!(noise_std_[a] > 0.0)) {
        throw std::invalid_argument("gaussian bandit: noise std must be > 0 for arm " +
                                    std::to_string(a));
      }
    }
  }

  std::size_t num_arms() const { return weights_.size(); }
  Eigen::Index context_dim() const { return weights_.front().size(); }
  const Eigen::VectorXd& weights(ArmIndex a) const { return weights_.at(a); }
  double noise_std(ArmIndex a) const { return noise_std_.at(a); }

 private:
  std::vector<Eigen::VectorXd> weights_;
  std::vector<double> noise_std_;
};

using BanditInstance = std::variant<BernoulliBandit, LinearGaussianBandit>;

inline std::size_t num_arms(const BanditInstance& instance) {
  return std::visit([](const auto& b) { return b.num_arms(); }, instance);
}

inline bool is_contextual(const BanditInstance& instance) {
  return std::holds_alternative<LinearGaussianBandit>(instance);
}

/// Context dimension; 0 for non-contextual instances.
inline Eigen::Index context_dim(const BanditInstance& instance) {
  if (const auto* g = std::get_if<LinearGaussianBandit>(&instance)) return g->context_dim();
  return 0;
}

namespace detail {

inline void check_arm(const BanditInstance& instance, ArmIndex arm) {
  if (arm >= num_arms(instance)) throw std::invalid_argument("arm index out of range");
}

inline const Context& require_context(const LinearGaussianBandit& bandit,
                                      const std::optional<Context>& context) {
  if (!context) throw std::invalid_argument("contextual instance requires a context");
  if (context->size() != bandit.context_dim()) {
    throw std::invalid_argument("context dimension mismatch");
  }
  return *context;
}

}  // namespace detail

/// mu_a: theta_a for Bernoulli arms, x . w_a for linear-Gaussian arms.
inline double expected_reward(const BanditInstance& instance, ArmIndex arm,
                              const std::optional<Context>& context = std::nullopt) {
  detail::check_arm(instance, arm);
  if (const auto* b = std::get_if<BernoulliBandit>(&instance)) {
    if (context && context->size() != 0) {
      throw std::invalid_argument("bernoulli instance takes no context");
    }
    return b->success_prob(arm);
  }
  const auto& g = std::get<LinearGaussianBandit>(instance);
  return detail::require_context(g, context).dot(g.weights(arm));
}

/// Ground-truth argmax of expected reward; ties resolve to the lowest index
/// so regret is deterministic.
inline ArmIndex optimal_arm(const BanditInstance& instance,
                            const std::optional<Context>& context = std::nullopt) {
  ArmIndex best = 0;
  double best_value = expected_reward(instance, 0, context);
  for (ArmIndex a = 1; a < num_arms(instance); ++a) {
    const double value = expected_reward(instance, a, context);
    if (value > best_value) {
      best_value = value;
      best = a;
    }
  }
  return best;
}

template <class G>
double draw_reward(const BanditInstance& instance, ArmIndex arm,
                   const std::optional<Context>& context, G& gen) {
  detail::check_arm(instance, arm);
  if (const auto* b = std::get_if<BernoulliBandit>(&instance)) {
    if (context && context->size() != 0) {
      throw std::invalid_argument("bernoulli instance takes no context");
    }
    return rng::uniform01(gen) < b->success_prob(arm) ? 1.0 : 0.0;
  }
  const auto& g = std::get<LinearGaussianBandit>(instance);
  const Context& x = detail::require_context(g, context);
  return x.dot(g.weights(arm)) + g.noise_std(arm) * rng::normal(gen);
}

/// i.i.d. U(0,1) context of dimension d.
template <class G>
Context generate_context(Eigen::Index d, G& gen) {
  if (d < 1) throw std::invalid_argument("context dimension must be >= 1");
  Context x(d);
  for (Eigen::Index i = 0; i < d; ++i) x[i] = rng::uniform01(gen);
  return x;
}

}  // namespace bandit
