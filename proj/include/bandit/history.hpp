#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bandit/instance.hpp"

namespace bandit {

/// Append-only interaction log: aligned sequences of played arms, observed
/// rewards, and (for contextual runs) the context presented at each step.
class History {
 public:
  void record(ArmIndex arm, double reward) { record(arm, Context(), reward); }

  /// An empty context marks a non-contextual step; a run mixes the two
  /// styles or context dimensions never.
  void record(ArmIndex arm, const Context& context, double reward) {
    if (!arms_.empty()) {
      const bool have = contexts_.front().size() != 0;
      if (have != (context.size() != 0)) {
        throw std::invalid_argument("history: all steps must agree on context presence");
      }
      if (have && context.size() != contexts_.front().size()) {
        throw std::invalid_argument("history: context dimension mismatch");
      }
    }
    arms_.push_back(arm);
    contexts_.push_back(context);
    rewards_.push_back(reward);
  }

  std::size_t size() const { return arms_.size(); }
  bool contextual() const { return !contexts_.empty() && contexts_.front().size() != 0; }

  const std::vector<ArmIndex>& arms() const { return arms_; }
  const std::vector<Context>& contexts() const { return contexts_; }
  const std::vector<double>& rewards() const { return rewards_; }

  /// t_a: the 0-based step indices at which arm a was played.
  std::vector<std::size_t> times_of(ArmIndex arm) const {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < arms_.size(); ++t) {
      if (arms_[t] == arm) out.push_back(t);
    }
    return out;
  }

 private:
  std::vector<ArmIndex> arms_;
  std::vector<Context> contexts_;
  std::vector<double> rewards_;
};

}  // namespace bandit
