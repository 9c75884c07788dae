#pragma once

#include "falsify/rng.hpp"
#include "falsify/sut.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace falsify {

/// Per-dimension bounds of the optimizer's sample space.
class SearchSpace {
 public:
  /// Throws ValidationError for zero dimensions, non-finite bounds, or a
  /// dimension with lower >= upper.
  explicit SearchSpace(std::vector<Interval> bounds);

  std::size_t dimension() const noexcept { return bounds_.size(); }
  const std::vector<Interval>& bounds() const noexcept { return bounds_; }
  const Interval& operator[](std::size_t i) const { return bounds_[i]; }
  bool contains(std::span<const double> sample) const;

 private:
  std::vector<Interval> bounds_;
};

struct Evaluation {
  std::vector<double> sample;
  double robustness = 0.0;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

enum class Behavior {
  /// Stop at the first evaluation with negative robustness.
  Falsification,
  /// Spend the whole budget looking for the lowest robustness.
  Minimization,
};

using Objective = std::function<double(std::span<const double> sample)>;

struct OptimizeSettings {
  std::size_t budget = 100;
  Behavior behavior = Behavior::Falsification;
  std::uint64_t seed = 0;
};

struct OptimizationResult {
  /// Every objective call, in call order.
  std::vector<Evaluation> history;
  /// Lowest robustness in history, earliest on ties.
  Evaluation best;
};

/// Search engine. Engine-specific settings are given to the constructor and
/// validated there, before any objective call.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual std::string name() const = 0;
  OptimizationResult optimize(const Objective& objective, const SearchSpace& space,
                              const OptimizeSettings& settings) const;

 protected:
  class Session;
  virtual void search(Session& session, Rng& rng) const = 0;
};

/// Objective wrapper handed to engines: records history, enforces the budget
/// and the falsification stopping rule.
class Optimizer::Session {
 public:
  Session(const Objective& objective, const SearchSpace& space, const OptimizeSettings& settings);

  /// Evaluates and records `sample`. Once done(), further calls unwind the
  /// engine back to optimize() without touching the objective.
  double evaluate(std::span<const double> sample);
  /// Budget exhausted, or a falsifying sample found under Falsification.
  bool done() const noexcept { return done_; }
  std::size_t remaining() const noexcept { return settings_.budget - history_.size(); }

  const SearchSpace& space() const noexcept { return space_; }
  const std::vector<Evaluation>& history() const noexcept { return history_; }
  OptimizationResult finish() &&;

 private:
  const Objective& objective_;
  const SearchSpace& space_;
  OptimizeSettings settings_;
  std::vector<Evaluation> history_;
  bool done_ = false;
};

// ── step functions ──────────────────────────────────────────────────────────

/// Each coordinate independently uniform on its interval.
std::vector<double> uniform_random_step(Rng& rng, const SearchSpace& space);

/// Folds `x` back into [lower, upper] by mirror reflection at the bounds
/// (x > upper maps to 2·upper - x, repeatedly).
double reflect_into(double x, Interval bounds);

/// Gaussian perturbation of `current` with per-dimension standard deviation
/// temperature·(upper - lower)/2, reflected into the bounds.
std::vector<double> annealing_propose(Rng& rng, std::span<const double> current, double temperature,
                                      const SearchSpace& space);

/// Metropolis rule: accept when delta <= 0, otherwise with probability
/// exp(-delta / temperature). Draws from `rng` only in the second case.
bool annealing_accept(Rng& rng, double delta, double temperature);

struct AnnealingStep {
  std::vector<double> proposal;
  double robustness;
  bool accepted;
};

/// One annealing move from `current`; the proposal is evaluated through `objective`.
AnnealingStep annealing_step(Rng& rng, const Evaluation& current, double temperature,
                             const SearchSpace& space, const Objective& objective);

struct BasinhoppingOptions {
  /// Hop half-width as a fraction of each interval's width.
  double hop_radius = 0.1;
  /// Objective calls allowed per Nelder-Mead descent.
  std::size_t local_budget = 50;
  /// Initial simplex edge as a fraction of each interval's width.
  double simplex_scale = 0.05;
};

/// Uniform perturbation of `point` within hop_radius·width per dimension,
/// clamped to the bounds.
std::vector<double> basinhop_perturb(Rng& rng, std::span<const double> point, double hop_radius,
                                     const SearchSpace& space);

/// Bounded Nelder-Mead (reflection 1, expansion 2, contraction 0.5, shrink 0.5)
/// from `start`, spending at most `max_calls` objective calls. Vertices are
/// clamped to the bounds. Returns the best vertex found.
Evaluation nelder_mead(const Objective& objective, std::span<const double> start, const SearchSpace& space,
                       std::size_t max_calls, double simplex_scale = 0.05);

/// One hop: perturb the incumbent, descend, and return whichever of the
/// incumbent and the descent result has lower robustness (the incumbent on ties).
Evaluation basinhop_step(Rng& rng, const Evaluation& incumbent, const SearchSpace& space,
                         const Objective& objective, const BasinhoppingOptions& options);

// ── engines ─────────────────────────────────────────────────────────────────

class UniformRandom final : public Optimizer {
 public:
  std::string name() const override { return "uniform-random"; }

 protected:
  void search(Session& session, Rng& rng) const override;
};

struct AnnealingOptions {
  double initial_temperature = 1.0;
  /// Geometric cooling factor: T_k = T_0 · cooling^k.
  double cooling = 0.99;
};

/// Classical simulated annealing with geometric cooling and bound reflection.
/// Every objective call is recorded, rejected proposals included.
class SimulatedAnnealing final : public Optimizer {
 public:
  SimulatedAnnealing() : SimulatedAnnealing(AnnealingOptions{}) {}
  /// Throws ValidationError unless initial_temperature > 0 and 0 < cooling <= 1.
  explicit SimulatedAnnealing(AnnealingOptions options);

  std::string name() const override { return "simulated-annealing"; }
  const AnnealingOptions& options() const noexcept { return options_; }

 protected:
  void search(Session& session, Rng& rng) const override;

 private:
  AnnealingOptions options_;
};

/// Random hops around the incumbent, each followed by a Nelder-Mead descent.
class Basinhopping final : public Optimizer {
 public:
  Basinhopping() : Basinhopping(BasinhoppingOptions{}) {}
  /// Throws ValidationError unless 0 < hop_radius <= 1, local_budget >= 1 and
  /// 0 < simplex_scale <= 1.
  explicit Basinhopping(BasinhoppingOptions options);

  std::string name() const override { return "basinhopping"; }
  const BasinhoppingOptions& options() const noexcept { return options_; }

 protected:
  void search(Session& session, Rng& rng) const override;

 private:
  BasinhoppingOptions options_;
};

}  // namespace falsify
