#include "falsify/optim.hpp"

#include "falsify/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace falsify {

SearchSpace::SearchSpace(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw ValidationError("search space has no dimensions");
  for (std::size_t i = 0; i < bounds_.size(); ++i) {
    const auto& b = bounds_[i];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower < b.upper)) {
      std::ostringstream msg;
      msg << "search dimension " << i << " has invalid bounds (" << b.lower << ", " << b.upper << ")";
      throw ValidationError(msg.str());
    }
  }
}

bool SearchSpace::contains(std::span<const double> sample) const {
  if (sample.size() != bounds_.size()) return false;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!bounds_[i].contains(sample[i])) return false;
  }
  return true;
}

// ── session ─────────────────────────────────────────────────────────────────

namespace {
struct SearchStopped {};
}  // namespace

Optimizer::Session::Session(const Objective& objective, const SearchSpace& space,
                            const OptimizeSettings& settings)
    : objective_(objective), space_(space), settings_(settings) {
  history_.reserve(settings_.budget);
}

double Optimizer::Session::evaluate(std::span<const double> sample) {
  if (done_) throw SearchStopped{};
  const double r = objective_(sample);
  history_.push_back(Evaluation{{sample.begin(), sample.end()}, r});
  if (history_.size() >= settings_.budget ||
      (settings_.behavior == Behavior::Falsification && r < 0.0)) {
    done_ = true;
  }
  return r;
}

OptimizationResult Optimizer::Session::finish() && {
  OptimizationResult result;
  result.history = std::move(history_);
  if (!result.history.empty()) {
    auto best = std::min_element(result.history.begin(), result.history.end(),
                                 [](const Evaluation& a, const Evaluation& b) { return a.robustness < b.robustness; });
    result.best = *best;
  }
  return result;
}

OptimizationResult Optimizer::optimize(const Objective& objective, const SearchSpace& space,
                                       const OptimizeSettings& settings) const {
  if (settings.budget < 1) throw ValidationError("optimizer budget must be at least 1");
  Session session(objective, space, settings);
  Rng rng(settings.seed);
  try {
    // Engines loop until the session stops them.
    search(session, rng);
  } catch (const SearchStopped&) {
  }
  return std::move(session).finish();
}

// ── step functions ──────────────────────────────────────────────────────────

std::vector<double> uniform_random_step(Rng& rng, const SearchSpace& space) {
  std::vector<double> sample(space.dimension());
  for (std::size_t i = 0; i < sample.size(); ++i) sample[i] = rng.uniform(space[i].lower, space[i].upper);
  return sample;
}

double reflect_into(double x, Interval b) {
  if (b.contains(x)) return x;
  const double w = b.width();
  if (!(w > 0.0)) return b.lower;
  double y = std::fmod(x - b.lower, 2.0 * w);
  if (y < 0.0) y += 2.0 * w;
  if (y > w) y = 2.0 * w - y;
  return std::clamp(b.lower + y, b.lower, b.upper);
}

std::vector<double> annealing_propose(Rng& rng, std::span<const double> current, double temperature,
                                      const SearchSpace& space) {
  std::vector<double> proposal(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    const double scale = temperature * space[i].width() / 2.0;
    proposal[i] = reflect_into(current[i] + scale * rng.normal(), space[i]);
  }
  return proposal;
}

bool annealing_accept(Rng& rng, double delta, double temperature) {
  // NaN only arises from inf - inf, i.e. no change.
  if (!(delta > 0.0)) return true;
  return rng.uniform() < std::exp(-delta / temperature);
}

AnnealingStep annealing_step(Rng& rng, const Evaluation& current, double temperature,
                             const SearchSpace& space, const Objective& objective) {
  AnnealingStep step;
  step.proposal = annealing_propose(rng, current.sample, temperature, space);
  step.robustness = objective(step.proposal);
  step.accepted = annealing_accept(rng, step.robustness - current.robustness, temperature);
  return step;
}

std::vector<double> basinhop_perturb(Rng& rng, std::span<const double> point, double hop_radius,
                                     const SearchSpace& space) {
  std::vector<double> out(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double r = hop_radius * space[i].width();
    out[i] = std::clamp(point[i] + rng.uniform(-r, r), space[i].lower, space[i].upper);
  }
  return out;
}

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

std::vector<double> clamp_to(std::vector<double> x, const SearchSpace& space) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], space[i].lower, space[i].upper);
  return x;
}

// centroid + coeff·(centroid - worst)
std::vector<double> along(const std::vector<double>& centroid, const std::vector<double>& worst, double coeff,
                          const SearchSpace& space) {
  std::vector<double> x(centroid.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = centroid[i] + coeff * (centroid[i] - worst[i]);
  return clamp_to(std::move(x), space);
}

}  // namespace

Evaluation nelder_mead(const Objective& objective, std::span<const double> start, const SearchSpace& space,
                       std::size_t max_calls, double simplex_scale) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const std::size_t n = space.dimension();
  std::size_t calls = 0;
  auto call = [&](const std::vector<double>& x) {
    ++calls;
    return objective(x);
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  std::vector<double> x0 = clamp_to({start.begin(), start.end()}, space);
  simplex.push_back({x0, call(x0)});
  for (std::size_t i = 0; i < n && calls < max_calls; ++i) {
    std::vector<double> x = x0;
    const double h = simplex_scale * space[i].width();
    x[i] = x0[i] + h <= space[i].upper ? x0[i] + h : x0[i] - h;
    simplex.push_back({x, call(x)});
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  if (simplex.size() < n + 1) {
    const auto& best = *std::min_element(simplex.begin(), simplex.end(), by_value);
    return {best.x, best.f};
  }

  while (calls < max_calls) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    const Vertex& worst = simplex.back();
    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);
    }

    const auto xr = along(centroid, worst.x, kReflect, space);
    const double fr = call(xr);
    if (fr < simplex.front().f) {
      if (calls >= max_calls) {
        simplex.back() = {xr, fr};
        break;
      }
      const auto xe = along(centroid, worst.x, kExpand, space);
      const double fe = call(xe);
      simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < simplex[n - 1].f) {
      simplex.back() = {xr, fr};
      continue;
    }
    if (calls >= max_calls) break;
    // Outside contraction when the reflection beat the worst vertex, inside otherwise.
    const bool outside = fr < worst.f;
    const auto xc = along(centroid, worst.x, outside ? kContract : -kContract, space);
    const double fc = call(xc);
    if (fc < (outside ? fr : worst.f)) {
      simplex.back() = {xc, fc};
      continue;
    }
    for (std::size_t v = 1; v <= n && calls < max_calls; ++v) {
      for (std::size_t i = 0; i < n; ++i) {
        simplex[v].x[i] = simplex[0].x[i] + kShrink * (simplex[v].x[i] - simplex[0].x[i]);
      }
      simplex[v].f = call(simplex[v].x);
    }
  }
  const auto& best = *std::min_element(simplex.begin(), simplex.end(), by_value);
  return {best.x, best.f};
}

Evaluation basinhop_step(Rng& rng, const Evaluation& incumbent, const SearchSpace& space,
                         const Objective& objective, const BasinhoppingOptions& options) {
  const auto start = basinhop_perturb(rng, incumbent.sample, options.hop_radius, space);
  Evaluation local = nelder_mead(objective, start, space, options.local_budget, options.simplex_scale);
  return local.robustness < incumbent.robustness ? local : incumbent;
}

// ── engines ─────────────────────────────────────────────────────────────────

void UniformRandom::search(Session& session, Rng& rng) const {
  for (;;) session.evaluate(uniform_random_step(rng, session.space()));
}

SimulatedAnnealing::SimulatedAnnealing(AnnealingOptions options) : options_(options) {
  if (!(options_.initial_temperature > 0.0) || !std::isfinite(options_.initial_temperature)) {
    throw ValidationError("annealing initial temperature must be positive");
  }
  if (!(options_.cooling > 0.0 && options_.cooling <= 1.0)) {
    throw ValidationError("annealing cooling factor must lie in (0, 1]");
  }
}

void SimulatedAnnealing::search(Session& session, Rng& rng) const {
  const auto& space = session.space();
  Objective objective = [&](std::span<const double> x) { return session.evaluate(x); };
  Evaluation current;
  current.sample = uniform_random_step(rng, space);
  current.robustness = objective(current.sample);
  double temperature = options_.initial_temperature;
  for (;;) {
    auto step = annealing_step(rng, current, temperature, space, objective);
    if (step.accepted) current = Evaluation{std::move(step.proposal), step.robustness};
    // Underflow would turn the Metropolis rule into 0/0.
    temperature = std::max(temperature * options_.cooling, std::numeric_limits<double>::min());
  }
}

Basinhopping::Basinhopping(BasinhoppingOptions options) : options_(options) {
  if (!(options_.hop_radius > 0.0 && options_.hop_radius <= 1.0)) {
    throw ValidationError("basinhopping hop radius must lie in (0, 1]");
  }
  if (options_.local_budget < 1) throw ValidationError("basinhopping local budget must be at least 1");
  if (!(options_.simplex_scale > 0.0 && options_.simplex_scale <= 1.0)) {
    throw ValidationError("basinhopping simplex scale must lie in (0, 1]");
  }
}

void Basinhopping::search(Session& session, Rng& rng) const {
  const auto& space = session.space();
  Objective objective = [&](std::span<const double> x) { return session.evaluate(x); };
  Evaluation incumbent;
  incumbent.sample = uniform_random_step(rng, space);
  incumbent.robustness = objective(incumbent.sample);
  for (;;) incumbent = basinhop_step(rng, incumbent, space, objective, options_);
}

}  // namespace falsify
