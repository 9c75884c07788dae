#include "falsify/bench.hpp"
#include "falsify/error.hpp"
#include "falsify/runner.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace falsify {
namespace {

constexpr auto kConst = InterpolationKind::PiecewiseConstant;

Options base_options() {
  Options o;
  o.static_params = {{0, 1}};
  o.iterations = 20;
  o.interval = {0, 1};
  return o;
}

TEST(Options, Validation) {
  Options o = base_options();
  EXPECT_NO_THROW(o.validate());

  Options empty = o;
  empty.static_params.clear();
  try {
    empty.validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("either static_params or signals"), std::string::npos);
  }

  auto broken = [&](auto mutate) {
    Options b = base_options();
    mutate(b);
    return b;
  };
  EXPECT_THROW(broken([](Options& b) { b.iterations = 0; }).validate(), ValidationError);
  EXPECT_THROW(broken([](Options& b) { b.runs = 0; }).validate(), ValidationError);
  EXPECT_THROW(broken([](Options& b) { b.interval = {1, 1}; }).validate(), ValidationError);
  EXPECT_THROW(broken([](Options& b) { b.static_params = {{2, 1}}; }).validate(), ValidationError);
  EXPECT_THROW(broken([](Options& b) { b.signals = {{{0, 1}, 0, kConst}}; }).validate(), ValidationError);
  EXPECT_THROW(broken([](Options& b) { b.signals = {{{0, 1}, 1, InterpolationKind::PiecewiseLinear}}; }).validate(),
               ValidationError);
}

TEST(DecomposeSample, StaticOnly) {
  auto parts = decompose_sample(std::vector<double>{0.7}, base_options());
  EXPECT_EQ(parts.static_params, std::vector<double>{0.7});
  EXPECT_TRUE(parts.signals.empty());
}

TEST(DecomposeSample, SingleSignal) {
  Options o;
  o.signals = {{{0, 5}, 3, kConst}};
  o.interval = {0, 2};
  auto parts = decompose_sample(std::vector<double>{1, 2, 3}, o);
  EXPECT_TRUE(parts.static_params.empty());
  ASSERT_EQ(parts.signals.size(), 1u);
  EXPECT_EQ(parts.signals[0].control_values(), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(parts.signals[0].interval(), (Interval{0, 2}));
}

TEST(DecomposeSample, BlocksReconstructSample) {
  Options o;
  o.static_params = {{0, 1}, {0, 1}};
  o.signals = {{{0, 9}, 2, InterpolationKind::PiecewiseLinear}, {{0, 9}, 3, kConst}};
  const std::vector<double> sample{1, 2, 3, 4, 5, 6, 7};
  auto parts = decompose_sample(sample, o);
  std::vector<double> flat = parts.static_params;
  for (const auto& s : parts.signals) flat.insert(flat.end(), s.control_values().begin(), s.control_values().end());
  EXPECT_EQ(flat, sample);
  EXPECT_EQ(parts.signals[0].kind(), InterpolationKind::PiecewiseLinear);
  EXPECT_THROW(decompose_sample(std::vector<double>{1, 2}, o), ValidationError);
}

TEST(SearchSpaceAssembly, StaticThenRepeatedSignalBounds) {
  Options o;
  o.static_params = {{0, 1}};
  o.signals = {{{-2, 2}, 2, kConst}, {{5, 6}, 1, kConst}};
  EXPECT_EQ(sample_dimension(o), 4u);
  EXPECT_EQ(search_space(o).bounds(), (std::vector<Interval>{{0, 1}, {-2, 2}, {-2, 2}, {5, 6}}));
}

SimulationOutput echo(const SimulationInput& in) {
  SimulationOutput out{in.times, {}};
  for (std::size_t j = 0; j < in.times.size(); ++j) {
    std::vector<double> row;
    for (const auto& sig : in.signal_values) row.push_back(sig[j]);
    out.trajectories.push_back(row);
  }
  return out;
}

TEST(MakeObjective, EchoComposition) {
  BlackboxModel model(echo);
  PredicateMap preds({"x"});
  preds.add(LinearPredicate("p1", {1.0}, 5.0));
  StlSpecification spec(predicate("p1"), preds);
  Options o;
  o.signals = {{{0, 10}, 1, kConst}};
  auto objective = make_objective(model, spec, o);
  EXPECT_EQ(objective(std::vector<double>{3.0}), 2.0);
}

TEST(MakeObjective, OscillatorInitialViolation) {
  auto sys = bench::oscillator();
  Options o = sys.options;
  o.signals.clear();
  // Undamped-free check at t = 0: x1(0) = 1.2 violates x1 <= 1 by 0.2.
  PredicateMap preds({"x1", "x2"});
  auto spec = StlSpecification::parse("[] (x1 <= 1.0)", preds);
  OdeModel model([](double, std::span<const double> x, std::span<const double>) { return std::vector<double>{x[1], -x[0]}; },
                 OdeModel::Settings{std::nullopt, [](std::span<const double> p) { return std::vector<double>{p[0], 0.0}; }});
  auto objective = make_objective(model, spec, o);
  EXPECT_NEAR(objective(std::vector<double>{1.2}), -0.2, 1e-12);
}

TEST(Staliro, RunCountAndSeeds) {
  BlackboxModel model(echo);
  PredicateMap preds({"x"});
  preds.add(LinearPredicate("p1", {1.0}, 5.0));
  StlSpecification spec(always(predicate("p1")), preds);
  Options o;
  o.signals = {{{0, 10}, 2, kConst}};
  o.runs = 3;
  o.iterations = 30;
  o.behavior = Behavior::Minimization;
  auto results = staliro(spec, model, UniformRandom(), o);
  ASSERT_EQ(results.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    const auto direct = UniformRandom().optimize(make_objective(model, spec, o), search_space(o),
                                                 {30, Behavior::Minimization, o.seed + r});
    EXPECT_EQ(results[r].history, direct.history);
    EXPECT_EQ(results[r].falsified, results[r].best->robustness < 0);
    EXPECT_GE(results[r].run_time, 0.0);
  }
  EXPECT_NE(results[0].history, results[1].history);
}

TEST(Staliro, ReproducibleAcrossCalls) {
  auto sys = bench::oscillator();
  auto spec = sys.specification();
  sys.options.runs = 2;
  sys.options.iterations = 15;
  auto a = staliro(spec, *sys.model, SimulatedAnnealing(), sys.options);
  auto b = staliro(spec, *sys.model, SimulatedAnnealing(), sys.options);
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_EQ(a[r].history, b[r].history);
    EXPECT_EQ(a[r].best, b[r].best);
    EXPECT_EQ(a[r].falsified, b[r].falsified);
  }
}

TEST(Staliro, ParallelRunsMatchSequential) {
  auto sys = bench::oscillator();
  auto spec = sys.specification();
  sys.options.runs = 4;
  sys.options.iterations = 10;
  sys.options.behavior = Behavior::Minimization;
  auto seq = staliro(spec, *sys.model, UniformRandom(), sys.options);
  sys.options.parallel_runs = true;
  auto par = staliro(spec, *sys.model, UniformRandom(), sys.options);
  for (std::size_t r = 0; r < seq.size(); ++r) EXPECT_EQ(seq[r].history, par[r].history);
}

TEST(Staliro, RejectsInvalidOptionsBeforeSimulating) {
  int calls = 0;
  BlackboxModel model([&](const SimulationInput& in) { ++calls; return echo(in); });
  PredicateMap preds({"x"});
  preds.add(LinearPredicate("p1", {1.0}, 5.0));
  StlSpecification spec(predicate("p1"), preds);
  Options o;
  EXPECT_THROW(staliro(spec, model, UniformRandom(), o), ValidationError);
  EXPECT_EQ(calls, 0);
}

TEST(Staliro, RecordAndContinueNeverFalsifiesFromFailures) {
  BlackboxModel model([](const SimulationInput&) -> SimulationOutput { throw std::runtime_error("down"); });
  PredicateMap preds({"x"});
  preds.add(LinearPredicate("p1", {1.0}, 5.0));
  StlSpecification spec(predicate("p1"), preds);
  Options o = base_options();
  o.error_policy = ErrorPolicy::RecordAndContinue;
  auto results = staliro(spec, model, UniformRandom(), o);
  ASSERT_EQ(results.size(), 1u);
  const auto& run = results[0];
  EXPECT_EQ(run.history.size(), 20u);
  for (const auto& e : run.history) EXPECT_EQ(e.robustness, kInfinity);
  EXPECT_FALSE(run.falsified);
  EXPECT_FALSE(run.aborted);
  EXPECT_EQ(run.failures.size(), 20u);
  EXPECT_EQ(run.failures[3].sample, run.history[3].sample);
  EXPECT_NE(run.failures[0].message.find("down"), std::string::npos);
}

TEST(Staliro, AbortRunKeepsPartialHistory) {
  int calls = 0;
  BlackboxModel model([&](const SimulationInput& in) -> SimulationOutput {
    if (++calls == 4) throw std::runtime_error("engine died");
    return SimulationOutput{in.times, std::vector<std::vector<double>>(in.times.size(), {in.static_params[0]})};
  });
  PredicateMap preds({"x"});
  preds.add(LinearPredicate("p1", {1.0}, 5.0));
  StlSpecification spec(predicate("p1"), preds);
  Options o = base_options();
  o.runs = 2;
  auto results = staliro(spec, model, UniformRandom(), o);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_TRUE(results[0].aborted);
  EXPECT_EQ(results[0].history.size(), 3u);
  ASSERT_EQ(results[0].failures.size(), 1u);
  ASSERT_TRUE(results[0].best.has_value());
  EXPECT_FALSE(results[0].falsified);
  EXPECT_FALSE(results[1].aborted);
  EXPECT_EQ(results[1].history.size(), 20u);
}

TEST(Staliro, AbortOnFirstCallLeavesNoBest) {
  BlackboxModel model([](const SimulationInput&) -> SimulationOutput { throw std::runtime_error("x"); });
  PredicateMap preds({"x"});
  preds.add(LinearPredicate("p1", {1.0}, 5.0));
  StlSpecification spec(predicate("p1"), preds);
  auto results = staliro(spec, model, UniformRandom(), base_options());
  EXPECT_TRUE(results[0].aborted);
  EXPECT_TRUE(results[0].history.empty());
  EXPECT_FALSE(results[0].best.has_value());
  EXPECT_FALSE(results[0].falsified);
}

TEST(Staliro, MalformedTraceFollowsErrorPolicy) {
  BlackboxModel model([](const SimulationInput& in) {
    return SimulationOutput{in.times, std::vector<std::vector<double>>(in.times.size() - 1, {1.0})};
  });
  PredicateMap preds({"x"});
  preds.add(LinearPredicate("p1", {1.0}, 5.0));
  StlSpecification spec(predicate("p1"), preds);
  Options o = base_options();
  o.error_policy = ErrorPolicy::RecordAndContinue;
  auto results = staliro(spec, model, UniformRandom(), o);
  EXPECT_EQ(results[0].failures.size(), 20u);
  EXPECT_FALSE(results[0].falsified);
}

}  // namespace
}  // namespace falsify
