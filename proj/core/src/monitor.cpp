#include "falsify/monitor.hpp"

#include "falsify/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace falsify {

Trace::Trace(std::vector<double> timestamps, std::vector<std::vector<double>> states)
    : timestamps_(std::move(timestamps)), states_(std::move(states)) {
  if (timestamps_.empty()) throw TraceValidationError("trace has no samples");
  if (states_.size() != timestamps_.size()) {
    throw TraceValidationError("trace has " + std::to_string(timestamps_.size()) +
                               " timestamps but " + std::to_string(states_.size()) + " states");
  }
  const std::size_t dim = states_.front().size();
  for (std::size_t i = 0; i < timestamps_.size(); ++i) {
    if (!std::isfinite(timestamps_[i])) {
      throw TraceValidationError("non-finite timestamp at sample " + std::to_string(i));
    }
    if (i > 0 && !(timestamps_[i] > timestamps_[i - 1])) {
      throw TraceValidationError("timestamps not strictly increasing at sample " + std::to_string(i));
    }
    if (states_[i].size() != dim) {
      throw TraceValidationError("ragged trajectory: sample " + std::to_string(i) + " has dimension " +
                                 std::to_string(states_[i].size()) + ", expected " +
                                 std::to_string(dim));
    }
    for (double v : states_[i]) {
      if (!std::isfinite(v)) {
        throw TraceValidationError("non-finite state value at sample " + std::to_string(i));
      }
    }
  }
}

double predicate_robustness(const LinearPredicate& p, std::span<const double> state) {
  if (state.size() != p.dimension()) {
    throw EvaluationError("predicate '" + p.name() + "' expects dimension " +
                          std::to_string(p.dimension()) + " but the state has dimension " +
                          std::to_string(state.size()));
  }
  double dot = 0.0;
  const auto a = p.coefficients();
  for (std::size_t k = 0; k < state.size(); ++k) dot += a[k] * state[k];
  return (p.bound() - dot) / p.norm();
}

namespace {

using Signal = std::vector<double>;

TimeBound window(const std::optional<TimeBound>& b) { return b.value_or(TimeBound{}); }

// Each operator maps child robustness signals to the parent's signal. The
// window scan stops at the first offset past the upper limit; offsets are
// nondecreasing in j because timestamps are increasing.
class SignalEvaluator {
 public:
  SignalEvaluator(const PredicateMap& preds, const Trace& trace) : preds_(preds), trace_(trace) {}

  Signal operator()(const ast::Predicate& p) const {
    const LinearPredicate* lp = preds_.find(p.name);
    if (!lp) throw EvaluationError("unresolved predicate '" + p.name + "'");
    Signal out(n());
    for (std::size_t i = 0; i < n(); ++i) out[i] = predicate_robustness(*lp, trace_.state(i));
    return out;
  }

  Signal operator()(const ast::Not& node) const {
    Signal s = eval(*node.child);
    for (double& v : s) v = -v;
    return s;
  }

  Signal operator()(const ast::And& node) const {
    Signal l = eval(*node.left);
    const Signal r = eval(*node.right);
    for (std::size_t i = 0; i < n(); ++i) l[i] = std::min(l[i], r[i]);
    return l;
  }

  Signal operator()(const ast::Or& node) const {
    Signal l = eval(*node.left);
    const Signal r = eval(*node.right);
    for (std::size_t i = 0; i < n(); ++i) l[i] = std::max(l[i], r[i]);
    return l;
  }

  Signal operator()(const ast::Implies& node) const {
    Signal l = eval(*node.left);
    const Signal r = eval(*node.right);
    for (std::size_t i = 0; i < n(); ++i) l[i] = std::max(-l[i], r[i]);
    return l;
  }

  Signal operator()(const ast::Next& node) const {
    const Signal s = eval(*node.child);
    Signal out(n(), -kInfinity);
    for (std::size_t i = 0; i + 1 < n(); ++i) out[i] = s[i + 1];
    return out;
  }

  Signal operator()(const ast::Eventually& node) const {
    return sweep(eval(*node.child), window(node.bound), -kInfinity,
                 [](double a, double b) { return std::max(a, b); });
  }

  Signal operator()(const ast::Always& node) const {
    return sweep(eval(*node.child), window(node.bound), kInfinity,
                 [](double a, double b) { return std::min(a, b); });
  }

  Signal operator()(const ast::Until& node) const {
    const Signal lhs = eval(*node.left);
    const Signal rhs = eval(*node.right);
    const TimeBound b = window(node.bound);
    Signal out(n(), -kInfinity);
    for (std::size_t i = 0; i < n(); ++i) {
      double best = -kInfinity;
      double prefix = kInfinity;  // min of lhs over [i, j)
      for (std::size_t j = i; j < n(); ++j) {
        if (j > i) prefix = std::min(prefix, lhs[j - 1]);
        const double offset = trace_.time(j) - trace_.time(i);
        if (offset > b.upper) break;
        if (offset >= b.lower) best = std::max(best, std::min(rhs[j], prefix));
      }
      out[i] = best;
    }
    return out;
  }

  Signal eval(const Formula& f) const { return std::visit(*this, f.node); }

 private:
  std::size_t n() const { return trace_.size(); }

  template <class Combine>
  Signal sweep(const Signal& s, const TimeBound& b, double empty, Combine combine) const {
    Signal out(n(), empty);
    for (std::size_t i = 0; i < n(); ++i) {
      double acc = empty;
      for (std::size_t j = i; j < n(); ++j) {
        const double offset = trace_.time(j) - trace_.time(i);
        if (offset > b.upper) break;
        if (offset >= b.lower) acc = combine(acc, s[j]);
      }
      out[i] = acc;
    }
    return out;
  }

  const PredicateMap& preds_;
  const Trace& trace_;
};

}  // namespace

std::vector<double> robustness_signal(const Formula& f, const PredicateMap& preds, const Trace& trace) {
  return SignalEvaluator(preds, trace).eval(f);
}

double evaluate(const Formula& f, const PredicateMap& preds, const Trace& trace, std::size_t at) {
  if (at >= trace.size()) {
    throw EvaluationError("evaluation index " + std::to_string(at) + " out of range for a trace of " +
                          std::to_string(trace.size()) + " samples");
  }
  return robustness_signal(f, preds, trace)[at];
}

// ── Specification ───────────────────────────────────────────────────────────

namespace {

void collect_names(const Formula& f, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Predicate>) {
          out.push_back(n.name);
        } else if constexpr (requires { n.left; }) {
          collect_names(*n.left, out);
          collect_names(*n.right, out);
        } else {
          collect_names(*n.child, out);
        }
      },
      f.node);
}

}  // namespace

StlSpecification::StlSpecification(FormulaPtr formula, PredicateMap predicates)
    : formula_(std::move(formula)), predicates_(std::move(predicates)) {
  if (!formula_) throw ValidationError("specification has no formula");
  std::vector<std::string> names;
  collect_names(*formula_, names);
  for (const auto& name : names) {
    if (!predicates_.find(name)) throw ValidationError("unresolved predicate '" + name + "'");
  }
}

StlSpecification StlSpecification::parse(std::string_view requirement, PredicateMap predicates) {
  auto parsed = parse_formula(requirement, predicates.variables());
  for (auto& p : parsed.inline_predicates) predicates.add(std::move(p));
  return StlSpecification(std::move(parsed.formula), std::move(predicates));
}

double StlSpecification::evaluate(const Trace& trace) const {
  return falsify::evaluate(*formula_, predicates_, trace, 0);
}

}  // namespace falsify
