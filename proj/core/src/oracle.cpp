#include "falsify/error.hpp"
#include "falsify/monitor.hpp"

#include <map>
#include <string>
#include <utility>

namespace falsify {

namespace {

// Pointwise qualitative semantics. Written directly from the quantifier form
// of each operator; memoized on (node, sample) so nested untils stay tractable.
class Satisfaction {
 public:
  Satisfaction(const PredicateMap& preds, const Trace& trace) : preds_(preds), trace_(trace) {}

  bool holds(const Formula& f, std::size_t i) {
    const auto key = std::make_pair(&f, i);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool v = std::visit([&](const auto& node) { return check(node, i); }, f.node);
    memo_.emplace(key, v);
    return v;
  }

 private:
  bool in_window(const std::optional<TimeBound>& b, std::size_t i, std::size_t j) const {
    if (j < i) return false;
    const double lo = b ? b->lower : 0.0;
    const double hi = b ? b->upper : kInfinity;
    const double d = trace_.time(j) - trace_.time(i);
    return lo <= d && d <= hi;
  }

  bool check(const ast::Predicate& p, std::size_t i) {
    const LinearPredicate* lp = preds_.find(p.name);
    if (lp == nullptr) throw EvaluationError("unresolved predicate '" + p.name + "'");
    const auto x = trace_.state(i);
    if (x.size() != lp->dimension()) throw EvaluationError("dimension mismatch in '" + p.name + "'");
    double ax = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) ax += lp->coefficients()[k] * x[k];
    return ax <= lp->bound();
  }
  bool check(const ast::Not& n, std::size_t i) { return !holds(*n.child, i); }
  bool check(const ast::And& n, std::size_t i) { return holds(*n.left, i) && holds(*n.right, i); }
  bool check(const ast::Or& n, std::size_t i) { return holds(*n.left, i) || holds(*n.right, i); }
  bool check(const ast::Implies& n, std::size_t i) { return !holds(*n.left, i) || holds(*n.right, i); }
  bool check(const ast::Next& n, std::size_t i) {
    return i + 1 < trace_.size() && holds(*n.child, i + 1);
  }
  // exists j in window: child holds at j
  bool check(const ast::Eventually& n, std::size_t i) {
    for (std::size_t j = 0; j < trace_.size(); ++j) {
      if (in_window(n.bound, i, j) && holds(*n.child, j)) return true;
    }
    return false;
  }
  // forall j in window: child holds at j
  bool check(const ast::Always& n, std::size_t i) {
    for (std::size_t j = 0; j < trace_.size(); ++j) {
      if (in_window(n.bound, i, j) && !holds(*n.child, j)) return false;
    }
    return true;
  }
  // exists j in window: right holds at j and forall i <= k < j: left holds at k
  bool check(const ast::Until& n, std::size_t i) {
    for (std::size_t j = 0; j < trace_.size(); ++j) {
      if (!in_window(n.bound, i, j) || !holds(*n.right, j)) continue;
      bool prefix = true;
      for (std::size_t k = i; k < j; ++k) {
        if (!holds(*n.left, k)) {
          prefix = false;
          break;
        }
      }
      if (prefix) return true;
    }
    return false;
  }

  const PredicateMap& preds_;
  const Trace& trace_;
  std::map<std::pair<const Formula*, std::size_t>, bool> memo_;
};

}  // namespace

bool evaluate_boolean(const Formula& f, const PredicateMap& preds, const Trace& trace, std::size_t at) {
  if (at >= trace.size()) throw EvaluationError("evaluation index out of range");
  return Satisfaction(preds, trace).holds(f, at);
}

}  // namespace falsify
