#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace falsify {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Closed time window [lower, upper] in seconds, relative to the current sample.
struct TimeBound {
  double lower = 0.0;
  double upper = kInfinity;

  /// Throws ValidationError unless 0 <= lower <= upper.
  static TimeBound checked(double lower, double upper);

  bool contains(double offset) const noexcept { return offset >= lower && offset <= upper; }
  friend bool operator==(const TimeBound&, const TimeBound&) = default;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

namespace ast {

struct Predicate {
  std::string name;
};
struct Not {
  FormulaPtr child;
};
struct And {
  FormulaPtr left, right;
};
struct Or {
  FormulaPtr left, right;
};
/// Only produced programmatically; the parser desugars `a -> b` to Or(Not(a), b).
struct Implies {
  FormulaPtr left, right;
};
struct Next {
  FormulaPtr child;
};
struct Eventually {
  std::optional<TimeBound> bound;
  FormulaPtr child;
};
struct Always {
  std::optional<TimeBound> bound;
  FormulaPtr child;
};
struct Until {
  std::optional<TimeBound> bound;
  FormulaPtr left, right;
};

}  // namespace ast

/// Immutable STL syntax tree node. Subtrees are shared, so a parsed formula can
/// be handed to several threads without copying.
struct Formula {
  using Node = std::variant<ast::Predicate, ast::Not, ast::And, ast::Or, ast::Implies, ast::Next,
                            ast::Eventually, ast::Always, ast::Until>;
  Node node;
};

/// Structural equality (not pointer identity).
bool operator==(const Formula& a, const Formula& b);
bool same_structure(const FormulaPtr& a, const FormulaPtr& b);

std::size_t formula_depth(const Formula& f);

// Builders.
FormulaPtr predicate(std::string name);
FormulaPtr negation(FormulaPtr child);
FormulaPtr conjunction(FormulaPtr left, FormulaPtr right);
FormulaPtr disjunction(FormulaPtr left, FormulaPtr right);
FormulaPtr implication(FormulaPtr left, FormulaPtr right);
FormulaPtr next(FormulaPtr child);
FormulaPtr eventually(FormulaPtr child, std::optional<TimeBound> bound = std::nullopt);
FormulaPtr always(FormulaPtr child, std::optional<TimeBound> bound = std::nullopt);
FormulaPtr until(FormulaPtr left, FormulaPtr right, std::optional<TimeBound> bound = std::nullopt);

/// Half-space constraint A·x <= b over the state vector.
///
/// The Euclidean norm of A is computed once at construction; robustness is the
/// signed distance (b - A·x) / |A|.
class LinearPredicate {
 public:
  /// Throws ValidationError for an empty or all-zero coefficient vector, or a
  /// non-finite coefficient or bound.
  LinearPredicate(std::string name, std::vector<double> coefficients, double bound);

  const std::string& name() const noexcept { return name_; }
  std::span<const double> coefficients() const noexcept { return coefficients_; }
  double bound() const noexcept { return bound_; }
  double norm() const noexcept { return norm_; }
  std::size_t dimension() const noexcept { return coefficients_.size(); }

  friend bool operator==(const LinearPredicate& a, const LinearPredicate& b) {
    return a.name_ == b.name_ && a.coefficients_ == b.coefficients_ && a.bound_ == b.bound_;
  }

 private:
  std::string name_;
  std::vector<double> coefficients_;
  double bound_;
  double norm_;
};

/// Named predicates plus the state-variable layout of the traces they are
/// evaluated against.
class PredicateMap {
 public:
  PredicateMap() = default;
  /// Throws ValidationError on duplicate variable names.
  explicit PredicateMap(std::vector<std::string> variables);

  /// Throws ValidationError on a duplicate name or a coefficient vector whose
  /// length differs from the number of variables.
  void add(LinearPredicate predicate);

  /// nullptr when absent.
  const LinearPredicate* find(std::string_view name) const;
  std::optional<std::size_t> column(std::string_view variable) const;

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  std::size_t dimension() const noexcept { return variables_.size(); }
  std::size_t size() const noexcept { return predicates_.size(); }
  const std::map<std::string, LinearPredicate, std::less<>>& predicates() const noexcept {
    return predicates_;
  }

 private:
  std::vector<std::string> variables_;
  std::map<std::string, LinearPredicate, std::less<>> predicates_;
};

/// Output of parse_formula: the tree plus the predicates synthesized for inline
/// comparisons such as `x <= 5.0`.
struct ParsedFormula {
  FormulaPtr formula;
  std::vector<LinearPredicate> inline_predicates;
};

/// Names given to inline comparisons start with this prefix. User predicate
/// names must not.
inline constexpr std::string_view kInlinePredicatePrefix = "__cmp";

/// Parses a requirement in the common STL syntax.
///
///     formula     := implication
///     implication := disjunction ('->' implication)?
///     disjunction := conjunction (('or' | '\/' | '||') conjunction)*
///     conjunction := unary (('and' | '/\' | '&&') unary)*
///     unary       := ('not' | '!') unary | temporal
///     temporal    := ('next' | 'X') unary
///                  | ('eventually' | 'F' | '<>') bound? unary
///                  | ('always' | 'G' | '[]') bound? unary
///                  | atom
///     atom        := '(' formula ')' | '(' formula ('until' | 'U') bound? formula ')'
///                  | identifier ('<=' | '>=') number | identifier
///     bound       := '[' number ',' (number | 'inf') ']'
///
/// Throws ParseError on a syntax error, an unknown variable in an inline
/// comparison, or a malformed bound.
ParsedFormula parse_formula(std::string_view text, std::span<const std::string> variables);

/// Canonical text; parse_formula(format_formula(f)) is structurally equal to f
/// for every tree without Implies nodes.
std::string format_formula(const Formula& f);

/// Shortest decimal text that reads back to the same double; integral values
/// get a trailing ".0", infinities are "inf" / "-inf".
std::string format_real(double value);

}  // namespace falsify
