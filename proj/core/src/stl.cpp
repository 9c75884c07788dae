#include "falsify/stl.hpp"

#include "falsify/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace falsify {

ParseError::ParseError(std::string message, std::size_t position,
                       std::vector<std::string> expected)
    : Error([&] {
        std::ostringstream out;
        out << message << " at offset " << position;
        if (!expected.empty()) {
          out << " (expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) {
            out << (i ? ", " : "") << expected[i];
          }
          out << ")";
        }
        return out.str();
      }()),
      position_(position),
      expected_(std::move(expected)) {}

TimeBound TimeBound::checked(double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper) || lower < 0.0 || std::isinf(lower)) {
    throw ValidationError("time bound lower limit must be a finite non-negative number");
  }
  if (lower > upper) {
    throw ValidationError("time bound lower limit exceeds upper limit");
  }
  return TimeBound{lower, upper};
}

// ── structure ───────────────────────────────────────────────────────────────

namespace {

struct StructuralEqual {
  bool operator()(const ast::Predicate& a, const ast::Predicate& b) const { return a.name == b.name; }
  bool operator()(const ast::Not& a, const ast::Not& b) const { return same_structure(a.child, b.child); }
  bool operator()(const ast::Next& a, const ast::Next& b) const { return same_structure(a.child, b.child); }
  bool operator()(const ast::And& a, const ast::And& b) const { return binary(a, b); }
  bool operator()(const ast::Or& a, const ast::Or& b) const { return binary(a, b); }
  bool operator()(const ast::Implies& a, const ast::Implies& b) const { return binary(a, b); }
  bool operator()(const ast::Eventually& a, const ast::Eventually& b) const {
    return a.bound == b.bound && same_structure(a.child, b.child);
  }
  bool operator()(const ast::Always& a, const ast::Always& b) const {
    return a.bound == b.bound && same_structure(a.child, b.child);
  }
  bool operator()(const ast::Until& a, const ast::Until& b) const {
    return a.bound == b.bound && binary(a, b);
  }
  template <class A, class B>
  bool operator()(const A&, const B&) const {
    return false;
  }

  template <class T>
  static bool binary(const T& a, const T& b) {
    return same_structure(a.left, b.left) && same_structure(a.right, b.right);
  }
};

}  // namespace

bool same_structure(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool operator==(const Formula& a, const Formula& b) {
  return std::visit(StructuralEqual{}, a.node, b.node);
}

std::size_t formula_depth(const Formula& f) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Predicate>) {
          return 1;
        } else if constexpr (requires { n.left; }) {
          return 1 + std::max(formula_depth(*n.left), formula_depth(*n.right));
        } else {
          return 1 + formula_depth(*n.child);
        }
      },
      f.node);
}

namespace {
template <class Node>
FormulaPtr make(Node n) {
  return std::make_shared<const Formula>(Formula{std::move(n)});
}
}  // namespace

FormulaPtr predicate(std::string name) { return make(ast::Predicate{std::move(name)}); }
FormulaPtr negation(FormulaPtr child) { return make(ast::Not{std::move(child)}); }
FormulaPtr conjunction(FormulaPtr l, FormulaPtr r) { return make(ast::And{std::move(l), std::move(r)}); }
FormulaPtr disjunction(FormulaPtr l, FormulaPtr r) { return make(ast::Or{std::move(l), std::move(r)}); }
FormulaPtr implication(FormulaPtr l, FormulaPtr r) { return make(ast::Implies{std::move(l), std::move(r)}); }
FormulaPtr next(FormulaPtr child) { return make(ast::Next{std::move(child)}); }
FormulaPtr eventually(FormulaPtr child, std::optional<TimeBound> bound) {
  return make(ast::Eventually{bound, std::move(child)});
}
FormulaPtr always(FormulaPtr child, std::optional<TimeBound> bound) {
  return make(ast::Always{bound, std::move(child)});
}
FormulaPtr until(FormulaPtr l, FormulaPtr r, std::optional<TimeBound> bound) {
  return make(ast::Until{bound, std::move(l), std::move(r)});
}

// ── predicates ──────────────────────────────────────────────────────────────

LinearPredicate::LinearPredicate(std::string name, std::vector<double> coefficients, double bound)
    : name_(std::move(name)), coefficients_(std::move(coefficients)), bound_(bound) {
  if (coefficients_.empty()) {
    throw ValidationError("predicate '" + name_ + "' has no coefficients");
  }
  if (!std::isfinite(bound_) ||
      !std::all_of(coefficients_.begin(), coefficients_.end(), [](double c) { return std::isfinite(c); })) {
    throw ValidationError("predicate '" + name_ + "' has a non-finite coefficient or bound");
  }
  norm_ = std::sqrt(std::inner_product(coefficients_.begin(), coefficients_.end(),
                                       coefficients_.begin(), 0.0));
  if (norm_ == 0.0) {
    throw ValidationError("predicate '" + name_ + "' has an all-zero coefficient vector");
  }
}

PredicateMap::PredicateMap(std::vector<std::string> variables) : variables_(std::move(variables)) {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (std::find(variables_.begin() + static_cast<std::ptrdiff_t>(i) + 1, variables_.end(),
                  variables_[i]) != variables_.end()) {
      throw ValidationError("duplicate state variable '" + variables_[i] + "'");
    }
  }
}

void PredicateMap::add(LinearPredicate p) {
  if (!variables_.empty() && p.dimension() != variables_.size()) {
    throw ValidationError("predicate '" + p.name() + "' has " + std::to_string(p.dimension()) +
                          " coefficients but the state has " + std::to_string(variables_.size()) +
                          " variables");
  }
  std::string name = p.name();
  if (!predicates_.emplace(name, std::move(p)).second) {
    throw ValidationError("duplicate predicate '" + name + "'");
  }
}

const LinearPredicate* PredicateMap::find(std::string_view name) const {
  auto it = predicates_.find(name);
  return it == predicates_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> PredicateMap::column(std::string_view variable) const {
  auto it = std::find(variables_.begin(), variables_.end(), variable);
  if (it == variables_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - variables_.begin());
}

// ── lexer ───────────────────────────────────────────────────────────────────

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Le,
  Ge,
  Arrow,
  Not,
  And,
  Or,
  Next,
  Eventually,
  Always,
  Until,
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Arrow: return "'->'";
    case Tok::Not: return "'not'";
    case Tok::And: return "'and'";
    case Tok::Or: return "'or'";
    case Tok::Next: return "'next'";
    case Tok::Eventually: return "'eventually'";
    case Tok::Always: return "'always'";
    case Tok::Until: return "'until'";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
  double number = 0.0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> tokenize(std::string_view s) {
  static const std::map<std::string_view, Tok> keywords = {
      {"not", Tok::Not},       {"and", Tok::And},         {"or", Tok::Or},
      {"next", Tok::Next},     {"X", Tok::Next},          {"eventually", Tok::Eventually},
      {"F", Tok::Eventually},  {"always", Tok::Always},    {"G", Tok::Always},
      {"until", Tok::Until},   {"U", Tok::Until},
  };
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back(Token{k, s.substr(i, len), i});
    i += len;
  };
  while (i < s.size()) {
    const char c = s[i];
    const char d = i + 1 < s.size() ? s[i + 1] : '\0';
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '[' && d == ']') {
      push(Tok::Always, 2);
    } else if (c == '<' && d == '>') {
      push(Tok::Eventually, 2);
    } else if (c == '<' && d == '=') {
      push(Tok::Le, 2);
    } else if (c == '>' && d == '=') {
      push(Tok::Ge, 2);
    } else if (c == '-' && d == '>') {
      push(Tok::Arrow, 2);
    } else if (c == '/' && d == '\\') {
      push(Tok::And, 2);
    } else if (c == '\\' && d == '/') {
      push(Tok::Or, 2);
    } else if (c == '&' && d == '&') {
      push(Tok::And, 2);
    } else if (c == '|' && d == '|') {
      push(Tok::Or, 2);
    } else if (c == '!') {
      push(Tok::Not, 1);
    } else if (c == '(') {
      push(Tok::LParen, 1);
    } else if (c == ')') {
      push(Tok::RParen, 1);
    } else if (c == '[') {
      push(Tok::LBracket, 1);
    } else if (c == ']') {
      push(Tok::RBracket, 1);
    } else if (c == ',') {
      push(Tok::Comma, 1);
    } else if (digit(c) || c == '.' || ((c == '-' || c == '+') && (digit(d) || d == '.'))) {
      const std::size_t start = i;
      std::size_t j = i;
      if (s[j] == '+') ++j;  // from_chars rejects a leading '+'
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(s.data() + j, s.data() + s.size(), value);
      if (ec != std::errc{} || ptr == s.data() + j) {
        throw ParseError("malformed number", start, {"number"});
      }
      const auto len = static_cast<std::size_t>(ptr - (s.data() + start));
      if (start + len < s.size() && ident_char(s[start + len])) {
        throw ParseError("malformed number", start, {"number"});
      }
      out.push_back(Token{Tok::Number, s.substr(start, len), start, value});
      i = start + len;
    } else if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && ident_char(s[j])) ++j;
      const auto word = s.substr(i, j - i);
      auto kw = keywords.find(word);
      push(kw == keywords.end() ? Tok::Ident : kw->second, j - i);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back(Token{Tok::End, {}, s.size()});
  return out;
}

// ── parser ──────────────────────────────────────────────────────────────────

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> variables)
      : tokens_(tokenize(text)), variables_(variables) {}

  ParsedFormula run() {
    auto f = formula();
    expect(Tok::End);
    return ParsedFormula{std::move(f), std::move(inline_)};
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<Tok> expected) const {
    std::vector<std::string> names;
    for (Tok t : expected) names.push_back(describe(t));
    const auto& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + std::string(t.text) + "'";
    throw ParseError("unexpected " + found, t.pos, std::move(names));
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail({k});
    return advance();
  }

  FormulaPtr formula() { return implication_(); }

  FormulaPtr implication_() {
    auto lhs = disjunction_();
    if (at(Tok::Arrow)) {
      advance();
      auto rhs = implication_();
      return disjunction(negation(std::move(lhs)), std::move(rhs));
    }
    return lhs;
  }

  FormulaPtr disjunction_() {
    auto lhs = conjunction_();
    while (at(Tok::Or)) {
      advance();
      lhs = disjunction(std::move(lhs), conjunction_());
    }
    return lhs;
  }

  FormulaPtr conjunction_() {
    auto lhs = unary();
    while (at(Tok::And)) {
      advance();
      lhs = conjunction(std::move(lhs), unary());
    }
    return lhs;
  }

  FormulaPtr unary() {
    switch (peek().kind) {
      case Tok::Not: advance(); return negation(unary());
      case Tok::Next: advance(); return next(unary());
      case Tok::Eventually: {
        advance();
        auto b = optional_bound();
        return eventually(unary(), b);
      }
      case Tok::Always: {
        advance();
        auto b = optional_bound();
        return always(unary(), b);
      }
      default: return atom();
    }
  }

  std::optional<TimeBound> optional_bound() {
    if (!at(Tok::LBracket)) return std::nullopt;
    const std::size_t open = advance().pos;
    const double lower = expect(Tok::Number).number;
    expect(Tok::Comma);
    double upper = 0.0;
    if (at(Tok::Number)) {
      upper = advance().number;
    } else if (at(Tok::Ident) && peek().text == "inf") {
      advance();
      upper = kInfinity;
    } else {
      fail({Tok::Number, Tok::Ident});
    }
    expect(Tok::RBracket);
    try {
      return TimeBound::checked(lower, upper);
    } catch (const ValidationError& e) {
      throw ParseError(std::string("malformed bound: ") + e.what(), open);
    }
  }

  FormulaPtr atom() {
    if (at(Tok::LParen)) {
      advance();
      auto lhs = formula();
      if (at(Tok::Until)) {
        advance();
        auto b = optional_bound();
        auto rhs = formula();
        expect(Tok::RParen);
        return until(std::move(lhs), std::move(rhs), b);
      }
      if (!at(Tok::RParen)) fail({Tok::RParen, Tok::Until});
      advance();
      return lhs;
    }
    if (!at(Tok::Ident)) {
      fail({Tok::LParen, Tok::Ident, Tok::Not, Tok::Next, Tok::Eventually, Tok::Always});
    }
    const Token& id = advance();
    if (at(Tok::Le) || at(Tok::Ge)) {
      const bool upper = advance().kind == Tok::Le;
      const double value = expect(Tok::Number).number;
      return comparison(id, upper, value);
    }
    return predicate(std::string(id.text));
  }

  FormulaPtr comparison(const Token& id, bool less_equal, double value) {
    auto it = std::find(variables_.begin(), variables_.end(), id.text);
    if (it == variables_.end()) {
      throw ParseError("unknown variable '" + std::string(id.text) + "'", id.pos);
    }
    std::vector<double> coeffs(variables_.size(), 0.0);
    const auto column = static_cast<std::size_t>(it - variables_.begin());
    // x >= c is stored as -x <= -c.
    coeffs[column] = less_equal ? 1.0 : -1.0;
    std::string name = std::string(kInlinePredicatePrefix) + std::to_string(inline_.size());
    inline_.emplace_back(name, std::move(coeffs), less_equal ? value : -value);
    return predicate(std::move(name));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::span<const std::string> variables_;
  std::vector<LinearPredicate> inline_;
};

}  // namespace

ParsedFormula parse_formula(std::string_view text, std::span<const std::string> variables) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError("empty requirement", 0, {"formula"});
  }
  PredicateMap layout{std::vector<std::string>(variables.begin(), variables.end())};  // uniqueness
  (void)layout;
  return Parser(text, variables).run();
}

}  // namespace falsify
