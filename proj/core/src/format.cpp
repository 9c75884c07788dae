#include "falsify/stl.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace falsify {

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string bound_text(const std::optional<TimeBound>& b) {
  if (!b) return "";
  return "[" + format_real(b->lower) + ", " + format_real(b->upper) + "]";
}

struct Formatter {
  std::string operator()(const ast::Predicate& p) const { return p.name; }
  std::string operator()(const ast::Not& n) const { return "not (" + format_formula(*n.child) + ")"; }
  std::string operator()(const ast::Next& n) const { return "next (" + format_formula(*n.child) + ")"; }
  std::string operator()(const ast::And& n) const { return binary(n, "and"); }
  std::string operator()(const ast::Or& n) const { return binary(n, "or"); }
  std::string operator()(const ast::Implies& n) const { return binary(n, "->"); }
  std::string operator()(const ast::Eventually& n) const {
    return "eventually" + bound_text(n.bound) + " (" + format_formula(*n.child) + ")";
  }
  std::string operator()(const ast::Always& n) const {
    return "always" + bound_text(n.bound) + " (" + format_formula(*n.child) + ")";
  }
  std::string operator()(const ast::Until& n) const {
    return binary(n, "until" + bound_text(n.bound));
  }

  template <class T>
  static std::string binary(const T& n, const std::string& op) {
    return "(" + format_formula(*n.left) + " " + op + " " + format_formula(*n.right) + ")";
  }
};

}  // namespace

std::string format_formula(const Formula& f) { return std::visit(Formatter{}, f.node); }

}  // namespace falsify
