#include "config.hpp"

#include "falsify/bench.hpp"

#include <fstream>
#include <set>

namespace falsify::cli {

using nlohmann::json;

namespace {

// Typed access to one JSON object. Every key must be listed in `allowed`;
// error messages carry the dotted path to the value.
class Section {
 public:
  Section(const json& value, std::string path, std::set<std::string> allowed) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) fail(path_.empty() ? "configuration" : path_, "must be an object");
    for (const auto& [key, _] : value_.items()) {
      if (!allowed.count(key)) fail(at(key), "is not a recognised key");
    }
  }

  bool has(const std::string& key) const { return value_.contains(key); }
  const json& raw(const std::string& key) const { return value_.at(key); }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config key '" + where + "' " + what);
  }

  std::string string(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_string()) fail(at(key), "must be a string");
    return v.get<std::string>();
  }
  double number(const std::string& key) const { return number_of(raw(key), at(key)); }
  std::uint64_t count(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(at(key), "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  bool boolean(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_boolean()) fail(at(key), "must be true or false");
    return v.get<bool>();
  }
  const json& array(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_array()) fail(at(key), "must be an array");
    return v;
  }
  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    const auto& arr = array(key);
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(number_of(arr[i], at(key) + "[" + std::to_string(i) + "]"));
    return out;
  }
  std::vector<std::string> strings(const std::string& key) const {
    std::vector<std::string> out;
    const auto& arr = array(key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) fail(at(key) + "[" + std::to_string(i) + "]", "must be a string");
      out.push_back(arr[i].get<std::string>());
    }
    return out;
  }
  Interval interval(const std::string& key) const { return interval_of(raw(key), at(key)); }

  static double number_of(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "must be a number");
    return v.get<double>();
  }
  static Interval interval_of(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) fail(where, "must be a [lower, upper] pair");
    return Interval{number_of(v[0], where + "[0]"), number_of(v[1], where + "[1]")};
  }

 private:
  const json& value_;
  std::string path_;
};

InterpolationKind parse_interpolation(const std::string& text, const std::string& where) {
  if (text == "piecewise-constant") return InterpolationKind::PiecewiseConstant;
  if (text == "piecewise-linear") return InterpolationKind::PiecewiseLinear;
  Section::fail(where, "must be 'piecewise-constant' or 'piecewise-linear'");
}

void apply_options(const json& doc, Options& o) {
  Section s(doc, "options",
            {"static_params", "signals", "iterations", "runs", "seed", "behavior", "interval", "error_policy",
             "parallel_runs"});
  if (s.has("static_params")) {
    o.static_params.clear();
    const auto& arr = s.array("static_params");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      o.static_params.push_back(Section::interval_of(arr[i], s.at("static_params") + "[" + std::to_string(i) + "]"));
    }
  }
  if (s.has("signals")) {
    o.signals.clear();
    const auto& arr = s.array("signals");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section sig(arr[i], s.at("signals") + "[" + std::to_string(i) + "]", {"bound", "control_points", "interpolator"});
      SignalOptions so;
      if (!sig.has("bound")) Section::fail(sig.at("bound"), "is required");
      so.bound = sig.interval("bound");
      if (sig.has("control_points")) so.control_points = sig.count("control_points");
      if (sig.has("interpolator")) so.interpolation = parse_interpolation(sig.string("interpolator"), sig.at("interpolator"));
      o.signals.push_back(so);
    }
  }
  if (s.has("iterations")) o.iterations = s.count("iterations");
  if (s.has("runs")) o.runs = s.count("runs");
  if (s.has("seed")) o.seed = s.count("seed");
  if (s.has("interval")) o.interval = s.interval("interval");
  if (s.has("parallel_runs")) o.parallel_runs = s.boolean("parallel_runs");
  if (s.has("behavior")) {
    const auto b = s.string("behavior");
    if (b == "falsification") {
      o.behavior = Behavior::Falsification;
    } else if (b == "minimization") {
      o.behavior = Behavior::Minimization;
    } else {
      Section::fail(s.at("behavior"), "must be 'falsification' or 'minimization'");
    }
  }
  if (s.has("error_policy")) {
    const auto p = s.string("error_policy");
    if (p == "abort-run") {
      o.error_policy = ErrorPolicy::AbortRun;
    } else if (p == "record-and-continue") {
      o.error_policy = ErrorPolicy::RecordAndContinue;
    } else {
      Section::fail(s.at("error_policy"), "must be 'abort-run' or 'record-and-continue'");
    }
  }
}

PredicateMap parse_predicates(const Section& top, std::vector<std::string> variables) {
  PredicateMap map(std::move(variables));
  if (!top.has("predicates")) return map;
  const auto& arr = top.array("predicates");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Section p(arr[i], "predicates[" + std::to_string(i) + "]", {"name", "coefficients", "bound", "variables"});
    for (const char* key : {"name", "coefficients", "bound"}) {
      if (!p.has(key)) Section::fail(p.at(key), "is required");
    }
    const auto name = p.string("name");
    if (name.rfind(kInlinePredicatePrefix, 0) == 0) {
      Section::fail(p.at("name"), "must not start with '" + std::string(kInlinePredicatePrefix) + "'");
    }
    auto coeffs = p.numbers("coefficients");
    if (p.has("variables")) {
      // Sparse form: coefficients apply to the listed variables only.
      const auto vars = p.strings("variables");
      if (vars.size() != coeffs.size()) Section::fail(p.at("variables"), "must have one entry per coefficient");
      std::vector<double> dense(map.dimension(), 0.0);
      for (std::size_t k = 0; k < vars.size(); ++k) {
        auto col = map.column(vars[k]);
        if (!col) Section::fail(p.at("variables"), "names unknown variable '" + vars[k] + "'");
        dense[*col] += coeffs[k];
      }
      coeffs = std::move(dense);
    }
    try {
      map.add(LinearPredicate(name, std::move(coeffs), p.number("bound")));
    } catch (const ValidationError& e) {
      Section::fail(p.at("name"), std::string("is invalid: ") + e.what());
    }
  }
  return map;
}

}  // namespace

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ConfigError("output format must be 'csv' or 'json', got '" + text + "'");
}

std::vector<std::string> optimizer_names() { return {"uniform-random", "simulated-annealing", "basinhopping"}; }

std::unique_ptr<Optimizer> make_optimizer(const std::string& name, const json& options) {
  const json& opts = options.is_null() ? json::object() : options;
  try {
    if (name == "uniform-random") {
      Section s(opts, "optimizer.options", {});
      return std::make_unique<UniformRandom>();
    }
    if (name == "simulated-annealing") {
      Section s(opts, "optimizer.options", {"initial_temperature", "cooling"});
      AnnealingOptions a;
      if (s.has("initial_temperature")) a.initial_temperature = s.number("initial_temperature");
      if (s.has("cooling")) a.cooling = s.number("cooling");
      return std::make_unique<SimulatedAnnealing>(a);
    }
    if (name == "basinhopping") {
      Section s(opts, "optimizer.options", {"hop_radius", "local_budget", "simplex_scale"});
      BasinhoppingOptions b;
      if (s.has("hop_radius")) b.hop_radius = s.number("hop_radius");
      if (s.has("local_budget")) b.local_budget = s.count("local_budget");
      if (s.has("simplex_scale")) b.simplex_scale = s.number("simplex_scale");
      return std::make_unique<Basinhopping>(b);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("config key 'optimizer.options' is invalid: ") + e.what());
  }
  throw ConfigError("config key 'optimizer.name' names unknown optimizer '" + name + "'");
}

RunConfig parse_config(const json& doc) {
  Section top(doc, "", {"spec", "variables", "predicates", "system", "options", "optimizer", "output"});
  RunConfig cfg;

  if (!top.has("system")) Section::fail("system", "is required");
  Section sys(top.raw("system"), "system", {"builtin", "extern"});
  std::optional<bench::BenchmarkSystem> builtin;
  if (sys.has("builtin") == sys.has("extern")) Section::fail("system", "must contain exactly one of 'builtin' or 'extern'");
  if (sys.has("builtin")) {
    const auto name = sys.string("builtin");
    try {
      builtin = bench::by_name(name);
    } catch (const ValidationError&) {
      Section::fail("system.builtin", "names unknown benchmark '" + name + "'");
    }
    cfg.system = BuiltinSystem{name};
  } else {
    Section ext(sys.raw("extern"), "system.extern", {"command", "timeout", "grid_points", "mode", "reentrant"});
    if (!ext.has("command")) Section::fail(ext.at("command"), "is required");
    ExternSystem es;
    es.command.argv = ext.strings("command");
    if (es.command.argv.empty()) Section::fail(ext.at("command"), "must not be empty");
    if (ext.has("timeout")) {
      const double t = ext.number("timeout");
      if (!(t > 0)) Section::fail(ext.at("timeout"), "must be positive");
      es.command.timeout = std::chrono::duration<double>(t);
    }
    if (ext.has("grid_points")) es.settings.grid_points = ext.count("grid_points");
    if (ext.has("reentrant")) es.settings.reentrant = ext.boolean("reentrant");
    if (ext.has("mode")) {
      const auto m = ext.string("mode");
      if (m == "interpolated") {
        es.settings.mode = BlackboxModel::InputMode::Interpolated;
      } else if (m == "control-points") {
        es.settings.mode = BlackboxModel::InputMode::ControlPoints;
      } else {
        Section::fail(ext.at("mode"), "must be 'interpolated' or 'control-points'");
      }
    }
    cfg.system = std::move(es);
  }

  if (builtin) cfg.options = builtin->options;
  if (top.has("options")) apply_options(top.raw("options"), cfg.options);

  if (top.has("spec")) {
    cfg.requirement = top.string("spec");
  } else if (builtin) {
    cfg.requirement = builtin->requirement;
  } else {
    Section::fail("spec", "is required");
  }

  std::vector<std::string> variables;
  if (top.has("variables")) {
    variables = top.strings("variables");
  } else if (builtin) {
    variables = builtin->predicates.variables();
  }
  try {
    if (top.has("predicates") || !builtin) {
      cfg.predicates = parse_predicates(top, variables);
    } else if (top.has("variables") && variables != builtin->predicates.variables()) {
      cfg.predicates = PredicateMap(variables);
    } else {
      cfg.predicates = builtin->predicates;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    Section::fail("variables", std::string("is invalid: ") + e.what());
  }

  if (top.has("optimizer")) {
    Section opt(top.raw("optimizer"), "optimizer", {"name", "options"});
    if (opt.has("name")) cfg.optimizer = opt.string("name");
    if (opt.has("options")) cfg.optimizer_options = opt.raw("options");
  }
  if (top.has("output")) {
    Section out(top.raw("output"), "output", {"path", "format"});
    if (out.has("path")) cfg.output_path = out.string("path");
    if (out.has("format")) {
      try {
        cfg.format = parse_format(out.string("format"));
      } catch (const ConfigError&) {
        Section::fail("output.format", "must be 'csv' or 'json'");
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  auto cfg = parse_config(doc);
  // Relative command paths such as "./sut.py" are taken relative to the config file.
  if (auto* ext = std::get_if<ExternSystem>(&cfg.system)) {
    auto& exe = ext->command.argv.front();
    if (exe.find('/') != std::string::npos && std::filesystem::path(exe).is_relative()) {
      exe = (path.parent_path() / exe).lexically_normal().string();
      if (exe.find('/') == std::string::npos) exe = "./" + exe;
    }
  }
  return cfg;
}

std::shared_ptr<Model> make_model(const RunConfig& config) {
  if (const auto* b = std::get_if<BuiltinSystem>(&config.system)) return bench::by_name(b->name).model;
  const auto& e = std::get<ExternSystem>(config.system);
  return std::make_shared<BlackboxModel>(extern_blackbox(e.command), e.settings);
}

}  // namespace falsify::cli
