#include "output.hpp"

#include "falsify/stl.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace falsify::cli {

using nlohmann::json;

namespace {

std::string number_text(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_number(const std::string& text) {
  if (text == "inf") return kInfinity;
  if (text == "-inf") return -kInfinity;
  if (text == "nan") return std::nan("");
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ValidationError("not a number: '" + text + "'");
  return v;
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return number_text(v);
}

double number_from(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>());
  throw ValidationError("expected a number in results JSON");
}

json sample_json(const std::vector<double>& sample) {
  json arr = json::array();
  for (double v : sample) arr.push_back(number_json(v));
  return arr;
}

std::vector<double> sample_from(const json& arr) {
  std::vector<double> out;
  for (const auto& v : arr) out.push_back(number_from(v));
  return out;
}

json evaluation_json(const Evaluation& e) {
  return json{{"sample", sample_json(e.sample)}, {"robustness", number_json(e.robustness)}};
}

Evaluation evaluation_from(const json& v) {
  return Evaluation{sample_from(v.at("sample")), number_from(v.at("robustness"))};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RunResult>& results) {
  std::size_t dim = 0;
  for (const auto& r : results) {
    if (!r.history.empty()) {
      dim = r.history.front().sample.size();
      break;
    }
  }
  out << "run_index,iteration";
  for (std::size_t i = 0; i < dim; ++i) out << ",sample_" << i;
  out << ",robustness\n";
  for (std::size_t run = 0; run < results.size(); ++run) {
    const auto& h = results[run].history;
    for (std::size_t it = 0; it < h.size(); ++it) {
      out << run << ',' << it;
      for (double v : h[it].sample) out << ',' << number_text(v);
      out << ',' << number_text(h[it].robustness) << '\n';
    }
  }
}

void write_json(std::ostream& out, const std::vector<RunResult>& results) {
  json doc = json::array();
  for (std::size_t run = 0; run < results.size(); ++run) {
    const auto& r = results[run];
    json history = json::array();
    for (const auto& e : r.history) history.push_back(evaluation_json(e));
    json failures = json::array();
    for (const auto& f : r.failures) failures.push_back(json{{"sample", sample_json(f.sample)}, {"message", f.message}});
    doc.push_back(json{
        {"run_index", run},
        {"history", std::move(history)},
        {"best", r.best ? evaluation_json(*r.best) : json(nullptr)},
        {"run_time", r.run_time},
        {"falsified", r.falsified},
        {"aborted", r.aborted},
        {"failures", std::move(failures)},
    });
  }
  out << doc.dump(2) << '\n';
}

std::vector<std::vector<Evaluation>> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("results CSV is empty");
  const auto header = split(line, ',');
  if (header.size() < 3 || header[0] != "run_index" || header[1] != "iteration" || header.back() != "robustness") {
    throw ValidationError("results CSV has an unexpected header: " + line);
  }
  const std::size_t dim = header.size() - 3;
  for (std::size_t i = 0; i < dim; ++i) {
    if (header[2 + i] != "sample_" + std::to_string(i)) throw ValidationError("results CSV header column " + header[2 + i]);
  }
  std::vector<std::vector<Evaluation>> runs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw ValidationError("results CSV row has the wrong width: " + line);
    const auto run = static_cast<std::size_t>(parse_number(cells[0]));
    const auto iteration = static_cast<std::size_t>(parse_number(cells[1]));
    if (run >= runs.size()) runs.resize(run + 1);
    if (iteration != runs[run].size()) throw ValidationError("results CSV rows out of order: " + line);
    Evaluation e;
    for (std::size_t i = 0; i < dim; ++i) e.sample.push_back(parse_number(cells[2 + i]));
    e.robustness = parse_number(cells.back());
    runs[run].push_back(std::move(e));
  }
  return runs;
}

std::vector<RunResult> read_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("results JSON is malformed: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("results JSON must be an array");
  std::vector<RunResult> out;
  try {
    for (const auto& rec : doc) {
      RunResult r;
      for (const auto& e : rec.at("history")) r.history.push_back(evaluation_from(e));
      if (!rec.at("best").is_null()) r.best = evaluation_from(rec.at("best"));
      r.run_time = rec.at("run_time").get<double>();
      r.falsified = rec.at("falsified").get<bool>();
      r.aborted = rec.at("aborted").get<bool>();
      for (const auto& f : rec.at("failures")) {
        r.failures.push_back(Failure{sample_from(f.at("sample")), f.at("message").get<std::string>()});
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("results JSON record is malformed: ") + e.what());
  }
  return out;
}

}  // namespace falsify::cli
