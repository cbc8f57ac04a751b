#include "tsd/params_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace tsd {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::set<std::string>& needed) {
  if (!j.is_object()) throw ConfigError("parameters must be a JSON object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "'");
  for (const auto& key : needed)
    if (!j.contains(key)) throw ConfigError("missing key '" + key + "'");
}

double number(const Json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
  return v.get<double>();
}

template <class F>
auto checked(F make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep it a JSON number that still reads back as floating point.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write_value(std::ostringstream& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (const auto& item : j.items()) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << Json(item.key()).dump() << sep;
        write_value(out, item.value(), indent, depth + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << '[' << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad;
        write_value(out, v, indent, depth + 1);
      }
      out << nl << close_pad << ']';
      return;
    }
    case Json::value_t::number_float: out << format_double(j.get<double>()); return;
    default: out << j.dump(); return;
  }
}

}  // namespace

TsdParams tsd_params_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("parameters must be a JSON object");
  if (!j.contains("family")) {
    require_keys(j, {"m1", "alpha1", "lambda1", "m2", "alpha2", "lambda2"},
                 {"m1", "alpha1", "lambda1", "m2", "alpha2", "lambda2"});
    return checked([&] {
      return TsdParams(number(j, "m1"), number(j, "alpha1"), number(j, "lambda1"), number(j, "m2"),
                       number(j, "alpha2"), number(j, "lambda2"));
    });
  }
  if (!j.at("family").is_string()) throw ConfigError("'family' must be a string");
  const auto family = j.at("family").get<std::string>();
  if (family == "bgd") {
    require_keys(j, {"family", "m1", "lambda1", "m2", "lambda2"}, {"m1", "lambda1", "m2", "lambda2"});
    return checked([&] { return bgd(number(j, "m1"), number(j, "lambda1"), number(j, "m2"), number(j, "lambda2")); });
  }
  if (family == "vgd") {
    require_keys(j, {"family", "m", "lambda1", "lambda2"}, {"m", "lambda1", "lambda2"});
    return checked([&] { return vgd(number(j, "m"), number(j, "lambda1"), number(j, "lambda2")); });
  }
  if (family == "svgd") {
    require_keys(j, {"family", "m", "lambda"}, {"m", "lambda"});
    return checked([&] { return svgd(number(j, "m"), number(j, "lambda")); });
  }
  throw ConfigError("unknown family '" + family + "' (bgd, vgd, svgd)");
}

StableParams stable_params_from_json(const Json& j) {
  require_keys(j, {"m1", "m2", "alpha"}, {"m1", "m2", "alpha"});
  return checked([&] { return StableParams(number(j, "m1"), number(j, "m2"), number(j, "alpha")); });
}

Json to_json(const TsdParams& p) {
  return {{"m1", p.m1()},         {"alpha1", p.alpha1()}, {"lambda1", p.lambda1()},
          {"m2", p.m2()},         {"alpha2", p.alpha2()}, {"lambda2", p.lambda2()},
          {"family", to_string(p.family())}};
}

Json to_json(const StableParams& p) { return {{"m1", p.m1()}, {"m2", p.m2()}, {"alpha", p.alpha()}}; }

Json to_json(const CumulantVector& c) {
  Json j = Json::object();
  for (std::size_t k = 0; k < c.values.size(); ++k) j["C" + std::to_string(k + 1)] = c.values[k];
  j["source"] = c.source == CumulantSource::closed_form ? "closed_form" : "quadrature";
  return j;
}

Json to_json(const DistanceEstimate& d) {
  return {{"metric", to_string(d.metric)},
          {"value", d.value},
          {"error", d.error},
          {"location", d.location},
          {"method", d.method}};
}

Json to_json(const BoundReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    Json pt = {{"parameter", p.parameter}, {"params", p.params}, {"distance", to_json(p.distance)},
               {"bound", p.bound},         {"seed", p.seed},     {"failed", p.failed}};
    if (p.failed) pt["failure"] = p.failure;
    points.push_back(pt);
  }
  Json constants = Json::object();
  for (const auto& [k, v] : r.constants) constants[k] = v;
  Json verdicts = Json::object();
  for (const auto& [k, v] : r.verdicts) verdicts[k] = v;
  return {{"theorem", r.theorem},
          {"rate_form", r.rate_form},
          {"constants", constants},
          {"points", points},
          {"slope", r.slope},
          {"slope_se", r.slope_se},
          {"slope_ci95", {r.slope_ci_lo, r.slope_ci_hi}},
          {"verdicts", verdicts},
          {"complete", r.complete},
          {"notes", r.notes}};
}

Json to_json(const DerivativeBoundReport& r) {
  return {{"order", r.order},
          {"observed_max", r.observed_max},
          {"bound", r.bound},
          {"lipschitz_ratio", r.lipschitz_ratio},
          {"lipschitz_bound", r.lipschitz_bound},
          {"slack", r.slack},
          {"passed", r.passed}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

std::string dump(const Json& j, int indent) {
  std::ostringstream out;
  write_value(out, j, indent, 0);
  return out.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into " + path.string() + ": " + ec.message());
  }
}

std::filesystem::path output_path(const std::string& name) {
  const char* dir = std::getenv("TSD_OUTPUT_DIR");
  std::filesystem::path p(name);
  if (dir && *dir && p.is_relative()) return std::filesystem::path(dir) / p;
  return p;
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += (i ? "," : "");
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace tsd
