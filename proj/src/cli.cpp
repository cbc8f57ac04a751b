#include "tsd/cli.hpp"

#include "tsd/bias.hpp"
#include "tsd/bounds.hpp"
#include "tsd/charfn.hpp"
#include "tsd/distance.hpp"
#include "tsd/errors.hpp"
#include "tsd/inversion.hpp"
#include "tsd/kernels.hpp"
#include "tsd/params_io.hpp"
#include "tsd/stein.hpp"
#include "tsd/verify.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <iostream>
#include <optional>

namespace tsd {

namespace {

struct Globals {
  std::uint64_t seed = 42;
  int threads = 0;
  std::string output;
  std::string config;
};

struct Context {
  std::string command;
  Json config;
  std::uint64_t seed = 42;
  std::string output;
  std::string timestamp;
};

std::string timestamp_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Inline JSON, or a path to a JSON file (optionally prefixed with @).
Json json_arg(const std::string& text, const std::string& what) {
  if (text.empty()) throw ConfigError("missing --" + what);
  if (text.front() == '{') return parse_json(text);
  return read_json_file(text.front() == '@' ? text.substr(1) : text);
}

template <class F>
auto as_config_error(F make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Json option_value(const CLI::Option* opt) {
  auto one = [](const std::string& s) -> Json {
    if (s.empty()) return nullptr;
    try {
      auto j = Json::parse(s);
      if (j.is_number() || j.is_object() || j.is_boolean()) return j;
    } catch (const Json::exception&) {
    }
    return s;
  };
  const auto& res = opt->results();
  if (res.empty()) return one(opt->get_default_str());
  if (res.size() == 1 && opt->get_expected_max() <= 1) return one(res.front());
  Json arr = Json::array();
  for (const auto& s : res) arr.push_back(one(s));
  return arr;
}

std::string option_key(const CLI::Option* opt) {
  return opt->get_lnames().empty() ? opt->get_name(false, false) : opt->get_lnames().front();
}

bool echoed(const CLI::Option* opt) {
  const auto key = option_key(opt);
  return key != "help" && key != "config" && key != "output" && key != "threads";
}

std::vector<CLI::App*> active_chain(CLI::App& app) {
  std::vector<CLI::App*> chain{&app};
  for (CLI::App* cur = &app;;) {
    const auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
    chain.push_back(cur);
  }
  return chain;
}

std::vector<std::string> to_inputs(const Json& v) {
  auto scalar = [](const Json& x) -> std::string {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_object()) return x.dump();
    if (x.is_number_float()) return dump(x);
    return x.dump();
  };
  std::vector<std::string> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(scalar(x));
  } else {
    out.push_back(scalar(v));
  }
  return out;
}

// Applies a JSON config file to the options of the active command chain. Keys name
// options (without dashes); flags given on the command line take precedence.
void apply_config(const std::vector<CLI::App*>& chain, const std::string& path) {
  const Json cfg = read_json_file(path);
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& item : cfg.items()) {
    const auto& key = item.key();
    if (key == "config" || key == "help") throw ConfigError("key '" + key + "' is not allowed in a config file");
    CLI::Option* opt = nullptr;
    for (auto it = chain.rbegin(); it != chain.rend() && !opt; ++it) {
      opt = (*it)->get_option_no_throw("--" + key);
      if (!opt) opt = (*it)->get_option_no_throw(key);
    }
    if (!opt) throw ConfigError("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    try {
      for (const auto& s : to_inputs(item.value())) opt->add_result(s);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

Json effective_config(const std::vector<CLI::App*>& chain) {
  Json cfg = Json::object();
  for (const CLI::App* app : chain)
    for (const CLI::Option* opt : app->get_options())
      if (echoed(opt)) cfg[option_key(opt)] = option_value(opt);
  return cfg;
}

Json header(const Context& ctx) {
  return {{"command", ctx.command}, {"config", ctx.config}, {"seed", ctx.seed}, {"timestamp", ctx.timestamp}};
}

std::string target(const Context& ctx, const std::string& fallback) {
  return ctx.output.empty() ? output_path(fallback).string() : output_path(ctx.output).string();
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  write_atomic(path, text);
}

void emit_json(const Context& ctx, const std::string& fallback, const Json& report) {
  emit(target(ctx, fallback), dump(report) + "\n");
}

// Tables go to the output path; the config and any scalar results go to a JSON
// sidecar next to it.
void emit_table(const Context& ctx, const std::string& fallback, const std::string& csv, Json meta) {
  const auto path = target(ctx, fallback);
  if (path == "-") {
    emit(path, csv);
    return;
  }
  write_atomic(path + ".json", dump(meta) + "\n");
  write_atomic(path, csv);
}

TsdParams tsd_arg(const std::string& text, const std::string& what) {
  return tsd_params_from_json(json_arg(text, what));
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw ConfigError("--points must be positive");
  if (points == 1) return {lo};
  if (!(hi > lo)) throw ConfigError("--hi must exceed --lo");
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return xs;
}

// Law selected by --params (with --n for the compound-Poisson approximant) or --stable.
struct LawOptions {
  std::string params;
  std::string stable;
  int n = 0;

  void add(CLI::App* app) {
    app->add_option("--params", params, "TSD parameters: inline JSON or a file path");
    app->add_option("--stable", stable, "stable parameters {m1, m2, alpha} instead of --params");
    app->add_option("--n", n, "use the compound-Poisson approximant X_n")->check(CLI::NonNegativeNumber);
  }

  CharFn charfn() const {
    if (!stable.empty()) {
      if (!params.empty() || n > 0) throw ConfigError("--stable excludes --params and --n");
      return CharFn::stable(stable_params_from_json(json_arg(stable, "stable")));
    }
    const auto p = tsd_arg(params, "params");
    return n > 0 ? CharFn::compound_poisson(p, n) : CharFn::tempered(p);
  }
};

struct GridOptions {
  std::optional<double> lo;
  std::optional<double> hi;
  int points = 201;
  std::vector<double> at;

  void add(CLI::App* app, const std::string& what) {
    app->add_option("--lo", lo, "grid start (default: effective support)");
    app->add_option("--hi", hi, "grid end (default: effective support)");
    app->add_option("--points", points, "grid size")->capture_default_str();
    app->add_option("--at", at, "explicit " + what + " values instead of a grid");
  }

  std::vector<double> values(double default_lo, double default_hi) const {
    if (!at.empty()) return at;
    return linspace(lo.value_or(default_lo), hi.value_or(default_hi), points);
  }
};

std::string csv_rows(const std::vector<std::string>& header, const std::vector<double>& a,
                     const std::vector<double>& b) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < a.size(); ++i) rows.push_back({a[i], b[i]});
  return to_csv(header, rows);
}

int cmd_cumulants(const Context& ctx, const std::string& params, int count) {
  const auto p = tsd_arg(params, "params");
  if (count < 1) throw ConfigError("--count must be positive");
  Json report = header(ctx);
  report["params"] = to_json(p);
  report["cumulants"] = to_json(cumulants(p, count));
  report["quadrature"] = to_json(cumulants(p, count, CumulantSource::quadrature));
  emit_json(ctx, "cumulants.json", report);
  return 0;
}

int cmd_cf(const Context& ctx, const LawOptions& law, const GridOptions& grid) {
  const auto cf = law.charfn();
  const auto zs = grid.values(-10.0, 10.0);
  std::vector<std::vector<double>> rows;
  for (double z : zs) {
    const complex v = cf(z);
    rows.push_back({z, v.real(), v.imag()});
  }
  Json meta = header(ctx);
  meta["kind"] = to_string(cf.kind());
  emit_table(ctx, "cf.csv", to_csv({"z", "re", "im"}, rows), meta);
  return 0;
}

int cmd_density_cdf(const Context& ctx, const LawOptions& law_opts, const GridOptions& grid, bool cdf) {
  const auto cf = law_opts.charfn();
  const auto law = make_law(cf);
  const auto xs = grid.values(law.lo(), law.hi());
  std::vector<double> values;
  if (cdf) {
    values = cdf_on_grid(law, xs);
  } else {
    values.resize(xs.size());
    for_each_index(xs.size(), [&](std::size_t i) { values[i] = law.pdf(xs[i]); }, Exec::parallel);
  }
  Json meta = header(ctx);
  meta["kind"] = to_string(cf.kind());
  meta["support"] = {law.lo(), law.hi()};
  Json atoms = Json::array();
  for (const auto& a : law.atoms()) atoms.push_back({{"location", a.location}, {"mass", a.mass}});
  meta["atoms"] = atoms;
  const std::string name = cdf ? "cdf" : "density";
  emit_table(ctx, name + ".csv", csv_rows({"x", cdf ? "cdf" : "pdf"}, xs, values), meta);
  return 0;
}

int cmd_sample(const Context& ctx, const std::string& params, int n, std::size_t size, bool binary) {
  const auto p = tsd_arg(params, "params");
  if (size == 0) throw ConfigError("--size must be positive");
  const auto batch = n > 0 ? sample_cpd_chunked(p, n, size, ctx.seed, 0) : sample_tempered_chunked(p, size, ctx.seed, 0);
  std::string out;
  if (binary) {
    out.resize(batch.values.size() * sizeof(double));
    for (std::size_t i = 0; i < batch.values.size(); ++i) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, &batch.values[i], sizeof bits);
      for (int k = 0; k < 8; ++k) out[i * 8 + static_cast<std::size_t>(k)] = static_cast<char>((bits >> (8 * k)) & 0xff);
    }
  } else {
    char buf[32];
    for (double v : batch.values) {
      std::snprintf(buf, sizeof buf, "%.17g\n", v);
      out += buf;
    }
  }
  Json meta = header(ctx);
  meta["law"] = batch.law;
  meta["size"] = batch.values.size();
  meta["truncation_bias"] = batch.truncation_bias;
  meta["format"] = binary ? "float64-le" : "text";
  emit_table(ctx, binary ? "sample.bin" : "sample.txt", out, meta);
  return 0;
}

int cmd_bias(const Context& ctx, const std::string& params) {
  const auto p = tsd_arg(params, "params");
  const BiasDistribution law(p);
  std::vector<std::vector<double>> rows;
  for (double u : law.nodes()) rows.push_back({u, law.pdf(u), law.cdf(u)});
  Json meta = header(ctx);
  meta["params"] = to_json(p);
  Json moments = Json::array();
  for (int n = 1; n <= 4; ++n)
    moments.push_back({{"n", n}, {"closed_form", bias_moment(p, n)}, {"quadrature", bias_moment_quadrature(p, n)}});
  meta["moments"] = moments;
  meta["mean_abs"] = {{"cumulant_expression", mean_abs_bias(p)}, {"quadrature", mean_abs_bias_quadrature(p)}};
  meta["grid_mass"] = law.grid_mass();
  emit_table(ctx, "bias.csv", to_csv({"u", "pdf", "cdf"}, rows), meta);
  return 0;
}

int cmd_stein(const Context& ctx, const std::string& params, const std::string& h_id, const std::vector<double>& xs) {
  const auto p = tsd_arg(params, "params");
  const auto h = as_config_error([&] { return make_test_function(h_id); });
  Json report = header(ctx);
  report["params"] = to_json(p);
  report["h"] = h.id();
  report["identity_residual"] = stein_identity_residual(p, h);
  const SteinSolution f(p, h);
  const double eh = expectation(make_law(CharFn::tempered(p)), h).value;
  Json rows = Json::array();
  for (double x : xs) {
    const auto af = stein_apply(p, [&](double y) { return f(y); }, x, 1e-8);
    rows.push_back({{"x", x}, {"f", f(x)}, {"Af", af.value}, {"h_minus_Eh", h(x) - eh},
                    {"residual", std::abs(af.value - (h(x) - eh))}});
  }
  report["E_h"] = eh;
  report["solution"] = rows;
  report["derivative_bounds"] = {to_json(verify_derivative_bounds(f, 0)), to_json(verify_derivative_bounds(f, 1))};
  emit_json(ctx, "stein.json", report);
  return 0;
}

struct DistanceOptions {
  std::string a;
  int a_n = 0;
  std::string b;
  std::string b_stable;
  double b_normal = 0.0;
  std::string metric = "kolmogorov";
  std::size_t size = 100000;
};

int cmd_distance(const Context& ctx, const DistanceOptions& o) {
  const auto a = tsd_arg(o.a, "a");
  const int sources = !o.b.empty() + !o.b_stable.empty() + (o.b_normal > 0.0);
  if (sources != 1) throw ConfigError("give exactly one of --b, --b-stable, --b-normal");
  std::optional<TsdParams> b;
  CharFn cf_b = CharFn::normal(1.0);
  if (!o.b.empty()) {
    b = tsd_arg(o.b, "b");
    cf_b = CharFn::tempered(*b);
  } else if (!o.b_stable.empty()) {
    cf_b = CharFn::stable(stable_params_from_json(json_arg(o.b_stable, "b-stable")));
  } else {
    cf_b = CharFn::normal(o.b_normal);
  }
  if (o.metric == "wasserstein1" && !b) throw ConfigError("wasserstein1 needs a TSD law for --b (sampled)");
  const CharFn cf_a = o.a_n > 0 ? CharFn::compound_poisson(a, o.a_n) : CharFn::tempered(a);

  DistanceEstimate d;
  if (o.metric == "kolmogorov") {
    d = kolmogorov(make_law(cf_a), make_law(cf_b));
  } else if (o.metric == "smooth_h3_lower") {
    d = smooth_h3_lower(make_law(cf_a), make_law(cf_b), smooth_dictionary());
  } else {
    const auto sa = o.a_n > 0 ? sample_cpd_chunked(a, o.a_n, o.size, ctx.seed, 1) : sample_tempered_chunked(a, o.size, ctx.seed, 1);
    const auto sb = sample_tempered_chunked(*b, o.size, ctx.seed, 2);
    d = wasserstein1_empirical(sa, sb);
  }
  Json report = header(ctx);
  report["distance"] = to_json(d);
  emit_json(ctx, "distance.json", report);
  return 0;
}

int cmd_bound_value(const Context& ctx, const std::string& fallback, Json result) {
  Json report = header(ctx);
  report["result"] = std::move(result);
  emit_json(ctx, fallback, report);
  return 0;
}

int cmd_sweep(const Context& ctx, const std::string& theorem_name, const std::string& csv_path) {
  const auto theorem = as_config_error([&] { return theorem_from_string(theorem_name); });
  const auto spec = default_sweep(theorem);
  const auto report = rate_sweep(spec, ctx.seed);
  Json out = header(ctx);
  out["report"] = to_json(report);
  std::vector<std::vector<double>> rows;
  for (const auto& pt : report.points)
    rows.push_back({pt.parameter, pt.distance.value, pt.distance.error, pt.bound, pt.failed ? 1.0 : 0.0});
  const auto json_path = target(ctx, "sweep_" + theorem_name + ".json");
  const auto table = csv_path.empty() ? (json_path == "-" ? std::string() : json_path + ".csv") : output_path(csv_path).string();
  if (!table.empty())
    write_atomic(table, to_csv({"parameter", "distance", "error", "bound", "failed"}, rows));
  emit(json_path, dump(out) + "\n");
  return report.complete ? 0 : 1;
}

std::vector<int> criteria_ids(const std::vector<std::string>& names) {
  std::vector<int> ids;
  if (names.empty()) throw ConfigError("verify needs 'all' or criterion numbers");
  for (const auto& s : names) {
    if (s == "all") {
      for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
      continue;
    }
    try {
      std::size_t used = 0;
      const int id = std::stoi(s, &used);
      if (used != s.size() || id < 1 || id > kCriteria) throw std::invalid_argument(s);
      ids.push_back(id);
    } catch (const std::exception&) {
      throw ConfigError("unknown criterion '" + s + "' (1.." + std::to_string(kCriteria) + " or all)");
    }
  }
  return ids;
}

int cmd_verify(const Context& ctx, const std::vector<std::string>& names, std::size_t samples) {
  const auto ids = criteria_ids(names);
  if (samples < 2) throw ConfigError("--samples must be at least 2");
  VerifyConfig config;
  config.seed = ctx.seed;
  config.samples = samples;
  std::vector<CriterionResult> results;
  for (int id : ids) {
    results.push_back(run_criterion(id, config));
    const auto& r = results.back();
    std::printf("criterion %d: %s  %s (%.1f s)\n", r.id, r.passed ? "PASS" : "FAIL", r.title.c_str(), r.seconds);
    if (r.details.contains("error")) std::printf("  error: %s\n", r.details["error"].get<std::string>().c_str());
    std::fflush(stdout);
  }
  Json report = verify_report(results, config, ctx.timestamp);
  report["command"] = ctx.command;
  report["config"] = ctx.config;
  emit_json(ctx, "verify.json", report);
  return report["passed"].get<bool>() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Tempered stable distributions: cumulants, inversion, sampling, Stein operators and bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "OpenMP threads (default: all logical cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--output", g.output, "output file ('-' for stdout); relative paths go under $TSD_OUTPUT_DIR");
  app.add_option("--config", g.config, "JSON file whose keys set the options of the chosen command");

  std::string params;
  int count = 4;
  auto* cumulants_cmd = app.add_subcommand("cumulants", "closed-form and quadrature cumulants");
  cumulants_cmd->add_option("--params", params, "TSD parameters: inline JSON or a file path");
  cumulants_cmd->add_option("--count", count, "number of cumulants")->capture_default_str();

  LawOptions law_opts;
  GridOptions grid;
  auto* cf_cmd = app.add_subcommand("cf", "characteristic function on a grid (CSV z, re, im)");
  law_opts.add(cf_cmd);
  grid.add(cf_cmd, "z");
  auto* density_cmd = app.add_subcommand("density", "density by Fourier inversion (CSV x, pdf)");
  law_opts.add(density_cmd);
  grid.add(density_cmd, "x");
  auto* cdf_cmd = app.add_subcommand("cdf", "distribution function by Fourier inversion (CSV x, cdf)");
  law_opts.add(cdf_cmd);
  grid.add(cdf_cmd, "x");

  std::size_t size = 1000;
  bool binary = false;
  int n = 0;
  auto* sample_cmd = app.add_subcommand("sample", "exact (or truncated) TSD draws, one per line");
  sample_cmd->add_option("--params", params, "TSD parameters: inline JSON or a file path");
  sample_cmd->add_option("--n", n, "draw the compound-Poisson approximant X_n")->check(CLI::NonNegativeNumber);
  sample_cmd->add_option("--size", size, "number of draws")->capture_default_str();
  sample_cmd->add_flag("--binary", binary, "little-endian float64 instead of text");

  auto* bias_cmd = app.add_subcommand("bias", "bias-law tabulation (CSV u, pdf, cdf) and moments");
  bias_cmd->add_option("--params", params, "TSD parameters: inline JSON or a file path");

  std::string h_id = "tanh";
  std::vector<double> xs{-2.0, 0.0, 2.0};
  auto* stein_cmd = app.add_subcommand("stein", "Stein identity, equation solution and derivative bounds");
  stein_cmd->add_option("--params", params, "TSD parameters: inline JSON or a file path");
  stein_cmd->add_option("--function", h_id, "test function id (tanh, sin:<w>, xexp, gauss, sin_gauss, ...)")->capture_default_str();
  stein_cmd->add_option("--x", xs, "points where A f_h = h - E h is checked")->capture_default_str();

  DistanceOptions dist;
  auto* distance_cmd = app.add_subcommand("distance", "distance between two laws");
  distance_cmd->add_option("--a", dist.a, "TSD parameters of law A");
  distance_cmd->add_option("--a-n", dist.a_n, "replace A by its compound-Poisson approximant X_n")->check(CLI::NonNegativeNumber);
  distance_cmd->add_option("--b", dist.b, "TSD parameters of law B");
  distance_cmd->add_option("--b-stable", dist.b_stable, "stable law B {m1, m2, alpha}");
  distance_cmd->add_option("--b-normal", dist.b_normal, "normal law B with this standard deviation");
  distance_cmd->add_option("--metric", dist.metric, "kolmogorov, wasserstein1 (sampled) or smooth_h3_lower")
      ->check(CLI::IsMember({"kolmogorov", "wasserstein1", "smooth_h3_lower"}))
      ->capture_default_str();
  distance_cmd->add_option("--size", dist.size, "samples per law for wasserstein1")->capture_default_str();

  auto* bounds_cmd = app.add_subcommand("bounds", "bounds and rate sweeps");
  bounds_cmd->require_subcommand(1);
  int bound_n = 1;
  double c = 1.0, c1 = 1.0, c2 = 1.0, lam = 1.0, m = 1.0, lam1 = 1.0, lam2 = 1.0;
  std::string a_text, b_text, theorem = "cpd", csv_path;
  auto* b_cpd = bounds_cmd->add_subcommand("cpd", "c (|C1| + |C2|)^{2/5} n^{-1/5}");
  b_cpd->add_option("--params", params, "TSD parameters");
  b_cpd->add_option("--n", bound_n, "approximant index")->check(CLI::PositiveNumber)->capture_default_str();
  b_cpd->add_option("--c", c, "constant")->capture_default_str();
  auto* b_stable = bounds_cmd->add_subcommand("stable", "C1 lambda1^{alpha+1/2} + C2 lambda2^{alpha+1/2}");
  b_stable->add_option("--params", params, "KoBol parameters");
  b_stable->add_option("--c1", c1, "constant of the right tail")->capture_default_str();
  b_stable->add_option("--c2", c2, "constant of the left tail")->capture_default_str();
  auto* b_h3 = bounds_cmd->add_subcommand("h3", "smooth bound between two TSDs (B is the reference)");
  b_h3->add_option("--a", a_text, "TSD parameters of A");
  b_h3->add_option("--b", b_text, "TSD parameters of the reference B");
  auto* b_normal = bounds_cmd->add_subcommand("normal", "smooth bound to N(0, lam^2)");
  b_normal->add_option("--params", params, "TSD parameters");
  b_normal->add_option("--lam", lam, "normal standard deviation")->check(CLI::PositiveNumber)->capture_default_str();
  auto* b_vg = bounds_cmd->add_subcommand("vg", "smooth bound to VG(m, lam1, lam2)");
  b_vg->add_option("--params", params, "TSD parameters");
  b_vg->add_option("--m", m, "VG intensity")->check(CLI::PositiveNumber)->capture_default_str();
  b_vg->add_option("--lam1", lam1, "VG right rate")->check(CLI::PositiveNumber)->capture_default_str();
  b_vg->add_option("--lam2", lam2, "VG left rate")->check(CLI::PositiveNumber)->capture_default_str();
  auto* b_sweep = bounds_cmd->add_subcommand("sweep", "rate sweep with log-log slope and verdicts");
  b_sweep->add_option("--theorem", theorem, "cpd, stable, continuity or h3")
      ->check(CLI::IsMember({"cpd", "stable", "continuity", "h3"}))
      ->capture_default_str();
  b_sweep->add_option("--csv", csv_path, "sweep table path (default: <output>.csv)");

  std::vector<std::string> criteria;
  std::size_t samples = 1000000;
  auto* verify_cmd = app.add_subcommand("verify", "acceptance criteria; exit 0 iff all pass");
  verify_cmd->add_option("criteria", criteria, "'all' or criterion numbers 1..13");
  verify_cmd->add_option("--samples", samples, "Monte Carlo size of the covariance check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Context ctx;
  std::vector<CLI::App*> chain;
  try {
    chain = active_chain(app);
    if (!g.config.empty()) apply_config(chain, g.config);
    if (g.threads > 0) omp_set_num_threads(g.threads);
    for (std::size_t i = 1; i < chain.size(); ++i) ctx.command += (i > 1 ? " " : "") + chain[i]->get_name();
    ctx.config = effective_config(chain);
    ctx.seed = g.seed;
    ctx.output = g.output;
    ctx.timestamp = timestamp_now();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    CLI::App* leaf = chain.back();
    if (leaf == cumulants_cmd) return cmd_cumulants(ctx, params, count);
    if (leaf == cf_cmd) return cmd_cf(ctx, law_opts, grid);
    if (leaf == density_cmd) return cmd_density_cdf(ctx, law_opts, grid, false);
    if (leaf == cdf_cmd) return cmd_density_cdf(ctx, law_opts, grid, true);
    if (leaf == sample_cmd) return cmd_sample(ctx, params, n, size, binary);
    if (leaf == bias_cmd) return cmd_bias(ctx, params);
    if (leaf == stein_cmd) return cmd_stein(ctx, params, h_id, xs);
    if (leaf == distance_cmd) return cmd_distance(ctx, dist);
    if (leaf == verify_cmd) return cmd_verify(ctx, criteria, samples);
    if (leaf == b_cpd) {
      const auto p = tsd_arg(params, "params");
      if (!(c > 0.0)) throw ConfigError("--c must be positive");
      return cmd_bound_value(ctx, "bound_cpd.json", {{"params", to_json(p)}, {"bound", bound_cpd(p, bound_n, c)}});
    }
    if (leaf == b_stable) {
      const auto p = tsd_arg(params, "params");
      const double bound = as_config_error([&] { return bound_stable(p, c1, c2); });
      Json result = {{"params", to_json(p)}, {"bound", bound}};
      try {
        result["M_alpha"] = M_alpha(p.alpha1());
      } catch (const DivergenceError& e) {
        result["M_alpha"] = nullptr;
        result["M_alpha_note"] = e.what();
      }
      return cmd_bound_value(ctx, "bound_stable.json", result);
    }
    if (leaf == b_h3) {
      const auto a = tsd_arg(a_text, "a");
      const auto b = tsd_arg(b_text, "b");
      Json result = {{"a", to_json(a)}, {"b", to_json(b)}, {"bound", bound_h3_two_tsd(a, b)},
                     {"cumulant_gap_at_least_0.1", cumulant_gap_at_least(a, b, 0.1)}};
      return cmd_bound_value(ctx, "bound_h3.json", result);
    }
    if (leaf == b_normal) {
      const auto p = tsd_arg(params, "params");
      return cmd_bound_value(ctx, "bound_normal.json", {{"params", to_json(p)}, {"bound", bound_normal_example(p, lam)}});
    }
    if (leaf == b_vg) {
      const auto p = tsd_arg(params, "params");
      return cmd_bound_value(ctx, "bound_vg.json", {{"params", to_json(p)}, {"bound", bound_vg_example(p, m, lam1, lam2)}});
    }
    if (leaf == b_sweep) return cmd_sweep(ctx, theorem, csv_path);
    std::cerr << "no command\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tsd
