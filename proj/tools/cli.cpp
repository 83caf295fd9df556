#include "cli.hpp"

#include <rodeo/engines.hpp>
#include <rodeo/experiments.hpp>
#include <rodeo/io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace rodeo::cli {

namespace {

using json = nlohmann::ordered_json;

//! Every setting a run can take. Values come from the --config file first
//! and are then overridden by explicit flags.
struct Settings
{
  std::optional<std::string> data;
  std::optional<std::vector<double>> point;
  std::optional<std::vector<std::vector<double>>> points;
  std::optional<double> beta;
  std::optional<double> h0;
  std::optional<double> c_n;
  std::optional<std::string> sigma;
  std::optional<std::size_t> sigma_pairs;
  std::optional<std::string> kernel;
  std::optional<std::size_t> max_steps;
  std::optional<std::string> threshold;
  std::optional<double> rho_n;
  std::optional<double> min_bandwidth_floor;
  std::optional<std::string> smoother;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> replicates;
  std::optional<std::string> name;
  std::optional<std::size_t> n;
  std::optional<std::size_t> d;
  std::optional<double> noise;
  std::optional<std::string> engine;
  std::optional<std::string> test_points;
  std::optional<std::vector<std::size_t>> ns;
  std::optional<std::string> out_trace;
  std::optional<std::string> out_result;
};

template <typename T>
void overlay(std::optional<T>& target, const std::optional<T>& source)
{
  if (source)
    target = source;
}

void overlay(Settings& s, const Settings& f)
{
  overlay(s.data, f.data);
  overlay(s.point, f.point);
  overlay(s.points, f.points);
  overlay(s.beta, f.beta);
  overlay(s.h0, f.h0);
  overlay(s.c_n, f.c_n);
  overlay(s.sigma, f.sigma);
  overlay(s.sigma_pairs, f.sigma_pairs);
  overlay(s.kernel, f.kernel);
  overlay(s.max_steps, f.max_steps);
  overlay(s.threshold, f.threshold);
  overlay(s.rho_n, f.rho_n);
  overlay(s.min_bandwidth_floor, f.min_bandwidth_floor);
  overlay(s.smoother, f.smoother);
  overlay(s.seed, f.seed);
  overlay(s.k, f.k);
  overlay(s.steps, f.steps);
  overlay(s.replicates, f.replicates);
  overlay(s.name, f.name);
  overlay(s.n, f.n);
  overlay(s.d, f.d);
  overlay(s.noise, f.noise);
  overlay(s.engine, f.engine);
  overlay(s.test_points, f.test_points);
  overlay(s.ns, f.ns);
  overlay(s.out_trace, f.out_trace);
  overlay(s.out_result, f.out_result);
}

template <typename T>
void read_key(const json& doc, const char* key, std::optional<T>& target)
{
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null())
    return;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number())
        throw ConfigError(std::string("config key '") + key + "' must be a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_unsigned())
        throw ConfigError(std::string("config key '") + key + "' must be a nonnegative integer");
    }
    target = it->template get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

Settings read_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object())
    throw ConfigError("config must be a JSON object");

  static const std::vector<std::string> known{ "data",  "point",     "points",      "beta",      "h0",
                                               "c_n",   "sigma",     "sigma_pairs", "kernel",    "max_steps",
                                               "threshold", "rho_n", "min_bandwidth_floor", "smoother", "seed",
                                               "k",     "steps",     "replicates",  "name",      "n",
                                               "d",     "noise",     "engine",      "test_points", "ns",
                                               "out_trace", "out_result" };
  for (const auto& item : doc.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw ConfigError("unknown config key '" + item.key() + "'");

  Settings s;
  read_key(doc, "data", s.data);
  read_key(doc, "point", s.point);
  read_key(doc, "points", s.points);
  read_key(doc, "beta", s.beta);
  read_key(doc, "h0", s.h0);
  read_key(doc, "c_n", s.c_n);
  read_key(doc, "sigma", s.sigma);
  read_key(doc, "sigma_pairs", s.sigma_pairs);
  read_key(doc, "kernel", s.kernel);
  read_key(doc, "max_steps", s.max_steps);
  read_key(doc, "threshold", s.threshold);
  read_key(doc, "rho_n", s.rho_n);
  read_key(doc, "min_bandwidth_floor", s.min_bandwidth_floor);
  read_key(doc, "smoother", s.smoother);
  read_key(doc, "seed", s.seed);
  read_key(doc, "k", s.k);
  read_key(doc, "steps", s.steps);
  read_key(doc, "replicates", s.replicates);
  read_key(doc, "name", s.name);
  read_key(doc, "n", s.n);
  read_key(doc, "d", s.d);
  read_key(doc, "noise", s.noise);
  read_key(doc, "engine", s.engine);
  read_key(doc, "test_points", s.test_points);
  read_key(doc, "ns", s.ns);
  read_key(doc, "out_trace", s.out_trace);
  read_key(doc, "out_result", s.out_result);
  return s;
}

// --- settings -> library types -------------------------------------------------

SigmaMode parse_sigma(const std::string& text, std::optional<std::size_t> pairs)
{
  if (text == "rice")
    return SigmaMode::rice(pairs);
  if (text == "median")
    return SigmaMode::median(pairs);
  if (text == "paper-literal")
    return SigmaMode::paper_literal(pairs);
  const std::string prefix = "known:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string value = text.substr(prefix.size());
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size())
      throw ConfigError("cannot parse sigma value '" + value + "'");
    return SigmaMode::known(v);
  }
  throw ConfigError("sigma must be known:VALUE, rice, median or paper-literal, got '" + text + "'");
}

std::string sigma_text(const SigmaMode& mode)
{
  switch (mode.kind) {
    case SigmaMode::Kind::known:
      return "known:" + format_double(mode.value);
    case SigmaMode::Kind::rice:
      return "rice";
    case SigmaMode::Kind::median:
      return "median";
    case SigmaMode::Kind::paper_literal:
      return "paper-literal";
  }
  return {};
}

SmootherDegree parse_smoother(const std::string& text)
{
  if (text == "local-linear")
    return SmootherDegree::local_linear;
  if (text == "local-constant")
    return SmootherDegree::local_constant;
  throw ConfigError("smoother must be local-linear or local-constant, got '" + text + "'");
}

std::string smoother_text(SmootherDegree degree)
{
  return degree == SmootherDegree::local_linear ? "local-linear" : "local-constant";
}

RodeoConfig build_config(const Settings& s)
{
  RodeoConfig cfg;
  if (s.beta)
    cfg.beta = *s.beta;
  if (s.h0)
    cfg.h0 = *s.h0;
  if (s.c_n)
    cfg.c_n = *s.c_n;
  cfg.sigma = parse_sigma(s.sigma.value_or("rice"), s.sigma_pairs);
  if (s.kernel)
    cfg.kernel = kernel_from_name(*s.kernel);
  cfg.max_steps = s.max_steps;
  if (s.threshold) {
    if (*s.threshold == "hard")
      cfg.threshold = ThresholdMode::hard();
    else if (*s.threshold == "modified")
      cfg.threshold = ThresholdMode::modified(s.rho_n);
    else
      throw ConfigError("threshold must be hard or modified, got '" + *s.threshold + "'");
  }
  if (s.rho_n && cfg.threshold.kind != ThresholdMode::Kind::modified)
    throw ConfigError("rho_n only applies to the modified threshold");
  cfg.min_bandwidth_floor = s.min_bandwidth_floor;
  if (s.smoother)
    cfg.degree = parse_smoother(*s.smoother);
  cfg.validate();
  return cfg;
}

//! The resolved configuration, keyed exactly like a --config file.
json echo_config(const RodeoConfig& cfg)
{
  json out;
  out["beta"] = cfg.beta;
  out["h0"] = cfg.h0;
  out["c_n"] = cfg.c_n;
  out["sigma"] = sigma_text(cfg.sigma);
  if (cfg.sigma.kind != SigmaMode::Kind::known)
    out["sigma_pairs"] = *cfg.sigma.pairs;
  out["kernel"] = std::string(kernel_name(cfg.kernel.family));
  out["max_steps"] = *cfg.max_steps;
  out["threshold"] = cfg.threshold.kind == ThresholdMode::Kind::hard ? "hard" : "modified";
  if (cfg.threshold.rho_n)
    out["rho_n"] = *cfg.threshold.rho_n;
  out["min_bandwidth_floor"] = *cfg.min_bandwidth_floor;
  out["smoother"] = smoother_text(cfg.degree);
  return out;
}

json to_json(const Vector& v)
{
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    arr.push_back(v[i]);
  return arr;
}

Dataset require_data(const Settings& s)
{
  if (!s.data)
    throw ConfigError("--data is required");
  return load_dataset(*s.data);
}

Vector require_point(const Settings& s, const Dataset& data)
{
  if (!s.point)
    throw ConfigError("--point is required");
  if (s.point->size() != data.d())
    throw ConfigError("--point has " + std::to_string(s.point->size()) + " coordinates, data has d = " +
                      std::to_string(data.d()));
  return Eigen::Map<const Vector>(s.point->data(), static_cast<Eigen::Index>(s.point->size()));
}

//! Explicit `points`, else k rows of the data drawn without replacement.
Matrix evaluation_points(const Settings& s, const Dataset& data)
{
  const auto d = static_cast<Eigen::Index>(data.d());
  if (s.points) {
    if (s.points->empty())
      throw ConfigError("points must not be empty");
    Matrix pts(static_cast<Eigen::Index>(s.points->size()), d);
    for (std::size_t i = 0; i < s.points->size(); ++i) {
      const auto& row = (*s.points)[i];
      if (row.size() != data.d())
        throw ConfigError("every evaluation point needs d = " + std::to_string(data.d()) + " coordinates");
      for (Eigen::Index j = 0; j < d; ++j)
        pts(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)];
    }
    return pts;
  }
  const std::size_t k = s.k.value_or(std::min<std::size_t>(20, data.n()));
  if (k < 1 || k > data.n())
    throw ConfigError("k must lie in [1, n]");
  std::vector<std::size_t> order(data.n());
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::mt19937_64 rng(derive_seed(s.seed.value_or(0), streams::eval_points, 0));
  std::shuffle(order.begin(), order.end(), rng);
  Matrix pts(static_cast<Eigen::Index>(k), d);
  for (std::size_t i = 0; i < k; ++i)
    pts.row(static_cast<Eigen::Index>(i)) = data.X().row(static_cast<Eigen::Index>(order[i]));
  return pts;
}

json points_json(const Matrix& pts)
{
  json arr = json::array();
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    arr.push_back(to_json(pts.row(i).transpose()));
  return arr;
}

std::ofstream open_output(const std::string& path)
{
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write " + path);
  return out;
}

void emit_result(const Settings& s, const json& result, std::ostream& out)
{
  if (s.out_result) {
    auto file = open_output(*s.out_result);
    file << result.dump(2) << '\n';
  } else {
    out << result.dump(2) << '\n';
  }
}

//! Shortest round-trip form, always with a decimal point or exponent.
std::string printable(double value)
{
  std::string text = format_double(value);
  if (text.find_first_of(".eEn") == std::string::npos)
    text += ".0";
  return text;
}

// --- commands ------------------------------------------------------------------

int run_local(const Settings& s, bool soft, std::ostream& out)
{
  const Dataset data = require_data(s);
  const Vector x = require_point(s, data);
  const RodeoConfig cfg = build_config(s);
  const RodeoConfig resolved = cfg.resolved(data.n());

  RodeoResult res;
  try {
    res = soft ? rodeo_soft(data, x, resolved) : rodeo_hard(data, x, resolved);
  } catch (const RodeoFailure& e) {
    if (s.out_trace) {
      auto file = open_output(*s.out_trace);
      write_trace(file, e.partial_trace);
    }
    throw;
  }
  if (s.out_trace) {
    auto file = open_output(*s.out_trace);
    write_trace(file, res.trace);
  }

  json result;
  result["command"] = soft ? "rodeo-soft" : "rodeo-local";
  result["h_star"] = to_json(res.h_star);
  result["estimate"] = res.estimate;
  result["steps"] = res.steps_taken;
  result["sigma_used"] = res.sigma_used;
  if (soft)
    result["soft_correction"] = res.soft_correction;
  json config = echo_config(resolved);
  config["data"] = *s.data;
  config["point"] = *s.point;
  result["config"] = config;
  emit_result(s, result, out);
  return exit_ok;
}

int run_global(const Settings& s, std::ostream& out)
{
  const Dataset data = require_data(s);
  const Matrix pts = evaluation_points(s, data);
  const RodeoConfig resolved = build_config(s).resolved(data.n());
  const GlobalResult res = rodeo_global(data, pts, resolved);

  if (s.out_trace) {
    auto file = open_output(*s.out_trace);
    file << "t,j,T,lambda,trace_P,trace_PP,h_before,h_after,active_after\n";
    for (const auto& r : res.trace)
      file << r.t << ',' << (r.stat.j + 1) << ',' << format_double(r.stat.T) << ',' << format_double(r.stat.lambda)
           << ',' << format_double(r.stat.trace_P) << ',' << format_double(r.stat.trace_PP) << ','
           << format_double(r.h_before) << ',' << format_double(r.h_after) << ',' << (r.active_after ? 1 : 0)
           << '\n';
  }

  json result;
  result["command"] = "rodeo-global";
  result["h_star"] = to_json(res.h_star);
  result["estimate"] = to_json(res.estimates);
  result["steps"] = res.steps_taken;
  result["sigma_used"] = res.sigma_used;
  json config = echo_config(resolved);
  config["data"] = *s.data;
  config["points"] = points_json(pts);
  result["config"] = config;
  emit_result(s, result, out);
  return exit_ok;
}

int run_greedy(const Settings& s, std::ostream& out)
{
  const Dataset data = require_data(s);
  const Matrix pts = evaluation_points(s, data);
  const RodeoConfig resolved = build_config(s).resolved(data.n());
  const std::size_t steps = s.steps.value_or(*resolved.max_steps);
  const GreedyResult res = rodeo_greedy(data, pts, resolved, steps);

  if (s.out_trace) {
    auto file = open_output(*s.out_trace);
    file << "t,j,score,selected,h_before,h_after\n";
    for (const auto& step : res.steps)
      for (Eigen::Index j = 0; j < step.scores.size(); ++j) {
        const bool won = static_cast<std::size_t>(j) == step.winner;
        file << step.t << ',' << (j + 1) << ',' << format_double(step.scores[j]) << ',' << (won ? 1 : 0) << ','
             << format_double(won ? step.h_before : std::numeric_limits<double>::quiet_NaN()) << ','
             << format_double(won ? step.h_after : std::numeric_limits<double>::quiet_NaN()) << '\n';
      }
  }

  json order = json::array();
  for (std::size_t j : res.selection_order)
    order.push_back(j + 1);
  json result;
  result["command"] = "rodeo-greedy";
  result["h_star"] = to_json(res.h_star);
  result["selection_order"] = order;
  result["steps"] = res.steps.size();
  json config = echo_config(resolved);
  config["data"] = *s.data;
  config["points"] = points_json(pts);
  config["steps"] = steps;
  result["config"] = config;
  emit_result(s, result, out);
  return exit_ok;
}

int run_sigma(const Settings& s, std::ostream& out)
{
  const Dataset data = require_data(s);
  const SigmaMode mode = parse_sigma(s.sigma.value_or("rice"), s.sigma_pairs);
  out << printable(resolve_sigma(data, mode)) << '\n';
  return exit_ok;
}

ExampleSpec example_spec(const Settings& s)
{
  if (!s.name)
    throw ConfigError("--name is required");
  ExampleSpec spec = default_example(example_from_name(*s.name));
  if (s.n)
    spec.n = *s.n;
  if (s.d)
    spec.d = *s.d;
  if (s.noise)
    spec.sigma = *s.noise;
  spec.seed = s.seed.value_or(0);
  spec.validate();
  return spec;
}

TestPoints test_points(const Settings& s, std::size_t d, json& echo)
{
  const std::string text = s.test_points.value_or("center");
  echo = text;
  if (text == "center")
    return TestPoints::center(d);
  const std::string prefix = "random:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string count = text.substr(prefix.size());
    if (!count.empty() && std::all_of(count.begin(), count.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      const auto k = static_cast<std::size_t>(std::stoul(count));
      if (k >= 1)
        return TestPoints::random(k);
    }
  }
  throw ConfigError("test_points must be center or random:COUNT, got '" + text + "'");
}

int run_experiment(const Settings& s, std::ostream& out)
{
  const ExampleSpec spec = example_spec(s);
  const std::size_t replicates = s.replicates.value_or(10);
  if (replicates < 1)
    throw ConfigError("replicates must be at least 1");
  const RodeoConfig resolved = build_config(s).resolved(spec.n);
  const std::string engine = s.engine.value_or("hard");
  json points_echo;
  const TestPoints points = test_points(s, spec.d, points_echo);

  PointEngine run;
  if (engine == "hard")
    run = [&](const Dataset& data, const Vector& x) { return rodeo_hard(data, x, resolved).estimate; };
  else if (engine == "soft")
    run = [&](const Dataset& data, const Vector& x) { return rodeo_soft(data, x, resolved).estimate; };
  else if (engine == "loocv")
    run = [&](const Dataset& data, const Vector& x) {
      const double h = loocv_single_bandwidth(data, default_loocv_grid(), resolved.kernel).h_cv;
      return local_linear_fit(data, x, Vector::Constant(x.size(), h), resolved.kernel).mhat;
    };
  else
    throw ConfigError("engine must be hard, soft or loocv, got '" + engine + "'");

  const RiskSummary risk = pointwise_risk(run, spec, points, replicates);

  json result;
  result["command"] = "experiment";
  result["replicates"] = risk.replicates;
  result["failures"] = risk.failures;
  result["mean"] = risk.mean;
  result["median"] = risk.median;
  result["q25"] = risk.q25;
  result["q75"] = risk.q75;
  result["min"] = risk.min;
  result["max"] = risk.max;
  result["squared_errors"] = risk.errors;
  json config = echo_config(resolved);
  config["name"] = std::string(example_name(spec.name));
  config["n"] = spec.n;
  config["d"] = spec.d;
  config["noise"] = spec.sigma;
  config["seed"] = spec.seed;
  config["replicates"] = replicates;
  config["engine"] = engine;
  config["test_points"] = points_echo;
  result["config"] = config;
  emit_result(s, result, out);
  return exit_ok;
}

int run_scaling(const Settings& s, std::ostream& out)
{
  const std::vector<std::size_t> ns = s.ns.value_or(std::vector<std::size_t>{ 500, 2000, 8000 });
  const std::size_t replicates = s.replicates.value_or(20);
  const double noise = s.noise.value_or(0.5);
  if (!(noise >= 0.0))
    throw ConfigError("noise must be nonnegative");
  const std::uint64_t seed = s.seed.value_or(0);

  Settings known = s;
  known.sigma = "known:" + format_double(noise);
  const RodeoConfig cfg = build_config(known);
  const TheoryModel model = TheoryModel::first_squared(2, -2.0, 2.0);
  const ScalingCheck check = scaling_check(ns, model, noise, Vector::Zero(2), 0, replicates, cfg, seed);

  json result;
  result["command"] = "scaling-check";
  result["ns"] = check.ns;
  result["mean_log_h"] = check.mean_log_h;
  result["slope"] = check.slope;
  result["target_slope"] = -0.2;
  result["failures"] = check.failures;
  json config = echo_config(cfg.resolved(ns.back()));
  config.erase("max_steps");
  config.erase("sigma_pairs");
  if (cfg.max_steps)
    config["max_steps"] = *cfg.max_steps;
  config["ns"] = ns;
  config["replicates"] = replicates;
  config["noise"] = noise;
  config["seed"] = seed;
  result["config"] = config;
  emit_result(s, result, out);
  return exit_ok;
}

// --- option registration ---------------------------------------------------------

void add_engine_options(CLI::App* app, Settings& f)
{
  app->add_option("--beta", f.beta, "bandwidth shrink factor in (0, 1)");
  app->add_option("--h0", f.h0, "initial bandwidth");
  app->add_option("--c-n", f.c_n, "threshold constant c_n");
  app->add_option("--sigma", f.sigma, "known:VALUE, rice, median or paper-literal");
  app->add_option("--sigma-pairs", f.sigma_pairs, "nearest pairs used by the sigma estimators");
  app->add_option("--kernel", f.kernel, "gaussian or epanechnikov");
  app->add_option("--max-steps", f.max_steps, "step cap (default ceil(10 log n))");
  app->add_option("--threshold", f.threshold, "hard or modified");
  app->add_option("--rho-n", f.rho_n, "rho_n of the modified threshold");
  app->add_option("--min-bandwidth", f.min_bandwidth_floor, "bandwidth floor (default 1e-3 h0)");
  app->add_option("--smoother", f.smoother, "local-linear or local-constant");
}

} // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Rodeo bandwidth and variable selection for local linear regression", "rodeo" };
  app.require_subcommand(1);

  Settings flags;
  std::string config_path;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file with run settings");
    sub->add_option("--out-result", flags.out_result, "write the result JSON here instead of stdout");
  };

  auto* local = app.add_subcommand("rodeo-local", "hard-threshold rodeo at one point");
  auto* soft = app.add_subcommand("rodeo-soft", "soft-threshold rodeo at one point");
  for (auto* sub : { local, soft }) {
    add_common(sub);
    add_engine_options(sub, flags);
    sub->add_option("--data", flags.data, "dataset CSV");
    sub->add_option("--point", flags.point, "evaluation point, comma separated")->delimiter(',');
    sub->add_option("--out-trace", flags.out_trace, "write the trace CSV here");
  }

  auto* global = app.add_subcommand("rodeo-global", "one bandwidth vector for k evaluation points");
  auto* greedy = app.add_subcommand("rodeo-greedy", "greedy forward bandwidth selection");
  for (auto* sub : { global, greedy }) {
    add_common(sub);
    add_engine_options(sub, flags);
    sub->add_option("--data", flags.data, "dataset CSV");
    sub->add_option("--k", flags.k, "number of evaluation points sampled from the data (default min(n, 20))");
    sub->add_option("--seed", flags.seed, "seed for sampling evaluation points");
    sub->add_option("--out-trace", flags.out_trace, "write the trace CSV here");
  }
  greedy->add_option("--steps", flags.steps, "number of greedy steps (default max-steps)");

  auto* sigma = app.add_subcommand("sigma", "print the noise level estimate");
  sigma->add_option("--config", config_path, "JSON file with run settings");
  sigma->add_option("--data", flags.data, "dataset CSV");
  sigma->add_option("--sigma", flags.sigma, "known:VALUE, rice, median or paper-literal");
  sigma->add_option("--sigma-pairs", flags.sigma_pairs, "nearest pairs used by the estimator");

  auto* experiment = app.add_subcommand("experiment", "pointwise risk over simulated replicates");
  add_common(experiment);
  add_engine_options(experiment, flags);
  experiment->add_option("--name", flags.name, "quad2, cubesin, onedim or turlach");
  experiment->add_option("--replicates", flags.replicates, "number of replicates (default 10)");
  experiment->add_option("--seed", flags.seed, "base seed");
  experiment->add_option("--n", flags.n, "sample size");
  experiment->add_option("--d", flags.d, "dimension");
  experiment->add_option("--noise", flags.noise, "noise standard deviation of the simulated data");
  experiment->add_option("--engine", flags.engine, "hard, soft or loocv");
  experiment->add_option("--test-points", flags.test_points, "center or random:COUNT");

  auto* scaling = app.add_subcommand("scaling-check", "slope of log h* against log n for m = x1^2");
  add_common(scaling);
  add_engine_options(scaling, flags);
  scaling->add_option("--ns", flags.ns, "increasing sample sizes, comma separated")->delimiter(',');
  scaling->add_option("--replicates", flags.replicates, "replicates per sample size (default 20)");
  scaling->add_option("--seed", flags.seed, "base seed");
  scaling->add_option("--noise", flags.noise, "noise standard deviation (default 0.5)");
  // sigma is the known noise level here
  scaling->remove_option(scaling->get_option("--sigma"));
  scaling->remove_option(scaling->get_option("--sigma-pairs"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    Settings s;
    if (!config_path.empty())
      s = read_config_file(config_path);
    overlay(s, flags);

    if (local->parsed())
      return run_local(s, false, out);
    if (soft->parsed())
      return run_local(s, true, out);
    if (global->parsed())
      return run_global(s, out);
    if (greedy->parsed())
      return run_greedy(s, out);
    if (sigma->parsed())
      return run_sigma(s, out);
    if (experiment->parsed())
      return run_experiment(s, out);
    if (scaling->parsed())
      return run_scaling(s, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const DataFormatError& e) {
    err << "data error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_config;
}

} // namespace rodeo::cli
