#include <doctest.h>

#include "support.hpp"

#include <cli.hpp>
#include <json.hpp>
#include <rodeo/experiments.hpp>
#include <rodeo/io.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace rodeo;
using namespace rodeo::testing;
namespace fs = std::filesystem;

namespace {

struct Run
{
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args)
{
  args.insert(args.begin(), "rodeo");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = cli::cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir
{
  fs::path path;
  TempDir()
  {
    path = fs::temp_directory_path() / ("rodeo_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text)
{
  std::ofstream(path) << text;
}

} // namespace

TEST_CASE("sigma on a constant response prints zero")
{
  TempDir dir;
  const Dataset base = random_dataset(50, 2, 1);
  save_dataset(dir.file("const.csv"), base.with_response(Vector::Constant(50, 3.0)));
  const Run r = run({ "sigma", "--data", dir.file("const.csv"), "--sigma", "rice" });
  CHECK(r.code == 0);
  CHECK(r.out == "0.0\n");

  const Run known = run({ "sigma", "--data", dir.file("const.csv"), "--sigma", "known:0.25" });
  CHECK(known.out == "0.25\n");
}

TEST_CASE("rodeo-local on linear data stops at h0")
{
  TempDir dir;
  const Dataset base = random_dataset(200, 3, 2);
  save_dataset(dir.file("lin.csv"), base.with_response((base.X() * Vector::Constant(3, 1.5)).array() + 2.0));
  const Run r = run({ "rodeo-local", "--data", dir.file("lin.csv"), "--point", "0.5,0.5,0.5", "--sigma", "known:0.1",
                      "--h0", "0.8", "--out-result", dir.file("res.json"), "--out-trace", dir.file("trace.csv") });
  REQUIRE(r.code == 0);
  const auto result = nlohmann::json::parse(slurp(dir.file("res.json")));
  CHECK(result["steps"] == 1);
  for (const auto& h : result["h_star"])
    CHECK(h.get<double>() == 0.8);
  CHECK(result["estimate"].get<double>() == doctest::Approx(4.25));
  CHECK(result["config"]["max_steps"] == 53);
  CHECK(result["config"]["sigma"] == "known:0.1");

  std::ifstream trace(dir.file("trace.csv"));
  const auto records = read_trace(trace);
  CHECK(records.size() == 3);
  CHECK(replay_trace(records, 3, 0.8) == Vector::Constant(3, 0.8));
}

TEST_CASE("result config echo reproduces the run")
{
  TempDir dir;
  const Dataset base = random_dataset(150, 2, 3, 0.3);
  save_dataset(dir.file("d.csv"), base);
  REQUIRE(run({ "rodeo-soft", "--data", dir.file("d.csv"), "--point", "0.4,0.6", "--kernel", "epanechnikov",
                "--out-result", dir.file("a.json") })
            .code == 0);
  const auto first = nlohmann::json::parse(slurp(dir.file("a.json")));
  write_text(dir.file("cfg.json"), first["config"].dump());
  REQUIRE(run({ "rodeo-soft", "--config", dir.file("cfg.json"), "--out-result", dir.file("b.json") }).code == 0);
  CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
}

TEST_CASE("experiment output is deterministic")
{
  TempDir dir;
  const std::vector<std::string> base{ "experiment", "--name", "quad2", "--replicates", "5", "--seed", "7" };
  auto a = base;
  a.insert(a.end(), { "--out-result", dir.file("a.json") });
  auto b = base;
  b.insert(b.end(), { "--out-result", dir.file("b.json") });
  REQUIRE(run(a).code == 0);
  REQUIRE(run(b).code == 0);
  const std::string text = slurp(dir.file("a.json"));
  CHECK(text == slurp(dir.file("b.json")));
  const auto result = nlohmann::json::parse(text);
  CHECK(result["squared_errors"].size() == 5);
  CHECK(result["config"]["name"] == "quad2");
}

TEST_CASE("global and greedy subcommands")
{
  TempDir dir;
  ExampleSpec spec = default_example(ExampleName::quad2);
  spec.n = 200;
  spec.d = 4;
  spec.seed = 11;
  save_dataset(dir.file("q.csv"), generate(spec).data);

  const Run g = run({ "rodeo-global", "--data", dir.file("q.csv"), "--k", "5", "--seed", "3", "--out-trace",
                      dir.file("g.csv") });
  REQUIRE(g.code == 0);
  const auto gres = nlohmann::json::parse(g.out);
  CHECK(gres["estimate"].size() == 5);
  CHECK(gres["config"]["points"].size() == 5);
  CHECK(slurp(dir.file("g.csv")).rfind("t,j,T,lambda,trace_P,trace_PP,h_before,h_after,active_after\n", 0) == 0);

  const Run gr = run({ "rodeo-greedy", "--data", dir.file("q.csv"), "--k", "5", "--steps", "6", "--sigma",
                       "known:1" });
  REQUIRE(gr.code == 0);
  const auto grres = nlohmann::json::parse(gr.out);
  CHECK(grres["steps"] == 6);
  CHECK(grres["selection_order"].size() >= 1);
}

TEST_CASE("exit codes")
{
  TempDir dir;
  save_dataset(dir.file("d.csv"), random_dataset(40, 2, 4));

  CHECK(run({}).code == cli::exit_config);
  CHECK(run({ "no-such-command" }).code == cli::exit_config);
  CHECK(run({ "rodeo-local", "--data", dir.file("d.csv"), "--point", "0.5,0.5", "--beta", "1.5" }).code ==
        cli::exit_config);
  CHECK(run({ "rodeo-local", "--data", dir.file("d.csv"), "--point", "0.5" }).code == cli::exit_config);
  CHECK(run({ "rodeo-local", "--data", dir.file("d.csv"), "--point", "0.5,0.5", "--sigma", "guess" }).code ==
        cli::exit_config);

  write_text(dir.file("bad.json"), R"({"beta": 0.5, "colour": "red"})");
  const Run unknown = run({ "rodeo-local", "--config", dir.file("bad.json"), "--data", dir.file("d.csv"),
                            "--point", "0.5,0.5" });
  CHECK(unknown.code == cli::exit_config);
  CHECK(unknown.err.find("colour") != std::string::npos);

  write_text(dir.file("gap.csv"), "x1,x3,y\n1,2,3\n4,5,6\n");
  CHECK(run({ "sigma", "--data", dir.file("gap.csv") }).code == cli::exit_config);

  // Epanechnikov support at a far point holds no data
  const Run failed = run({ "rodeo-local", "--data", dir.file("d.csv"), "--point", "50,50", "--kernel",
                           "epanechnikov", "--out-trace", dir.file("partial.csv") });
  CHECK(failed.code == cli::exit_runtime);
  CHECK(fs::exists(dir.file("partial.csv")));

  CHECK(run({ "--help" }).code == cli::exit_ok);
}
