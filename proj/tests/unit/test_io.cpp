#include <doctest.h>

#include "support.hpp"

#include <rodeo/io.hpp>

#include <cstring>
#include <filesystem>
#include <sstream>

using namespace rodeo;
using namespace rodeo::testing;

TEST_CASE("reads a small dataset")
{
  std::istringstream in("x1,x2,y\n0.5,1,2\n-1e-3, 4 ,+3.25\n\n");
  const Dataset data = read_dataset(in);
  REQUIRE(data.n() == 2);
  REQUIRE(data.d() == 2);
  CHECK(data.X()(0, 0) == 0.5);
  CHECK(data.X()(1, 0) == -1e-3);
  CHECK(data.X()(1, 1) == 4.0);
  CHECK(data.Y()[1] == 3.25);
}

TEST_CASE("header errors")
{
  SUBCASE("gap in the covariate names")
  {
    std::istringstream in("x1,x3,y\n1,2,3\n");
    try {
      read_dataset(in);
      FAIL("expected MissingColumn");
    } catch (const MissingColumn& e) {
      CHECK(e.name == "x2");
      CHECK(e.column == 2);
    }
  }
  SUBCASE("no response")
  {
    std::istringstream in("x1,x2\n1,2\n");
    CHECK_THROWS_AS(read_dataset(in), MissingColumn);
  }
  SUBCASE("no covariates")
  {
    std::istringstream in("y\n1\n");
    CHECK_THROWS_AS(read_dataset(in), MissingColumn);
  }
  SUBCASE("empty")
  {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_dataset(empty), EmptyFile);
    std::istringstream header_only("x1,y\n");
    CHECK_THROWS_AS(read_dataset(header_only), EmptyFile);
  }
}

TEST_CASE("cell errors carry their location")
{
  std::istringstream in("x1,y\n1,2\n3,abc\n");
  try {
    read_dataset(in);
    FAIL("expected NonNumericCell");
  } catch (const NonNumericCell& e) {
    CHECK(e.row == 3);
    CHECK(e.column == 2);
  }
  std::istringstream nan_cell("x1,y\nnan,2\n");
  CHECK_THROWS_AS(read_dataset(nan_cell), NonNumericCell);
  std::istringstream short_row("x1,x2,y\n1,2\n");
  CHECK_THROWS_AS(read_dataset(short_row), DataFormatError);
}

TEST_CASE("datasets round-trip bit for bit")
{
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> expo(-300.0, 300.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Matrix X(100, 3);
  Vector Y(100);
  for (Eigen::Index i = 0; i < 100; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j)
      X(i, j) = unit(rng) * std::pow(10.0, expo(rng));
    Y[i] = unit(rng);
  }
  X(0, 0) = 0.1;
  X(1, 0) = -0.0;
  X(2, 0) = std::numeric_limits<double>::denorm_min();
  X(3, 0) = std::numeric_limits<double>::max();
  const Dataset data(X, Y);

  std::stringstream buf;
  write_dataset(buf, data);
  const Dataset back = read_dataset(buf);
  REQUIRE(back.n() == data.n());
  CHECK(std::memcmp(back.X().data(), data.X().data(), sizeof(double) * 300) == 0);
  CHECK(std::memcmp(back.Y().data(), data.Y().data(), sizeof(double) * 100) == 0);

  const auto path = std::filesystem::temp_directory_path() / "rodeo_io_roundtrip.csv";
  save_dataset(path, data);
  const Dataset from_file = load_dataset(path);
  CHECK(from_file.X() == data.X());
  std::filesystem::remove(path);

  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("traces round-trip and replay")
{
  const Dataset base = random_dataset(200, 3, 5, 0.0);
  Vector Y(200);
  for (Eigen::Index i = 0; i < 200; ++i)
    Y[i] = 8.0 * std::pow(base.X()(i, 0) - 0.5, 2);
  const Dataset data = base.with_response(std::move(Y));
  RodeoConfig cfg;
  cfg.sigma = SigmaMode::known(0.05);
  const RodeoResult res = rodeo_hard(data, Vector::Constant(3, 0.5), cfg);

  std::stringstream buf;
  write_trace(buf, res.trace);
  const std::string text = buf.str();
  CHECK(text.rfind("t,j,Z,s,lambda,h_before,h_after,active_after\n", 0) == 0);
  const auto back = read_trace(buf);
  REQUIRE(back.size() == res.trace.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].t == res.trace[i].t);
    CHECK(back[i].j == res.trace[i].j);
    CHECK(back[i].Z == res.trace[i].Z);
    CHECK(back[i].h_after == res.trace[i].h_after);
    CHECK(back[i].active_after == res.trace[i].active_after);
  }
  CHECK(replay_trace(back, 3, cfg.h0) == res.h_star);

  std::istringstream bad("t,j,Z\n");
  CHECK_THROWS_AS(read_trace(bad), DataFormatError);
  std::istringstream zero_index("t,j,Z,s,lambda,h_before,h_after,active_after\n1,0,0,0,0,1,1,0\n");
  CHECK_THROWS_AS(read_trace(zero_index), DataFormatError);
}
