// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <gtest/gtest.h>
#include "kgp/error.hpp"
#include "kgp/io.hpp"
#include "support.hpp"

namespace kgp
{
namespace
{

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("kgp_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Io, FormatDouble)
{
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(NAN), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Io, CoefficientFileRoundTripIsExact)
{
  testing::Gen gen(51);
  const Truncation tr{5, 3};
  const FieldPair s(gen.field(tr), gen.field(tr), 2.5, -0.125);
  const std::string text = coefficients_csv(s);
  EXPECT_EQ(text.substr(0, text.find('\n')), "# kg-periodic coeffs v1, J=5, K=3, b=2.5, eps=-0.125");
  const FieldPair back = parse_coefficients_csv(text);
  EXPECT_EQ(back.u, s.u);
  EXPECT_EQ(back.v, s.v);
  EXPECT_EQ(back.b, 2.5);
  EXPECT_EQ(back.eps, -0.125);

  const fs::path dir = scratch_dir("roundtrip");
  write_coefficients(dir / "s.csv", s);
  EXPECT_EQ(read_coefficients(dir / "s.csv").u, s.u);
  EXPECT_FALSE(fs::exists(dir / "s.csv.tmp"));
}

TEST(Io, CoefficientFileErrors)
{
  auto kind_of = [](const std::string &text) {
    try
    {
      (void)parse_coefficients_csv(text);
    }
    catch (const Error &e)
    {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  const std::string header = "# kg-periodic coeffs v1, J=2, K=1, b=1, eps=0\n";
  EXPECT_EQ(kind_of(""), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of("j,k\n"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of(header + "3,0,1,0,0,0\n"), ErrorKind::TruncationMismatch);
  EXPECT_EQ(kind_of(header + "1,0,1,0.5,0,0\n"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of(header + "1,0,x,0,0,0\n"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of(header + "1,0,1,0\n"), ErrorKind::InvalidConfig);
  // Missing rows mean zero coefficients.
  const auto s = parse_coefficients_csv(header + "2,1,0.5,0.25,0,0\n");
  EXPECT_EQ(s.u.coeff(2, 1), Complex(0.5, 0.25));
  EXPECT_EQ(s.u.coeff(1, 0), Complex(0.0, 0.0));
  EXPECT_THROW(read_coefficients("/nonexistent/file.csv"), Error);
}

TEST(Io, NonlinearityDescriptors)
{
  const auto nl = parse_nonlinearity(Json::parse(R"({"kind":"power_law","p":3.0,"amplitude":"cos_t:1.0,0.5"})"), "f");
  EXPECT_NEAR(nl.f(0.0, 1.0, 2.0), 1.5 * 8.0, 1e-12);
  EXPECT_NEAR(nl.f(std::numbers::pi / 2, 1.0, 2.0), 8.0, 1e-12);
  const auto poly = parse_nonlinearity(Json::parse(R"({"kind":"polynomial","coeffs":[0,1],"p":2})"), "f");
  EXPECT_EQ(poly.f(0, 0, 3.0), 3.0);
  EXPECT_TRUE(parse_nonlinearity(Json::parse(R"({"kind":"zero"})"), "g").is_zero());

  auto message = [](const char *text) {
    try
    {
      (void)parse_nonlinearity(Json::parse(text), "f");
    }
    catch (const Error &e)
    {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(R"({"kind":"power_law","p":1.0})").find("f.p"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"power_law","p":3,"amplitude":"cos_t:1,2"})").find("f"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"power_law","p":3,"amplitude":"sq:1"})").find("amplitude"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"exp"})").find("f.kind"), std::string::npos);
  EXPECT_NE(message(R"({"p":3})").find("kind"), std::string::npos);
}

TEST(Io, ProfileCsvRoundTrip)
{
  testing::Gen gen(52);
  const auto p = gen.profile(6);
  const auto back = parse_profile_csv(profile_csv(p));
  EXPECT_EQ(back, p);
}

TEST(Io, SpectrumTable)
{
  const std::string csv = spectrum_csv(Truncation{3, 3}, 1.0);
  int kernel_rows = 0, rows = 0;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "j,k,lambda,class");
  while (std::getline(in, line))
  {
    ++rows;
    if (line.ends_with(",kernel"))
    {
      ++kernel_rows;
      int j = 0, k = 0;
      ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d", &j, &k), 2);
      EXPECT_EQ(j, std::abs(k));
    }
  }
  EXPECT_EQ(rows, 21);
  EXPECT_EQ(kernel_rows, 6);
  EXPECT_NE(csv.find("1,-2,-3,minus"), std::string::npos);
}

TEST(Io, JsonReportsAreFlatAndComplete)
{
  EnergyBreakdown e;
  e.total = 1.5;
  e.coupling = -0.25;
  const Json j = to_json(e);
  EXPECT_EQ(j["total"], 1.5);
  EXPECT_EQ(j["coupling"], -0.25);
  for (const auto &item : j.items())
  {
    EXPECT_TRUE(item.value().is_number());
  }
  EXPECT_EQ(j.size(), 12u);
}

}  // namespace
}  // namespace kgp
