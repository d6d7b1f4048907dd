#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"

using namespace susyinv;
using namespace susyinv::cli;

namespace {

Ini ini_from(const std::string& text) {
  std::istringstream in(text);
  Ini tree;
  boost::property_tree::read_ini(in, tree);
  return tree;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(ini_from(text), "test.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kSpin = R"([system]
family = spin
j = 0.5
[gauge]
theta = "pi/4"
phi = "2*t"
[y]
f = "0.5"
[grid]
T = 2
dt = 1e-3
)";

}  // namespace

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Config, ParsesSpinDefaults) {
  const RunConfig c = parse_config(ini_from(kSpin));
  EXPECT_EQ(c.family, Family::spin);
  EXPECT_EQ(c.j, 0.5);
  EXPECT_EQ(c.theta, "pi/4");
  EXPECT_EQ(c.T, 2.0);
  EXPECT_TRUE(c.wants("lvn"));
  EXPECT_TRUE(c.wants_format("csv"));
}

TEST(Config, QuotesAndInlineCommentsAreStripped) {
  const RunConfig c = parse_config(ini_from(std::string(kSpin) + "[checks]\nsuites = lvn, pairing ; short run\n"));
  EXPECT_TRUE(c.wants("lvn"));
  EXPECT_TRUE(c.wants("pairing"));
  EXPECT_FALSE(c.wants("propagation"));
}

TEST(Config, ErrorsNameSectionAndKey) {
  EXPECT_NE(error_of("[system]\nfamily = boson\n").find("[system] family"), std::string::npos);
  EXPECT_NE(error_of("[system]\nj = 0.3\n").find("[system] j"), std::string::npos);
  EXPECT_NE(error_of("[gauge]\ntheta = \"exp(t)\"\n").find("[gauge] theta"), std::string::npos);
  EXPECT_NE(error_of("[grid]\nT = 1\ndt = -1\n").find("[grid] dt"), std::string::npos);
  EXPECT_NE(error_of("[grid]\nT = 100\ndt = 1e-6\n").find("[grid]"), std::string::npos);
  EXPECT_NE(error_of("[colour]\nx = 1\n").find("colour"), std::string::npos);
  EXPECT_NE(error_of("[checks]\nsuites = everything\n").find("everything"), std::string::npos);
  EXPECT_NE(error_of("[output]\nformats = xml\n").find("xml"), std::string::npos);
}

TEST(Config, OverrideValue) {
  Ini ini = ini_from(kSpin);
  override_value(ini, "gauge.theta", "0.8");
  EXPECT_EQ(parse_config(ini).theta, "0.8");
  EXPECT_THROW(override_value(ini, "theta", "1"), ConfigError);
}

TEST(Model, BuildsSpinSystem) {
  const Model m = build_model(parse_config(ini_from(kSpin)));
  ASSERT_TRUE(m.spin.has_value());
  EXPECT_EQ(m.dim, 2);
  const Coefficients r = spin_coefficients(*m.spin, m.partner.Hminus(0.0));
  // cos(pi/4) f + (1 - cos(pi/4)) phi' at t = 0, f = 1/2, phi' = 2.
  const double c = std::cos(M_PI / 4);
  EXPECT_NEAR(r[2], c * 0.5 + (1.0 - c) * 2.0, 1e-14);
}

TEST(Verify, DefaultSpinPassesAndWrongHamiltonianFails) {
  RunConfig c = parse_config(ini_from(std::string(kSpin) + "[checks]\nsuites = superalgebra, lvn\n"));
  const Model m = build_model(c);
  CommonOptions opt;
  const VerifyReport ok = run_verify(m, opt);
  EXPECT_TRUE(ok.pass());
  opt.wrong_hamiltonian = true;
  const VerifyReport bad = run_verify(m, opt);
  EXPECT_FALSE(bad.pass());
  bool found = false;
  for (const CheckResult& r : bad.checks) {
    if (r.name == "lvn_minus") {
      found = true;
      EXPECT_FALSE(r.pass);
      EXPECT_GT(r.max_residual, 0.05);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Verify, ToleranceScaleLoosens) {
  RunConfig c = parse_config(ini_from(std::string(kSpin) + "[checks]\nsuites = lvn\n"));
  const Model m = build_model(c);
  CommonOptions opt;
  opt.wrong_hamiltonian = true;
  opt.tolerance_scale = 1e9;
  EXPECT_TRUE(run_verify(m, opt).pass());
}
