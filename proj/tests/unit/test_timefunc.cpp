#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "susyinv/errors.hpp"
#include "susyinv/timefunc.hpp"

using namespace susyinv;

namespace {

double central(const TimeFunction& f, double t, double h = 1e-5) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// A random member built from the constructors and the closed operations.
TimeFunction random_member(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-2.0, 2.0), w(0.5, 4.0);
  std::uniform_int_distribution<int> pick(0, 4);
  auto atom = [&]() {
    switch (pick(rng)) {
      case 0: return TimeFunction::constant(c(rng));
      case 1: return TimeFunction::linear(c(rng), c(rng));
      case 2: return TimeFunction::sine(w(rng), c(rng));
      case 3: return TimeFunction::cosine(w(rng), c(rng));
      default: return TimeFunction::polynomial({c(rng), c(rng), c(rng)});
    }
  };
  TimeFunction f = atom() + c(rng) * atom();
  return f + atom() * atom();
}

}  // namespace

TEST(Eval, Examples) {
  EXPECT_EQ(TimeFunction::constant(3.0)(7.0), 3.0);
  EXPECT_NEAR(TimeFunction::sine(2.0)(std::numbers::pi / 4), 1.0, 1e-15);
  EXPECT_EQ((TimeFunction::linear(2.0) + TimeFunction::sine(1.0))(0.0), 0.0);
}

TEST(Derivative, Examples) {
  EXPECT_TRUE(TimeFunction::constant(4.2).derivative().is_zero());
  const TimeFunction d = TimeFunction::linear(1.7).derivative();
  EXPECT_TRUE(d.is_constant());
  EXPECT_EQ(d(3.0), 1.7);
  const TimeFunction s = TimeFunction::sine(2.0);
  EXPECT_NEAR(s.derivative()(1.0), central(s, 1.0), 1e-9);
  EXPECT_NEAR(s.derivative()(1.0), 2.0 * std::cos(2.0), 1e-15);
}

TEST(Derivative, MatchesFiniteDifference) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> t(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const TimeFunction f = random_member(rng);
    const TimeFunction df = f.derivative();
    for (int i = 0; i < 10; ++i) {
      const double x = t(rng);
      EXPECT_NEAR(df(x), central(f, x), 1e-6 * std::max(1.0, std::abs(df(x))));
    }
  }
}

TEST(Antiderivative, Examples) {
  const TimeFunction b = TimeFunction::constant(0.7).antiderivative();
  for (double x : {0.0, 1.0, -2.5}) EXPECT_NEAR(b(x), 0.7 * x, 1e-15);
  const TimeFunction c = TimeFunction::cosine(1.0).antiderivative();
  for (double x : {0.0, 0.3, 2.0}) EXPECT_NEAR(c(x), std::sin(x), 1e-15);
  const TimeFunction t2 = TimeFunction::linear(2.0).antiderivative();
  for (double x : {0.0, 1.5, -4.0}) EXPECT_NEAR(t2(x), x * x, 1e-14);
}

TEST(Antiderivative, RoundTripAndZeroAtOrigin) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> t(-5.0, 5.0);
  for (int k = 0; k < 50; ++k) {
    const TimeFunction f = random_member(rng);
    const TimeFunction F = f.antiderivative();
    EXPECT_EQ(F(0.0), 0.0);
    const TimeFunction back = F.derivative();
    for (int i = 0; i < 100; ++i) {
      const double x = t(rng);
      EXPECT_NEAR(back(x), f(x), 1e-12 * std::max(1.0, std::abs(f(x))));
    }
  }
}

TEST(Antiderivative, DeepProductsStayClosed) {
  const TimeFunction f = TimeFunction::linear(1.0) * TimeFunction::sine(2.0) * TimeFunction::cosine(3.0);
  const TimeFunction F = f.antiderivative();
  EXPECT_EQ(F(0.0), 0.0);
  for (double x : {0.4, 1.1, 2.9}) EXPECT_NEAR(F.derivative()(x), f(x), 1e-12);
}

TEST(Algebra, OperatorsArePointwise) {
  const TimeFunction a = TimeFunction::sine(1.3, 0.2);
  const TimeFunction b = TimeFunction::polynomial({1.0, -0.5, 0.25});
  for (double x : {-1.0, 0.0, 0.7, 3.0}) {
    EXPECT_NEAR((a + b)(x), a(x) + b(x), 1e-14);
    EXPECT_NEAR((a - b)(x), a(x) - b(x), 1e-14);
    EXPECT_NEAR((a * b)(x), a(x) * b(x), 1e-13);
    EXPECT_NEAR((2.5 * a)(x), 2.5 * a(x), 1e-14);
    EXPECT_NEAR((-b)(x), -b(x), 1e-14);
  }
  EXPECT_TRUE((a - a).is_zero());
}

TEST(Parse, ConfigStrings) {
  EXPECT_EQ(parse_timefunc("0.5")(9.0), 0.5);
  EXPECT_EQ(parse_timefunc("2*t")(1.25), 2.5);
  EXPECT_NEAR(parse_timefunc("pi/4")(0.0), std::numbers::pi / 4, 1e-16);
  EXPECT_NEAR(parse_timefunc("0.3*sin(2*t+1)")(0.5), 0.3 * std::sin(2.0), 1e-15);
  EXPECT_NEAR(parse_timefunc("t^2 - pi/4")(2.0), 4.0 - std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(parse_timefunc("-(t - 1)*cos(t)")(0.3), 0.7 * std::cos(0.3), 1e-15);
  EXPECT_NEAR(parse_timefunc("0.3 + 0.1*sin(t)")(1.0), 0.3 + 0.1 * std::sin(1.0), 1e-15);
}

TEST(Parse, RejectsOutOfFamily) {
  for (const char* bad : {"", "t +", "sin(t^2)", "1/t", "t^-1", "exp(t)", "2**t", "sin t", "t^1.5", "(1"}) {
    EXPECT_THROW(parse_timefunc(bad), InvalidInput) << bad;
  }
}

TEST(Parse, ErrorsCarryColumn) {
  try {
    parse_timefunc("1 + foo");
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("column"), std::string::npos) << e.what();
  }
}
