#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace susyinv {

// Real scalar function of time from a family closed under +, *, d/dt and
// integration from 0. Internally a sum of terms P(t) * w(t) where P is a
// polynomial and w is 1, sin(omega t) or cos(omega t) with omega > 0.
class TimeFunction {
 public:
  enum class Wave { none, sin, cos };

  struct Term {
    std::vector<double> poly;  // ascending powers of t
    Wave wave = Wave::none;
    double omega = 0.0;
  };

  TimeFunction() = default;

  static TimeFunction constant(double c);
  static TimeFunction polynomial(std::vector<double> ascending);
  static TimeFunction linear(double slope, double intercept = 0.0);
  static TimeFunction sine(double omega, double phase = 0.0);    // sin(wt+d)
  static TimeFunction cosine(double omega, double phase = 0.0);  // cos(wt+d)

  double operator()(double t) const;

  TimeFunction derivative() const;
  // G with G' = f and G(0) = 0.
  TimeFunction antiderivative() const;

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const std::vector<Term>& terms() const { return terms_; }

  const std::string& label() const { return label_; }
  TimeFunction& set_label(std::string label);

  friend TimeFunction operator+(const TimeFunction& a, const TimeFunction& b);
  friend TimeFunction operator-(const TimeFunction& a, const TimeFunction& b);
  friend TimeFunction operator*(const TimeFunction& a, const TimeFunction& b);
  friend TimeFunction operator*(double c, const TimeFunction& f);
  friend TimeFunction operator-(const TimeFunction& f);

 private:
  void add_term(Term term);
  void normalize();
  std::string describe() const;

  std::vector<Term> terms_;
  std::string label_;
};

// Textual form used by config files, e.g. "0.5", "2*t", "0.3*sin(2*t+1)",
// "t^2 - pi/4". Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*      (divisors must be constant)
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?          (nonnegative integer exponent)
//   primary := number | 't' | 'pi' | ('sin' | 'cos') '(' expr ')' | '(' expr ')'
// The argument of sin/cos must be affine in t. Anything else is rejected with
// the offending column.
TimeFunction parse_timefunc(std::string_view text);

}  // namespace susyinv
