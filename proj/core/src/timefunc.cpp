#include "susyinv/timefunc.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "susyinv/errors.hpp"

namespace susyinv {
namespace {

using Poly = std::vector<double>;
using Wave = TimeFunction::Wave;
using Term = TimeFunction::Term;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  }
  trim(out);
  return out;
}

Poly poly_scale(const Poly& a, double c) {
  Poly out(a);
  for (double& x : out) x *= c;
  trim(out);
  return out;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {};
  Poly out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<double>(i);
  trim(out);
  return out;
}

Poly poly_integral(const Poly& a) {
  if (a.empty()) return {};
  Poly out(a.size() + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i + 1] = a[i] / static_cast<double>(i + 1);
  trim(out);
  return out;
}

double poly_eval(const Poly& p, double t) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// P(t) * wave(omega t) with omega of any sign.
std::vector<Term> make_wave(Poly p, Wave w, double omega) {
  if (w == Wave::none || omega == 0.0) {
    if (w == Wave::sin) return {};
    return {Term{std::move(p), Wave::none, 0.0}};
  }
  if (omega < 0.0) {
    omega = -omega;
    if (w == Wave::sin) p = poly_scale(p, -1.0);
  }
  return {Term{std::move(p), w, omega}};
}

// Product-to-sum for two waves.
std::vector<Term> multiply_terms(const Term& a, const Term& b) {
  const Poly p = poly_mul(a.poly, b.poly);
  if (p.empty()) return {};
  if (a.wave == Wave::none) return make_wave(p, b.wave, b.omega);
  if (b.wave == Wave::none) return make_wave(p, a.wave, a.omega);

  const Poly half = poly_scale(p, 0.5);
  const Poly neg_half = poly_scale(p, -0.5);
  const double diff = a.omega - b.omega;
  const double sum = a.omega + b.omega;
  std::vector<Term> out;
  auto append = [&out](std::vector<Term> ts) {
    for (auto& t : ts) out.push_back(std::move(t));
  };
  if (a.wave == Wave::sin && b.wave == Wave::sin) {
    append(make_wave(half, Wave::cos, diff));
    append(make_wave(neg_half, Wave::cos, sum));
  } else if (a.wave == Wave::cos && b.wave == Wave::cos) {
    append(make_wave(half, Wave::cos, diff));
    append(make_wave(half, Wave::cos, sum));
  } else {
    // sin(x) cos(y) = [sin(x+y) + sin(x-y)] / 2 with x the sine frequency.
    const bool a_is_sin = a.wave == Wave::sin;
    const double x = a_is_sin ? a.omega : b.omega;
    const double y = a_is_sin ? b.omega : a.omega;
    append(make_wave(half, Wave::sin, x + y));
    append(make_wave(half, Wave::sin, x - y));
  }
  return out;
}

// Integral of P(t) * wave(omega t), any antiderivative (constant fixed later).
std::vector<Term> integrate_term(const Term& term) {
  if (term.wave == Wave::none) return {Term{poly_integral(term.poly), Wave::none, 0.0}};
  // ∫P sin = -P cos/w + (1/w)∫P' cos,  ∫P cos = P sin/w - (1/w)∫P' sin
  std::vector<Term> out;
  Poly p = term.poly;
  Wave w = term.wave;
  double sign = 1.0;
  const double omega = term.omega;
  while (!p.empty()) {
    if (w == Wave::sin) {
      out.push_back(Term{poly_scale(p, -sign / omega), Wave::cos, omega});
      w = Wave::cos;
    } else {
      out.push_back(Term{poly_scale(p, sign / omega), Wave::sin, omega});
      w = Wave::sin;
      sign = -sign;
    }
    p = poly_scale(poly_derivative(p), 1.0 / omega);
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

}  // namespace

TimeFunction TimeFunction::constant(double c) {
  TimeFunction f;
  f.add_term(Term{{c}, Wave::none, 0.0});
  f.normalize();
  return f;
}

TimeFunction TimeFunction::polynomial(std::vector<double> ascending) {
  TimeFunction f;
  f.add_term(Term{std::move(ascending), Wave::none, 0.0});
  f.normalize();
  return f;
}

TimeFunction TimeFunction::linear(double slope, double intercept) {
  return polynomial({intercept, slope});
}

TimeFunction TimeFunction::sine(double omega, double phase) {
  // sin(wt + d) = cos d sin(wt) + sin d cos(wt)
  TimeFunction f;
  for (auto& t : make_wave({std::cos(phase)}, Wave::sin, omega)) f.add_term(t);
  for (auto& t : make_wave({std::sin(phase)}, Wave::cos, omega)) f.add_term(t);
  f.normalize();
  return f;
}

TimeFunction TimeFunction::cosine(double omega, double phase) {
  // cos(wt + d) = cos d cos(wt) - sin d sin(wt)
  TimeFunction f;
  for (auto& t : make_wave({std::cos(phase)}, Wave::cos, omega)) f.add_term(t);
  for (auto& t : make_wave({-std::sin(phase)}, Wave::sin, omega)) f.add_term(t);
  f.normalize();
  return f;
}

void TimeFunction::add_term(Term term) {
  trim(term.poly);
  if (term.poly.empty()) return;
  terms_.push_back(std::move(term));
}

void TimeFunction::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return std::tie(a.wave, a.omega) < std::tie(b.wave, b.omega);
  });
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().wave == t.wave && merged.back().omega == t.omega) {
      Poly& acc = merged.back().poly;
      if (acc.size() < t.poly.size()) acc.resize(t.poly.size(), 0.0);
      for (std::size_t i = 0; i < t.poly.size(); ++i) acc[i] += t.poly[i];
      trim(acc);
      if (acc.empty()) merged.pop_back();
    } else {
      merged.push_back(std::move(t));
    }
  }
  terms_ = std::move(merged);
  label_ = describe();
}

double TimeFunction::operator()(double t) const {
  // Wave terms first, polynomial term last: antiderivative() picks the
  // polynomial constant as minus the wave constants summed in this order,
  // which makes G(0) evaluate to exactly zero.
  double acc = 0.0;
  double poly_part = 0.0;
  for (const auto& term : terms_) {
    const double p = poly_eval(term.poly, t);
    switch (term.wave) {
      case Wave::none: poly_part += p; break;
      case Wave::sin: acc += p * std::sin(term.omega * t); break;
      case Wave::cos: acc += p * std::cos(term.omega * t); break;
    }
  }
  return acc + poly_part;
}

TimeFunction TimeFunction::derivative() const {
  TimeFunction out;
  for (const auto& term : terms_) {
    out.add_term(Term{poly_derivative(term.poly), term.wave, term.omega});
    if (term.wave == Wave::sin) {
      out.add_term(Term{poly_scale(term.poly, term.omega), Wave::cos, term.omega});
    } else if (term.wave == Wave::cos) {
      out.add_term(Term{poly_scale(term.poly, -term.omega), Wave::sin, term.omega});
    }
  }
  out.normalize();
  return out;
}

TimeFunction TimeFunction::antiderivative() const {
  TimeFunction out;
  for (const auto& term : terms_) {
    for (auto& t : integrate_term(term)) out.add_term(std::move(t));
  }
  out.normalize();
  // Integrated polynomial terms vanish at 0; only cosine terms carry a
  // constant there. Sum those in evaluation order and cancel them.
  double at_zero = 0.0;
  for (const auto& t : out.terms_) {
    if (t.wave == Wave::cos) at_zero += t.poly[0];
  }
  if (at_zero != 0.0) {
    auto poly_term = std::find_if(out.terms_.begin(), out.terms_.end(),
                                  [](const Term& t) { return t.wave == Wave::none; });
    if (poly_term == out.terms_.end()) {
      out.terms_.insert(out.terms_.begin(), Term{{-at_zero}, Wave::none, 0.0});
    } else {
      poly_term->poly[0] = -at_zero;
    }
    out.label_ = out.describe();
  }
  return out;
}

bool TimeFunction::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && terms_[0].wave == Wave::none && terms_[0].poly.size() <= 1);
}

TimeFunction& TimeFunction::set_label(std::string label) {
  label_ = std::move(label);
  return *this;
}

std::string TimeFunction::describe() const {
  if (terms_.empty()) return "0";
  std::ostringstream s;
  bool first = true;
  for (const auto& term : terms_) {
    if (!first) s << " + ";
    first = false;
    s << "(";
    for (std::size_t i = 0; i < term.poly.size(); ++i) {
      if (i) s << " + ";
      s << format_number(term.poly[i]);
      if (i == 1) s << "*t";
      if (i > 1) s << "*t^" << i;
    }
    s << ")";
    if (term.wave == Wave::sin) s << "*sin(" << format_number(term.omega) << "*t)";
    if (term.wave == Wave::cos) s << "*cos(" << format_number(term.omega) << "*t)";
  }
  return s.str();
}

TimeFunction operator+(const TimeFunction& a, const TimeFunction& b) {
  TimeFunction out;
  for (const auto& t : a.terms_) out.add_term(t);
  for (const auto& t : b.terms_) out.add_term(t);
  out.normalize();
  return out;
}

TimeFunction operator-(const TimeFunction& f) { return -1.0 * f; }

TimeFunction operator-(const TimeFunction& a, const TimeFunction& b) { return a + (-b); }

TimeFunction operator*(double c, const TimeFunction& f) {
  TimeFunction out;
  for (const auto& t : f.terms_) out.add_term(Term{poly_scale(t.poly, c), t.wave, t.omega});
  out.normalize();
  return out;
}

TimeFunction operator*(const TimeFunction& a, const TimeFunction& b) {
  TimeFunction out;
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      for (auto& t : multiply_terms(x, y)) out.add_term(std::move(t));
    }
  }
  out.normalize();
  return out;
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TimeFunction parse() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty expression");
    TimeFunction f = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    std::ostringstream msg;
    msg << "time function \"" << text_ << "\": " << why << " at column " << pos_ + 1;
    throw InvalidInput(msg.str());
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_word(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t end = pos_ + word.size();
    if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
      return false;
    }
    pos_ = end;
    return true;
  }

  TimeFunction expr() {
    TimeFunction acc = term();
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  TimeFunction term() {
    TimeFunction acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        TimeFunction d = unary();
        if (!d.is_constant()) {
          pos_ = at;
          fail("division by a non-constant expression");
        }
        const double c = d(0.0);
        if (c == 0.0) {
          pos_ = at;
          fail("division by zero");
        }
        acc = (1.0 / c) * acc;
      } else {
        return acc;
      }
    }
  }

  TimeFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  TimeFunction power() {
    TimeFunction base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    unsigned exponent = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc{} || (ptr < last && (*ptr == '.' || *ptr == 'e' || *ptr == 'E'))) {
      fail("exponent must be a nonnegative integer");
    }
    if (exponent > 32) {
      pos_ = at;
      fail("exponent too large");
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    TimeFunction out = TimeFunction::constant(1.0);
    for (unsigned i = 0; i < exponent; ++i) out = out * base;
    return out;
  }

  TimeFunction primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      TimeFunction inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (accept_word("pi")) return TimeFunction::constant(std::numbers::pi);
    if (accept_word("t")) return TimeFunction::linear(1.0, 0.0);
    if (accept_word("sin")) return wave(true);
    if (accept_word("cos")) return wave(false);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  TimeFunction wave(bool is_sin) {
    if (!accept('(')) fail("expected '(' after function name");
    const std::size_t at = pos_;
    TimeFunction arg = expr();
    if (!accept(')')) fail("expected ')'");
    const auto& ts = arg.terms();
    const bool affine =
        ts.empty() || (ts.size() == 1 && ts[0].wave == TimeFunction::Wave::none && ts[0].poly.size() <= 2);
    if (!affine) {
      pos_ = at;
      fail("argument of sin/cos must be affine in t");
    }
    const double slope = ts.empty() || ts[0].poly.size() < 2 ? 0.0 : ts[0].poly[1];
    const double offset = ts.empty() ? 0.0 : ts[0].poly[0];
    return is_sin ? TimeFunction::sine(slope, offset) : TimeFunction::cosine(slope, offset);
  }

  TimeFunction number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return TimeFunction::constant(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

TimeFunction parse_timefunc(std::string_view text) {
  TimeFunction f = Parser(text).parse();
  f.set_label(std::string(text));
  return f;
}

}  // namespace susyinv
