#include "susyinv/representations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "susyinv/errors.hpp"

namespace susyinv {

Index SpinRep::index_of(double m) const {
  const double k = j - m;
  const double rounded = std::round(k);
  if (std::abs(k - rounded) > 1e-9 || rounded < 0 ||
      rounded > static_cast<double>(dim - 1)) {
    std::ostringstream msg;
    msg << "m = " << m << " is not a magnetic quantum number of spin " << j;
    throw InvalidInput(msg.str());
  }
  return static_cast<Index>(rounded);
}

State SpinRep::basis(double m) const {
  State v = State::Zero(dim);
  v(index_of(m)) = 1.0;
  return v;
}

SpinRep make_spin(double j) {
  const double twice = 2.0 * j;
  if (!std::isfinite(j) || j < 0.0 || std::abs(twice - std::round(twice)) > 1e-12) {
    std::ostringstream msg;
    msg << "spin j = " << j << " is not a nonnegative half-integer";
    throw InvalidInput(msg.str());
  }
  SpinRep s;
  s.j = std::round(twice) / 2.0;
  s.dim = static_cast<Index>(std::round(twice)) + 1;
  const Index n = s.dim;

  s.Jplus = Operator::Zero(n, n);
  s.J3 = Operator::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const double m = s.m_of(k);
    s.J3(k, k) = m;
    // J+|j,m> = sqrt((j-m)(j+m+1)) |j,m+1>, and m+1 sits at index k-1.
    if (k > 0) s.Jplus(k - 1, k) = std::sqrt((s.j - m) * (s.j + m + 1.0));
  }
  s.Jminus = s.Jplus.adjoint();
  s.J1 = (s.Jplus + s.Jminus) / 2.0;
  s.J2 = (s.Jplus - s.Jminus) / (2.0 * kI);
  s.Jsquared = s.J1 * s.J1 + s.J2 * s.J2 + s.J3 * s.J3;
  return s;
}

Index default_buffer(Index N) {
  return std::max<Index>(1, std::min(std::max<Index>(4, N / 8), N / 4));
}

OscillatorRep make_oscillator(Index N, Index buffer, Index padding) {
  if (N < 8) throw InvalidInput("oscillator truncation N must be at least 8");
  if (buffer < 1 || buffer > N / 4) {
    std::ostringstream msg;
    msg << "oscillator buffer " << buffer << " outside [1, N/4] for N = " << N;
    throw InvalidInput(msg.str());
  }
  if (padding < 0) throw InvalidInput("oscillator padding must be nonnegative");

  OscillatorRep o;
  o.N = N;
  o.buffer = buffer;
  o.padding = padding;
  const Index n = o.dim();

  o.a = Operator::Zero(n, n);
  for (Index k = 1; k < n; ++k) o.a(k - 1, k) = std::sqrt(static_cast<double>(k));
  o.adag = o.a.adjoint();
  o.x = (o.a + o.adag) / std::sqrt(2.0);
  o.p = (o.a - o.adag) / (kI * std::sqrt(2.0));

  // Same truncated matrices as (x^2 -+ p^2)/4 and -(xp+px)/4, written through
  // the ladder operators so that K3 comes out exactly diagonal.
  const Operator aa = o.a * o.a;
  const Operator cc = o.adag * o.adag;
  o.number = o.adag * o.a;
  o.K1 = (aa + cc) / 4.0;
  o.K2 = kI * (aa - cc) / 4.0;
  o.K3 = (o.a * o.adag + o.number) / 4.0;

  o.projector_interior = Operator::Zero(n, n);
  for (Index k = 0; k < o.interior(); ++k) o.projector_interior(k, k) = 1.0;
  return o;
}

OscillatorRep make_oscillator(Index N) {
  return make_oscillator(N, default_buffer(N));
}

State hermite_state(const OscillatorRep& osc, Index n) {
  if (n < 0 || n >= osc.interior()) {
    std::ostringstream msg;
    msg << "Fock state " << n << " lies in the truncation buffer (interior is [0, "
        << osc.interior() << "))";
    throw InvalidInput(msg.str());
  }
  State v = State::Zero(osc.dim());
  v(n) = 1.0;
  return v;
}

QuadrupoleBasis make_quadrupole(const SpinRep& spin) {
  QuadrupoleBasis q;
  q.parent = spin;
  q.trivial = spin.j < 1.0;
  const double r3 = std::sqrt(3.0);
  const Operator& J1 = spin.J1;
  const Operator& J2 = spin.J2;
  const Operator& J3 = spin.J3;
  q.e[0] = J3 * J3 - spin.Jsquared / 3.0;
  q.e[1] = (J1 * J3 + J3 * J1) / r3;
  q.e[2] = (J2 * J3 + J3 * J2) / r3;
  q.e[3] = (J1 * J1 - J2 * J2) / r3;
  q.e[4] = (J1 * J2 + J2 * J1) / r3;
  for (std::size_t a = 0; a < 5; ++a) {
    q.T[a][a] = Operator::Zero(spin.dim, spin.dim);
    for (std::size_t b = a + 1; b < 5; ++b) {
      q.T[a][b] = commutator(q.e[a], q.e[b]);
      q.T[b][a] = -q.T[a][b];
    }
  }
  return q;
}

}  // namespace susyinv
