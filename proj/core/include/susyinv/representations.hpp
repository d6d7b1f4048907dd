#pragma once

#include <array>

#include "susyinv/operator.hpp"

namespace susyinv {

// Spin-j irrep of su(2). Basis order is m = j, j-1, ..., -j, so basis index k
// carries m = j - k and J+ is strictly upper-triangular.
struct SpinRep {
  double j = 0.0;
  Index dim = 0;
  Operator J1, J2, J3, Jplus, Jminus, Jsquared;

  Index index_of(double m) const;
  double m_of(Index k) const { return j - static_cast<double>(k); }
  State basis(double m) const;
};

// Rejects j unless 2j is a nonnegative integer.
SpinRep make_spin(double j);

// Truncated Fock-space oscillator. The declared truncation is N with the top
// `buffer` states untrusted; `padding` extra states above N are carried so
// that exponentials of su(1,1) generators do not reach back into the trusted
// interior [0, N - buffer). All matrices are dim() x dim().
struct OscillatorRep {
  Index N = 0;
  Index buffer = 0;
  Index padding = 0;
  Operator a, adag, x, p, K1, K2, K3;
  Operator number;              // a^dagger a
  Operator projector_interior;  // rank N - buffer diagonal projector

  Index dim() const { return N + padding; }
  Index interior() const { return N - buffer; }
};

Index default_buffer(Index N);

// Requires N >= 8 and 1 <= buffer <= N/4; padding >= 0.
OscillatorRep make_oscillator(Index N, Index buffer, Index padding = 0);
OscillatorRep make_oscillator(Index N);

// Fock state |n>; rejected inside the buffer zone.
State hermite_state(const OscillatorRep& osc, Index n);

// Quadrupole operators e_0..e_4 over a spin rep and T_ab = [e_a, e_b].
struct QuadrupoleBasis {
  SpinRep parent;
  std::array<Operator, 5> e;
  std::array<std::array<Operator, 5>, 5> T;
  // j < 1: every e_a is a multiple of the identity (or zero).
  bool trivial = false;
};

QuadrupoleBasis make_quadrupole(const SpinRep& spin);

}  // namespace susyinv
