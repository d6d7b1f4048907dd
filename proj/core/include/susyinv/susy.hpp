#pragma once

#include <vector>

#include "susyinv/operator.hpp"

namespace susyinv {

// Odd nilpotent charge on the doubled space: Q = [[0, 0], [d, 0]].
struct SuperCharge {
  Operator d;
  Operator Q;
  Grading grading;
};

// Rejects non-square d (unequal sector dimensions are not supported).
SuperCharge build_supercharge(const Operator& d);

struct SuperInvariant {
  Operator Iplus;   // d^dagger d / 2
  Operator Iminus;  // d d^dagger / 2
  Operator I;       // blockdiag(Iplus, Iminus)
};

SuperInvariant build_invariant(const SuperCharge& q);

struct SuperalgebraReport {
  double q_squared = 0.0;      // ||Q^2||
  double q_commutator = 0.0;   // ||[Q, I]||
  double anticommutator = 0.0; // ||{Q, Q^dagger} - 2I||
  double max() const;
};

// Uses inv.I as given, so a tampered invariant shows up in the residuals.
SuperalgebraReport check_superalgebra(const SuperCharge& q, const SuperInvariant& inv);

struct PairedLevel {
  double lambda = 0.0;
  Index degeneracy = 0;
  Operator plus_vectors;   // n x degeneracy, orthonormal columns
  Operator minus_vectors;  // n x degeneracy
  Operator v;              // degeneracy x degeneracy unitary
};

struct SpectralPairing {
  std::vector<PairedLevel> levels;  // ascending lambda > 0
  Index kernel_dim_plus = 0;
  Index kernel_dim_minus = 0;
  Operator kernel_plus;   // orthonormal basis of Ker(I+)
  Operator kernel_minus;  // orthonormal basis of Ker(I-)
  double zero_cut = 0.0;
};

// Eigenvalues below 1e-9 * max(1, ||I||) are zero modes. An eigenvalue within
// a decade of that cut on either side is ambiguous and raises PairingAmbiguity.
double zero_mode_cut(const SuperInvariant& inv);
SpectralPairing pair_spectra(const Operator& d);
SpectralPairing pair_spectra(const SuperCharge& q, const SuperInvariant& inv);

// (2 lambda)^{-1/2} d psi_plus. psi_plus must be a unit eigenvector of
// d^dagger d / 2 with eigenvalue lambda > 0; the output is post-checked.
State susy_map_state(const Operator& d, double lambda, const State& psi_plus);
// (2 lambda)^{-1/2} d^dagger psi_minus, the inverse direction.
State susy_unmap_state(const Operator& d, double lambda, const State& psi_minus);

}  // namespace susyinv
