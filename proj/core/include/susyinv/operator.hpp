#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace susyinv {

using cplx = std::complex<double>;
using Index = Eigen::Index;

// Dense complex square matrix. Every H, I, Q, W, U, d and generator is one.
using Operator = Eigen::MatrixXcd;
using State = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Split of the doubled space into (bosonic, fermionic) sectors.
struct Grading {
  Index n_plus = 0;
  Index n_minus = 0;
  Index dim() const { return n_plus + n_minus; }
};

struct BlockNorms {
  double plus_plus = 0.0;
  double plus_minus = 0.0;
  double minus_plus = 0.0;
  double minus_minus = 0.0;
};

BlockNorms block_norms(const Operator& op, const Grading& grading);
bool is_even(const Operator& op, const Grading& grading, double tol = 1e-12);
bool is_odd(const Operator& op, const Grading& grading, double tol = 1e-12);

Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

// General matrix exponential (Padé scaling-and-squaring).
Operator expm(const Operator& a);

// exp(-i s H) for Hermitian H, through the spectral decomposition.
Operator expm_hermitian(const Operator& h, double s);

struct EigenSystem {
  RealVector values;  // ascending
  Operator vectors;   // columns
  std::vector<std::vector<Index>> degeneracy_groups;
};

// Clustering gap used by eigh: 1e-8 * max(1, ||A||_F).
double degeneracy_tolerance(const Operator& a);

// Hermitian eigendecomposition. Rejects input whose relative Hermiticity
// defect exceeds 1e-10.
EigenSystem eigh(const Operator& a);

// Frobenius norm of the leading n x n block.
double interior_norm(const Operator& a, Index n);

double unitarity_defect(const Operator& u);

// ||A - A^dagger|| / ||A||, zero for the zero matrix.
double hermiticity_defect(const Operator& a);

// Unitary factor of the polar decomposition M = U P.
Operator polar_unitary(const Operator& m);

Operator block_diag(const Operator& a, const Operator& b);

// Precomputed exp(-i s G) for a fixed Hermitian generator G. Diagonal
// generators skip the eigendecomposition entirely.
class SpectralExponential {
 public:
  SpectralExponential() = default;
  explicit SpectralExponential(const Operator& generator);

  Index dim() const { return values_.size(); }
  bool diagonal() const { return diagonal_; }
  const RealVector& values() const { return values_; }

  // exp(-i s G)
  Operator operator()(double s) const;
  // G exp(-i s G)
  Operator generator_times(double s) const;
  // exp(-i s G) * m and m * exp(-i s G)
  Operator left(double s, const Operator& m) const;
  Operator right(const Operator& m, double s) const;

 private:
  RealVector values_;
  Operator vectors_;
  bool diagonal_ = false;
};

}  // namespace susyinv
