#include "susyinv/operator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "susyinv/errors.hpp"

namespace susyinv {
namespace {

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.rows() << "x" << a.cols()
        << " vs " << b.rows() << "x" << b.cols() << ")";
    throw InvalidInput(msg.str());
  }
}

void require_grading(const Operator& op, const Grading& g) {
  if (op.rows() != op.cols() || op.rows() != g.dim()) {
    throw InvalidInput("grading does not match operator dimension");
  }
}

bool is_diagonal(const Operator& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (r != c && m(r, c) != cplx{0.0, 0.0}) return false;
    }
  }
  return true;
}

}  // namespace

BlockNorms block_norms(const Operator& op, const Grading& g) {
  require_grading(op, g);
  const Index p = g.n_plus;
  const Index m = g.n_minus;
  return {op.topLeftCorner(p, p).norm(), op.topRightCorner(p, m).norm(),
          op.bottomLeftCorner(m, p).norm(), op.bottomRightCorner(m, m).norm()};
}

bool is_even(const Operator& op, const Grading& g, double tol) {
  const auto b = block_norms(op, g);
  return b.plus_minus < tol && b.minus_plus < tol;
}

bool is_odd(const Operator& op, const Grading& g, double tol) {
  const auto b = block_norms(op, g);
  return b.plus_plus < tol && b.minus_minus < tol;
}

Operator commutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

Operator anticommutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

Operator expm(const Operator& a) {
  if (a.rows() != a.cols()) throw InvalidInput("expm: matrix is not square");
  if (!a.allFinite()) throw InvalidInput("expm: non-finite entries");
  return a.exp();
}

Operator expm_hermitian(const Operator& h, double s) {
  return SpectralExponential(h)(s);
}

double degeneracy_tolerance(const Operator& a) {
  return 1e-8 * std::max(1.0, a.norm());
}

double hermiticity_defect(const Operator& a) {
  const double n = a.norm();
  if (n == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / n;
}

EigenSystem eigh(const Operator& a) {
  if (a.rows() != a.cols()) throw InvalidInput("eigh: matrix is not square");
  const double defect = hermiticity_defect(a);
  if (defect > 1e-10) {
    std::ostringstream msg;
    msg << "eigh: input is not Hermitian (relative defect " << defect << ")";
    throw NotHermitian(msg.str(), defect);
  }
  Eigen::SelfAdjointEigenSolver<Operator> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error("eigh: eigensolver did not converge");
  }
  EigenSystem out{solver.eigenvalues(), solver.eigenvectors(), {}};
  const double gap = degeneracy_tolerance(a);
  for (Index i = 0; i < out.values.size(); ++i) {
    if (i == 0 || out.values(i) - out.values(i - 1) > gap) {
      out.degeneracy_groups.emplace_back();
    }
    out.degeneracy_groups.back().push_back(i);
  }
  return out;
}

double interior_norm(const Operator& a, Index n) {
  n = std::min({n, a.rows(), a.cols()});
  return a.topLeftCorner(n, n).norm();
}

double unitarity_defect(const Operator& u) {
  return (u.adjoint() * u - Operator::Identity(u.cols(), u.cols())).norm();
}

Operator polar_unitary(const Operator& m) {
  Eigen::JacobiSVD<Operator> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Operator block_diag(const Operator& a, const Operator& b) {
  Operator out = Operator::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

SpectralExponential::SpectralExponential(const Operator& generator) {
  if (generator.rows() != generator.cols()) {
    throw InvalidInput("SpectralExponential: generator is not square");
  }
  const double defect = hermiticity_defect(generator);
  if (defect > 1e-10) {
    throw NotHermitian("SpectralExponential: generator is not Hermitian", defect);
  }
  if (is_diagonal(generator)) {
    diagonal_ = true;
    values_ = generator.diagonal().real();
    return;
  }
  Eigen::SelfAdjointEigenSolver<Operator> solver(generator);
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Operator SpectralExponential::operator()(double s) const {
  const Eigen::VectorXcd phases =
      (-kI * s * values_.cast<cplx>()).array().exp().matrix();
  if (diagonal_) return phases.asDiagonal();
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Operator SpectralExponential::generator_times(double s) const {
  const Eigen::VectorXcd weights =
      ((-kI * s * values_.cast<cplx>()).array().exp() * values_.cast<cplx>().array())
          .matrix();
  if (diagonal_) return weights.asDiagonal();
  return vectors_ * weights.asDiagonal() * vectors_.adjoint();
}

Operator SpectralExponential::left(double s, const Operator& m) const {
  if (!diagonal_) return (*this)(s) * m;
  const Eigen::VectorXcd phases =
      (-kI * s * values_.cast<cplx>()).array().exp().matrix();
  return phases.asDiagonal() * m;
}

Operator SpectralExponential::right(const Operator& m, double s) const {
  if (!diagonal_) return m * (*this)(s);
  const Eigen::VectorXcd phases =
      (-kI * s * values_.cast<cplx>()).array().exp().matrix();
  return m * phases.asDiagonal();
}

}  // namespace susyinv
