#include "susyinv/susy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "susyinv/errors.hpp"

namespace susyinv {
namespace {

constexpr double kStateTol = 1e-8;

struct Cluster {
  double value = 0.0;
  std::vector<Index> columns;
};

std::vector<Cluster> positive_clusters(const EigenSystem& es, double cut) {
  std::vector<Cluster> out;
  for (const auto& group : es.degeneracy_groups) {
    double mean = 0.0;
    for (Index k : group) mean += es.values(k);
    mean /= static_cast<double>(group.size());
    if (mean < cut) continue;
    out.push_back({mean, group});
  }
  return out;
}

Index count_below(const RealVector& values, double cut) {
  return static_cast<Index>(std::count_if(values.begin(), values.end(),
                                          [cut](double v) { return v < cut; }));
}

Operator columns_of(const Operator& m, const std::vector<Index>& cols) {
  Operator out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = m.col(cols[k]);
  return out;
}

void check_ambiguity(const RealVector& values, double cut, const char* sector) {
  const Index strict = count_below(values, cut / 10.0);
  const Index loose = count_below(values, cut * 10.0);
  if (strict != loose) {
    std::ostringstream msg;
    msg << "pair_spectra: eigenvalues of " << sector << " within a decade of the zero cut "
        << cut << " (kernel dimension " << strict << " at cut/10, " << loose << " at 10*cut)";
    throw PairingAmbiguity(msg.str(), static_cast<int>(strict), static_cast<int>(loose));
  }
}

void require_unit(const State& psi, const char* what) {
  const double n = psi.norm();
  if (std::abs(n - 1.0) > kStateTol) {
    std::ostringstream msg;
    msg << what << ": input state has norm " << n << ", expected 1";
    throw InvalidInput(msg.str());
  }
}

State partner_map(const Operator& forward, const Operator& source_inv, const Operator& target_inv,
                  double lambda, const State& psi, const char* what) {
  if (forward.rows() != forward.cols() || psi.size() != forward.cols()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch");
  }
  const double cut = 1e-9 * std::max(1.0, source_inv.norm());
  if (!(lambda > cut)) {
    std::ostringstream msg;
    msg << what << ": lambda = " << lambda << " is a zero mode and has no partner";
    throw InvalidInput(msg.str());
  }
  require_unit(psi, what);
  const double eig_defect = (source_inv * psi - lambda * psi).norm();
  if (eig_defect > kStateTol * std::max(1.0, lambda)) {
    std::ostringstream msg;
    msg << what << ": input is not an eigenvector with eigenvalue " << lambda << " (defect "
        << eig_defect << ")";
    throw InvalidInput(msg.str());
  }
  State out = forward * psi / std::sqrt(2.0 * lambda);
  const double out_defect = (target_inv * out - lambda * out).norm();
  if (std::abs(out.norm() - 1.0) > kStateTol ||
      out_defect > kStateTol * std::max(1.0, lambda)) {
    throw Error(std::string(what) + ": mapped state failed the partner eigen-check");
  }
  return out;
}

}  // namespace

SuperCharge build_supercharge(const Operator& d) {
  if (d.rows() != d.cols()) {
    std::ostringstream msg;
    msg << "build_supercharge: d must be square, got " << d.rows() << "x" << d.cols();
    throw InvalidInput(msg.str());
  }
  const Index n = d.rows();
  SuperCharge q;
  q.d = d;
  q.grading = {n, n};
  q.Q = Operator::Zero(2 * n, 2 * n);
  q.Q.bottomLeftCorner(n, n) = d;
  return q;
}

SuperInvariant build_invariant(const SuperCharge& q) {
  SuperInvariant inv;
  inv.Iplus = q.d.adjoint() * q.d / 2.0;
  inv.Iminus = q.d * q.d.adjoint() / 2.0;
  // Exact Hermitian symmetrization; the products above are Hermitian only up
  // to summation order.
  inv.Iplus = ((inv.Iplus + inv.Iplus.adjoint()) / 2.0).eval();
  inv.Iminus = ((inv.Iminus + inv.Iminus.adjoint()) / 2.0).eval();
  inv.I = block_diag(inv.Iplus, inv.Iminus);
  return inv;
}

double SuperalgebraReport::max() const {
  return std::max({q_squared, q_commutator, anticommutator});
}

SuperalgebraReport check_superalgebra(const SuperCharge& q, const SuperInvariant& inv) {
  SuperalgebraReport r;
  r.q_squared = (q.Q * q.Q).norm();
  r.q_commutator = commutator(q.Q, inv.I).norm();
  r.anticommutator = (anticommutator(q.Q, q.Q.adjoint()) - 2.0 * inv.I).norm();
  return r;
}

double zero_mode_cut(const SuperInvariant& inv) {
  return 1e-9 * std::max(1.0, inv.I.norm());
}

SpectralPairing pair_spectra(const Operator& d) {
  const SuperCharge q = build_supercharge(d);
  return pair_spectra(q, build_invariant(q));
}

SpectralPairing pair_spectra(const SuperCharge& q, const SuperInvariant& inv) {
  const double cut = zero_mode_cut(inv);
  const EigenSystem plus = eigh(inv.Iplus);
  const EigenSystem minus = eigh(inv.Iminus);
  check_ambiguity(plus.values, cut, "I+");
  check_ambiguity(minus.values, cut, "I-");

  SpectralPairing out;
  out.zero_cut = cut;
  out.kernel_dim_plus = count_below(plus.values, cut);
  out.kernel_dim_minus = count_below(minus.values, cut);
  out.kernel_plus = plus.vectors.leftCols(out.kernel_dim_plus);
  out.kernel_minus = minus.vectors.leftCols(out.kernel_dim_minus);

  const auto pc = positive_clusters(plus, cut);
  const auto mc = positive_clusters(minus, cut);
  const double match_tol = 10.0 * degeneracy_tolerance(inv.I);
  if (pc.size() != mc.size()) {
    std::ostringstream msg;
    msg << "pair_spectra: I+ has " << pc.size() << " positive levels, I- has " << mc.size();
    throw Error(msg.str());
  }
  for (std::size_t k = 0; k < pc.size(); ++k) {
    if (pc[k].columns.size() != mc[k].columns.size() ||
        std::abs(pc[k].value - mc[k].value) > match_tol) {
      std::ostringstream msg;
      msg << "pair_spectra: level " << k << " does not pair (I+: " << pc[k].value << " x"
          << pc[k].columns.size() << ", I-: " << mc[k].value << " x" << mc[k].columns.size()
          << ")";
      throw Error(msg.str());
    }
    PairedLevel level;
    level.lambda = pc[k].value;
    level.degeneracy = static_cast<Index>(pc[k].columns.size());
    level.plus_vectors = columns_of(plus.vectors, pc[k].columns);
    level.minus_vectors = columns_of(minus.vectors, mc[k].columns);
    // v_{ba} = <lambda,b,-| d |lambda,a,+> / sqrt(2 lambda)
    const Operator overlap =
        level.minus_vectors.adjoint() * q.d * level.plus_vectors / std::sqrt(2.0 * level.lambda);
    level.v = polar_unitary(overlap);
    out.levels.push_back(std::move(level));
  }
  return out;
}

State susy_map_state(const Operator& d, double lambda, const State& psi_plus) {
  const Operator iplus = d.adjoint() * d / 2.0;
  const Operator iminus = d * d.adjoint() / 2.0;
  return partner_map(d, iplus, iminus, lambda, psi_plus, "susy_map_state");
}

State susy_unmap_state(const Operator& d, double lambda, const State& psi_minus) {
  const Operator iplus = d.adjoint() * d / 2.0;
  const Operator iminus = d * d.adjoint() / 2.0;
  return partner_map(d.adjoint(), iminus, iplus, lambda, psi_minus, "susy_unmap_state");
}

}  // namespace susyinv
