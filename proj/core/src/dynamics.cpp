#include "susyinv/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "susyinv/errors.hpp"

namespace susyinv {
namespace {

Operator hermitian_part(const Operator& h, double t) {
  const double defect = hermiticity_defect(h);
  if (defect > 1e-8) {
    std::ostringstream msg;
    msg << "propagate: H(" << t << ") is not Hermitian (relative defect " << defect << ")";
    throw NotHermitian(msg.str(), defect);
  }
  return (h + h.adjoint()) / 2.0;
}

template <typename Block>
double block_norm(const Block& m, Index interior) {
  if (interior <= 0) return m.norm();
  return interior_norm(m, interior);
}

bool keep(Index k, const Grid& grid, Index every) {
  return k == grid.steps || k % std::max<Index>(1, every) == 0;
}

}  // namespace

Grid make_grid(double T, double dt) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidInput("grid: T must be finite and >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("grid: dt must be positive");
  if (T / dt > 1e7) throw InvalidInput("grid: more than 1e7 steps");
  Grid g;
  g.T = T;
  g.steps = static_cast<Index>(std::ceil(T / dt - 1e-9));
  g.dt = g.steps > 0 ? T / static_cast<double>(g.steps) : dt;
  return g;
}

Operator step_exponential(const Operator& h, double dt, double max_step_norm) {
  const EigenSystem es = eigh(h);
  const double spectral = es.values.size() ? es.values.cwiseAbs().maxCoeff() : 0.0;
  if (spectral * dt >= max_step_norm) {
    const double suggested = 0.8 * max_step_norm / spectral;
    std::ostringstream msg;
    msg << "propagate: ||H|| dt = " << spectral * dt << " exceeds " << max_step_norm
        << "; use dt <= " << suggested;
    throw StepTooLarge(msg.str(), suggested);
  }
  const Eigen::VectorXcd phases = (-kI * dt * es.values.cast<cplx>()).array().exp().matrix();
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

Trajectory propagate(const OperatorMap& H, const State& psi0, const Grid& grid,
                     const PropagateOptions& options) {
  const double n0 = psi0.norm();
  if (std::abs(n0 - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "propagate: initial state has norm " << n0;
    throw InvalidInput(msg.str());
  }
  Trajectory out;
  State psi = psi0;
  out.times.push_back(0.0);
  out.states.push_back(psi);
  out.norm_drift.push_back(0.0);
  for (Index k = 0; k < grid.steps; ++k) {
    const double tm = grid.time(k) + grid.dt / 2.0;
    psi = step_exponential(hermitian_part(H(tm), tm), grid.dt, options.max_step_norm) * psi;
    if (keep(k + 1, grid, options.record_every)) {
      out.times.push_back(grid.time(k + 1));
      out.states.push_back(psi);
      out.norm_drift.push_back(std::abs(psi.norm() - n0));
    }
  }
  return out;
}

Trajectory propagate(const OperatorMap& H, const Operator& U0, const Grid& grid,
                     const PropagateOptions& options) {
  Trajectory out;
  Operator u = U0;
  out.times.push_back(0.0);
  out.operators.push_back(u);
  out.unitarity_defect.push_back(unitarity_defect(u));
  for (Index k = 0; k < grid.steps; ++k) {
    const double tm = grid.time(k) + grid.dt / 2.0;
    u = step_exponential(hermitian_part(H(tm), tm), grid.dt, options.max_step_norm) * u;
    if (keep(k + 1, grid, options.record_every)) {
      out.times.push_back(grid.time(k + 1));
      out.operators.push_back(u);
      out.unitarity_defect.push_back(unitarity_defect(u));
    }
  }
  return out;
}

double diagnostic_step(double t) { return 1e-5 * std::max(1.0, std::abs(t)); }

double lvn_residual(const OperatorMap& I, const OperatorMap& H, double t,
                    const ResidualOptions& options) {
  Operator di;
  if (options.dI) {
    di = options.dI(t);
  } else {
    const double h = diagnostic_step(t);
    di = (I(t + h) - I(t - h)) / (2.0 * h);
  }
  const Operator r = di - kI * commutator(I(t), H(t));
  return block_norm(r, options.interior);
}

double intertwining_residual(const OperatorMap& d, const OperatorMap& Hplus,
                             const OperatorMap& Hminus, double t, Index interior) {
  const double h = diagnostic_step(t);
  const Operator dd = (d(t + h) - d(t - h)) / (2.0 * h);
  const Operator dt = d(t);
  const Operator r = kI * dd - Hminus(t) * dt + dt * Hplus(t);
  return block_norm(r, interior);
}

double schrodinger_residual(const StateMap& psi, const OperatorMap& H, double t, double h,
                            Index interior) {
  const State dpsi = (psi(t + h) - psi(t - h)) / (2.0 * h);
  const State r = kI * dpsi - H(t) * psi(t);
  if (interior <= 0) return r.norm();
  return r.head(std::min(interior, r.size())).norm();
}

double infidelity(const State& a, const State& b) {
  if (a.size() != b.size()) throw InvalidInput("infidelity: dimension mismatch");
  return 1.0 - std::abs(a.dot(b));
}

double infidelity(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("infidelity: dimension mismatch");
  return 1.0 - std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.cols());
}

Operator level_frame(const Operator& invariant, std::size_t level) {
  const EigenSystem es = eigh(invariant);
  if (level >= es.degeneracy_groups.size()) {
    std::ostringstream msg;
    msg << "level_frame: level " << level << " requested, operator has "
        << es.degeneracy_groups.size() << " levels";
    throw InvalidInput(msg.str());
  }
  const auto& group = es.degeneracy_groups[level];
  Operator f(invariant.rows(), static_cast<Index>(group.size()));
  for (std::size_t k = 0; k < group.size(); ++k) f.col(static_cast<Index>(k)) = es.vectors.col(group[k]);
  return f;
}

State ProjectedTrajectory::solution(std::size_t k, Index a) const {
  return frames.at(k) * u.at(k).col(a);
}

namespace {

struct LevelSample {
  Operator frame;
  double value = 0.0;
};

LevelSample sample_level(const Operator& inv, std::size_t level, Index expected_size,
                         const Operator* previous, double t) {
  const EigenSystem es = eigh(inv);
  if (level >= es.degeneracy_groups.size() ||
      (expected_size > 0 &&
       static_cast<Index>(es.degeneracy_groups[level].size()) != expected_size)) {
    std::ostringstream msg;
    msg << "projected_schrodinger: level structure changed at t = " << t;
    throw EigenvalueCrossing(msg.str(), t);
  }
  const auto& group = es.degeneracy_groups[level];
  LevelSample s;
  s.frame.resize(inv.rows(), static_cast<Index>(group.size()));
  for (std::size_t k = 0; k < group.size(); ++k) {
    s.frame.col(static_cast<Index>(k)) = es.vectors.col(group[k]);
    s.value += es.values(group[k]);
  }
  s.value /= static_cast<double>(group.size());
  if (previous) {
    const Operator overlap = previous->adjoint() * s.frame;
    Eigen::JacobiSVD<Operator> svd(overlap);
    if (svd.singularValues().minCoeff() < 0.5) {
      std::ostringstream msg;
      msg << "projected_schrodinger: eigenframe jumped at t = " << t
          << " (grid too coarse or a crossing)";
      throw EigenvalueCrossing(msg.str(), t);
    }
    // Rotate so that previous^dagger * frame is Hermitian positive.
    s.frame = s.frame * polar_unitary(overlap).adjoint();
  }
  return s;
}

}  // namespace

ProjectedTrajectory projected_schrodinger(const OperatorMap& I, const OperatorMap& H,
                                          std::size_t level, const Grid& grid) {
  ProjectedTrajectory out;
  LevelSample cur = sample_level(I(0.0), level, 0, nullptr, 0.0);
  const Index dn = cur.frame.cols();
  out.eigenvalue = cur.value;
  Operator u = Operator::Identity(dn, dn);
  out.times.push_back(0.0);
  out.frames.push_back(cur.frame);
  out.u.push_back(u);
  for (Index k = 0; k < grid.steps; ++k) {
    const double t0 = grid.time(k);
    const double tm = t0 + grid.dt / 2.0;
    const double t1 = grid.time(k + 1);
    const LevelSample mid = sample_level(I(tm), level, dn, &cur.frame, tm);
    const LevelSample next = sample_level(I(t1), level, dn, &mid.frame, t1);
    const Operator energy = mid.frame.adjoint() * H(tm) * mid.frame;
    const Operator connection = kI * mid.frame.adjoint() * (next.frame - cur.frame) / grid.dt;
    Operator delta = energy - connection;
    delta = ((delta + delta.adjoint()) / 2.0).eval();
    u = step_exponential(delta, grid.dt, 1e300) * u;
    cur = next;
    out.times.push_back(t1);
    out.frames.push_back(cur.frame);
    out.u.push_back(u);
  }
  return out;
}

HolonomyResult berry_holonomy(const OperatorMap& frame, Index steps) {
  if (steps < 1) throw InvalidInput("berry_holonomy: steps must be positive");
  const Operator start = frame(0.0);
  const Operator end = frame(1.0);
  if (start.rows() != end.rows() || start.cols() != end.cols()) {
    throw InvalidInput("berry_holonomy: frame size changes along the loop");
  }
  const double gap = (start * start.adjoint() - end * end.adjoint()).norm();
  if (gap > 1e-8) {
    std::ostringstream msg;
    msg << "berry_holonomy: loop is not closed (projector mismatch " << gap << ")";
    throw InvalidInput(msg.str());
  }
  const Index dn = start.cols();
  Operator product = Operator::Identity(dn, dn);
  Operator prev = start;
  for (Index k = 1; k <= steps; ++k) {
    const Operator next = k == steps ? start : frame(static_cast<double>(k) / static_cast<double>(steps));
    product = product * polar_unitary(prev.adjoint() * next);
    prev = next;
  }
  HolonomyResult r;
  r.gamma = product.adjoint();
  r.unitarity_defect = unitarity_defect(r.gamma);
  r.steps = steps;
  return r;
}

}  // namespace susyinv
