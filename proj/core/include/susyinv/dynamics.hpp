#pragma once

#include <functional>
#include <vector>

#include "susyinv/operator.hpp"

namespace susyinv {

using OperatorMap = std::function<Operator(double)>;
using StateMap = std::function<State(double)>;

// Uniform grid 0 = t_0 < ... < t_n = T. dt is shrunk so that n * dt = T.
struct Grid {
  double T = 0.0;
  double dt = 0.0;
  Index steps = 0;
  double time(Index k) const { return static_cast<double>(k) * dt; }
};

Grid make_grid(double T, double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;        // filled when a state is propagated
  std::vector<Operator> operators;  // filled when an operator is propagated
  std::vector<double> unitarity_defect;  // operator runs, per recorded sample
  std::vector<double> norm_drift;        // state runs, per recorded sample
};

struct PropagateOptions {
  Index record_every = 1;       // keep every k-th grid point (the endpoint is always kept)
  double max_step_norm = 0.5;   // reject steps with ||H|| dt at or above this
};

// Midpoint exponential: psi(t + dt) = exp(-i dt H(t + dt/2)) psi(t).
Trajectory propagate(const OperatorMap& H, const State& psi0, const Grid& grid,
                     const PropagateOptions& options = {});
// Same stepper acting on the columns of U0.
Trajectory propagate(const OperatorMap& H, const Operator& U0, const Grid& grid,
                     const PropagateOptions& options = {});

// One step exp(-i dt H) for Hermitian H, with the step-size guard applied.
Operator step_exponential(const Operator& h, double dt, double max_step_norm = 0.5);

double diagnostic_step(double t);  // 1e-5 * max(1, |t|)

struct ResidualOptions {
  OperatorMap dI;      // analytic derivative; central difference when empty
  Index interior = 0;  // > 0: measure only the leading interior block
};

// ||dI/dt - i[I, H]||
double lvn_residual(const OperatorMap& I, const OperatorMap& H, double t,
                    const ResidualOptions& options = {});
// ||i dd/dt - H- d + d H+||
double intertwining_residual(const OperatorMap& d, const OperatorMap& Hplus,
                             const OperatorMap& Hminus, double t, Index interior = 0);
// ||i dpsi/dt - H psi|| with a central difference of step h.
double schrodinger_residual(const StateMap& psi, const OperatorMap& H, double t,
                            double h = 1e-6, Index interior = 0);

// 1 - |<a, b>| for unit vectors.
double infidelity(const State& a, const State& b);
// 1 - |tr(A^dagger B)| / n for n x n unitaries.
double infidelity(const Operator& a, const Operator& b);

// Eigenvectors of one degeneracy level of a Hermitian operator. Levels are
// counted in ascending eigenvalue order.
Operator level_frame(const Operator& invariant, std::size_t level);

struct ProjectedTrajectory {
  std::vector<double> times;
  std::vector<Operator> u;       // level-space unitaries, u(0) = 1
  std::vector<Operator> frames;  // aligned eigenframes |lambda, a; t>
  double eigenvalue = 0.0;

  // sum_b u_ba(t_k) |lambda, b; t_k>
  State solution(std::size_t k, Index a) const;
};

// Integrates i du/dt = (E - A) u with E_ab = <a|H|b>, A_ab = i <a|d/dt b> over
// eigenframes of I(t) kept continuous by polar alignment. A change of the
// level's multiplicity, or a frame jump, raises EigenvalueCrossing.
ProjectedTrajectory projected_schrodinger(const OperatorMap& I, const OperatorMap& H,
                                          std::size_t level, const Grid& grid);

struct HolonomyResult {
  Operator gamma;
  double unitarity_defect = 0.0;
  Index steps = 0;
};

// Ordered product of polar factors of frame overlaps around a closed loop,
// s in [0, 1]. frame(1) must span the same subspace as frame(0); the end
// frame is then identified with the start frame.
HolonomyResult berry_holonomy(const OperatorMap& frame, Index steps);

}  // namespace susyinv
