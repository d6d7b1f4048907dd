#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "susyinv/operator.hpp"
#include "susyinv/representations.hpp"
#include "susyinv/susy.hpp"
#include "susyinv/timefunc.hpp"

namespace susyinv {

using OperatorMap = std::function<Operator(double)>;
using StateMap = std::function<State(double)>;

// Tilt generator G2 (J2 or K2) and axis generator G3 (J3 or K3) together with
// their precomputed exponentials. Shared between curves over the same rep.
struct GaugeGenerators {
  Operator G2, G3;
  SpectralExponential E2, E3;
  Index dim() const { return G3.rows(); }
};

std::shared_ptr<const GaugeGenerators> make_generators(const SpinRep& spin);
std::shared_ptr<const GaugeGenerators> make_generators(const OscillatorRep& osc);

// W(t) = exp(-i phi G3) exp(-i theta G2) exp(i phi G3), or a caller-supplied
// unitary map. The closed-form kinds differentiate through theta', phi'
// exactly; explicit curves fall back to central differences unless a
// derivative map is supplied.
class GaugeCurve {
 public:
  enum class Kind { spin_su2, osc_su11, explicit_map };

  static GaugeCurve spin(const SpinRep& spin, TimeFunction theta, TimeFunction phi);
  static GaugeCurve oscillator(const OscillatorRep& osc, TimeFunction theta, TimeFunction phi);
  static GaugeCurve rotation(std::shared_ptr<const GaugeGenerators> gens, Kind kind,
                             TimeFunction theta, TimeFunction phi);
  static GaugeCurve explicit_curve(Index dim, OperatorMap w, OperatorMap w_dot = {});
  static GaugeCurve identity(Index dim);

  Kind kind() const { return kind_; }
  Index dim() const { return dim_; }
  bool exact_derivative() const { return kind_ != Kind::explicit_map || bool(w_dot_); }
  const TimeFunction& theta() const { return theta_; }
  const TimeFunction& phi() const { return phi_; }
  const std::shared_ptr<const GaugeGenerators>& generators() const { return gens_; }

  Operator W(double t) const;
  Operator W_dot(double t) const;
  // exp(-i phi G3) exp(-i theta G2): W without its trailing axis factor.
  Operator tilt(double t) const;

 private:
  Kind kind_ = Kind::explicit_map;
  Index dim_ = 0;
  std::shared_ptr<const GaugeGenerators> gens_;
  TimeFunction theta_, phi_, theta_dot_, phi_dot_;
  OperatorMap w_, w_dot_;
};

// Y(t) = f(t) D + g(t) D^2 for a fixed Hermitian D, or an arbitrary
// Hermitian map. Only the first form commutes at different times.
class YSpec {
 public:
  static YSpec polynomial(Operator D, TimeFunction f, TimeFunction g = {});
  static YSpec spin(const SpinRep& spin, TimeFunction f, TimeFunction g = {});
  static YSpec oscillator(const OscillatorRep& osc, TimeFunction f, TimeFunction g = {});
  static YSpec explicit_map(Index dim, OperatorMap y);

  bool commuting() const { return !y_; }
  Index dim() const { return D_.rows(); }
  const Operator& D() const { return D_; }
  const RealVector& D_values() const { return diag_.values(); }
  const TimeFunction& f() const { return f_; }
  const TimeFunction& g() const { return g_; }

  Operator at(double t) const;
  // exp(-i int_0^t Y). Rejected for explicit maps.
  Operator propagator(double t) const;
  // Phase factor exp(-i (F(t) delta + G(t) delta^2)) picked up by a
  // D-eigenvector with eigenvalue delta.
  cplx phase(double delta, double t) const;

 private:
  Operator D_;
  SpectralExponential diag_;
  TimeFunction f_, g_, F_, G_;
  OperatorMap y_;
};

// H = W Y W^dagger - i W dW^dagger/dt. Rejects W(t) with unitarity defect
// above 1e-8.
Operator hamiltonian_from_gauge(const GaugeCurve& W, const YSpec& Y, double t);
// W(t) V(t) with V = exp(-i int_0^t Y); equals W(0) at t = 0.
Operator gauge_solution_operator(const GaugeCurve& W, const YSpec& Y, double t);
// W(t) V(t) W(0)^dagger, the evolution operator with U(0) = 1.
Operator evolution_from_gauge(const GaugeCurve& W, const YSpec& Y, double t);

enum class Family { spin, oscillator, custom };

// Input to the four-step construction.
struct SuperSystem {
  Family family = Family::custom;
  Index dim = 0;
  Index interior = 0;  // trusted leading block (dim for exact reps)
  double b = 1.0;
  Operator d0;
  OperatorMap Hplus;
  OperatorMap Uplus;
  GaugeCurve Wminus;
  YSpec Yminus;
};

// H+ = b J3, U+ = exp(-i b t J3), d0 = J+.
SuperSystem spin_system(const SpinRep& spin, double b, GaugeCurve Wminus, YSpec Yminus);
// H+ = a^dagger a + 1/2, U+ diagonal, d0 = truncated a^dagger.
SuperSystem oscillator_system(const OscillatorRep& osc, GaugeCurve Wminus, YSpec Yminus);

struct PartnerOutput {
  OperatorMap Hminus;
  OperatorMap Iplus;
  OperatorMap Iminus;
  OperatorMap d;
  OperatorMap Uminus;  // W(t) V(t) W(0)^dagger
  Operator Iplus0, Iminus0;
  SpectralPairing pairing;  // of d0
};

PartnerOutput run_prescription(const SuperSystem& sys);

// Y+ = W+^dagger H+ W+ - i W+^dagger dW+/dt for a chosen plus-sector gauge.
Operator plus_gauge_y(const GaugeCurve& Wplus, const OperatorMap& Hplus, double t);

// Solution of the H- equation obtained from the plus-sector solution
// U+(t)|lambda, a, +> through d(t), with the Y- phase attached. Within a
// degenerate level the plus basis is rotated so that D is diagonal on the
// partner states; `a` indexes that rotated basis.
State mapped_solution(const SuperSystem& sys, const PartnerOutput& out, std::size_t level,
                      Index a, double t);

// ---------------------------------------------------------------- closed forms

using Coefficients = std::array<double, 3>;

// Coefficients of H- = sum R^i J_i for Y- = f J3 and the spin gauge.
Coefficients closed_form_spin_R(const TimeFunction& f, const TimeFunction& theta,
                                const TimeFunction& phi, double t);
// Same for H- = sum R^i K_i with the su(1,1) gauge.
Coefficients closed_form_osc_R(const TimeFunction& f, const TimeFunction& theta,
                               const TimeFunction& phi, double t);

// exp(-i phi J3) exp(-i theta J2) exp(i (phi - F) J3), built with expm.
Operator closed_form_spin_U(const SpinRep& spin, const TimeFunction& f,
                            const TimeFunction& theta, const TimeFunction& phi, double t);

// Partner-sector solution grown from the plus state |j, m> (m < j):
// exp(i (m+1)(phi - F)) exp(-i phi J3) exp(-i theta J2) |j, m+1>.
State spin_solution(const SpinRep& spin, const TimeFunction& f, const TimeFunction& theta,
                    const TimeFunction& phi, double m, double t);
// Partner-sector solution grown from the Fock state |n>:
// exp(-i zeta) exp(-i phi K3) exp(-i theta K2) |n+1>, zeta = (F - phi)(n/2 + 3/4).
State osc_solution(const GaugeCurve& W, const TimeFunction& f, Index n, double t);

struct Precession {
  double r = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

// theta fixed, phi = omega t: H- = b r (f1 (cos wt J1 + sin wt J2) + f2 J3).
Precession precessing_special_case(const TimeFunction& f, double theta, double omega,
                                   double b, double t);

// sum R^i J_i + g (n . J)^2 with n = (sin th cos ph, sin th sin ph, cos th).
Operator quadrupole_partner(const SpinRep& spin, const TimeFunction& f, const TimeFunction& g,
                            const TimeFunction& theta, const TimeFunction& phi, double t);

// sum R^i J_i and sum R^i K_i.
Operator spin_operator(const SpinRep& spin, const Coefficients& r);
Operator osc_operator(const OscillatorRep& osc, const Coefficients& r);
// Expansion coefficients tr(H J_i) / tr(J_i^2) (zero for j = 0).
Coefficients spin_coefficients(const SpinRep& spin, const Operator& h);

}  // namespace susyinv
