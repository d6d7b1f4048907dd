#include "susyinv/construction.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "susyinv/errors.hpp"

namespace susyinv {
namespace {

constexpr double kUnitarityLimit = 1e-8;

Operator fd_derivative(const OperatorMap& m, double t) {
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  return (m(t + h) - m(t - h)) / (2.0 * h);
}

void require_unitary(const Operator& w, double t, const char* what) {
  const double defect = unitarity_defect(w);
  if (!(defect <= kUnitarityLimit)) {
    std::ostringstream msg;
    msg << what << ": W(" << t << ") is not unitary (defect " << defect << ")";
    throw InvalidInput(msg.str());
  }
}

Operator hermitize(const Operator& a) { return (a + a.adjoint()) / 2.0; }

}  // namespace

std::shared_ptr<const GaugeGenerators> make_generators(const SpinRep& spin) {
  auto g = std::make_shared<GaugeGenerators>();
  g->G2 = spin.J2;
  g->G3 = spin.J3;
  g->E2 = SpectralExponential(spin.J2);
  g->E3 = SpectralExponential(spin.J3);
  return g;
}

std::shared_ptr<const GaugeGenerators> make_generators(const OscillatorRep& osc) {
  auto g = std::make_shared<GaugeGenerators>();
  g->G2 = osc.K2;
  g->G3 = osc.K3;
  g->E2 = SpectralExponential(osc.K2);
  g->E3 = SpectralExponential(osc.K3);
  return g;
}

// ---------------------------------------------------------------- GaugeCurve

GaugeCurve GaugeCurve::rotation(std::shared_ptr<const GaugeGenerators> gens, Kind kind,
                                TimeFunction theta, TimeFunction phi) {
  if (!gens) throw InvalidInput("GaugeCurve: missing generators");
  if (kind == Kind::explicit_map) throw InvalidInput("GaugeCurve: rotation needs a closed-form kind");
  GaugeCurve c;
  c.kind_ = kind;
  c.dim_ = gens->dim();
  c.gens_ = std::move(gens);
  c.theta_dot_ = theta.derivative();
  c.phi_dot_ = phi.derivative();
  c.theta_ = std::move(theta);
  c.phi_ = std::move(phi);
  return c;
}

GaugeCurve GaugeCurve::spin(const SpinRep& spin, TimeFunction theta, TimeFunction phi) {
  return rotation(make_generators(spin), Kind::spin_su2, std::move(theta), std::move(phi));
}

GaugeCurve GaugeCurve::oscillator(const OscillatorRep& osc, TimeFunction theta, TimeFunction phi) {
  return rotation(make_generators(osc), Kind::osc_su11, std::move(theta), std::move(phi));
}

GaugeCurve GaugeCurve::explicit_curve(Index dim, OperatorMap w, OperatorMap w_dot) {
  if (!w) throw InvalidInput("GaugeCurve: explicit curve needs a map");
  if (dim <= 0) throw InvalidInput("GaugeCurve: dimension must be positive");
  GaugeCurve c;
  c.kind_ = Kind::explicit_map;
  c.dim_ = dim;
  c.w_ = std::move(w);
  c.w_dot_ = std::move(w_dot);
  return c;
}

GaugeCurve GaugeCurve::identity(Index dim) {
  return explicit_curve(
      dim, [dim](double) -> Operator { return Operator::Identity(dim, dim); },
      [dim](double) -> Operator { return Operator::Zero(dim, dim); });
}

Operator GaugeCurve::tilt(double t) const {
  if (kind_ == Kind::explicit_map) throw InvalidInput("GaugeCurve::tilt: explicit curve");
  return gens_->E3.left(phi_(t), gens_->E2(theta_(t)));
}

Operator GaugeCurve::W(double t) const {
  if (kind_ == Kind::explicit_map) {
    Operator w = w_(t);
    if (w.rows() != dim_ || w.cols() != dim_) throw InvalidInput("GaugeCurve: map returned wrong size");
    return w;
  }
  return gens_->E3.right(tilt(t), -phi_(t));
}

Operator GaugeCurve::W_dot(double t) const {
  if (kind_ == Kind::explicit_map) return w_dot_ ? w_dot_(t) : fd_derivative(w_, t);
  const double th = theta_(t);
  const double ph = phi_(t);
  const Operator w = W(t);
  const Operator& g3 = gens_->G3;
  Operator out = phi_dot_(t) * (kI * (w * g3 - g3 * w));
  const Operator tilt_part = gens_->E3.left(ph, gens_->E2.generator_times(th));
  out += theta_dot_(t) * (-kI) * gens_->E3.right(tilt_part, -ph);
  return out;
}

// ---------------------------------------------------------------- YSpec

YSpec YSpec::polynomial(Operator D, TimeFunction f, TimeFunction g) {
  YSpec y;
  y.diag_ = SpectralExponential(D);  // validates Hermiticity
  if (!y.diag_.diagonal()) throw InvalidInput("YSpec: D must be diagonal in the working basis");
  y.D_ = std::move(D);
  y.F_ = f.antiderivative();
  y.G_ = g.antiderivative();
  y.f_ = std::move(f);
  y.g_ = std::move(g);
  return y;
}

YSpec YSpec::spin(const SpinRep& spin, TimeFunction f, TimeFunction g) {
  return polynomial(spin.J3, std::move(f), std::move(g));
}

YSpec YSpec::oscillator(const OscillatorRep& osc, TimeFunction f, TimeFunction g) {
  return polynomial(osc.K3, std::move(f), std::move(g));
}

YSpec YSpec::explicit_map(Index dim, OperatorMap y) {
  if (!y) throw InvalidInput("YSpec: explicit map is empty");
  YSpec out;
  out.D_ = Operator::Zero(dim, dim);
  out.y_ = std::move(y);
  return out;
}

Operator YSpec::at(double t) const {
  if (y_) return y_(t);
  const double f = f_(t);
  const double g = g_(t);
  Operator out = Operator::Zero(D_.rows(), D_.cols());
  const auto& d = diag_.values();
  for (Index k = 0; k < d.size(); ++k) out(k, k) = f * d(k) + g * d(k) * d(k);
  return out;
}

cplx YSpec::phase(double delta, double t) const {
  if (y_) throw InvalidInput("YSpec::phase: explicit Y has no closed-form phase");
  return std::exp(-kI * (F_(t) * delta + G_(t) * delta * delta));
}

Operator YSpec::propagator(double t) const {
  if (y_) {
    throw InvalidInput(
        "YSpec::propagator: explicit Y(t) is not known to commute at different times; "
        "time-ordered exponentials are not supported");
  }
  const auto& d = diag_.values();
  Operator out = Operator::Zero(d.size(), d.size());
  for (Index k = 0; k < d.size(); ++k) out(k, k) = phase(d(k), t);
  return out;
}

// ---------------------------------------------------------------- gauge formula

Operator hamiltonian_from_gauge(const GaugeCurve& W, const YSpec& Y, double t) {
  if (W.dim() != Y.dim()) throw InvalidInput("hamiltonian_from_gauge: W and Y dimensions differ");
  const Operator w = W.W(t);
  // Closed-form curves are exponentials of Hermitian generators and unitary
  // by construction.
  if (W.kind() == GaugeCurve::Kind::explicit_map) require_unitary(w, t, "hamiltonian_from_gauge");
  const Operator wd = W.W_dot(t);
  Operator wy;
  if (Y.commuting()) {
    const double f = Y.f()(t);
    const double g = Y.g()(t);
    const RealVector& d = Y.D_values();
    wy = w;
    for (Index k = 0; k < d.size(); ++k) wy.col(k) *= f * d(k) + g * d(k) * d(k);
  } else {
    wy = w * Y.at(t);
  }
  Operator h = wy * w.adjoint();
  h.noalias() -= kI * (w * wd.adjoint());
  return h;
}

Operator gauge_solution_operator(const GaugeCurve& W, const YSpec& Y, double t) {
  if (W.dim() != Y.dim()) throw InvalidInput("gauge_solution_operator: W and Y dimensions differ");
  Operator u = W.W(t);
  if (!Y.commuting()) return u * Y.propagator(t);
  const RealVector& d = Y.D_values();
  for (Index k = 0; k < d.size(); ++k) u.col(k) *= Y.phase(d(k), t);
  return u;
}

Operator evolution_from_gauge(const GaugeCurve& W, const YSpec& Y, double t) {
  return gauge_solution_operator(W, Y, t) * W.W(0.0).adjoint();
}

// ---------------------------------------------------------------- systems

SuperSystem spin_system(const SpinRep& spin, double b, GaugeCurve Wminus, YSpec Yminus) {
  SuperSystem s;
  s.family = Family::spin;
  s.dim = spin.dim;
  s.interior = spin.dim;
  s.b = b;
  s.d0 = spin.Jplus;
  const Operator h = b * spin.J3;
  s.Hplus = [h](double) { return h; };
  const RealVector m = spin.J3.diagonal().real();
  s.Uplus = [m, b](double t) -> Operator {
    return (-kI * b * t * m.cast<cplx>()).array().exp().matrix().asDiagonal();
  };
  s.Wminus = std::move(Wminus);
  s.Yminus = std::move(Yminus);
  return s;
}

SuperSystem oscillator_system(const OscillatorRep& osc, GaugeCurve Wminus, YSpec Yminus) {
  SuperSystem s;
  s.family = Family::oscillator;
  s.dim = osc.dim();
  s.interior = osc.interior();
  s.d0 = osc.adag;
  RealVector e(osc.dim());
  for (Index n = 0; n < e.size(); ++n) e(n) = static_cast<double>(n) + 0.5;
  const Operator h = e.cast<cplx>().asDiagonal();
  s.Hplus = [h](double) { return h; };
  s.Uplus = [e](double t) -> Operator {
    return (-kI * t * e.cast<cplx>()).array().exp().matrix().asDiagonal();
  };
  s.Wminus = std::move(Wminus);
  s.Yminus = std::move(Yminus);
  return s;
}

PartnerOutput run_prescription(const SuperSystem& sys) {
  if (sys.d0.rows() != sys.dim || sys.d0.cols() != sys.dim) {
    throw InvalidInput("run_prescription: d0 does not match the system dimension");
  }
  if (sys.Wminus.dim() != sys.dim || sys.Yminus.dim() != sys.dim) {
    throw InvalidInput("run_prescription: W- or Y- does not match the system dimension");
  }
  if (!sys.Hplus || !sys.Uplus) throw InvalidInput("run_prescription: H+ and U+ are required");

  auto s = std::make_shared<const SuperSystem>(sys);
  const SuperCharge q = build_supercharge(sys.d0);
  const SuperInvariant inv = build_invariant(q);

  const Operator y0 = sys.Yminus.at(0.0);
  const double noncommuting = commutator(y0, inv.Iminus).norm();
  if (noncommuting > 1e-10 * std::max(1.0, y0.norm() * inv.Iminus.norm())) {
    std::ostringstream msg;
    msg << "run_prescription: Y-(0) does not commute with I-(0) (residual " << noncommuting << ")";
    throw InvalidInput(msg.str());
  }

  PartnerOutput out;
  out.Iplus0 = inv.Iplus;
  out.Iminus0 = inv.Iminus;
  out.pairing = pair_spectra(q, inv);

  const Operator ip0 = inv.Iplus;
  const Operator im0 = inv.Iminus;
  out.Hminus = [s](double t) { return hamiltonian_from_gauge(s->Wminus, s->Yminus, t); };
  out.Iplus = [s, ip0](double t) -> Operator {
    const Operator u = s->Uplus(t);
    return u * ip0 * u.adjoint();
  };
  out.Iminus = [s, im0](double t) -> Operator {
    const Operator w = s->Wminus.W(t);
    return w * im0 * w.adjoint();
  };
  out.d = [s](double t) -> Operator { return s->Wminus.W(t) * s->d0 * s->Uplus(t).adjoint(); };
  out.Uminus = [s](double t) { return evolution_from_gauge(s->Wminus, s->Yminus, t); };
  return out;
}

Operator plus_gauge_y(const GaugeCurve& Wplus, const OperatorMap& Hplus, double t) {
  const Operator w = Wplus.W(t);
  require_unitary(w, t, "plus_gauge_y");
  return w.adjoint() * Hplus(t) * w - kI * w.adjoint() * Wplus.W_dot(t);
}

State mapped_solution(const SuperSystem& sys, const PartnerOutput& out, std::size_t level,
                      Index a, double t) {
  if (level >= out.pairing.levels.size()) {
    std::ostringstream msg;
    msg << "mapped_solution: level " << level << " requested but only "
        << out.pairing.levels.size() << " positive levels exist (zero modes have no partner)";
    throw InvalidInput(msg.str());
  }
  const PairedLevel& lvl = out.pairing.levels[level];
  if (a < 0 || a >= lvl.degeneracy) throw InvalidInput("mapped_solution: index outside the level");
  if (!sys.Yminus.commuting()) throw InvalidInput("mapped_solution: Y- must be a commuting form");

  const double norm = std::sqrt(2.0 * lvl.lambda);
  const Operator partner = sys.d0 * lvl.plus_vectors / norm;
  const EigenSystem rot = eigh(hermitize(partner.adjoint() * sys.Yminus.D() * partner));
  const State plus0 = lvl.plus_vectors * rot.vectors.col(a);
  const State plus_t = sys.Uplus(t) * plus0;
  return sys.Yminus.phase(rot.values(a), t) * (out.d(t) * plus_t) / norm;
}

// ---------------------------------------------------------------- closed forms

namespace {

Coefficients gauge_coefficients(double s, double c, const TimeFunction& f,
                                const TimeFunction& theta, const TimeFunction& phi, double t) {
  const double ph = phi(t);
  const double fv = f(t);
  const double th_dot = theta.derivative()(t);
  const double ph_dot = phi.derivative()(t);
  return {s * std::cos(ph) * (fv - ph_dot) - std::sin(ph) * th_dot,
          s * std::sin(ph) * (fv - ph_dot) + std::cos(ph) * th_dot,
          c * fv + (1.0 - c) * ph_dot};
}

}  // namespace

Coefficients closed_form_spin_R(const TimeFunction& f, const TimeFunction& theta,
                                const TimeFunction& phi, double t) {
  const double th = theta(t);
  return gauge_coefficients(std::sin(th), std::cos(th), f, theta, phi, t);
}

Coefficients closed_form_osc_R(const TimeFunction& f, const TimeFunction& theta,
                               const TimeFunction& phi, double t) {
  const double th = theta(t);
  return gauge_coefficients(std::sinh(th), std::cosh(th), f, theta, phi, t);
}

Operator closed_form_spin_U(const SpinRep& spin, const TimeFunction& f,
                            const TimeFunction& theta, const TimeFunction& phi, double t) {
  const double ph = phi(t);
  const double big_f = f.antiderivative()(t);
  return expm(-kI * ph * spin.J3) * expm(-kI * theta(t) * spin.J2) *
         expm(kI * (ph - big_f) * spin.J3);
}

State spin_solution(const SpinRep& spin, const TimeFunction& f, const TimeFunction& theta,
                    const TimeFunction& phi, double m, double t) {
  if (!(m < spin.j)) throw InvalidInput("spin_solution: m = j is a zero mode of I+");
  const double ph = phi(t);
  const double big_f = f.antiderivative()(t);
  const cplx phase = std::exp(kI * (m + 1.0) * (ph - big_f));
  return phase * (expm(-kI * ph * spin.J3) * expm(-kI * theta(t) * spin.J2) * spin.basis(m + 1.0));
}

State osc_solution(const GaugeCurve& W, const TimeFunction& f, Index n, double t) {
  if (W.kind() != GaugeCurve::Kind::osc_su11) throw InvalidInput("osc_solution: needs an su(1,1) gauge");
  if (n < 0 || n + 1 >= W.dim() - 1) throw InvalidInput("osc_solution: n + 1 outside the Fock space");
  const double zeta = (f.antiderivative()(t) - W.phi()(t)) * (0.5 * static_cast<double>(n) + 0.75);
  return std::exp(-kI * zeta) * W.tilt(t).col(n + 1);
}

Precession precessing_special_case(const TimeFunction& f, double theta, double omega,
                                   double b, double t) {
  const double fv = f(t);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double transverse = s * (fv - omega);
  const double axial = c * fv + (1.0 - c) * omega;
  Precession p;
  const double br = std::hypot(transverse, axial);
  p.r = br / b;
  if (br > 0.0) {
    p.f1 = transverse / br;
    p.f2 = axial / br;
  }
  return p;
}

Operator spin_operator(const SpinRep& spin, const Coefficients& r) {
  return r[0] * spin.J1 + r[1] * spin.J2 + r[2] * spin.J3;
}

Operator osc_operator(const OscillatorRep& osc, const Coefficients& r) {
  return r[0] * osc.K1 + r[1] * osc.K2 + r[2] * osc.K3;
}

Coefficients spin_coefficients(const SpinRep& spin, const Operator& h) {
  const Operator* js[3] = {&spin.J1, &spin.J2, &spin.J3};
  Coefficients out{};
  for (int i = 0; i < 3; ++i) {
    const double norm = (*js[i] * *js[i]).trace().real();
    if (norm > 0.0) out[i] = (h * *js[i]).trace().real() / norm;
  }
  return out;
}

Operator quadrupole_partner(const SpinRep& spin, const TimeFunction& f, const TimeFunction& g,
                            const TimeFunction& theta, const TimeFunction& phi, double t) {
  const double th = theta(t);
  const double ph = phi(t);
  const Coefficients axis{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  const Operator n_dot_j = spin_operator(spin, axis);
  return spin_operator(spin, closed_form_spin_R(f, theta, phi, t)) + g(t) * (n_dot_j * n_dot_j);
}

}  // namespace susyinv
