#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "output.hpp"
#include "susyinv/dynamics.hpp"
#include "susyinv/errors.hpp"

namespace susyinv::cli {
namespace {

using nlohmann::json;

std::vector<double> sample_times(double T, Index samples) {
  std::vector<double> out(static_cast<std::size_t>(samples));
  for (Index k = 0; k < samples; ++k) {
    out[static_cast<std::size_t>(k)] = T * static_cast<double>(k) / static_cast<double>(samples - 1);
  }
  return out;
}

std::string out_dir_for(const RunConfig& config, const CommonOptions& options) {
  return options.out_dir.value_or(config.out_dir);
}

bool spin_family(const Model& m) { return m.config.family == Family::spin; }

double family_tol(const Model& m, double spin_tol, double osc_tol) {
  return spin_family(m) ? spin_tol : osc_tol;
}

// Residual restricted to the trusted block (the whole matrix for spins).
double trusted_norm(const Model& m, const Operator& r) {
  return spin_family(m) ? r.norm() : interior_norm(r, m.interior);
}

Operator closed_form_hamiltonian(const Model& m, double t) {
  if (m.spin) return quadrupole_partner(*m.spin, m.f, m.g, m.theta, m.phi, t);
  return osc_operator(*m.osc, closed_form_osc_R(m.f, m.theta, m.phi, t));
}

Coefficients closed_form_R(const Model& m, double t) {
  if (m.spin) return closed_form_spin_R(m.f, m.theta, m.phi, t);
  return closed_form_osc_R(m.f, m.theta, m.phi, t);
}

void add_check(VerifyReport& report, std::string name, double residual, double tol,
               bool gating = true, std::string note = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.max_residual = residual;
  c.tolerance = tol;
  c.pass = std::isfinite(residual) && residual <= tol;
  c.gating = gating;
  c.note = std::move(note);
  report.checks.push_back(std::move(c));
}

// Number of positive levels whose mapped solutions are checked.
std::size_t solution_level_count(const Model& m) {
  std::size_t n = m.partner.pairing.levels.size();
  if (!spin_family(m)) {
    // Partner state |n+1> must stay at least one state inside the trusted block.
    n = std::min<std::size_t>(n, static_cast<std::size_t>(std::max<Index>(0, m.interior - 1)));
  }
  if (m.config.solution_levels > 0) {
    n = std::min<std::size_t>(n, static_cast<std::size_t>(m.config.solution_levels));
  }
  return n;
}

void check_random(VerifyReport& report, const CommonOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  double alg = 0.0;
  double spec = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    Operator d(8, 8);
    for (Index c = 0; c < 8; ++c) {
      for (Index r = 0; r < 8; ++r) d(r, c) = cplx(normal(rng), normal(rng));
    }
    const SuperCharge q = build_supercharge(d);
    const SuperInvariant inv = build_invariant(q);
    alg = std::max(alg, check_superalgebra(q, inv).max() / std::max(1.0, inv.I.norm()));
    const RealVector a = eigh(inv.Iplus).values;
    const RealVector b = eigh(inv.Iminus).values;
    spec = std::max(spec, (a - b).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff()));
  }
  const double s = options.tolerance_scale;
  add_check(report, "random_superalgebra", alg, 1e-12 * s, true,
            "20 complex Gaussian 8x8 draws, relative to ||I||");
  add_check(report, "random_spectra", spec, 1e-10 * s, true, "spectra of I+ and I- agree");
}

}  // namespace

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass || !c.gating; });
}

VerifyReport run_verify(const Model& m, const CommonOptions& options) {
  VerifyReport report;
  const RunConfig& cfg = m.config;
  const double s = options.tolerance_scale;
  const PartnerOutput& p = m.partner;
  const auto times = sample_times(cfg.T, std::min<Index>(cfg.samples, 101));
  const bool wrong_h = options.wrong_hamiltonian || cfg.wrong_hamiltonian;

  const SuperCharge q = build_supercharge(m.system.d0);
  const SuperInvariant inv = build_invariant(q);
  const double inorm = std::max(1.0, inv.I.norm());

  if (cfg.wants("superalgebra")) {
    add_check(report, "superalgebra", check_superalgebra(q, inv).max(), 1e-12 * inorm * s);
  }

  if (cfg.wants("pairing")) {
    double worst = 0.0;
    for (const auto& lvl : p.pairing.levels) {
      const Operator lhs = m.system.d0 * lvl.plus_vectors;
      const Operator rhs = std::sqrt(2.0 * lvl.lambda) * lvl.minus_vectors * lvl.v;
      worst = std::max({worst, (lhs - rhs).norm() / std::sqrt(std::max(1.0, lvl.lambda)),
                        unitarity_defect(lvl.v)});
    }
    std::ostringstream note;
    note << p.pairing.levels.size() << " positive levels, kernel dims (" << p.pairing.kernel_dim_plus
         << ", " << p.pairing.kernel_dim_minus << ")";
    if (p.pairing.levels.empty()) report.warnings.push_back("d0 has no positive levels to pair");
    add_check(report, "pairing", worst, 1e-10 * s, true, note.str());
  }

  if (cfg.wants("random")) check_random(report, options);

  if (cfg.wants("closed_form")) {
    double worst = 0.0;
    for (double t : times) {
      worst = std::max(worst, trusted_norm(m, p.Hminus(t) - closed_form_hamiltonian(m, t)));
    }
    if (!m.spin && !m.g.is_zero()) {
      report.warnings.push_back("closed_form: the oscillator closed form has no g term");
    } else {
      add_check(report, "closed_form", worst, family_tol(m, 1e-9, 1e-6) * s);
    }
  }

  if (cfg.wants("lvn")) {
    const OperatorMap h = wrong_h ? m.system.Hplus : p.Hminus;
    ResidualOptions ro;
    ro.interior = spin_family(m) ? 0 : m.interior;
    double worst = 0.0;
    for (double t : times) worst = std::max(worst, lvn_residual(p.Iminus, h, t, ro));
    add_check(report, "lvn_minus", worst, family_tol(m, 1e-6, 1e-4) * s, true,
              wrong_h ? "checked against H+ (mismatched pair)" : "");
    double plus = 0.0;
    for (double t : times) plus = std::max(plus, lvn_residual(p.Iplus, m.system.Hplus, t, ro));
    add_check(report, "lvn_plus", plus, family_tol(m, 1e-6, 1e-4) * s);
  }

  if (cfg.wants("transport")) {
    double worst = 0.0;
    const Operator i0 = p.Iminus(0.0);
    for (double t : times) {
      const Operator u = p.Uminus(t);
      worst = std::max(worst, trusted_norm(m, u * i0 * u.adjoint() - p.Iminus(t)));
    }
    add_check(report, "transport", worst, family_tol(m, 1e-9, 1e-6) * s);
  }

  if (cfg.wants("identities")) {
    double worst = 0.0;
    for (double t : times) {
      const Operator d = p.d(t);
      worst = std::max(worst, (p.Iplus(t) - d.adjoint() * d / 2.0).norm());
      worst = std::max(worst, (p.Iminus(t) - d * d.adjoint() / 2.0).norm());
    }
    add_check(report, "d_identities", worst, 1e-10 * inorm * s);
  }

  if (cfg.wants("solutions")) {
    const std::size_t levels = solution_level_count(m);
    double worst = 0.0;
    const Index interior = spin_family(m) ? 0 : m.interior;
    for (std::size_t l = 0; l < levels; ++l) {
      for (Index a = 0; a < p.pairing.levels[l].degeneracy; ++a) {
        const StateMap psi = [&](double t) { return mapped_solution(m.system, p, l, a, t); };
        for (std::size_t k = 0; k < times.size(); k += 10) {
          worst = std::max(worst, schrodinger_residual(psi, p.Hminus, times[k], 1e-6, interior));
        }
      }
    }
    std::ostringstream note;
    note << levels << " levels";
    if (levels == 0) report.warnings.push_back("solutions: no positive level to map");
    add_check(report, "solutions", worst, 1e-5 * s, true, note.str());
  }

  if (cfg.wants("propagation")) {
    const Grid grid = make_grid(cfg.T, cfg.dt);
    PropagateOptions po;
    po.record_every = std::max<Index>(1, grid.steps / 20);
    const Trajectory traj = propagate(p.Hminus, Operator(Operator::Identity(m.dim, m.dim)), grid, po);
    double worst = 0.0;
    double drift = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      worst = std::max(worst, infidelity(traj.operators[k], p.Uminus(traj.times[k])));
      drift = std::max(drift, traj.unitarity_defect[k]);
    }
    std::ostringstream note;
    note << "midpoint stepper, " << grid.steps << " steps, max unitarity defect " << drift;
    add_check(report, "propagation", worst, family_tol(m, 1e-8, 1e-5) * s, true, note.str());
  }

  if (cfg.wants("intertwining")) {
    double worst = 0.0;
    for (double t : times) {
      worst = std::max(worst, intertwining_residual(p.d, m.system.Hplus, p.Hminus, t,
                                                    spin_family(m) ? 0 : m.interior));
    }
    add_check(report, "intertwining", worst, 1e-6 * s, false,
              "diagnostic only: sufficient, not necessary");
  }
  return report;
}

int cmd_verify(const RunConfig& config, const CommonOptions& options, std::ostream& log) {
  const Model model = build_model(config);
  const VerifyReport report = run_verify(model, options);

  json checks = json::array();
  log << std::left << std::setw(22) << "check" << std::setw(26) << "max_residual"
      << std::setw(26) << "tolerance" << "result\n";
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"max_residual", c.max_residual},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"gating", c.gating},
                      {"note", c.note}});
    log << std::left << std::setw(22) << c.name << std::setw(26) << format_double(c.max_residual)
        << std::setw(26) << format_double(c.tolerance)
        << (c.pass ? "pass" : (c.gating ? "FAIL" : "fail (non-gating)")) << '\n';
  }
  for (const auto& w : report.warnings) log << "warning: " << w << '\n';
  const bool pass = report.pass();
  log << (pass ? "all checks passed" : "some checks failed") << '\n';

  const auto dir = ensure_dir(out_dir_for(config, options));
  json doc = {{"config", config.source},
              {"family", spin_family(model) ? "spin" : "oscillator"},
              {"dim", model.dim},
              {"interior", model.interior},
              {"tolerance_scale", options.tolerance_scale},
              {"seed", options.seed},
              {"checks", checks},
              {"warnings", report.warnings},
              {"pass", pass}};
  write_json(dir / "verify.json", doc);
  return pass ? kPass : kCheckFailed;
}

int cmd_build(const RunConfig& config, const CommonOptions& options, std::ostream& log) {
  const Model m = build_model(config);
  const auto dir = ensure_dir(out_dir_for(config, options));
  const auto times = sample_times(config.T, config.samples);
  const PartnerOutput& p = m.partner;

  if (config.wants_format("csv")) {
    CsvWriter h(dir / "H_minus.csv",
                {"t", "R1", "R2", "R3", "hermiticity_defect", "closed_form_deviation"});
    const Index levels = spin_family(m) ? m.dim : m.interior;
    std::vector<std::string> header = {"t"};
    for (Index k = 0; k < levels; ++k) header.push_back("lambda" + std::to_string(k));
    CsvWriter spec(dir / "invariant_spectrum.csv", header);
    for (double t : times) {
      const Operator hm = p.Hminus(t);
      const Coefficients r = closed_form_R(m, t);
      h.row({t, r[0], r[1], r[2], hermiticity_defect(hm),
             trusted_norm(m, hm - closed_form_hamiltonian(m, t))});
      const RealVector ev = eigh(p.Iminus(t)).values;
      std::vector<double> row = {t};
      for (Index k = 0; k < levels; ++k) row.push_back(ev(k));
      spec.row(row);
    }
  }
  if (config.wants_format("json")) {
    json samples = json::array();
    for (double t : times) {
      const Operator u = p.Uminus(t);
      const Operator block = spin_family(m) ? u : Operator(u.topLeftCorner(m.interior, m.interior));
      samples.push_back({{"t", t}, {"U", matrix_json(block)}});
    }
    write_json(dir / "U_minus.json", {{"family", spin_family(m) ? "spin" : "oscillator"},
                                      {"dim", m.dim},
                                      {"block", spin_family(m) ? "full" : "interior"},
                                      {"block_dim", spin_family(m) ? m.dim : m.interior},
                                      {"samples", samples}});
  }
  log << "wrote " << times.size() << " samples to " << dir.string() << '\n';
  return kPass;
}

int cmd_propagate(const RunConfig& config, const CommonOptions& options, std::ostream& log) {
  const Model m = build_model(config);
  const PartnerOutput& p = m.partner;
  const bool default_d0 = config.d0_file.empty() && config.d0_named != "zero";

  // Closed-form partner solution for the requested plus level, if it has one.
  StateMap closed;
  State psi0;
  std::string warning;
  try {
    if (m.spin) {
      const double level = options.level.value_or(-m.spin->j);
      const State plus = m.spin->basis(level);  // validates the level
      if (default_d0 && level < m.spin->j) {
        closed = [&m, level](double t) { return spin_solution(*m.spin, m.f, m.theta, m.phi, level, t); };
      } else {
        warning = "level is a zero mode of I+ (or d0 is not J+): numeric columns only";
        psi0 = m.system.Wminus.W(0.0) * plus;
      }
    } else {
      const double level = options.level.value_or(0.0);
      if (level < 0 || level != std::floor(level)) {
        throw ConfigError("--level must be a nonnegative integer for oscillators");
      }
      const Index n = static_cast<Index>(level);
      if (n + 1 >= m.interior) {
        throw ConfigError("--level " + std::to_string(n) + ": partner state |n+1> leaves the interior");
      }
      if (default_d0) {
        closed = [&m, n](double t) { return osc_solution(m.system.Wminus, m.f, n, t); };
      } else {
        warning = "d0 is not a^dagger: numeric columns only";
        psi0 = m.system.Wminus.W(0.0) * hermite_state(*m.osc, n);
      }
    }
  } catch (const InvalidInput& e) {
    throw ConfigError(config.source + ": " + e.what());
  }
  if (closed) psi0 = closed(0.0);
  if (!warning.empty()) log << "warning: " << warning << '\n';

  const Grid grid = make_grid(config.T, config.dt);
  PropagateOptions po;
  po.record_every = std::max<Index>(1, grid.steps / std::max<Index>(1, config.samples - 1));
  const Trajectory traj = propagate(p.Hminus, psi0, grid, po);

  const Index shown = spin_family(m) ? m.dim : m.interior;
  std::vector<std::string> header = {"t"};
  for (Index k = 0; k < shown; ++k) {
    header.push_back("num_re" + std::to_string(k));
    header.push_back("num_im" + std::to_string(k));
  }
  if (closed) {
    for (Index k = 0; k < shown; ++k) {
      header.push_back("cf_re" + std::to_string(k));
      header.push_back("cf_im" + std::to_string(k));
    }
    header.push_back("infidelity");
  }
  const auto dir = ensure_dir(out_dir_for(config, options));
  CsvWriter csv(dir / "solution.csv", header);
  double last = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const State& num = traj.states[k];
    std::vector<double> row = {traj.times[k]};
    for (Index c = 0; c < shown; ++c) {
      row.push_back(num(c).real());
      row.push_back(num(c).imag());
    }
    if (closed) {
      const State cf = closed(traj.times[k]);
      for (Index c = 0; c < shown; ++c) {
        row.push_back(cf(c).real());
        row.push_back(cf(c).imag());
      }
      last = infidelity(cf, num);
      row.push_back(last);
    }
    csv.row(row);
  }
  log << "propagated " << grid.steps << " steps";
  if (closed) log << ", final infidelity " << format_double(last);
  log << '\n';
  return kPass;
}

int cmd_phase(const RunConfig& config, const CommonOptions& options, std::ostream& log) {
  const Model m = build_model(config);
  const double T = config.T;
  const double th0 = m.theta(0.0);
  const double thT = m.theta(T);
  const double ph0 = m.phi(0.0);
  const double phT = m.phi(T);
  const double turns = (phT - ph0) / (2.0 * std::numbers::pi);
  if (std::abs(thT - th0) > 1e-9 || std::abs(turns - std::round(turns)) > 1e-9) {
    std::ostringstream msg;
    msg << config.source << ": loop is not closed: theta(0) = " << format_double(th0)
        << ", theta(T) = " << format_double(thT) << ", phi(0) = " << format_double(ph0)
        << ", phi(T) = " << format_double(phT);
    throw ConfigError(msg.str());
  }

  const bool reverse = options.reverse || config.reverse;
  const GaugeCurve& w = m.system.Wminus;
  const EigenSystem es = eigh(m.partner.Iminus0);
  json levels = json::array();
  bool ok = true;
  for (std::size_t l = 0; l < es.degeneracy_groups.size(); ++l) {
    const Operator f0 = level_frame(m.partner.Iminus0, l);
    const OperatorMap frame = [&](double s) -> Operator {
      return w.W((reverse ? 1.0 - s : s) * T) * f0;
    };
    const HolonomyResult coarse = berry_holonomy(frame, config.phase_steps);
    const HolonomyResult fine = berry_holonomy(frame, 2 * config.phase_steps);
    const Eigen::ComplexEigenSolver<Operator> ces(fine.gamma);
    std::vector<double> phases;
    for (Index k = 0; k < ces.eigenvalues().size(); ++k) phases.push_back(std::arg(ces.eigenvalues()(k)));
    std::sort(phases.begin(), phases.end());
    const double delta = (fine.gamma - coarse.gamma).norm();
    ok = ok && fine.unitarity_defect < 1e-8;
    levels.push_back({{"level", l},
                      {"eigenvalue", es.values(es.degeneracy_groups[l].front())},
                      {"degeneracy", es.degeneracy_groups[l].size()},
                      {"steps", fine.steps},
                      {"gamma", matrix_json(fine.gamma)},
                      {"eigenphases", phases},
                      {"unitarity_defect", fine.unitarity_defect},
                      {"doubling_delta", delta}});
    log << "level " << l << ": degeneracy " << es.degeneracy_groups[l].size()
        << ", doubling delta " << format_double(delta) << '\n';
  }
  const auto dir = ensure_dir(out_dir_for(config, options));
  write_json(dir / "holonomy.json", {{"loop",
                                      {{"T", T},
                                       {"theta0", th0},
                                       {"thetaT", thT},
                                       {"phi0", ph0},
                                       {"phiT", phT},
                                       {"reverse", reverse}}},
                                     {"levels", levels}});
  return ok ? kPass : kCheckFailed;
}

int cmd_sweep(const std::string& config_path, const CommonOptions& options, std::ostream& log) {
  const Ini base = read_ini(config_path);
  const RunConfig base_cfg = parse_config(base, config_path);
  if (base_cfg.sweep_key.empty() || base_cfg.sweep_values.empty()) {
    throw ConfigError(config_path + ": [sweep] needs key and values");
  }
  const std::string root = out_dir_for(base_cfg, options);
  const std::size_t cells = base_cfg.sweep_values.size();

  // Parse every cell up front so config errors surface before any work.
  std::vector<RunConfig> configs;
  for (std::size_t k = 0; k < cells; ++k) {
    Ini ini = base;
    override_value(ini, base_cfg.sweep_key, base_cfg.sweep_values[k]);
    RunConfig c = parse_config(ini, config_path);
    c.out_dir = (std::filesystem::path(root) / ("cell_" + std::to_string(k))).string();
    configs.push_back(std::move(c));
  }

  unsigned workers = options.threads;
  if (workers == 0) {
    if (const char* env = std::getenv("SUSYINV_THREADS")) workers = static_cast<unsigned>(std::atoi(env));
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cells));

  // Each cell owns its slot and its output directory.
  std::vector<int> codes(cells, kPass);
  std::vector<std::string> errors(cells);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t k = next++; k < cells; k = next++) {
      try {
        std::ostringstream sink;
        CommonOptions cell = options;
        cell.out_dir = configs[k].out_dir;
        codes[k] = cmd_verify(configs[k], cell, sink);
      } catch (const std::exception& e) {
        codes[k] = kConfigError;
        errors[k] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  ensure_dir(root);
  std::ofstream summary(std::filesystem::path(root) / "sweep.csv");
  summary << "cell,key,value,exit_code\n";
  int worst = kPass;
  for (std::size_t k = 0; k < cells; ++k) {
    summary << k << ',' << base_cfg.sweep_key << ",\"" << base_cfg.sweep_values[k] << "\","
            << codes[k] << '\n';
    log << "cell " << k << " (" << base_cfg.sweep_key << " = " << base_cfg.sweep_values[k]
        << "): " << (codes[k] == kPass ? "pass" : "fail");
    if (!errors[k].empty()) log << " [" << errors[k] << "]";
    log << '\n';
    worst = std::max(worst, codes[k]);
  }
  return worst;
}

}  // namespace susyinv::cli
