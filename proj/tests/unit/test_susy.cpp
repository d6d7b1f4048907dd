#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "susyinv/errors.hpp"
#include "susyinv/representations.hpp"
#include "susyinv/susy.hpp"

using namespace susyinv;

namespace {

Operator gaussian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Operator d(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) d(r, c) = cplx(g(rng), g(rng));
  return d;
}

std::vector<double> positive(const RealVector& v, double cut) {
  std::vector<double> out;
  for (double x : v)
    if (x > cut) out.push_back(x);
  return out;
}

// d P_level = sqrt(2 lambda) M_level v for every level.
double pairing_defect(const Operator& d, const SpectralPairing& p) {
  double worst = 0.0;
  for (const auto& l : p.levels) {
    const Operator lhs = d * l.plus_vectors;
    const Operator rhs = std::sqrt(2.0 * l.lambda) * l.minus_vectors * l.v;
    worst = std::max({worst, (lhs - rhs).norm(), unitarity_defect(l.v)});
  }
  return worst;
}

}  // namespace

TEST(Supercharge, ZeroChargeGivesZeroInvariant) {
  const SuperCharge q = build_supercharge(Operator::Zero(3, 3));
  const SuperInvariant inv = build_invariant(q);
  EXPECT_EQ(q.Q.norm(), 0.0);
  EXPECT_EQ(inv.I.norm(), 0.0);
  const SpectralPairing p = pair_spectra(q, inv);
  EXPECT_TRUE(p.levels.empty());
  EXPECT_EQ(p.kernel_dim_plus, 3);
  EXPECT_EQ(p.kernel_dim_minus, 3);
}

TEST(Supercharge, ShapeAndGrading) {
  std::mt19937_64 rng(1);
  const Operator d = gaussian(4, rng);
  const SuperCharge q = build_supercharge(d);
  EXPECT_EQ(q.grading.n_plus, 4);
  EXPECT_EQ(q.grading.n_minus, 4);
  EXPECT_TRUE(is_odd(q.Q, q.grading));
  EXPECT_EQ((q.Q * q.Q).norm(), 0.0);
  EXPECT_EQ((q.Q.bottomLeftCorner(4, 4) - d).norm(), 0.0);
}

TEST(Supercharge, RejectsNonSquare) {
  EXPECT_THROW(build_supercharge(Operator::Zero(2, 3)), InvalidInput);
}

TEST(Supercharge, SpinHalfRaisingInvariant) {
  // J+ = |1/2><-1/2|, so J-J+/2 = |-1/2><-1/2| / 2 = diag(0, 1/2).
  const SpinRep s = make_spin(0.5);
  const SuperInvariant inv = build_invariant(build_supercharge(s.Jplus));
  Operator expected = Operator::Zero(2, 2);
  expected(1, 1) = 0.5;
  EXPECT_LT((inv.Iplus - expected).norm(), 1e-15);
}

TEST(Supercharge, OscillatorRaisingInvariant) {
  // a a^dagger |n> = (n + 1)|n>.
  const OscillatorRep o = make_oscillator(16, 4);
  const SuperInvariant inv = build_invariant(build_supercharge(o.adag));
  for (Index n = 0; n < o.interior(); ++n) EXPECT_NEAR(inv.Iplus(n, n).real(), (n + 1) / 2.0, 1e-14);
  EXPECT_LT(interior_norm(inv.Iplus - inv.Iplus.diagonal().asDiagonal().toDenseMatrix(), o.interior()),
            1e-15);
}

TEST(Invariant, IdentityCharge) {
  const SuperInvariant inv = build_invariant(build_supercharge(Operator::Identity(3, 3)));
  EXPECT_LT((inv.I - 0.5 * Operator::Identity(6, 6)).norm(), 1e-15);
}

TEST(Invariant, SpinOneSectorsShareLevel) {
  const SpinRep s = make_spin(1.0);
  const SuperInvariant inv = build_invariant(build_supercharge(s.Jplus));
  const RealVector ip = eigh(inv.Iplus).values;
  const RealVector im = eigh(inv.Iminus).values;
  // (j(j+1) - m(m+1))/2 for I+ and (j(j+1) - m(m-1))/2 for I-.
  const std::vector<double> expected = {0.0, 1.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(ip(k), expected[k], 1e-14);
    EXPECT_NEAR(im(k), expected[k], 1e-14);
  }
}

TEST(Invariant, OscillatorMinusKernelIsGround) {
  const OscillatorRep o = make_oscillator(16, 4);
  const SuperInvariant inv = build_invariant(build_supercharge(o.adag));
  EXPECT_LT((inv.Iminus - o.number / 2.0).norm(), 1e-14);
  const SpectralPairing p = pair_spectra(o.adag);
  ASSERT_EQ(p.kernel_dim_minus, 1);
  EXPECT_NEAR(std::abs(p.kernel_minus(0, 0)), 1.0, 1e-14);
}

TEST(Invariant, PositiveSemidefinite) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const SuperInvariant inv = build_invariant(build_supercharge(gaussian(6, rng)));
    EXPECT_GE(eigh(inv.Iplus).values.minCoeff(), -1e-12);
    EXPECT_GE(eigh(inv.Iminus).values.minCoeff(), -1e-12);
  }
}

TEST(Superalgebra, OwnInvariantIsClean) {
  std::mt19937_64 rng(3);
  const SuperCharge q = build_supercharge(gaussian(5, rng));
  const SuperalgebraReport r = check_superalgebra(q, build_invariant(q));
  EXPECT_EQ(r.q_squared, 0.0);
  EXPECT_LT(r.q_commutator, 1e-12);
  EXPECT_LT(r.anticommutator, 1e-12);
}

TEST(Superalgebra, TamperedInvariantIsDetected) {
  std::mt19937_64 rng(4);
  const Index n = 5;
  const SuperCharge q = build_supercharge(gaussian(n, rng));
  SuperInvariant inv = build_invariant(q);
  inv.I.topLeftCorner(n, n) += 0.1 * Operator::Identity(n, n);
  const SuperalgebraReport r = check_superalgebra(q, inv);
  // {Q,Q^dagger} - 2I = -0.2 on the plus block: Frobenius norm 0.2 sqrt(n).
  EXPECT_NEAR(r.anticommutator, 0.2 * std::sqrt(static_cast<double>(n)), 1e-12);
  EXPECT_GT(r.anticommutator, 0.1);
}

TEST(Superalgebra, SpinTwoRaising) {
  const SpinRep s = make_spin(2.0);
  const SuperCharge q = build_supercharge(s.Jplus);
  EXPECT_LT(check_superalgebra(q, build_invariant(q)).max(), 1e-12);
}

TEST(Pairing, SpinHalf) {
  const SpectralPairing p = pair_spectra(make_spin(0.5).Jplus);
  ASSERT_EQ(p.levels.size(), 1u);
  EXPECT_NEAR(p.levels[0].lambda, 0.5, 1e-15);
  EXPECT_EQ(p.levels[0].degeneracy, 1);
  EXPECT_EQ(p.kernel_dim_plus, 1);
  EXPECT_EQ(p.kernel_dim_minus, 1);
}

TEST(Pairing, IdentityChargeHasTrivialPairing) {
  const Operator d = Operator::Identity(4, 4);
  const SpectralPairing p = pair_spectra(d);
  ASSERT_EQ(p.levels.size(), 1u);
  EXPECT_NEAR(p.levels[0].lambda, 0.5, 1e-15);
  EXPECT_EQ(p.levels[0].degeneracy, 4);
  EXPECT_LT((p.levels[0].v - Operator::Identity(4, 4)).norm(), 1e-13);
}

TEST(Pairing, OscillatorLevelsOnInterior) {
  const OscillatorRep o = make_oscillator(32, 4);
  const SpectralPairing p = pair_spectra(o.adag);
  // Oracle: eigenvalues of the explicit product, independently.
  const RealVector ref = eigh(o.adag.adjoint() * o.adag / 2.0).values;
  ASSERT_GE(p.levels.size(), static_cast<std::size_t>(o.interior()));
  for (Index n = 0; n < o.interior(); ++n) {
    EXPECT_NEAR(p.levels[n].lambda, (n + 1) / 2.0, 1e-12);
    EXPECT_EQ(p.levels[n].degeneracy, 1);
  }
  std::vector<double> pos = positive(ref, p.zero_cut);
  ASSERT_EQ(pos.size(), p.levels.size());
  for (std::size_t k = 0; k < pos.size(); ++k) EXPECT_NEAR(p.levels[k].lambda, pos[k], 1e-12);
  EXPECT_LT(pairing_defect(o.adag, p), 1e-10);
}

TEST(Pairing, RandomChargesShareSpectraAndPair) {
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const Index n = 2 + seed % 11;
    const Operator d = gaussian(n, rng);
    const RealVector a = eigh(d.adjoint() * d / 2.0).values;
    const RealVector b = eigh(d * d.adjoint() / 2.0).values;
    for (Index k = 0; k < n; ++k) EXPECT_NEAR(a(k), b(k), 1e-10 * std::max(1.0, a(k)));
    const SpectralPairing p = pair_spectra(d);
    EXPECT_LT(pairing_defect(d, p), 1e-10 * std::max(1.0, d.norm()));
  }
}

TEST(Pairing, DegenerateLevelPairsWithUnitaryV) {
  const SpinRep s = make_spin(1.0);
  const SpectralPairing p = pair_spectra(s.Jplus);
  ASSERT_EQ(p.levels.size(), 1u);
  EXPECT_EQ(p.levels[0].degeneracy, 2);
  EXPECT_LT(pairing_defect(s.Jplus, p), 1e-12);
}

TEST(Pairing, KernelIndexCount) {
  std::mt19937_64 rng(5);
  // Rank-deficient rectangular factors give a charge with a kernel.
  for (int k = 0; k < 10; ++k) {
    const Index n = 6, r = 1 + k % 5;
    std::normal_distribution<double> g;
    Operator a(n, r), b(r, n);
    for (Index i = 0; i < n; ++i)
      for (Index c = 0; c < r; ++c) {
        a(i, c) = cplx(g(rng), g(rng));
        b(c, i) = cplx(g(rng), g(rng));
      }
    const Operator d = a * b;
    const SpectralPairing p = pair_spectra(d);
    Eigen::FullPivLU<Operator> lu(d), lut(Operator(d.adjoint()));
    lu.setThreshold(1e-10);
    lut.setThreshold(1e-10);
    EXPECT_EQ(p.kernel_dim_plus - p.kernel_dim_minus, lu.dimensionOfKernel() - lut.dimensionOfKernel());
    EXPECT_EQ(p.kernel_dim_plus, n - r);
  }
}

TEST(Pairing, AmbiguousZeroCutIsRejected) {
  Operator d = Operator::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = std::sqrt(2e-9);  // eigenvalue 1e-9 sits on the cut
  try {
    pair_spectra(d);
    FAIL() << "expected PairingAmbiguity";
  } catch (const PairingAmbiguity& e) {
    EXPECT_EQ(e.kernel_dim_strict(), 0);
    EXPECT_EQ(e.kernel_dim_loose(), 1);
  }
}

TEST(MapState, SpinHalfLowestState) {
  const SpinRep s = make_spin(0.5);
  const State out = susy_map_state(s.Jplus, 0.5, s.basis(-0.5));
  EXPECT_LT((out - s.basis(0.5)).norm(), 1e-15);
  // Wrong eigenvalue is refused rather than producing a non-unit output.
  EXPECT_THROW(susy_map_state(s.Jplus, 1.0, s.basis(-0.5)), InvalidInput);
}

TEST(MapState, OscillatorRaisesFockState) {
  const OscillatorRep o = make_oscillator(16, 4);
  for (Index n = 0; n + 1 < o.interior(); ++n) {
    const State out = susy_map_state(o.adag, (n + 1) / 2.0, hermite_state(o, n));
    EXPECT_LT((out - hermite_state(o, n + 1)).norm(), 1e-14);
  }
}

TEST(MapState, RejectsZeroVectorAndZeroMode) {
  const SpinRep s = make_spin(0.5);
  EXPECT_THROW(susy_map_state(s.Jplus, 0.5, State::Zero(2)), InvalidInput);
  EXPECT_THROW(susy_map_state(s.Jplus, 0.0, s.basis(0.5)), InvalidInput);
  EXPECT_THROW(susy_map_state(s.Jplus, 1e-15, s.basis(0.5)), InvalidInput);
}

TEST(MapState, RoundTripReturnsOriginal) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 20; ++k) {
    const Operator d = gaussian(6, rng);
    const EigenSystem es = eigh(d.adjoint() * d / 2.0);
    for (Index i = 0; i < 6; ++i) {
      const double lambda = es.values(i);
      const State psi = es.vectors.col(i);
      const State back = susy_unmap_state(d, lambda, susy_map_state(d, lambda, psi));
      EXPECT_GE(std::abs(back.dot(psi)), 1.0 - 1e-10);
    }
  }
}
