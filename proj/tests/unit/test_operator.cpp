#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "susyinv/errors.hpp"
#include "susyinv/operator.hpp"
#include "susyinv/representations.hpp"

using namespace susyinv;

namespace {

Operator random_hermitian(Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  Operator a(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) a(r, c) = cplx(g(rng), g(rng));
  return scale * (a + a.adjoint()) / 2.0;
}

Operator pauli(int k) {
  Operator s(2, 2);
  if (k == 1) s << 0, 1, 1, 0;
  if (k == 2) s << 0, cplx(0, -1), cplx(0, 1), 0;
  if (k == 3) s << 1, 0, 0, -1;
  return s;
}

}  // namespace

TEST(Commutator, SpinHalfClosesOnJ3) {
  const SpinRep s = make_spin(0.5);
  EXPECT_LT((commutator(s.J1, s.J2) - kI * s.J3).norm(), 1e-15);
}

TEST(Commutator, SelfCommutatorVanishes) {
  std::mt19937_64 rng(3);
  const Operator a = random_hermitian(5, rng);
  EXPECT_EQ(commutator(a, a).norm(), 0.0);
}

TEST(Commutator, OscillatorK2K3OnInterior) {
  const OscillatorRep o = make_oscillator(16, 4);
  EXPECT_LT(interior_norm(commutator(o.K2, o.K3) - kI * o.K1, o.interior()), 1e-12);
}

TEST(Commutator, RejectsDimensionMismatch) {
  EXPECT_THROW(commutator(Operator::Identity(2, 2), Operator::Identity(3, 3)), InvalidInput);
  EXPECT_THROW(anticommutator(Operator::Identity(2, 2), Operator::Identity(3, 3)), InvalidInput);
}

TEST(Anticommutator, PauliPairVanishes) {
  // sigma1 sigma2 = i sigma3, sigma2 sigma1 = -i sigma3.
  Operator s1s2(2, 2);
  s1s2 << cplx(0, 1), 0, 0, cplx(0, -1);
  EXPECT_LT((pauli(1) * pauli(2) - s1s2).norm(), 1e-15);
  EXPECT_EQ(anticommutator(pauli(1), pauli(2)).norm(), 0.0);
}

TEST(Anticommutator, WithZero) {
  std::mt19937_64 rng(4);
  const Operator a = random_hermitian(4, rng);
  EXPECT_EQ(anticommutator(a, Operator::Zero(4, 4)).norm(), 0.0);
}

TEST(Anticommutator, ChargeFromRaisingOperator) {
  const SpinRep s = make_spin(0.5);
  Operator q = Operator::Zero(4, 4);
  q.bottomLeftCorner(2, 2) = s.Jplus;
  const Operator expected = block_diag(s.Jminus * s.Jplus, s.Jplus * s.Jminus);
  EXPECT_LT((anticommutator(q, q.adjoint()) - expected).norm(), 1e-15);
}

TEST(Expm, ZeroIsIdentity) {
  EXPECT_LT((expm(Operator::Zero(3, 3)) - Operator::Identity(3, 3)).norm(), 1e-15);
}

TEST(Expm, HalfTurnAboutY) {
  // exp(-i theta sigma2 / 2) = cos(theta/2) - i sin(theta/2) sigma2.
  const double th = std::numbers::pi;
  const Operator oracle = std::cos(th / 2) * Operator::Identity(2, 2) - kI * std::sin(th / 2) * pauli(2);
  Operator expected(2, 2);
  expected << 0, -1, 1, 0;
  EXPECT_LT((oracle - expected).norm(), 1e-15);
  const SpinRep s = make_spin(0.5);
  EXPECT_LT((expm(-kI * th * s.J2) - expected).norm(), 1e-14);
}

TEST(Expm, Diagonal) {
  Operator a = Operator::Zero(2, 2);
  a(0, 0) = kI;
  a(1, 1) = 2.0 * kI;
  const Operator e = expm(a);
  EXPECT_LT(std::abs(e(0, 0) - std::exp(kI)), 1e-15);
  EXPECT_LT(std::abs(e(1, 1) - std::exp(2.0 * kI)), 1e-15);
  EXPECT_EQ(e(0, 1), cplx(0.0));
}

TEST(Expm, RejectsNonFinite) {
  Operator a = Operator::Zero(2, 2);
  a(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(expm(a), InvalidInput);
}

TEST(Expm, AntiHermitianGivesUnitary) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    const Operator h = random_hermitian(6, rng, 3.0);
    EXPECT_LT(unitarity_defect(expm(-kI * h)), 1e-12);
  }
}

TEST(Expm, InverseUpToNormFifty) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (int k = 0; k < 5; ++k) {
    // Anti-Hermitian: exact inverse to absolute precision.
    Operator h = random_hermitian(5, rng);
    const Operator a = -kI * (50.0 / h.norm()) * h;
    EXPECT_LT((expm(a) * expm(-a) - Operator::Identity(5, 5)).norm(), 1e-10);
    // General complex input: e^A grows like e^{||A||}, so only a relative
    // bound is meaningful in double precision.
    Operator b(5, 5);
    for (Index c = 0; c < 5; ++c)
      for (Index r = 0; r < 5; ++r) b(r, c) = cplx(g(rng), g(rng));
    b *= 50.0 / b.norm();
    const Operator ep = expm(b), em = expm(-b);
    EXPECT_LT((ep * em - Operator::Identity(5, 5)).norm() / (ep.norm() * em.norm()), 1e-12);
  }
}

TEST(ExpmHermitian, MatchesGeneric) {
  std::mt19937_64 rng(7);
  const Operator h = random_hermitian(6, rng);
  EXPECT_LT((expm_hermitian(h, 0.7) - expm(-0.7 * kI * h)).norm(), 1e-12);
}

TEST(Eigh, RaisingInvariantSpinHalf) {
  // Eigenvalues of J-J+/2 are (j(j+1) - m(m+1))/2.
  const SpinRep s = make_spin(0.5);
  const EigenSystem es = eigh(s.Jminus * s.Jplus / 2.0);
  ASSERT_EQ(es.values.size(), 2);
  EXPECT_NEAR(es.values(0), 0.0, 1e-15);
  EXPECT_NEAR(es.values(1), 0.5, 1e-15);
}

TEST(Eigh, RaisingInvariantSpinOneIsDegenerate) {
  const SpinRep s = make_spin(1.0);
  const EigenSystem es = eigh(s.Jminus * s.Jplus / 2.0);
  EXPECT_NEAR(es.values(0), 0.0, 1e-14);
  EXPECT_NEAR(es.values(1), 1.0, 1e-14);
  EXPECT_NEAR(es.values(2), 1.0, 1e-14);
  EXPECT_EQ(es.degeneracy_groups.size(), 2u);
  EXPECT_EQ(es.degeneracy_groups[1].size(), 2u);
}

TEST(Eigh, IdentityIsOneGroup) {
  const EigenSystem es = eigh(Operator::Identity(4, 4));
  for (Index k = 0; k < 4; ++k) EXPECT_NEAR(es.values(k), 1.0, 1e-15);
  EXPECT_EQ(es.degeneracy_groups.size(), 1u);
}

TEST(Eigh, RejectsNonHermitian) {
  Operator a = Operator::Zero(2, 2);
  a(0, 1) = 1.0;
  try {
    eigh(a);
    FAIL() << "expected NotHermitian";
  } catch (const NotHermitian& e) {
    EXPECT_GT(e.defect(), 1.0);
  }
}

TEST(Eigh, ReconstructionAndUnitaryVectors) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 10; ++k) {
    const Operator a = random_hermitian(7, rng);
    const EigenSystem es = eigh(a);
    EXPECT_LT(unitarity_defect(es.vectors), 1e-12);
    const Operator back = es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
    EXPECT_LT((back - a).norm() / a.norm(), 1e-10);
    for (Index i = 1; i < es.values.size(); ++i) EXPECT_LE(es.values(i - 1), es.values(i));
  }
}

TEST(Eigh, BlockDiagonalUnionOfSpectra) {
  std::mt19937_64 rng(9);
  const Operator a = random_hermitian(3, rng);
  const Operator b = random_hermitian(4, rng);
  std::vector<double> expected;
  for (double v : eigh(a).values) expected.push_back(v);
  for (double v : eigh(b).values) expected.push_back(v);
  std::sort(expected.begin(), expected.end());
  const RealVector got = eigh(block_diag(a, b)).values;
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_NEAR(got(static_cast<Index>(k)), expected[k], 1e-12);
}

TEST(Brackets, HermitianInputsGiveExpectedSymmetry) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 10; ++k) {
    const Operator a = random_hermitian(5, rng);
    const Operator b = random_hermitian(5, rng);
    const Operator c = commutator(a, b);
    const Operator ac = anticommutator(a, b);
    EXPECT_LT((c + c.adjoint()).norm(), 1e-12);
    EXPECT_LT((ac - ac.adjoint()).norm(), 1e-12);
  }
}

TEST(UnitarityDefect, Examples) {
  EXPECT_EQ(unitarity_defect(Operator::Identity(3, 3)), 0.0);
  const SpinRep s = make_spin(2.0);
  EXPECT_LT(unitarity_defect(expm(-kI * 0.83 * s.J2)), 1e-12);
  // (2I)^dagger (2I) - I = 3I on dim 2: Frobenius norm 3 sqrt 2.
  EXPECT_NEAR(unitarity_defect(2.0 * Operator::Identity(2, 2)), 3.0 * std::sqrt(2.0), 1e-14);
}

TEST(Grading, EvenAndOddBlocks) {
  const Grading g{2, 2};
  Operator q = Operator::Zero(4, 4);
  q(2, 0) = 1.0;
  EXPECT_TRUE(is_odd(q, g));
  EXPECT_FALSE(is_even(q, g));
  EXPECT_TRUE(is_even(block_diag(Operator::Identity(2, 2), Operator::Identity(2, 2)), g));
  EXPECT_THROW(block_norms(Operator::Zero(3, 3), g), InvalidInput);
}

TEST(PolarUnitary, RecoversUnitaryFactor) {
  std::mt19937_64 rng(11);
  const Operator u = expm(-kI * random_hermitian(4, rng));
  const Operator p = expm(random_hermitian(4, rng));  // positive definite
  EXPECT_LT((polar_unitary(u * p) - u).norm(), 1e-10);
}

TEST(SpectralExponential, DiagonalFastPathAndHelpers) {
  const SpinRep s = make_spin(1.5);
  const SpectralExponential e3(s.J3);
  EXPECT_TRUE(e3.diagonal());
  EXPECT_LT((e3(0.4) - expm(-0.4 * kI * s.J3)).norm(), 1e-14);
  const SpectralExponential e2(s.J2);
  EXPECT_FALSE(e2.diagonal());
  EXPECT_LT((e2.generator_times(0.3) - s.J2 * expm(-0.3 * kI * s.J2)).norm(), 1e-13);
  EXPECT_LT((e3.left(0.2, s.J1) - e3(0.2) * s.J1).norm(), 1e-14);
  EXPECT_LT((e3.right(s.J1, 0.2) - s.J1 * e3(0.2)).norm(), 1e-14);
}
