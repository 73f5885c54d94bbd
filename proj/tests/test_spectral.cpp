#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cyclewalk/analysis.hpp"
#include "cyclewalk/spectral.hpp"
#include "oracle.hpp"

namespace cyclewalk {
namespace {

constexpr double kH = 0.70710678118654752440;

Coin4 psi(NamedState s) { return named_coin(s); }

double max_abs(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

// Discrete Fourier transform of a walk state, psi~(k) = sum_n psi(n) e^{-2 pi i k n / d}.
std::vector<Coin4> fourier(const WalkState& s) {
  const int d = s.cycle_size();
  std::vector<Coin4> out(static_cast<std::size_t>(d), Coin4::Zero());
  for (int k = 0; k < d; ++k) {
    for (int n = 0; n < d; ++n) out[k] += std::polar(1.0, -2.0 * kPi * k * n / d) * s.row(n);
  }
  return out;
}

TEST(BuildMk, ZeroMomentumIsRealHadamardLike) {
  const Matrix4 m = build_mk(0, 7, CoinConfig(0.0)).matrix;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      EXPECT_EQ(m(r, c).imag(), 0.0);
      const double a = std::abs(m(r, c));
      EXPECT_TRUE(a < 1e-15 || std::abs(a - kH) < 1e-15);
    }
  }
}

TEST(BuildMk, MatchesPrintedEntries) {
  const int d = 9;
  const int k = 4;
  const CoinConfig cfg(1.7);
  const Complex x = std::polar(1.0, 2.0 * kPi * k / d);
  const Complex y = std::conj(x);
  const double c = std::cos(cfg.theta());
  const double s = std::sin(cfg.theta());
  Matrix4 expected;
  expected << x * kH, x * kH, 0, 0, 0, 0, x * c, x * s, y * kH, -y * kH, 0, 0, 0, 0, y * s, -y * c;
  EXPECT_LT(max_abs(build_mk(k, d, cfg).matrix - expected), 1e-14);
}

TEST(BuildMk, PhiTwoForm) {
  for (int k = 0; k < 6; ++k) {
    const Complex x = std::polar(1.0, 2.0 * kPi * k / 6);
    const Complex y = std::conj(x);
    Matrix4 expected;
    expected << x, x, 0, 0, 0, 0, -x, x, y, -y, 0, 0, 0, 0, y, y;
    expected *= kH;
    EXPECT_LT(max_abs(build_mk(k, 6, CoinConfig(2.0)).matrix - expected), 1e-15);
  }
}

TEST(BuildMk, UnitaryAndRangeChecked) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + static_cast<int>(rng() % 60);
    const int k = static_cast<int>(rng() % static_cast<unsigned>(d));
    const Matrix4 m = build_mk(k, d, CoinConfig(u(rng))).matrix;
    EXPECT_LT(max_abs(m * m.adjoint() - Matrix4::Identity()), 1e-12);
    const Matrix4 nk = build_nk(k, d).matrix;
    EXPECT_LT(max_abs(nk * nk.adjoint() - Matrix4::Identity()), 1e-12);
  }
  EXPECT_THROW(build_mk(5, 5, CoinConfig(0.0)), std::out_of_range);
  EXPECT_THROW(build_mk(-1, 5, CoinConfig(0.0)), std::out_of_range);
  EXPECT_THROW(build_nk(5, 5), std::out_of_range);
}

// The blocks must be what direct stepping does in momentum space.
TEST(FourierBlocks, AgreeWithDirectSteppingInMomentumSpace) {
  std::mt19937_64 rng(2);
  for (int d : {3, 5, 8, 12}) {
    const CoinConfig cfg(0.37 * d);
    const WalkState s = oracle::random_state(d, Model::Recycled, rng);
    const auto before = fourier(s);
    const auto after = fourier(step_recycled(s, cfg));
    for (int k = 0; k < d; ++k) {
      EXPECT_LT((after[k] - build_mk(k, d, cfg).matrix * before[k]).cwiseAbs().maxCoeff(), 1e-12);
    }
    const WalkState m = oracle::random_state(d, Model::Memory, rng);
    const auto mb = fourier(m);
    const auto ma = fourier(step_memory(m));
    for (int k = 0; k < d; ++k) {
      EXPECT_LT((ma[k] - build_nk(k, d).matrix * mb[k]).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(BuildNk, ZeroMomentum) {
  Matrix4 expected;
  expected << 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, -1, 1, 0, -1, 0;
  expected *= kH;
  EXPECT_LT(max_abs(build_nk(0, 4).matrix - expected), 1e-15);
}

TEST(BuildNk, SpectrumMatchesMkAtPhiTwo) {
  for (int d = 3; d <= 20; ++d) {
    for (int k = 0; k < d; ++k) {
      const auto a = eigensystem(build_nk(k, d).matrix).eigenvalues;
      const auto b = eigensystem(build_mk(k, d, CoinConfig(2.0)).matrix).eigenvalues;
      EXPECT_LT(eigenvalue_multiset_distance(a, b), 1e-9);
    }
  }
}

TEST(Eigensystem, Identity) {
  const EigenSystem es = eigensystem(Matrix4::Identity());
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(std::abs(es.eigenvalues[j] - 1.0), 0.0, 1e-15);
    for (int l = 0; l < 4; ++l) {
      EXPECT_NEAR(std::abs(es.eigenvectors[j].dot(es.eigenvectors[l]) - (j == l ? 1.0 : 0.0)), 0.0, 1e-14);
    }
  }
}

TEST(Eigensystem, Diagonal) {
  const Coin4 diag(1.0, -1.0, Complex(0, 1), Complex(0, -1));
  const EigenSystem es = eigensystem(diag.asDiagonal().toDenseMatrix());
  for (int j = 0; j < 4; ++j) {
    int hits = 0;
    for (int i = 0; i < 4; ++i) {
      if (std::abs(es.eigenvalues[i] - diag[j]) < 1e-14) {
        ++hits;
        EXPECT_NEAR(std::abs(es.eigenvectors[i][j]), 1.0, 1e-14);
      }
    }
    EXPECT_EQ(hits, 1);
  }
}

TEST(Eigensystem, RejectsNonUnitary) {
  Matrix4 m = Matrix4::Identity();
  m(0, 1) = 0.5;
  EXPECT_THROW(eigensystem(m), std::invalid_argument);
  EXPECT_THROW(eigensystem(2.0 * Matrix4::Identity()), std::invalid_argument);
}

void expect_valid(const Matrix4& m, const EigenSystem& es) {
  for (int j = 0; j < 4; ++j) {
    EXPECT_LT(std::abs(std::abs(es.eigenvalues[j]) - 1.0), 1e-10);
    EXPECT_LT((m * es.eigenvectors[j] - es.eigenvalues[j] * es.eigenvectors[j]).norm(), 1e-9);
    for (int l = 0; l < 4; ++l) {
      EXPECT_LT(std::abs(es.eigenvectors[j].dot(es.eigenvectors[l]) - (j == l ? 1.0 : 0.0)), 1e-9);
    }
  }
}

TEST(Eigensystem, InvariantsOnBlocks) {
  for (int d : {4, 11, 24}) {
    for (double phi : {0.0, 1.0, 2.0, 4.5, 6.0}) {
      for (int k = 0; k < d; ++k) {
        const Matrix4 m = build_mk(k, d, CoinConfig(phi)).matrix;
        expect_valid(m, eigensystem(m));
      }
    }
  }
}

TEST(Eigensystem, DegenerateSpectrumGivesOrthonormalVectors) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix4 g;
    for (int r = 0; r < 4; ++r) g.col(r) = oracle::random_coin(rng);
    const Matrix4 q = Eigen::HouseholderQR<Matrix4>(g).householderQ();
    const Coin4 lambdas(1.0, 1.0, Complex(0, 1), Complex(0, 1));
    const Matrix4 m = q * lambdas.asDiagonal() * q.adjoint();
    expect_valid(m, eigensystem(m));
  }
}

TEST(PhaseSymmetry, MkThetaAndMinusThetaShareSpectrum) {
  for (int d : {5, 12, 17}) {
    for (double phi : {0.0, 0.7, 1.0, 3.3, 6.2}) {
      const CoinConfig cfg(phi);
      for (int k = 0; k < d; ++k) {
        const auto a = eigensystem(build_mk(k, d, cfg).matrix).eigenvalues;
        const auto b = eigensystem(build_mk(k, d, cfg.q_partner()).matrix).eigenvalues;
        EXPECT_LT(eigenvalue_multiset_distance(a, b), 1e-9);
      }
    }
  }
}

TEST(SpectralCache, AlphasAreCompleteAndRecomputable) {
  for (NamedState ns : oracle::kNamedStates) {
    const SpectralCache cache = SpectralCache::recycled(13, CoinConfig(2.5), psi(ns));
    for (int k = 0; k < 13; ++k) {
      double total = 0.0;
      for (int j = 0; j < 4; ++j) {
        total += std::norm(cache.alpha(k, j));
        const Complex direct = cache.system(k).eigenvectors[j].dot(psi(ns));
        EXPECT_LT(std::abs(direct - cache.alpha(k, j)), 1e-12);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(ClosedForm, OneStepCycleFour) {
  const InitialState init = InitialState::named(NamedState::PsiA);
  const CoinConfig cfg(0.0);
  EXPECT_NEAR(closed_form_probability(0, 1, 4, cfg, init), 0.0, 1e-12);
  EXPECT_NEAR(closed_form_probability(1, 1, 4, cfg, init), 0.5, 1e-12);
  EXPECT_NEAR(closed_form_probability(2, 1, 4, cfg, init), 0.0, 1e-12);
  EXPECT_NEAR(closed_form_probability(3, 1, 4, cfg, init), 0.5, 1e-12);
}

TEST(ClosedForm, TimeZeroIsPointMass) {
  for (NamedState ns : oracle::kNamedStates) {
    const SpectralCache cache = SpectralCache::recycled(6, CoinConfig(1.1), psi(ns));
    for (int n = 0; n < 6; ++n) EXPECT_NEAR(cache.probability(n, 0), n == 0 ? 1.0 : 0.0, 1e-12);
  }
}

TEST(ClosedForm, RejectsOffOriginStarts) {
  EXPECT_THROW(closed_form_probability(0, 1, 4, CoinConfig(0.0), InitialState::named(NamedState::PsiA, 1)),
               std::invalid_argument);
  EXPECT_THROW(limiting_distribution(CoinConfig(0.0), 4, InitialState::named(NamedState::PsiA, 2)),
               std::invalid_argument);
  EXPECT_THROW(limiting_distribution_memory(4, InitialState::named(NamedState::PsiA, 2)),
               std::invalid_argument);
}

TEST(ClosedForm, AgreesWithSteppingLongRun) {
  const CoinConfig cfg(1.3);
  const SpectralCache cache = SpectralCache::recycled(11, cfg, psi(NamedState::PsiB));
  Walker w(WalkState::localized(11, Model::Recycled, 0, psi(NamedState::PsiB)), cfg);
  for (int t = 0; t <= 200; ++t) {
    const Distribution fast = cache.distribution(t);
    for (int n = 0; n < 11; ++n) {
      const double direct = w.state().row(n).squaredNorm();
      EXPECT_NEAR(fast[n], direct, 1e-8);
      if (t % 40 == 0) EXPECT_NEAR(cache.probability(n, t), direct, 1e-8);
    }
    w.step();
  }
}

TEST(Limiting, NonIntegerPhiIsUniform) {
  const LimitingResult r = limiting_distribution(CoinConfig(0.5), 5, InitialState::named(NamedState::PsiA));
  EXPECT_LT(total_variation(r.distribution, Distribution::uniform(5)), 1e-6);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_LT(r.max_imaginary_residue, 1e-8);
}

TEST(Limiting, DivisibleByFourPhiZeroEqualsPhiTwo) {
  const InitialState a = InitialState::named(NamedState::PsiA);
  const Distribution p0 = limiting_distribution(CoinConfig(0.0), 8, a).distribution;
  const Distribution p2 = limiting_distribution(CoinConfig(2.0), 8, a).distribution;
  for (int n = 0; n < 8; ++n) EXPECT_NEAR(p0[n], p2[n], 1e-8);
}

// Reference values from an independent numpy/scipy evaluation.
TEST(Limiting, FrozenReferenceValues) {
  const std::vector<double> d11{0.20521448591471222, 0.14455432218017122, 0.07348656394989782,
                                0.06129356621431171, 0.059203338031068364, 0.058854966667194475,
                                0.058854966667194475, 0.059203338031068364, 0.0612935662143117,
                                0.07348656394989779, 0.14455432218017125};
  const Distribution p = limiting_distribution(CoinConfig(0.0), 11, InitialState::named(NamedState::PsiB)).distribution;
  for (int n = 0; n < 11; ++n) EXPECT_NEAR(p[n], d11[n], 1e-12);

  const std::vector<double> d6{7.0 / 30, 0.2, 2.0 / 15, 0.1, 2.0 / 15, 0.2};
  const Distribution q = limiting_distribution(CoinConfig(6.0), 6, InitialState::named(NamedState::PsiC)).distribution;
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(q[n], d6[n], 1e-12);

  const Distribution r = limiting_distribution(CoinConfig(1.0), 24, InitialState::named(NamedState::PsiA)).distribution;
  for (int n = 0; n < 24; n += 4) EXPECT_NEAR(r[n], 1.0 / 24, 1e-12);
  EXPECT_NEAR(r[1], 0.0441919191919192, 1e-12);
  EXPECT_NEAR(r[3], 0.03914141414141416, 1e-12);
}

TEST(Limiting, ClusteredSumMatchesNaiveLoop) {
  for (int d : {2, 3, 4, 6, 11, 12, 24}) {
    for (double phi : {0.0, 1.0, 2.0, 0.5, 5.0, 6.0}) {
      for (NamedState ns : oracle::kNamedStates) {
        const SpectralCache cache = SpectralCache::recycled(d, CoinConfig(phi), psi(ns));
        const Distribution fast = cache.limiting().distribution;
        const auto naive = oracle::naive_limiting(cache);
        for (int n = 0; n < d; ++n) {
          ASSERT_NEAR(fast[n], naive[n], 1e-12) << "d=" << d << " phi=" << phi << " n=" << n;
        }
      }
    }
  }
}

TEST(Limiting, AgreesWithLongRunAverage) {
  const CoinConfig cfg(0.0);
  const Coin4 b = psi(NamedState::PsiB);
  const Distribution spectral = limiting_distribution(cfg, 11, InitialState::named(NamedState::PsiB)).distribution;
  EXPECT_LT(total_variation(spectral, running_average(11, cfg, b, 1000000)), 2e-3);
}

TEST(Limiting, CesaroAverageOfClosedFormConverges) {
  for (int d : {5, 11, 16}) {
    const SpectralCache cache = SpectralCache::recycled(d, CoinConfig(1.0), psi(NamedState::PsiC));
    std::vector<double> acc(d, 0.0);
    const int T = 100000;
    for (int t = 1; t <= T; ++t) {
      const Distribution p = cache.distribution(t);
      for (int n = 0; n < d; ++n) acc[n] += p[n];
    }
    for (double& x : acc) x /= T;
    EXPECT_LT(total_variation(Distribution(acc), cache.limiting().distribution), 5e-3) << "d=" << d;
  }
}

TEST(LimitingMemory, EqualsRecycledPhiTwoUnderP) {
  for (int d : {3, 4, 7, 12, 15}) {
    for (NamedState ns : oracle::kNamedStates) {
      const Distribution mem =
          limiting_distribution_memory(d, InitialState::custom(apply_p_adjoint(psi(ns)))).distribution;
      const Distribution rec = limiting_distribution(CoinConfig(2.0), d, InitialState::named(ns)).distribution;
      for (int n = 0; n < d; ++n) EXPECT_NEAR(mem[n], rec[n], 1e-8);
    }
  }
}

TEST(LimitingMemory, SmallCycleSumsToOne) {
  const Distribution p = limiting_distribution_memory(3, InitialState::named(NamedState::PsiA)).distribution;
  double total = 0.0;
  for (double x : p.probs()) total += x;
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(LimitingMemory, AgreesWithMemoryWalkAverage) {
  const Coin4 a = psi(NamedState::PsiA);
  const Distribution spectral = limiting_distribution_memory(11, InitialState::named(NamedState::PsiA)).distribution;
  const Distribution sim = running_average(11, CoinConfig(0.0), a, 1000000, Model::Memory);
  EXPECT_LT(total_variation(spectral, sim), 2e-3);
}

// psi_c at phi = 6 is uniform on every odd cycle and on d = 4; longer even
// cycles are not. Direct stepping agrees with the spectral answer at d = 4.
TEST(Limiting, PsiCPhiSixParityPattern) {
  const InitialState c = InitialState::named(NamedState::PsiC);
  for (int d = 3; d <= 21; d += 2) {
    EXPECT_TRUE(classify_uniform(limiting_distribution(CoinConfig(6.0), d, c).distribution)) << d;
  }
  for (int d = 6; d <= 16; d += 2) {
    EXPECT_FALSE(classify_uniform(limiting_distribution(CoinConfig(6.0), d, c).distribution)) << d;
  }
  const Distribution four = limiting_distribution(CoinConfig(6.0), 4, c).distribution;
  EXPECT_LT(total_variation(four, Distribution::uniform(4)), 1e-12);
  const Distribution sim = running_average(4, CoinConfig(6.0), psi(NamedState::PsiC), 400000);
  EXPECT_LT(total_variation(sim, Distribution::uniform(4)), 1e-4);
}

TEST(RootsOfUnity, WrapsNegativeAndLargeIndices) {
  const RootsOfUnity r(6);
  EXPECT_EQ(r(-1), r(5));
  EXPECT_EQ(r(13), r(1));
  EXPECT_NEAR(std::abs(r(3) + 1.0), 0.0, 1e-15);
}

TEST(PhaseDistance, FoldsAcrossMinusPi) {
  EXPECT_NEAR(phase_distance(std::polar(1.0, kPi - 1e-3), std::polar(1.0, -kPi + 1e-3)), 2e-3, 1e-12);
  EXPECT_NEAR(phase_distance(Complex(1, 0), Complex(-1, 0)), kPi, 1e-15);
}

}  // namespace
}  // namespace cyclewalk
