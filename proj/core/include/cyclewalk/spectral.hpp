#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cyclewalk/coin.hpp"
#include "cyclewalk/distribution.hpp"

namespace cyclewalk {

// Two eigenvalues on the unit circle are treated as equal when their phases
// differ by less than this (mod 2 pi).
inline constexpr double kPhaseTolerance = 1e-9;

/// e^{2 pi i j / d} for j = 0..d-1. Every Fourier phase in the spectral path
/// is read from this table.
class RootsOfUnity {
 public:
  explicit RootsOfUnity(int d);

  int size() const { return static_cast<int>(roots_.size()); }
  /// e^{2 pi i j / d} for any integer j.
  Complex operator()(std::int64_t j) const;

 private:
  std::vector<Complex> roots_;
};

struct FourierBlock {
  int k = 0;
  int d = 0;
  double theta = 0.0;
  Matrix4 matrix;
};

struct MemoryFourierBlock {
  int k = 0;
  int d = 0;
  Matrix4 matrix;
};

/// Momentum-k block M_k(theta) of the recycled walk. Throws
/// std::out_of_range unless 0 <= k < d.
FourierBlock build_mk(int k, int d, const CoinConfig& cfg);

/// Momentum-k block N_k of the memory walk (Hadamard coin).
MemoryFourierBlock build_nk(int k, int d);

struct EigenSystem {
  std::array<Complex, 4> eigenvalues;
  std::array<Coin4, 4> eigenvectors;
};

/// Orthonormal eigendecomposition of a 4x4 unitary. Eigenvectors whose
/// eigenvalues fall within `cluster_tolerance` of each other are
/// re-orthonormalized together. Throws std::invalid_argument if the input is
/// not unitary to 1e-10.
EigenSystem eigensystem(const Matrix4& block, double cluster_tolerance = kPhaseTolerance);

/// Smallest achievable max |a_i - b_pi(i)| over pairings of two eigenvalue
/// multisets.
double eigenvalue_multiset_distance(std::span<const Complex, 4> a,
                                    std::span<const Complex, 4> b);

/// Principal-phase difference of two unit-circle points, folded into [0, pi].
double phase_distance(Complex a, Complex b);

struct ClusterWarning {
  std::vector<double> gaps;
  std::string message;
};

struct LimitingResult {
  Distribution distribution;
  std::vector<ClusterWarning> warnings;
  double max_imaginary_residue = 0.0;
  int cluster_count = 0;
};

/// Eigensystems of every momentum block plus the expansion coefficients
/// alpha_j(k) = <phi_j(k)|psi(0,0)> of a position-0 start.
class SpectralCache {
 public:
  static SpectralCache recycled(int d, const CoinConfig& cfg, const Coin4& initial);
  static SpectralCache memory(int d, const Coin4& initial);

  int cycle_size() const { return d_; }
  const EigenSystem& system(int k) const { return systems_[static_cast<std::size_t>(k)]; }
  Complex alpha(int k, int j) const { return alphas_[static_cast<std::size_t>(4 * k + j)]; }
  const Coin4& initial() const { return initial_; }
  const RootsOfUnity& roots() const { return roots_; }

  /// Literal quadruple sum over (k, m, j, l) for one position and time.
  double probability(int n, std::int64_t t) const;

  /// All positions at time t, via the amplitude psi(n, t) that the quadruple
  /// sum factorizes into.
  Distribution distribution(std::int64_t t) const;

  /// Time-averaged distribution: f summed over eigenvalue-matched pairs.
  LimitingResult limiting(double tolerance = kPhaseTolerance) const;

 private:
  SpectralCache(int d, const Coin4& initial);
  void fill(std::span<const Matrix4> blocks);

  int d_;
  Coin4 initial_;
  RootsOfUnity roots_;
  std::vector<EigenSystem> systems_;
  std::vector<Complex> alphas_;
};

/// p(n, t, phi) from the spectral closed form. The start must sit at
/// position 0; anything else throws std::invalid_argument.
double closed_form_probability(int n, std::int64_t t, int d, const CoinConfig& cfg,
                               const InitialState& init);

LimitingResult limiting_distribution(const CoinConfig& cfg, int d, const InitialState& init);
LimitingResult limiting_distribution_memory(int d, const InitialState& init);

}  // namespace cyclewalk
