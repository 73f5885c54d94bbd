#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cyclewalk/coin.hpp"
#include "cyclewalk/distribution.hpp"
#include "cyclewalk/walk.hpp"

namespace cyclewalk {

inline constexpr double kUniformEpsilon = 1e-6;

/// (1/2) sum |p_n - q_n|. Throws std::invalid_argument on size mismatch.
double total_variation(const Distribution& p, const Distribution& q);

bool classify_uniform(const Distribution& p, double epsilon = kUniformEpsilon);

/// max_n |p(n,t,phi;psi) - p(n,t,phi';Q psi)| by direct stepping, with
/// phi' = -(2+phi) mod 8 and both walks starting at `start`.
double verify_theorem1(int d, std::int64_t t, double phi, const Coin4& coin, int start = 0);

/// Same check taken over every t in [0, t_max] along one trajectory.
double verify_theorem1_upto(int d, std::int64_t t_max, double phi, const Coin4& coin,
                            int start = 0);

/// max_n |p_M(n,t;P^dagger psi) - p(n,t,2;psi)| by direct stepping.
double verify_theorem2(int d, std::int64_t t, const Coin4& coin, int start = 0);
double verify_theorem2_upto(int d, std::int64_t t_max, const Coin4& coin, int start = 0);

/// TV distances between p-bar(phi; psi) and p-bar(phi'; Q psi) for the
/// parameter pairs (0,6), (2,4) and (1,5), computed spectrally.
std::array<double, 3> verify_pbar_identities(int d, const Coin4& coin);

struct ResidueRow {
  int d = 0;
  int d_mod4 = 0;
  double tv = 0.0;
};

/// TV between p-bar(., 0; psi) and p-bar(., 2; Q psi) for each d.
std::vector<ResidueRow> residue_distance_curve(const std::vector<int>& d_values,
                                               const Coin4& coin);

struct SweepState {
  std::string name;
  Coin4 coin;
};

struct SweepGrid {
  std::vector<int> d_values;
  std::vector<double> phis;
  std::vector<SweepState> states;

  /// Throws std::invalid_argument for an empty axis, d < 2 or phi outside [0,8).
  void validate() const;
};

struct SweepRecord {
  int d = 0;
  double phi = 0.0;
  std::string state;
  std::vector<double> distribution;
  double tv_from_uniform = 0.0;
  bool classified_uniform = false;
  bool boundary = false;
  int d_mod4 = 0;
  bool divisible_by_12 = false;
  int warnings = 0;
  std::string error;
};

/// One record per cell, ordered by d, then phi, then state, independent of
/// `jobs`. A cell that throws keeps its slot with `error` set.
std::vector<SweepRecord> sweep(const SweepGrid& grid, double epsilon = kUniformEpsilon,
                               int jobs = 1);

struct MixingCurve {
  int d = 0;
  double phi = 0.0;
  std::vector<std::int64_t> horizons;
  std::vector<double> distances;
};

/// Powers of two up to t_max, with t_max itself appended when it is not one.
std::vector<std::int64_t> power_of_two_horizons(std::int64_t t_max);

/// SD(T) = TV between (1/T) sum_{t=0}^{T-1} p(., t) and the uniform
/// distribution, sampled at each horizon (ascending, each >= 1).
MixingCurve mixing_curve(const WalkState& initial, const CoinConfig& cfg,
                         const std::vector<std::int64_t>& horizons);
MixingCurve mixing_curve(int d, double phi, const Coin4& coin, std::int64_t t_max,
                         const std::vector<std::int64_t>& horizons);

/// (1/T) sum_{t=1}^{T} p(n, t) by direct stepping from a position-0 start.
Distribution running_average(int d, const CoinConfig& cfg, const Coin4& coin, std::int64_t T,
                             Model model = Model::Recycled);

/// TV between the spectral p-bar and the T-step running average.
double crosscheck(int d, double phi, const Coin4& coin, std::int64_t T);

}  // namespace cyclewalk
