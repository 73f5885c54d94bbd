#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cyclewalk/coin.hpp"
#include "cyclewalk/distribution.hpp"

namespace cyclewalk {

enum class Model { Recycled, Memory };

std::string_view to_string(Model m);

/// Amplitude table of a walk on the d-cycle: row n holds the four coin
/// amplitudes at position n.
///
/// For Model::Recycled a row is laid out in CoinBasis order (coin 1, coin 2).
/// For Model::Memory the first slot is the active coin and the second slot is
/// the memory ancilla, i.e. row index = 2 * coin + memory. That is the layout
/// under which the memory walk's momentum block is N_k and the P permutation
/// relates it to the recycled walk at phi = 2.
class WalkState {
 public:
  /// Unnormalized zero state; callers fill it through from_amplitudes.
  WalkState(int d, Model model);

  static WalkState localized(int d, Model model, const InitialState& init);
  static WalkState localized(int d, Model model, int position, const Coin4& coin);
  /// Throws std::invalid_argument when the table is not normalized to 1e-10.
  static WalkState from_amplitudes(Model model, std::vector<Coin4> rows);

  int cycle_size() const { return static_cast<int>(rows_.size()); }
  Model model() const { return model_; }
  std::span<const Coin4> rows() const { return rows_; }
  const Coin4& row(int n) const { return rows_[static_cast<std::size_t>(n)]; }
  double norm_squared() const;

 private:
  friend class Walker;
  Model model_;
  std::vector<Coin4> rows_;
};

/// One step U = (I x M) S (I x C-hat). Throws std::invalid_argument for a
/// memory-model state.
WalkState step_recycled(const WalkState& state, const CoinConfig& cfg);

/// One step U_M = S_M (I x I x H). Throws std::invalid_argument for a
/// recycled-model state.
WalkState step_memory(const WalkState& state);

/// Applies the state's own step operator `steps` times. The coin config is
/// ignored for memory-model states.
WalkState evolve(const WalkState& state, std::int64_t steps, const CoinConfig& cfg);

Distribution position_distribution(const WalkState& state);

/// In-place stepper for long runs. Keeps a double buffer so repeated steps do
/// not allocate.
class Walker {
 public:
  Walker(WalkState initial, const CoinConfig& cfg);

  void step();
  void advance(std::int64_t steps);

  const WalkState& state() const { return current_; }
  std::int64_t time() const { return time_; }

  /// Adds |psi(n)|^2 into acc[n] for every position.
  void accumulate_probabilities(std::span<double> acc) const;

 private:
  WalkState current_;
  WalkState scratch_;
  double cos_theta_;
  double sin_theta_;
  std::int64_t time_ = 0;
};

}  // namespace cyclewalk
