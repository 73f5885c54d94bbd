#include "cyclewalk/walk.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cyclewalk {

namespace {

void require_cycle(int d) {
  if (d < 2) throw std::invalid_argument("cycle size must be at least 2, got " + std::to_string(d));
}

void require_model(const WalkState& s, Model expected) {
  if (s.model() != expected) {
    throw std::invalid_argument(std::string("step operator for the ") +
                                std::string(to_string(expected)) + " walk applied to a " +
                                std::string(to_string(s.model())) + " state");
  }
}

// psi(n, t+1) = M_+ psi(n+1, t) + M_- psi(n-1, t). Coin, shift and swap fused
// into one gather per position.
void recycled_into(std::span<const Coin4> in, std::span<Coin4> out, double c, double s) {
  const int d = static_cast<int>(in.size());
  for (int n = 0; n < d; ++n) {
    const Coin4& right = in[static_cast<std::size_t>(n + 1 == d ? 0 : n + 1)];
    const Coin4& left = in[static_cast<std::size_t>(n == 0 ? d - 1 : n - 1)];
    Coin4& o = out[static_cast<std::size_t>(n)];
    o[0] = kInvSqrt2 * (right[0] + right[1]);
    o[1] = c * right[2] + s * right[3];
    o[2] = kInvSqrt2 * (left[0] - left[1]);
    o[3] = s * left[2] - c * left[3];
  }
}

// Slot layout 2*coin + memory. Hadamard on the coin, then
//   |n,m=dn,c=dn> -> |n-1,dn,dn>   |n,m=dn,c=up> -> |n+1,up,up>
//   |n,m=up,c=dn> -> |n+1,up,dn>   |n,m=up,c=up> -> |n-1,dn,up>
void memory_into(std::span<const Coin4> in, std::span<Coin4> out) {
  const int d = static_cast<int>(in.size());
  for (int n = 0; n < d; ++n) {
    const Coin4& right = in[static_cast<std::size_t>(n + 1 == d ? 0 : n + 1)];
    const Coin4& left = in[static_cast<std::size_t>(n == 0 ? d - 1 : n - 1)];
    Coin4& o = out[static_cast<std::size_t>(n)];
    o[0] = kInvSqrt2 * (right[0] + right[2]);
    o[1] = kInvSqrt2 * (left[1] + left[3]);
    o[2] = kInvSqrt2 * (right[1] - right[3]);
    o[3] = kInvSqrt2 * (left[0] - left[2]);
  }
}

}  // namespace

std::string_view to_string(Model m) { return m == Model::Recycled ? "recycled" : "memory"; }

WalkState::WalkState(int d, Model model) : model_(model) {
  require_cycle(d);
  rows_.assign(static_cast<std::size_t>(d), Coin4::Zero());
}

WalkState WalkState::localized(int d, Model model, const InitialState& init) {
  return localized(d, model, init.position, init.coin);
}

WalkState WalkState::localized(int d, Model model, int position, const Coin4& coin) {
  WalkState s(d, model);
  if (position < 0 || position >= d) {
    throw std::invalid_argument("start position " + std::to_string(position) +
                                " outside [0, " + std::to_string(d) + ")");
  }
  if (std::abs(coin.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("initial coin vector must have unit norm");
  }
  s.rows_[static_cast<std::size_t>(position)] = coin;
  return s;
}

WalkState WalkState::from_amplitudes(Model model, std::vector<Coin4> rows) {
  WalkState s(static_cast<int>(rows.size()), model);
  s.rows_ = std::move(rows);
  if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
    throw std::invalid_argument("amplitude table is not normalized");
  }
  return s;
}

double WalkState::norm_squared() const {
  double total = 0.0;
  for (const Coin4& r : rows_) total += r.squaredNorm();
  return total;
}

WalkState step_recycled(const WalkState& state, const CoinConfig& cfg) {
  require_model(state, Model::Recycled);
  Walker w(state, cfg);
  w.step();
  return w.state();
}

WalkState step_memory(const WalkState& state) {
  require_model(state, Model::Memory);
  Walker w(state, CoinConfig(0.0));
  w.step();
  return w.state();
}

WalkState evolve(const WalkState& state, std::int64_t steps, const CoinConfig& cfg) {
  if (steps < 0) throw std::invalid_argument("step count must be nonnegative");
  Walker w(state, cfg);
  w.advance(steps);
  return w.state();
}

Distribution position_distribution(const WalkState& state) {
  std::vector<double> p(static_cast<std::size_t>(state.cycle_size()), 0.0);
  for (int n = 0; n < state.cycle_size(); ++n) p[static_cast<std::size_t>(n)] = state.row(n).squaredNorm();
  return Distribution(std::move(p));
}

Walker::Walker(WalkState initial, const CoinConfig& cfg)
    : current_(std::move(initial)),
      scratch_(current_.cycle_size(), current_.model()),
      cos_theta_(std::cos(cfg.theta())),
      sin_theta_(std::sin(cfg.theta())) {}

void Walker::step() {
  if (current_.model_ == Model::Recycled) {
    recycled_into(current_.rows_, scratch_.rows_, cos_theta_, sin_theta_);
  } else {
    memory_into(current_.rows_, scratch_.rows_);
  }
  std::swap(current_.rows_, scratch_.rows_);
  ++time_;
}

void Walker::advance(std::int64_t steps) {
  for (std::int64_t i = 0; i < steps; ++i) step();
}

void Walker::accumulate_probabilities(std::span<double> acc) const {
  const auto rows = current_.rows();
  for (std::size_t n = 0; n < rows.size(); ++n) acc[n] += rows[n].squaredNorm();
}

}  // namespace cyclewalk
