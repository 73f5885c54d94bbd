#include "cyclewalk/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cyclewalk/spectral.hpp"

namespace cyclewalk {

namespace {

double max_abs_difference(const WalkState& a, const WalkState& b) {
  double worst = 0.0;
  for (int n = 0; n < a.cycle_size(); ++n) {
    worst = std::max(worst, std::abs(a.row(n).squaredNorm() - b.row(n).squaredNorm()));
  }
  return worst;
}

// Largest deviation between two walkers' position distributions, checked at
// t_max only or at every t along the way.
double compare_walkers(Walker a, Walker b, std::int64_t t_max, bool every_step) {
  if (t_max < 0) throw std::invalid_argument("time must be nonnegative");
  double worst = every_step ? max_abs_difference(a.state(), b.state()) : 0.0;
  for (std::int64_t t = 0; t < t_max; ++t) {
    a.step();
    b.step();
    if (every_step) worst = std::max(worst, max_abs_difference(a.state(), b.state()));
  }
  return every_step ? worst : max_abs_difference(a.state(), b.state());
}

double theorem1(int d, std::int64_t t, double phi, const Coin4& coin, int start, bool every) {
  const CoinConfig cfg(phi);
  Walker original(WalkState::localized(d, Model::Recycled, start, coin), cfg);
  Walker partner(WalkState::localized(d, Model::Recycled, start, apply_q(coin)), cfg.q_partner());
  return compare_walkers(std::move(original), std::move(partner), t, every);
}

double theorem2(int d, std::int64_t t, const Coin4& coin, int start, bool every) {
  const CoinConfig cfg(2.0);
  Walker recycled(WalkState::localized(d, Model::Recycled, start, coin), cfg);
  Walker memory(WalkState::localized(d, Model::Memory, start, apply_p_adjoint(coin)), cfg);
  return compare_walkers(std::move(recycled), std::move(memory), t, every);
}

Distribution pbar(double phi, int d, const Coin4& coin) {
  return SpectralCache::recycled(d, CoinConfig(phi), coin).limiting().distribution;
}

double tv_from_uniform(std::span<const double> p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double total = 0.0;
  for (double x : p) total += std::abs(x - u);
  return 0.5 * total;
}

}  // namespace

double total_variation(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("total variation of distributions with different sizes");
  }
  double total = 0.0;
  for (int n = 0; n < p.size(); ++n) total += std::abs(p[n] - q[n]);
  return std::clamp(0.5 * total, 0.0, 1.0);
}

bool classify_uniform(const Distribution& p, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("uniformity threshold must be positive");
  return total_variation(p, Distribution::uniform(p.size())) < epsilon;
}

double verify_theorem1(int d, std::int64_t t, double phi, const Coin4& coin, int start) {
  return theorem1(d, t, phi, coin, start, false);
}

double verify_theorem1_upto(int d, std::int64_t t_max, double phi, const Coin4& coin, int start) {
  return theorem1(d, t_max, phi, coin, start, true);
}

double verify_theorem2(int d, std::int64_t t, const Coin4& coin, int start) {
  return theorem2(d, t, coin, start, false);
}

double verify_theorem2_upto(int d, std::int64_t t_max, const Coin4& coin, int start) {
  return theorem2(d, t_max, coin, start, true);
}

std::array<double, 3> verify_pbar_identities(int d, const Coin4& coin) {
  constexpr std::array<double, 3> kPhis{0.0, 2.0, 1.0};
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < kPhis.size(); ++i) {
    const CoinConfig cfg(kPhis[i]);
    out[i] = total_variation(pbar(cfg.phi(), d, coin), pbar(cfg.q_partner().phi(), d, apply_q(coin)));
  }
  return out;
}

std::vector<ResidueRow> residue_distance_curve(const std::vector<int>& d_values, const Coin4& coin) {
  std::vector<ResidueRow> rows;
  rows.reserve(d_values.size());
  for (int d : d_values) {
    if (d < 2) throw std::invalid_argument("cycle size must be at least 2");
    rows.push_back({d, d % 4, total_variation(pbar(0.0, d, coin), pbar(2.0, d, apply_q(coin)))});
  }
  return rows;
}

void SweepGrid::validate() const {
  if (d_values.empty() || phis.empty() || states.empty()) {
    throw std::invalid_argument("sweep grid has an empty axis");
  }
  for (int d : d_values) {
    if (d < 2) throw std::invalid_argument("sweep cycle sizes must be at least 2");
  }
  for (double phi : phis) {
    if (!(phi >= 0.0 && phi < 8.0)) throw std::invalid_argument("sweep phi values must lie in [0, 8)");
  }
}

std::vector<SweepRecord> sweep(const SweepGrid& grid, double epsilon, int jobs) {
  grid.validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("uniformity threshold must be positive");

  const std::size_t n_phi = grid.phis.size();
  const std::size_t n_state = grid.states.size();
  const std::size_t total = grid.d_values.size() * n_phi * n_state;
  std::vector<SweepRecord> records(total);

  auto run_cell = [&](std::size_t idx) {
    const std::size_t di = idx / (n_phi * n_state);
    const std::size_t pi = (idx / n_state) % n_phi;
    const std::size_t si = idx % n_state;
    SweepRecord& r = records[idx];
    r.d = grid.d_values[di];
    r.phi = grid.phis[pi];
    r.state = grid.states[si].name;
    r.d_mod4 = r.d % 4;
    r.divisible_by_12 = r.d % 12 == 0;
    try {
      const LimitingResult lr =
          SpectralCache::recycled(r.d, CoinConfig(r.phi), grid.states[si].coin).limiting();
      const auto probs = lr.distribution.probs();
      r.distribution.assign(probs.begin(), probs.end());
      r.tv_from_uniform = total_variation(lr.distribution, Distribution::uniform(r.d));
      r.classified_uniform = r.tv_from_uniform < epsilon;
      r.boundary = r.tv_from_uniform >= epsilon / 10.0 && r.tv_from_uniform <= epsilon * 10.0;
      r.warnings = static_cast<int>(lr.warnings.size());
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  };

  const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(total, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) run_cell(i);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) run_cell(i);
    });
  }
  pool.clear();
  return records;
}

std::vector<std::int64_t> power_of_two_horizons(std::int64_t t_max) {
  if (t_max < 1) throw std::invalid_argument("horizon must be at least 1");
  std::vector<std::int64_t> out;
  for (std::int64_t t = 1; t <= t_max; t *= 2) {
    out.push_back(t);
    if (t > t_max / 2) break;
  }
  if (out.back() != t_max) out.push_back(t_max);
  return out;
}

MixingCurve mixing_curve(const WalkState& initial, const CoinConfig& cfg,
                         const std::vector<std::int64_t>& horizons) {
  if (horizons.empty()) throw std::invalid_argument("mixing curve needs at least one horizon");
  if (!std::is_sorted(horizons.begin(), horizons.end()) || horizons.front() < 1) {
    throw std::invalid_argument("mixing horizons must be ascending and at least 1");
  }
  MixingCurve curve;
  curve.d = initial.cycle_size();
  curve.phi = cfg.phi();
  curve.horizons = horizons;

  Walker walker(initial, cfg);
  std::vector<double> acc(static_cast<std::size_t>(curve.d), 0.0);
  std::vector<double> avg(acc.size());
  std::size_t next = 0;
  for (std::int64_t t = 0; next < horizons.size(); ++t) {
    walker.accumulate_probabilities(acc);
    while (next < horizons.size() && horizons[next] == t + 1) {
      const double inv = 1.0 / static_cast<double>(t + 1);
      for (std::size_t n = 0; n < acc.size(); ++n) avg[n] = acc[n] * inv;
      curve.distances.push_back(std::clamp(tv_from_uniform(avg), 0.0, 1.0));
      ++next;
    }
    if (next < horizons.size()) walker.step();
  }
  return curve;
}

MixingCurve mixing_curve(int d, double phi, const Coin4& coin, std::int64_t t_max,
                         const std::vector<std::int64_t>& horizons) {
  if (t_max < 1) throw std::invalid_argument("mixing horizon must be at least 1");
  std::vector<std::int64_t> hs = horizons.empty() ? power_of_two_horizons(t_max) : horizons;
  hs.erase(std::remove_if(hs.begin(), hs.end(), [&](std::int64_t h) { return h > t_max; }),
           hs.end());
  return mixing_curve(WalkState::localized(d, Model::Recycled, 0, coin), CoinConfig(phi), hs);
}

Distribution running_average(int d, const CoinConfig& cfg, const Coin4& coin, std::int64_t T,
                             Model model) {
  if (T < 1) throw std::invalid_argument("averaging horizon must be at least 1");
  Walker walker(WalkState::localized(d, model, 0, coin), cfg);
  std::vector<double> acc(static_cast<std::size_t>(d), 0.0);
  for (std::int64_t t = 1; t <= T; ++t) {
    walker.step();
    walker.accumulate_probabilities(acc);
  }
  for (double& x : acc) x /= static_cast<double>(T);
  return Distribution(std::move(acc));
}

double crosscheck(int d, double phi, const Coin4& coin, std::int64_t T) {
  const CoinConfig cfg(phi);
  const Distribution spectral = SpectralCache::recycled(d, cfg, coin).limiting().distribution;
  return total_variation(spectral, running_average(d, cfg, coin, T));
}

}  // namespace cyclewalk
