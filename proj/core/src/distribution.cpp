#include "cyclewalk/distribution.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cyclewalk {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("distribution must be nonempty");
  for (double& p : probs_) {
    if (!(p >= -1e-14)) {
      throw std::invalid_argument("distribution entry below zero: " + std::to_string(p));
    }
    if (p < 0.0) p = 0.0;
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("distribution does not sum to 1 (sum = " +
                                std::to_string(total) + ")");
  }
}

Distribution Distribution::uniform(int d) {
  if (d < 1) throw std::invalid_argument("distribution size must be positive");
  return Distribution(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
}

Distribution Distribution::point_mass(int d, int position) {
  if (d < 1 || position < 0 || position >= d) {
    throw std::invalid_argument("point mass position out of range");
  }
  std::vector<double> p(static_cast<std::size_t>(d), 0.0);
  p[static_cast<std::size_t>(position)] = 1.0;
  return Distribution(std::move(p));
}

}  // namespace cyclewalk
