#pragma once

#include <span>
#include <vector>

namespace cyclewalk {

/// A probability vector over the d positions of the cycle.
///
/// Construction checks that the entries sum to 1 within 1e-9 and that no
/// entry is below -1e-14; tiny negatives from rounding are clamped to zero.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(int d);
  static Distribution point_mass(int d, int position);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int n) const { return probs_[static_cast<std::size_t>(n)]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

}  // namespace cyclewalk
