#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace cyclewalk {

using Complex = std::complex<double>;
using Coin4 = Eigen::Vector4cd;
using Matrix4 = Eigen::Matrix4cd;

// Joint coin basis. The first symbol is coin 1 (inactive/memory register for
// the recycled walk), the second is coin 2 (active). Every Coin4 and Matrix4
// in the library is laid out in this order.
enum class CoinBasis : int { DownDown = 0, DownUp = 1, UpDown = 2, UpUp = 3 };

constexpr int index_of(CoinBasis b) { return static_cast<int>(b); }

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Memory parameter of the unbalanced coin and its derived angle.
///
/// phi is reduced into [0, 8) on construction; theta = pi (1 + phi) / 4 is
/// computed here and nowhere else.
class CoinConfig {
 public:
  explicit CoinConfig(double phi);

  double phi() const { return phi_; }
  double theta() const { return theta_; }

  /// The parameter paired with this one by the Q-symmetry, -(2 + phi) mod 8.
  CoinConfig q_partner() const { return CoinConfig(-(2.0 + phi_)); }

 private:
  double phi_;
  double theta_;
};

/// The 2x2 reflection coin C(theta) = [[cos, sin], [sin, -cos]].
Eigen::Matrix2cd rotation_coin(double theta);

/// Block-diagonal unbalanced coin diag(C(pi/4), C(theta)).
Matrix4 make_coin_operator(const CoinConfig& cfg);

enum class NamedState { PsiA, PsiB, PsiC, PsiD };

Coin4 named_coin(NamedState s);
std::string_view to_string(NamedState s);
std::optional<NamedState> parse_named_state(std::string_view name);

/// Sign flip of the UpUp component (the involution relating phi and -(2+phi)).
Coin4 apply_q(const Coin4& v);
/// (a, b, c, d) -> (a, c, d, b).
Coin4 apply_p(const Coin4& v);
/// (a, b, c, d) -> (a, d, b, c); inverse of apply_p.
Coin4 apply_p_adjoint(const Coin4& v);

/// A position-localized starting state.
struct InitialState {
  int position = 0;
  Coin4 coin = Coin4(1.0, 0.0, 0.0, 0.0);
  std::optional<NamedState> name;

  static InitialState named(NamedState s, int position = 0);
  /// Throws std::invalid_argument unless ||coin|| = 1 within 1e-12.
  static InitialState custom(const Coin4& coin, int position = 0);
};

}  // namespace cyclewalk
