#include "cyclewalk/coin.hpp"

#include <cmath>
#include <stdexcept>

namespace cyclewalk {

namespace {

double reduce_phi(double phi) {
  if (!std::isfinite(phi)) throw std::invalid_argument("memory parameter must be finite");
  double r = std::fmod(phi, 8.0);
  if (r < 0.0) r += 8.0;
  // fmod of a tiny negative lands on 8.0 after the shift.
  if (r >= 8.0) r = 0.0;
  return r;
}

}  // namespace

CoinConfig::CoinConfig(double phi) : phi_(reduce_phi(phi)), theta_(kPi * (1.0 + phi_) / 4.0) {}

Eigen::Matrix2cd rotation_coin(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd m;
  m << c, s, s, -c;
  return m;
}

Matrix4 make_coin_operator(const CoinConfig& cfg) {
  Matrix4 m = Matrix4::Zero();
  m.topLeftCorner<2, 2>() = rotation_coin(kPi / 4.0);
  m.bottomRightCorner<2, 2>() = rotation_coin(cfg.theta());
  return m;
}

Coin4 named_coin(NamedState s) {
  switch (s) {
    case NamedState::PsiA:
      return Coin4(1.0, 0.0, 0.0, 0.0);
    case NamedState::PsiB:
      return Coin4(kInvSqrt2, kInvSqrt2, 0.0, 0.0);
    case NamedState::PsiC:
      return Coin4(0.5, 0.5, 0.5, 0.5);
    case NamedState::PsiD:
      return Coin4(0.5, 0.5, 0.5, -0.5);
  }
  throw std::invalid_argument("unknown named state");
}

std::string_view to_string(NamedState s) {
  switch (s) {
    case NamedState::PsiA:
      return "psi_a";
    case NamedState::PsiB:
      return "psi_b";
    case NamedState::PsiC:
      return "psi_c";
    case NamedState::PsiD:
      return "psi_d";
  }
  return "?";
}

std::optional<NamedState> parse_named_state(std::string_view name) {
  if (name == "psi_a") return NamedState::PsiA;
  if (name == "psi_b") return NamedState::PsiB;
  if (name == "psi_c") return NamedState::PsiC;
  if (name == "psi_d") return NamedState::PsiD;
  return std::nullopt;
}

Coin4 apply_q(const Coin4& v) { return Coin4(v[0], v[1], v[2], -v[3]); }

Coin4 apply_p(const Coin4& v) { return Coin4(v[0], v[2], v[3], v[1]); }

Coin4 apply_p_adjoint(const Coin4& v) { return Coin4(v[0], v[3], v[1], v[2]); }

InitialState InitialState::named(NamedState s, int position) {
  return InitialState{position, named_coin(s), s};
}

InitialState InitialState::custom(const Coin4& coin, int position) {
  if (std::abs(coin.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("initial coin vector must have unit norm");
  }
  return InitialState{position, coin, std::nullopt};
}

}  // namespace cyclewalk
