#include "cyclewalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace cyclewalk {

namespace {

void require_momentum(int k, int d) {
  if (d < 1) throw std::out_of_range("cycle size must be positive");
  if (k < 0 || k >= d) {
    throw std::out_of_range("momentum index " + std::to_string(k) + " outside [0, " +
                            std::to_string(d) + ")");
  }
}

// lambda^t for |lambda| ~ 1, taken in polar form so large t stays on the circle.
Complex unit_power(Complex lambda, std::int64_t t) {
  if (t == 0) return Complex(1.0, 0.0);
  const double td = static_cast<double>(t);
  return std::polar(std::pow(std::abs(lambda), td), std::arg(lambda) * td);
}

void orthonormalize(std::array<Coin4, 4>& vecs, const std::vector<int>& members) {
  // Two passes of modified Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      Coin4& v = vecs[static_cast<std::size_t>(members[a])];
      for (std::size_t b = 0; b < a; ++b) {
        const Coin4& u = vecs[static_cast<std::size_t>(members[b])];
        v -= u.dot(v) * u;
      }
      v.normalize();
    }
  }
}

struct PhaseEntry {
  double phase;
  int k;
  int j;
};

}  // namespace

RootsOfUnity::RootsOfUnity(int d) {
  if (d < 1) throw std::invalid_argument("cycle size must be positive");
  roots_.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    roots_[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * kPi * j / d);
  }
}

Complex RootsOfUnity::operator()(std::int64_t j) const {
  const std::int64_t d = size();
  return roots_[static_cast<std::size_t>(((j % d) + d) % d)];
}

FourierBlock build_mk(int k, int d, const CoinConfig& cfg) {
  require_momentum(k, d);
  const Complex x = RootsOfUnity(d)(k);
  const Complex y = std::conj(x);
  const double c = std::cos(cfg.theta());
  const double s = std::sin(cfg.theta());
  const double h = kInvSqrt2;
  Matrix4 m;
  // clang-format off
  m << x * h,  x * h,  0.0,   0.0,
       0.0,    0.0,    x * c, x * s,
       y * h, -y * h,  0.0,   0.0,
       0.0,    0.0,    y * s, -y * c;
  // clang-format on
  return FourierBlock{k, d, cfg.theta(), m};
}

MemoryFourierBlock build_nk(int k, int d) {
  require_momentum(k, d);
  const Complex x = RootsOfUnity(d)(k);
  const Complex y = std::conj(x);
  const Complex z(0.0, 0.0);
  Matrix4 m;
  // clang-format off
  m << x, z,  x,  z,
       z, y,  z,  y,
       z, x,  z, -x,
       y, z, -y,  z;
  // clang-format on
  m *= kInvSqrt2;
  return MemoryFourierBlock{k, d, m};
}

double phase_distance(Complex a, Complex b) { return std::abs(std::arg(a * std::conj(b))); }

EigenSystem eigensystem(const Matrix4& block, double cluster_tolerance) {
  const double defect = (block * block.adjoint() - Matrix4::Identity()).cwiseAbs().maxCoeff();
  if (!(defect <= 1e-10)) {
    std::ostringstream os;
    os << "eigensystem expects a unitary block (||M M^dagger - I||_max = " << defect << ")";
    throw std::invalid_argument(os.str());
  }

  // A unitary matrix is normal, so its complex Schur form is diagonal and the
  // Schur vectors are eigenvectors.
  Eigen::ComplexSchur<Matrix4> schur(block);
  const Matrix4& t = schur.matrixT();
  const Matrix4& u = schur.matrixU();

  EigenSystem es;
  for (int j = 0; j < 4; ++j) {
    es.eigenvalues[static_cast<std::size_t>(j)] = t(j, j);
    es.eigenvectors[static_cast<std::size_t>(j)] = u.col(j);
  }

  std::array<bool, 4> assigned{};
  for (int a = 0; a < 4; ++a) {
    if (assigned[static_cast<std::size_t>(a)]) continue;
    std::vector<int> cluster{a};
    assigned[static_cast<std::size_t>(a)] = true;
    // Grow transitively so chains of close eigenvalues land together.
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      for (int b = 0; b < 4; ++b) {
        if (assigned[static_cast<std::size_t>(b)]) continue;
        if (phase_distance(es.eigenvalues[static_cast<std::size_t>(cluster[i])],
                           es.eigenvalues[static_cast<std::size_t>(b)]) < cluster_tolerance) {
          cluster.push_back(b);
          assigned[static_cast<std::size_t>(b)] = true;
        }
      }
    }
    if (cluster.size() > 1) orthonormalize(es.eigenvectors, cluster);
  }
  return es;
}

double eigenvalue_multiset_distance(std::span<const Complex, 4> a, std::span<const Complex, 4> b) {
  std::array<int, 4> perm{0, 1, 2, 3};
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      worst = std::max(worst, std::abs(a[i] - b[static_cast<std::size_t>(perm[i])]));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

SpectralCache::SpectralCache(int d, const Coin4& initial) : d_(d), initial_(initial), roots_(d) {}

SpectralCache SpectralCache::recycled(int d, const CoinConfig& cfg, const Coin4& initial) {
  SpectralCache cache(d, initial);
  std::vector<Matrix4> blocks;
  blocks.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) blocks.push_back(build_mk(k, d, cfg).matrix);
  cache.fill(blocks);
  return cache;
}

SpectralCache SpectralCache::memory(int d, const Coin4& initial) {
  SpectralCache cache(d, initial);
  std::vector<Matrix4> blocks;
  blocks.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) blocks.push_back(build_nk(k, d).matrix);
  cache.fill(blocks);
  return cache;
}

void SpectralCache::fill(std::span<const Matrix4> blocks) {
  systems_.clear();
  alphas_.clear();
  systems_.reserve(blocks.size());
  alphas_.reserve(4 * blocks.size());
  for (const Matrix4& b : blocks) {
    systems_.push_back(eigensystem(b));
    for (const Coin4& v : systems_.back().eigenvectors) alphas_.push_back(v.dot(initial_));
  }
}

double SpectralCache::probability(int n, std::int64_t t) const {
  if (n < 0 || n >= d_) throw std::out_of_range("position outside the cycle");
  if (t < 0) throw std::invalid_argument("time must be nonnegative");

  // w(k, j) = alpha_j(k) lambda_j(k)^t
  std::vector<Complex> w(static_cast<std::size_t>(4 * d_));
  for (int k = 0; k < d_; ++k) {
    for (int j = 0; j < 4; ++j) {
      w[static_cast<std::size_t>(4 * k + j)] =
          alpha(k, j) * unit_power(system(k).eigenvalues[static_cast<std::size_t>(j)], t);
    }
  }

  Complex total(0.0, 0.0);
  for (int k = 0; k < d_; ++k) {
    for (int m = 0; m < d_; ++m) {
      const Complex phase = roots_(static_cast<std::int64_t>(n) * (m - k));
      for (int j = 0; j < 4; ++j) {
        const Coin4& phi_kj = system(k).eigenvectors[static_cast<std::size_t>(j)];
        const Complex wk = std::conj(w[static_cast<std::size_t>(4 * k + j)]);
        for (int l = 0; l < 4; ++l) {
          const Coin4& phi_ml = system(m).eigenvectors[static_cast<std::size_t>(l)];
          total += phase * wk * w[static_cast<std::size_t>(4 * m + l)] * phi_kj.dot(phi_ml);
        }
      }
    }
  }
  total /= static_cast<double>(d_) * d_;
  if (std::abs(total.imag()) > 1e-10) {
    throw std::runtime_error("closed-form probability has a non-negligible imaginary part");
  }
  return std::max(0.0, total.real());
}

Distribution SpectralCache::distribution(std::int64_t t) const {
  if (t < 0) throw std::invalid_argument("time must be nonnegative");
  // psi~(k, t) = sum_j alpha_j(k) lambda_j(k)^t |phi_j(k)>
  std::vector<Coin4> momentum(static_cast<std::size_t>(d_), Coin4::Zero());
  for (int k = 0; k < d_; ++k) {
    for (int j = 0; j < 4; ++j) {
      momentum[static_cast<std::size_t>(k)] +=
          alpha(k, j) * unit_power(system(k).eigenvalues[static_cast<std::size_t>(j)], t) *
          system(k).eigenvectors[static_cast<std::size_t>(j)];
    }
  }
  std::vector<double> p(static_cast<std::size_t>(d_));
  for (int n = 0; n < d_; ++n) {
    Coin4 amp = Coin4::Zero();
    for (int k = 0; k < d_; ++k) {
      amp += roots_(static_cast<std::int64_t>(k) * n) * momentum[static_cast<std::size_t>(k)];
    }
    p[static_cast<std::size_t>(n)] = amp.squaredNorm() / (static_cast<double>(d_) * d_);
  }
  return Distribution(std::move(p));
}

LimitingResult SpectralCache::limiting(double tolerance) const {
  std::vector<PhaseEntry> entries;
  entries.reserve(static_cast<std::size_t>(4 * d_));
  for (int k = 0; k < d_; ++k) {
    for (int j = 0; j < 4; ++j) {
      entries.push_back({std::arg(system(k).eigenvalues[static_cast<std::size_t>(j)]), k, j});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const PhaseEntry& a, const PhaseEntry& b) {
    if (a.phase != b.phase) return a.phase < b.phase;
    if (a.k != b.k) return a.k < b.k;
    return a.j < b.j;
  });

  // Single-linkage clusters over the sorted phases; the gap between the last
  // and first entry wraps through -pi.
  std::vector<std::size_t> starts{0};
  std::vector<double> fragile;
  const double lo = tolerance / 100.0;
  const double hi = tolerance * 100.0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const double gap = entries[i].phase - entries[i - 1].phase;
    if (gap >= tolerance) starts.push_back(i);
    if (gap >= lo && gap <= hi) fragile.push_back(gap);
  }
  const double wrap_gap = entries.front().phase + 2.0 * kPi - entries.back().phase;
  if (wrap_gap >= lo && wrap_gap <= hi && starts.size() > 1) fragile.push_back(wrap_gap);

  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t c = 0; c < starts.size(); ++c) {
    const std::size_t end = c + 1 < starts.size() ? starts[c + 1] : entries.size();
    std::vector<std::size_t> members;
    for (std::size_t i = starts[c]; i < end; ++i) members.push_back(i);
    clusters.push_back(std::move(members));
  }
  if (clusters.size() > 1 && wrap_gap < tolerance) {
    auto& first = clusters.front();
    first.insert(first.end(), clusters.back().begin(), clusters.back().end());
    clusters.pop_back();
  }

  // f summed over intra-cluster ordered pairs, bucketed by momentum
  // difference m - k so each position needs only d phase factors.
  std::vector<Complex> by_shift(static_cast<std::size_t>(d_), Complex(0.0, 0.0));
  for (const auto& members : clusters) {
    for (std::size_t a : members) {
      const PhaseEntry& ea = entries[a];
      const Coin4& va = system(ea.k).eigenvectors[static_cast<std::size_t>(ea.j)];
      const Complex ca = std::conj(alpha(ea.k, ea.j));
      for (std::size_t b : members) {
        const PhaseEntry& eb = entries[b];
        const Coin4& vb = system(eb.k).eigenvectors[static_cast<std::size_t>(eb.j)];
        const int shift = ((eb.k - ea.k) % d_ + d_) % d_;
        by_shift[static_cast<std::size_t>(shift)] += ca * alpha(eb.k, eb.j) * va.dot(vb);
      }
    }
  }

  const double norm = 1.0 / (static_cast<double>(d_) * d_);
  std::vector<double> p(static_cast<std::size_t>(d_));
  double residue = 0.0;
  for (int n = 0; n < d_; ++n) {
    Complex acc(0.0, 0.0);
    for (int s = 0; s < d_; ++s) {
      acc += by_shift[static_cast<std::size_t>(s)] * roots_(static_cast<std::int64_t>(n) * s);
    }
    acc *= norm;
    residue = std::max(residue, std::abs(acc.imag()));
    p[static_cast<std::size_t>(n)] = acc.real() < 0.0 && acc.real() > -1e-12 ? 0.0 : acc.real();
  }
  if (residue >= 1e-8) {
    std::ostringstream os;
    os << "time-averaged distribution has imaginary residue " << residue;
    throw std::runtime_error(os.str());
  }

  LimitingResult result{Distribution(std::move(p)), {}, residue,
                        static_cast<int>(clusters.size())};
  if (!fragile.empty()) {
    std::ostringstream os;
    os.precision(3);
    os << "eigenvalue phase gap(s) near the matching tolerance " << tolerance << ":";
    for (double g : fragile) os << ' ' << g;
    result.warnings.push_back({std::move(fragile), os.str()});
  }
  return result;
}

namespace {

void require_origin_start(const InitialState& init) {
  if (init.position != 0) {
    throw std::invalid_argument("spectral evaluation needs a start localized at position 0, got " +
                                std::to_string(init.position));
  }
  if (std::abs(init.coin.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("initial coin vector must have unit norm");
  }
}

void require_cycle(int d) {
  if (d < 2) throw std::invalid_argument("cycle size must be at least 2, got " + std::to_string(d));
}

}  // namespace

double closed_form_probability(int n, std::int64_t t, int d, const CoinConfig& cfg,
                               const InitialState& init) {
  require_cycle(d);
  require_origin_start(init);
  return SpectralCache::recycled(d, cfg, init.coin).probability(n, t);
}

LimitingResult limiting_distribution(const CoinConfig& cfg, int d, const InitialState& init) {
  require_cycle(d);
  require_origin_start(init);
  return SpectralCache::recycled(d, cfg, init.coin).limiting();
}

LimitingResult limiting_distribution_memory(int d, const InitialState& init) {
  require_cycle(d);
  require_origin_start(init);
  return SpectralCache::memory(d, init.coin).limiting();
}

}  // namespace cyclewalk
