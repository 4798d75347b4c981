#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>

namespace coxfock {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic xoshiro256** stream with hand-rolled Box-Muller gaussians.
// Avoids std::normal_distribution so emitted numbers do not depend on the
// standard library implementation.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed ^ (0x632be59bd9b4e019ULL * (stream + 1));
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> cgaussian() {
    const double re = gaussian(), im = gaussian();
    return {re * 0.7071067811865475244, im * 0.7071067811865475244};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4] = {};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Hermitian d x d matrix with max_ij |q_ij| rescaled to exactly `bound`
// (zero matrix when bound = 0).
inline Eigen::MatrixXcd random_hermitian(int d, double bound, RandomStream& rs) {
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rs.cgaussian();
  Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
  const double m = h.cwiseAbs().maxCoeff();
  if (bound == 0.0 || m == 0.0) return Eigen::MatrixXcd::Zero(d, d);
  h *= bound / m;
  // keep exact Hermitian symmetry after rescaling
  for (int i = 0; i < d; ++i) {
    h(i, i) = std::complex<double>(h(i, i).real(), 0.0);
    for (int j = i + 1; j < d; ++j) h(j, i) = std::conj(h(i, j));
  }
  return h;
}

}  // namespace coxfock
