#include "coxfock/opspace.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coxfock/rng.hpp"
#include "coxfock/wick.hpp"

namespace coxfock::opspace {

namespace {

constexpr Eigen::Index kDenseEmbedLimit = 2000;   // rows of aux (x) Fock handled densely
constexpr Eigen::Index kTensorSquareLimit = 2000; // Fock side of the tensor square

void check_tuple(const CoefficientTuple& t) {
  for (const auto& a : t.mats)
    if (a.rows() != t.aux_dim || a.cols() != t.aux_dim)
      throw error(errc::dimension_mismatch, "coefficient matrices must share the auxiliary dimension");
}

// G_i compressed to levels <= max_level, in the orthonormal coordinates of the
// deformed geometry.
std::vector<Matrix> transformed_positions(const fock::FockScene& scene, int n_ops, int max_level) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(n_ops));
  for (int i = 0; i < n_ops; ++i) {
    fock::FockOperator g = fock::position(scene, i).restricted(max_level);
    const auto dims = fock::level_dims(scene);
    std::vector<Eigen::Index> offset(dims.size() + 1, 0);
    for (std::size_t n = 0; n < dims.size(); ++n)
      offset[n + 1] = offset[n] + (static_cast<int>(n) <= max_level ? dims[n] : 0);
    Matrix dense = Matrix::Zero(offset.back(), offset.back());
    for (int n = 0; n <= max_level; ++n)
      for (int shift : {-1, +1}) {
        if (n + shift < 0 || n + shift > max_level) continue;
        if (const Matrix* b = g.find_block(n, shift)) {
          const auto& src = scene.levels[static_cast<std::size_t>(n)];
          const auto& dst = scene.levels[static_cast<std::size_t>(n + shift)];
          dense.block(offset[static_cast<std::size_t>(n + shift)], offset[static_cast<std::size_t>(n)],
                      dst.dim, src.dim) = dst.root.sqrt * (*b) * src.root.pinv_sqrt;
        }
      }
    out.push_back(std::move(dense));
  }
  return out;
}

}  // namespace

double max_norm(const CoefficientTuple& t) {
  check_tuple(t);
  if (t.mats.empty() || t.aux_dim == 0) return 0.0;
  Matrix row = Matrix::Zero(t.aux_dim, t.aux_dim);
  Matrix col = Matrix::Zero(t.aux_dim, t.aux_dim);
  for (const auto& a : t.mats) {
    row += a * a.adjoint();
    col += a.adjoint() * a;
  }
  return std::sqrt(std::max(linalg::max_hermitian_eig(row), linalg::max_hermitian_eig(col)));
}

double embedded_norm(const CoefficientTuple& t, const fock::FockScene& scene, int max_level) {
  check_tuple(t);
  if (t.mats.size() > static_cast<std::size_t>(scene.tensor.d))
    throw error(errc::invalid_argument, "tuple length exceeds the deformation dimension");
  if (t.mats.empty()) return 0.0;
  const auto g = transformed_positions(scene, static_cast<int>(t.mats.size()), max_level);
  const Eigen::Index fdim = g.empty() ? 0 : g[0].rows();
  const Eigen::Index total = t.aux_dim * fdim;
  if (total <= kDenseEmbedLimit) {
    Matrix m = Matrix::Zero(total, total);
    for (std::size_t i = 0; i < t.mats.size(); ++i) m += linalg::kron(t.mats[i], g[i]);
    return linalg::spectral_norm(m);
  }
  auto matvec = [&](const Vector& v, bool adjoint) {
    Eigen::Map<const Matrix> x(v.data(), fdim, t.aux_dim);  // column-major: vec(X)
    Matrix y = Matrix::Zero(fdim, t.aux_dim);
    for (std::size_t i = 0; i < t.mats.size(); ++i)
      y += adjoint ? Matrix(g[i].adjoint() * x * t.mats[i].conjugate())
                   : Matrix(g[i] * x * t.mats[i].transpose());
    return Vector(Eigen::Map<Vector>(y.data(), total));
  };
  return linalg::power_norm([&](const Vector& v) { return matvec(v, false); },
                            [&](const Vector& v) { return matvec(v, true); }, total)
      .norm;
}

double embedded_norm(const CoefficientTuple& t, const fock::FockScene& scene) {
  return embedded_norm(t, scene, scene.cap);
}

SandwichReport sandwich_single(const CoefficientTuple& t, const fock::FockScene& scene,
                               std::uint64_t seed, std::uint64_t trial) {
  const double q = scene.tensor.norm_bound;
  if (q >= 1.0) throw error(errc::invalid_argument, "sandwich bound requires ‖T‖ < 1");
  SandwichReport rep;
  rep.seed = seed;
  rep.trial = trial;
  rep.lower = max_norm(t);
  rep.middle = embedded_norm(t, scene);
  rep.upper = 2.0 / std::sqrt(1.0 - q) * rep.lower;
  rep.tol = 1e-8 * (1.0 + rep.upper);
  rep.pass = rep.lower <= rep.middle + rep.tol && rep.middle <= rep.upper + rep.tol;
  return rep;
}

std::vector<SandwichReport> sandwich_check(std::uint64_t seed, int trials, Eigen::Index aux_dim,
                                           int n_ops, const fock::FockScene& scene) {
  if (n_ops > scene.tensor.d)
    throw error(errc::invalid_argument, "tuple length exceeds the deformation dimension");
  std::vector<SandwichReport> out(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < static_cast<long long>(trials); ++k) {
    RandomStream rs(seed, static_cast<std::uint64_t>(k));
    CoefficientTuple t;
    t.aux_dim = aux_dim;
    for (int i = 0; i < n_ops; ++i) {
      Matrix a(aux_dim, aux_dim);
      for (Eigen::Index r = 0; r < aux_dim; ++r)
        for (Eigen::Index c = 0; c < aux_dim; ++c) a(r, c) = rs.cgaussian();
      t.mats.push_back(std::move(a));
    }
    out[static_cast<std::size_t>(k)] =
        sandwich_single(t, scene, seed, static_cast<std::uint64_t>(k));
  }
  return out;
}

std::vector<Certificate> injectivity_witness(int m, const fock::FockScene& scene,
                                             const Tolerances& tol) {
  if (m < 1 || m > scene.tensor.d)
    throw error(errc::invalid_argument, "witness needs 1 <= m <= d");
  const double q = scene.tensor.norm_bound;
  if (q >= 1.0) throw error(errc::invalid_argument, "witness bound requires ‖T‖ < 1");
  const auto g = transformed_positions(scene, m, scene.cap);
  const Eigen::Index fdim = g[0].rows();
  if (fdim > kTensorSquareLimit)
    throw error(errc::budget_exceeded, "tensor square beyond the power-iteration budget");

  // sum G_i (x) conj(G_i) is Hermitian; matvec through vec(X) = column stack
  auto matvec = [&](const Vector& v) {
    Eigen::Map<const Matrix> x(v.data(), fdim, fdim);
    Matrix y = Matrix::Zero(fdim, fdim);
    for (int i = 0; i < m; ++i) y += g[static_cast<std::size_t>(i)].conjugate() * x *
                                     g[static_cast<std::size_t>(i)].transpose();
    return Vector(Eigen::Map<Vector>(y.data(), fdim * fdim));
  };
  const auto pw = linalg::power_norm(matvec, matvec, fdim * fdim);

  const double bound = 4.0 * std::sqrt(static_cast<double>(m)) / (1.0 - q);
  std::ostringstream ctx;
  ctx << "m=" << m << " trace_side=" << m << " gap=" << (bound - pw.norm)
      << " iters=" << pw.iterations << (pw.converged ? "" : " (unconverged)");
  std::vector<Certificate> certs;
  certs.push_back(residual_cert("opspace/tensor_square_norm", pw.norm, bound + 1e-6, ctx.str()));

  cxd trace{0.0, 0.0};
  for (int i = 0; i < m; ++i) trace += wick::moment_matrix(std::vector<int>{i, i}, scene);
  certs.push_back(residual_cert("opspace/vacuum_trace_side",
                                std::abs(trace - cxd{static_cast<double>(m), 0.0}), 0.0));
  return certs;
}

}  // namespace coxfock::opspace
