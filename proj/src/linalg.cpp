#include "coxfock/linalg.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "coxfock/errors.hpp"
#include "coxfock/rng.hpp"

namespace coxfock::linalg {

namespace {
constexpr Eigen::Index kDenseLimit = 1500;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_hermitian_eig(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double min_hermitian_eig(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const Eigen::Index small = std::min(a.rows(), a.cols());
  if (small <= kDenseLimit) {
    // eigensolve of the smaller Gram factor
    Matrix gram = (a.rows() <= a.cols()) ? Matrix(a * a.adjoint()) : Matrix(a.adjoint() * a);
    const double top = max_hermitian_eig(gram);
    return std::sqrt(std::max(0.0, top));
  }
  auto apply = [&a](const Vector& v) { return Vector(a * v); };
  auto apply_adj = [&a](const Vector& v) { return Vector(a.adjoint() * v); };
  return power_norm(apply, apply_adj, a.cols()).norm;
}

double hermiticity_residual(const Matrix& a) {
  return spectral_norm(a - a.adjoint());
}

HermitianRoot hermitian_root(const Matrix& p, double rel_cutoff) {
  if (p.rows() != p.cols()) throw error(errc::dimension_mismatch, "hermitian_root: non-square input");
  HermitianRoot r;
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  r.evals = es.eigenvalues();
  r.evecs = es.eigenvectors();
  const double top = r.evals.size() ? r.evals.cwiseAbs().maxCoeff() : 0.0;
  r.cutoff = rel_cutoff * top;
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(r.evals.size());
  Eigen::VectorXd isq = Eigen::VectorXd::Zero(r.evals.size());
  r.rank = 0;
  for (Eigen::Index k = 0; k < r.evals.size(); ++k) {
    const double lam = r.evals(k);
    if (lam > r.cutoff) {
      sq(k) = std::sqrt(lam);
      isq(k) = 1.0 / sq(k);
      ++r.rank;
    }
  }
  r.sqrt = r.evecs * sq.asDiagonal() * r.evecs.adjoint();
  r.pinv_sqrt = r.evecs * isq.asDiagonal() * r.evecs.adjoint();
  return r;
}

namespace {

template <typename T>
T pairwise_impl(std::vector<T>&& terms, bool parallel) {
  if (terms.empty()) throw error(errc::invalid_argument, "pairwise_sum: empty term list");
  std::size_t n = terms.size();
  while (n > 1) {
    const std::size_t half = n / 2;
#pragma omp parallel for schedule(static) if (parallel && half > 1)
    for (long long i = 0; i < static_cast<long long>(half); ++i)
      terms[static_cast<std::size_t>(i)] =
          terms[2 * static_cast<std::size_t>(i)] + terms[2 * static_cast<std::size_t>(i) + 1];
    if (n % 2 == 1) terms[half] = terms[n - 1];
    n = half + n % 2;
  }
  return terms[0];
}

}  // namespace

Matrix pairwise_sum_serial(std::vector<Matrix> terms) { return pairwise_impl(std::move(terms), false); }
Matrix pairwise_sum(std::vector<Matrix> terms) { return pairwise_impl(std::move(terms), true); }
cxd pairwise_sum_serial(std::vector<cxd> terms) { return pairwise_impl(std::move(terms), false); }
cxd pairwise_sum(std::vector<cxd> terms) { return pairwise_impl(std::move(terms), true); }

PowerNorm power_norm(const std::function<Vector(const Vector&)>& apply,
                     const std::function<Vector(const Vector&)>& apply_adjoint,
                     Eigen::Index dim, std::uint64_t seed, double tol, int max_iter) {
  PowerNorm out;
  if (dim == 0) return out;
  RandomStream rs(seed);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rs.cgaussian();
  v.normalize();
  double est = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Vector w = apply(v);
    v = apply_adjoint(w);
    const double nv = v.norm();  // ‖A†A v‖ with ‖v‖ = 1, climbs to λmax(A†A)
    if (nv == 0.0) {
      out.norm = 0.0;
      out.iterations = it;
      out.converged = true;
      return out;
    }
    const double next = nv;
    v /= nv;
    out.last_delta = std::abs(next - est);
    est = next;
    out.iterations = it;
    if (it > 2 && out.last_delta <= tol * std::max(1.0, est)) {
      out.converged = true;
      break;
    }
  }
  out.norm = std::sqrt(std::max(0.0, est));
  return out;
}

}  // namespace coxfock::linalg
