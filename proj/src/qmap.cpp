#include "coxfock/qmap.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace coxfock::qmap {

namespace {

std::string genset_str(GenSet j, int rank) {
  std::string out = "{";
  bool first = true;
  for (int s = 0; s < rank; ++s)
    if (j & (GenSet{1} << s)) {
      if (!first) out += ",";
      out += std::to_string(s + 1);
      first = false;
    }
  return out + "}";
}

void check_family(const CoxeterSystem& sys, const OperatorFamily& fam) {
  if (fam.cox != sys.matrix())
    throw error(errc::invalid_argument, "operator family built for a different Coxeter matrix");
  if (fam.ops.size() != static_cast<std::size_t>(fam.cox.n))
    throw error(errc::dimension_mismatch, "operator family size does not match generator count");
  for (const auto& t : fam.ops)
    if (t.rows() != fam.dim || t.cols() != fam.dim)
      throw error(errc::dimension_mismatch, "operator family has inconsistent dimensions");
}

}  // namespace

double OperatorFamily::max_norm() const {
  double m = 0.0;
  for (const auto& t : ops) m = std::max(m, linalg::spectral_norm(t));
  return m;
}

std::vector<Certificate> validate_family(const OperatorFamily& fam) {
  if (fam.ops.size() != static_cast<std::size_t>(fam.cox.n))
    throw error(errc::dimension_mismatch, "operator count does not match generator count");
  for (const auto& t : fam.ops)
    if (t.rows() != fam.dim || t.cols() != fam.dim)
      throw error(errc::dimension_mismatch, "operator family has inconsistent dimensions");

  const double norm = fam.max_norm();
  const double tol = 1e-9 * (1.0 + norm);
  std::vector<Certificate> certs;
  const int n = fam.cox.n;
  for (int i = 0; i < n; ++i) {
    certs.push_back(residual_cert("family/hermitian T" + std::to_string(i + 1),
                                  linalg::hermiticity_residual(fam.ops[static_cast<std::size_t>(i)]), tol));
    const double ni = linalg::spectral_norm(fam.ops[static_cast<std::size_t>(i)]);
    certs.push_back(residual_cert("family/contraction T" + std::to_string(i + 1), ni, 1.0 + tol));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int m = fam.cox.order(i, j);
      Matrix lhs = Matrix::Identity(fam.dim, fam.dim);
      Matrix rhs = lhs;
      for (int k = 0; k < m; ++k) {
        lhs = lhs * fam.ops[static_cast<std::size_t>(k % 2 == 0 ? i : j)];
        rhs = rhs * fam.ops[static_cast<std::size_t>(k % 2 == 0 ? j : i)];
      }
      certs.push_back(residual_cert(
          "family/braid (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") m=" + std::to_string(m),
          linalg::spectral_norm(lhs - rhs), tol));
    }
  return certs;
}

Matrix phi(const CoxeterSystem& sys, const OperatorFamily& fam, std::uint32_t a) {
  check_family(sys, fam);
  Matrix out = Matrix::Identity(fam.dim, fam.dim);
  for (int s : sys.element(a).canonical_word) out = out * fam.ops[static_cast<std::size_t>(s)];
  return out;
}

std::vector<Matrix> phi_table(const CoxeterSystem& sys, const OperatorFamily& fam) {
  check_family(sys, fam);
  std::vector<Matrix> table(sys.order());
  table[0] = Matrix::Identity(fam.dim, fam.dim);
  for (std::uint32_t a = 1; a < sys.order(); ++a) {
    const int last = sys.element(a).canonical_word.back();
    const std::uint32_t parent = sys.right(a, last);
    table[a] = table[parent] * fam.ops[static_cast<std::size_t>(last)];
  }
  return table;
}

namespace {

Matrix p_of_impl(const CoxeterSystem& sys, const OperatorFamily& fam,
                 std::span<const std::uint32_t> ids, bool parallel) {
  check_family(sys, fam);
  if (ids.empty()) return Matrix::Zero(fam.dim, fam.dim);
  std::vector<Matrix> terms(ids.size());
#pragma omp parallel for schedule(static) if (parallel && ids.size() > 1)
  for (long long k = 0; k < static_cast<long long>(ids.size()); ++k) {
    Matrix t = Matrix::Identity(fam.dim, fam.dim);
    for (int s : sys.element(ids[static_cast<std::size_t>(k)]).canonical_word)
      t = t * fam.ops[static_cast<std::size_t>(s)];
    terms[static_cast<std::size_t>(k)] = std::move(t);
  }
  return parallel ? linalg::pairwise_sum(std::move(terms))
                  : linalg::pairwise_sum_serial(std::move(terms));
}

std::vector<std::uint32_t> all_ids(const CoxeterSystem& sys) {
  std::vector<std::uint32_t> ids(sys.order());
  std::iota(ids.begin(), ids.end(), 0u);
  return ids;
}

}  // namespace

Matrix p_of(const CoxeterSystem& sys, const OperatorFamily& fam, std::span<const std::uint32_t> ids) {
  return p_of_impl(sys, fam, ids, true);
}

Matrix p_of_serial(const CoxeterSystem& sys, const OperatorFamily& fam,
                   std::span<const std::uint32_t> ids) {
  return p_of_impl(sys, fam, ids, false);
}

Matrix p_of(const CoxeterSystem& sys, const OperatorFamily& fam) {
  const auto ids = all_ids(sys);
  return p_of(sys, fam, ids);
}

Certificate factorization_check(const CoxeterSystem& sys, const OperatorFamily& fam, GenSet j,
                                const Tolerances& tol) {
  const Matrix pw = p_of(sys, fam);
  const auto dj = sys.coset_minima(j);
  const Matrix pdj = p_of(sys, fam, dj);
  const auto par = sys.parabolic(j);
  const Matrix pwj = p_of(sys, fam, par.to_parent);
  const double res = linalg::spectral_norm(pw - pdj * pwj);
  return residual_cert("qmap/coset_factorization J=" + genset_str(j, sys.rank()), res, tol.residual,
                       "|D_J|=" + std::to_string(dj.size()) + " |W_J|=" + std::to_string(par.to_parent.size()));
}

Certificate alternating_sum_check(const CoxeterSystem& sys, const OperatorFamily& fam,
                                  const Tolerances& tol) {
  check_family(sys, fam);
  Matrix acc = Matrix::Zero(fam.dim, fam.dim);
  const GenSet full = sys.full_set();
  for (GenSet j = 0;; ++j) {
    const auto dj = sys.coset_minima(j);
    const Matrix pdj = p_of(sys, fam, dj);
    acc += (popcount(j) % 2 == 0) ? pdj : Matrix(-pdj);
    if (j == full) break;
  }
  const Matrix target = phi(sys, fam, sys.longest());
  return residual_cert("qmap/alternating_coset_sum", linalg::spectral_norm(acc - target), tol.residual,
                       "subsets=" + std::to_string((std::size_t{1} << sys.rank())));
}

Certificate positivity_certificate(const Matrix& p, const Tolerances& tol,
                                   std::optional<double> family_max_norm) {
  const double herm = linalg::hermiticity_residual(p);
  const double scale = linalg::spectral_norm(p);
  if (herm > 1e-9 * (1.0 + scale))
    throw error(errc::invalid_argument, "positivity certificate requires a Hermitian input");
  const double m0 = linalg::min_hermitian_eig(p);
  const double threshold = -tol.psd * std::max(1.0, scale);
  std::ostringstream ctx;
  ctx << "dim=" << p.rows();
  if (family_max_norm) {
    const bool strict = m0 > tol.psd && *family_max_norm < 1.0;
    ctx << " strict=" << (strict ? "yes" : "no");
  }
  return min_eig_cert("qmap/positivity", m0, threshold, ctx.str());
}

Matrix cp_gram_matrix(const CoxeterSystem& sys, Eigen::Index dim,
                      const std::function<const Matrix&(std::uint32_t)>& phi_of) {
  const std::size_t order = sys.order();
  const std::size_t rows = order * static_cast<std::size_t>(dim);
  if (rows > kCpGramRowBudget)
    throw error(errc::budget_exceeded, "block Gram matrix would exceed " +
                                           std::to_string(kCpGramRowBudget) + " rows");
  std::vector<std::uint32_t> inv(order);
  for (std::uint32_t r = 0; r < order; ++r) inv[r] = sys.invert(r);

  Matrix g(rows, rows);
#pragma omp parallel for schedule(static)
  for (long long r = 0; r < static_cast<long long>(order); ++r)
    for (std::uint32_t c = 0; c < order; ++c) {
      const std::uint32_t x = sys.multiply(inv[static_cast<std::size_t>(r)], c);
      g.block(r * dim, static_cast<Eigen::Index>(c) * dim, dim, dim) = phi_of(x);
    }
  return g;
}

Certificate cp_gram_certificate(const CoxeterSystem& sys, const OperatorFamily& fam,
                                const Tolerances& tol) {
  const auto table = phi_table(sys, fam);
  const Matrix g = cp_gram_matrix(sys, fam.dim,
                                  [&table](std::uint32_t x) -> const Matrix& { return table[x]; });
  const Matrix h = 0.5 * (g + g.adjoint());
  const double m0 = linalg::min_hermitian_eig(h);
  const double scale = std::max(std::abs(m0), linalg::max_hermitian_eig(h));
  return min_eig_cert("qmap/cp_gram", m0, -tol.psd * std::max(1.0, scale),
                      "rows=" + std::to_string(h.rows()));
}

std::vector<Certificate> validate_blocklength_family(const OperatorFamily& fam) {
  std::vector<Certificate> certs;
  const double tol = 1e-9 * (1.0 + fam.max_norm());
  for (std::size_t i = 0; i < fam.ops.size(); ++i) {
    const Matrix& t = fam.ops[i];
    certs.push_back(residual_cert("blocklength/hermitian T" + std::to_string(i + 1),
                                  linalg::hermiticity_residual(t), tol));
    const Matrix h = 0.5 * (t + t.adjoint());
    certs.push_back(min_eig_cert("blocklength/nonnegative T" + std::to_string(i + 1),
                                 linalg::min_hermitian_eig(h), -tol));
    certs.push_back(residual_cert("blocklength/below_identity T" + std::to_string(i + 1),
                                  linalg::max_hermitian_eig(h), 1.0 + tol));
  }
  for (std::size_t i = 0; i < fam.ops.size(); ++i)
    for (std::size_t j = i + 1; j < fam.ops.size(); ++j)
      certs.push_back(residual_cert(
          "blocklength/commutator (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
          linalg::spectral_norm(fam.ops[i] * fam.ops[j] - fam.ops[j] * fam.ops[i]), tol));
  return certs;
}

Matrix blocklength_phi(const CoxeterSystem& sys, const OperatorFamily& fam, std::uint32_t a) {
  check_family(sys, fam);
  Matrix out = Matrix::Identity(fam.dim, fam.dim);
  const GenSet b = sys.block_set(a);
  for (int s = 0; s < sys.rank(); ++s)
    if (b & (GenSet{1} << s)) out = out * fam.ops[static_cast<std::size_t>(s)];
  return out;
}

Certificate blocklength_cp(const CoxeterSystem& sys, const OperatorFamily& fam,
                           const Tolerances& tol) {
  if (!all_pass(validate_blocklength_family(fam)))
    throw error(errc::validation_error,
                "block-length map needs a commuting family with 0 <= T_i <= 1");
  std::vector<Matrix> table(sys.order());
  for (std::uint32_t a = 0; a < sys.order(); ++a) table[a] = blocklength_phi(sys, fam, a);
  const Matrix g = cp_gram_matrix(sys, fam.dim,
                                  [&table](std::uint32_t x) -> const Matrix& { return table[x]; });
  const Matrix h = 0.5 * (g + g.adjoint());
  const double m0 = linalg::min_hermitian_eig(h);
  const double scale = std::max(std::abs(m0), linalg::max_hermitian_eig(h));
  return min_eig_cert("qmap/blocklength_gram", m0, -tol.psd * std::max(1.0, scale),
                      "rows=" + std::to_string(h.rows()));
}

Matrix blocklength_kernel(const CoxeterSystem& sys, double q) {
  const std::size_t order = sys.order();
  std::vector<std::uint32_t> inv(order);
  for (std::uint32_t r = 0; r < order; ++r) inv[r] = sys.invert(r);
  Matrix k(order, order);
  for (std::uint32_t r = 0; r < order; ++r)
    for (std::uint32_t c = 0; c < order; ++c) {
      const int b = sys.block_length(sys.multiply(inv[r], c));
      k(r, c) = (b == 0) ? 1.0 : std::pow(q, b);
    }
  return k;
}

BlocklengthThreshold blocklength_threshold(const CoxeterSystem& sys, double bisect_tol,
                                           const Tolerances& tol) {
  auto passes = [&](double q) {
    const Matrix k = blocklength_kernel(sys, q);
    const double m0 = linalg::min_hermitian_eig(k);
    const double scale = std::max(std::abs(m0), linalg::max_hermitian_eig(k));
    return m0 >= -tol.psd * std::max(1.0, scale);
  };
  BlocklengthThreshold out;
  double lo = 0.0;  // passes by Schoenberg-type positivity at q >= 0
  double hi = std::numeric_limits<double>::quiet_NaN();
  for (double q = -0.05; q >= -1.0 - 1e-12; q -= 0.05) {
    if (!passes(q)) {
      hi = q;
      break;
    }
    lo = q;
  }
  if (std::isnan(hi)) return out;  // PSD on the whole of [-1, 0]
  while (lo - hi > bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (passes(mid)) lo = mid;
    else hi = mid;
  }
  out.alpha = lo;
  out.q_fail = hi;
  out.found = true;
  return out;
}

}  // namespace coxfock::qmap
