#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "coxfock/certificate.hpp"
#include "coxfock/coxeter.hpp"
#include "coxfock/linalg.hpp"

namespace coxfock::qmap {

using coxeter::CoxeterMatrix;
using coxeter::CoxeterSystem;
using coxeter::GenSet;

struct Tolerances {
  double residual = 1e-10;  // identity residual certificates
  double psd = 1e-8;        // scaled threshold for smallest eigenvalues
};

// Hermitian contractions T_i indexed by the generators of a Coxeter matrix,
// subject to the generalized braid relations.  These data determine the
// quasi-multiplicative map phi(s_{i(1)}...s_{i(k)}) = T_{i(1)}...T_{i(k)}.
struct OperatorFamily {
  Eigen::Index dim = 0;
  std::vector<Matrix> ops;
  CoxeterMatrix cox;

  double max_norm() const;
};

// One certificate per condition: hermiticity and contractivity per generator,
// braid relation per generator pair.  Validation tolerance 1e-9 * (1 + max norm).
std::vector<Certificate> validate_family(const OperatorFamily& fam);

Matrix phi(const CoxeterSystem& sys, const OperatorFamily& fam, std::uint32_t a);

// phi for every element, computed along canonical words (phi(x) = phi(x s) T_s).
std::vector<Matrix> phi_table(const CoxeterSystem& sys, const OperatorFamily& fam);

// P(A) = sum of phi over the given ids, reduced with a fixed pairwise tree in
// the order of the span.  The OpenMP variant is bit-identical to the serial one.
Matrix p_of(const CoxeterSystem& sys, const OperatorFamily& fam, std::span<const std::uint32_t> ids);
Matrix p_of_serial(const CoxeterSystem& sys, const OperatorFamily& fam,
                   std::span<const std::uint32_t> ids);
Matrix p_of(const CoxeterSystem& sys, const OperatorFamily& fam);  // full group

// ‖P(W) - P(D_J) P(W_J)‖
Certificate factorization_check(const CoxeterSystem& sys, const OperatorFamily& fam, GenSet j,
                                const Tolerances& tol = {});

// ‖sum_J (-1)^|J| P(D_J) - phi(longest)‖ over all generator subsets
Certificate alternating_sum_check(const CoxeterSystem& sys, const OperatorFamily& fam,
                                  const Tolerances& tol = {});

// Smallest eigenvalue of a Hermitian operator; passes when it clears
// -psd_tol * max(1, ‖P‖).  `family_max_norm`, when given and < 1, marks the
// certificate as a strict-positivity statement.
Certificate positivity_certificate(const Matrix& p, const Tolerances& tol = {},
                                   std::optional<double> family_max_norm = {});

constexpr std::size_t kCpGramRowBudget = 12000;

// Block Gram matrix with (rho, sigma) block phi(rho^{-1} sigma).
Matrix cp_gram_matrix(const CoxeterSystem& sys, Eigen::Index dim,
                      const std::function<const Matrix&(std::uint32_t)>& phi_of);
Certificate cp_gram_certificate(const CoxeterSystem& sys, const OperatorFamily& fam,
                                const Tolerances& tol = {});

// Block-length variant: commuting family with 0 <= T_i <= 1,
// phi(sigma) = product of T_i over the generators appearing in sigma.
std::vector<Certificate> validate_blocklength_family(const OperatorFamily& fam);
Matrix blocklength_phi(const CoxeterSystem& sys, const OperatorFamily& fam, std::uint32_t a);
Certificate blocklength_cp(const CoxeterSystem& sys, const OperatorFamily& fam,
                           const Tolerances& tol = {});

// Scalar kernel q^{blocklength(rho^{-1} sigma)} on the whole group.
Matrix blocklength_kernel(const CoxeterSystem& sys, double q);

// Numerically locates the negative threshold below which the scalar
// block-length kernel stops being PSD.  Returns the estimated boundary and a
// witness q that fails; witness is NaN when no failure occurs down to -1.
struct BlocklengthThreshold {
  double alpha = -1.0;
  double q_fail = std::numeric_limits<double>::quiet_NaN();
  bool found = false;
};
BlocklengthThreshold blocklength_threshold(const CoxeterSystem& sys, double bisect_tol = 1e-4,
                                           const Tolerances& tol = {});

}  // namespace coxfock::qmap
