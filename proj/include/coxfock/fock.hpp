#pragma once

#include <map>
#include <optional>
#include <vector>

#include "coxfock/certificate.hpp"
#include "coxfock/linalg.hpp"
#include "coxfock/qmap.hpp"

namespace coxfock::fock {

using qmap::Tolerances;

// Hermitian deformation coefficients q_ij with |q_ij| <= 1.
struct QSpec {
  int d = 0;
  Matrix q;

  void validate() const;           // throws on violated invariants
  double bound() const;            // max |q_ij|
  double diag(int i) const;        // q_ii (real by Hermitian symmetry)
};

// Self-adjoint contraction T on H (x) H subject to the braid relation,
// stored as the d^2 x d^2 matrix with T e_a (x) e_b = sum t^{dc}_{ab} e_d (x) e_c.
// Index layout is row-major with the first tensor factor major.
struct DeformationTensor {
  int d = 0;
  Matrix t;
  double norm_bound = 0.0;  // ‖T‖

  static DeformationTensor from_q(const QSpec& spec);  // T = Q ∘ swap
  static DeformationTensor from_matrix(int d, Matrix t);

  cxd coeff(int dd, int c, int a, int b) const {  // t^{dc}_{ab}
    return t(static_cast<Eigen::Index>(dd) * d + c, static_cast<Eigen::Index>(a) * d + b);
  }
  // max |t^{dc}_{ab} - t^{cb}_{da}|; zero iff the vacuum expectation is tracial
  double traciality_residual() const;
};

// hermiticity, contraction, and braid-relation certificates
std::vector<Certificate> validate(const DeformationTensor& tensor);

// T_i = 1^(i-1) (x) T (x) 1^(n-i-1) on H^(x)n, slots numbered 1..n-1
Matrix amplify(const DeformationTensor& tensor, int i, int n);

// R^(n) = 1 + T_1 + T_1 T_2 + ... + T_1...T_{n-1} on H^(x)n
Matrix build_rn(const DeformationTensor& tensor, int n);

// The braid family {T_i} on H^(x)n for the symmetric group S_n.
qmap::OperatorFamily braid_family(const DeformationTensor& tensor, int n);

constexpr int kDirectLevelCap = 9;       // n! terms; keeps the direct sum desk-scale
constexpr Eigen::Index kLevelDimCap = 4096;

// P^(n) = sum over S_n of phi(sigma), evaluated as the literal factorial sum.
// This is the data-parallel kernel; the serial variant is bit-identical.
Matrix build_pn(const DeformationTensor& tensor, int n);
Matrix build_pn_serial(const DeformationTensor& tensor, int n);

constexpr std::size_t kSceneDimBudget = 200000;  // sum of level dimensions

struct FockLevel {
  Eigen::Index dim = 0;
  Matrix gram;             // P^(n)
  Matrix r;                // R^(n)
  linalg::HermitianRoot root;  // kernel-aware square roots of the Gram
};

// Truncated deformed Fock space: levels 0..cap with per-level Gram blocks.
// Grams are produced by the coset recursion P^(n+1) = (1 (x) P^(n)) R^(n+1);
// quotient data (range basis, roots) comes from the eigendecomposition with
// kernel cutoff 1e-10 * ‖P^(n)‖.
struct FockScene {
  DeformationTensor tensor;
  int cap = 0;
  std::vector<FockLevel> levels;  // size cap + 1
  std::optional<QSpec> origin;    // set when built from a QSpec
  Eigen::Index total_dim = 0;

  Eigen::Index level_dim(int n) const { return levels[static_cast<std::size_t>(n)].dim; }
  bool has_kernel() const;
};

FockScene build_scene(const DeformationTensor& tensor, int cap);
FockScene build_scene(const QSpec& spec, int cap);

// Block operator between neighbouring (or equal) levels of a scene.  Blocks
// are stored per (shift, source level); compositions drop contributions that
// leave the truncated level range, matching compression semantics.
class FockOperator {
 public:
  FockOperator() = default;
  explicit FockOperator(std::vector<Eigen::Index> level_dims);
  static FockOperator identity(const std::vector<Eigen::Index>& level_dims);

  int num_levels() const { return static_cast<int>(dims_.size()); }
  const std::vector<Eigen::Index>& level_dims() const { return dims_; }

  void set_block(int level, int shift, Matrix block);
  const Matrix* find_block(int level, int shift) const;
  Matrix block_or_zero(int level, int shift) const;

  FockOperator operator*(const FockOperator& rhs) const;
  FockOperator operator+(const FockOperator& rhs) const;
  FockOperator operator-(const FockOperator& rhs) const;
  FockOperator scaled(cxd factor) const;
  FockOperator adjoint() const;                     // plain blockwise dagger
  FockOperator restricted(int max_level) const;     // compression to levels <= max_level

  // vectors stored per level
  std::vector<Vector> apply(const std::vector<Vector>& in) const;
  Matrix dense() const;

 private:
  std::vector<Eigen::Index> dims_;
  std::map<int, std::vector<Matrix>> blocks_;  // shift -> per-source-level (empty = zero)
};

std::vector<Eigen::Index> level_dims(const FockScene& scene);
std::vector<Vector> vacuum(const FockScene& scene);

FockOperator creation(const FockScene& scene, const Vector& f);
FockOperator annihilation(const FockScene& scene, const Vector& f);
FockOperator position(const FockScene& scene, int i);  // G_i = d_i + d_i^*
FockOperator r_operator(const FockScene& scene);       // block-diagonal R^(n)

// Operator norm in the deformed geometry: ‖S X S^+‖ with S the block-diagonal
// Gram square root and S^+ its pseudo-inverse (quotient coordinates when the
// Gram has kernel).
double t_norm(const FockScene& scene, const FockOperator& x);
// Same, with the input compressed to levels <= max_level.
double t_norm(const FockScene& scene, const FockOperator& x, int max_level);

Certificate adjointness_residual(const FockScene& scene, const Vector& f, const Tolerances& tol = {});
Certificate relation_residual(const FockScene& scene, int i, int j, const Tolerances& tol = {});
Certificate gram_recursion_certificate(const FockScene& scene, const Tolerances& tol = {});
Certificate sum_rule_certificate(const FockScene& scene, const Tolerances& tol = {});
Certificate domination_certificate(const FockScene& scene, const Tolerances& tol = {});
std::vector<Certificate> gram_psd_certificates(const FockScene& scene, const Tolerances& tol = {});

// Truncated norms of the annihilators d_i against the closed-form bounds
// 1/sqrt(1-q_ii) (q_ii >= 0) resp. 1 (q_ii < 0), plus cap monotonicity.
std::vector<Certificate> norm_suite(const FockScene& scene, const Tolerances& tol = {});

// Commutation of left operators with the reversal-conjugated right operators
// on levels <= cap-2.  Requires a tracial tensor.
Certificate right_commutant_check(const FockScene& scene, double tol = 1e-9);

}  // namespace coxfock::fock
