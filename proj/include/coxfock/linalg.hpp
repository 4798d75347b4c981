#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace coxfock {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace linalg {

Matrix kron(const Matrix& a, const Matrix& b);

// Largest singular value.  Dense matrices are handled through a Hermitian
// eigensolve of the smaller Gram factor; anything above `dense_limit` rows
// and columns falls back to power iteration with a seeded start vector.
double spectral_norm(const Matrix& a);

double min_hermitian_eig(const Matrix& a);
double max_hermitian_eig(const Matrix& a);

// ‖A − A†‖ in the spectral norm.
double hermiticity_residual(const Matrix& a);

// Square root and pseudo-inverse square root of a numerically PSD Hermitian
// matrix.  Eigenvalues below `rel_cutoff * max|eig|` count as kernel; negative
// round-off eigenvalues are clipped to zero before taking roots.
struct HermitianRoot {
  Matrix sqrt;
  Matrix pinv_sqrt;
  Eigen::VectorXd evals;  // ascending
  Matrix evecs;
  Eigen::Index rank = 0;
  double cutoff = 0.0;
};
HermitianRoot hermitian_root(const Matrix& p, double rel_cutoff = 1e-10);

// Fixed pairwise reduction tree: adjacent terms are combined level by level,
// so the result is independent of the execution schedule.  The parallel
// variant distributes each tree level over OpenMP threads and is bit-identical
// to the serial one.
Matrix pairwise_sum_serial(std::vector<Matrix> terms);
Matrix pairwise_sum(std::vector<Matrix> terms);
cxd pairwise_sum_serial(std::vector<cxd> terms);
cxd pairwise_sum(std::vector<cxd> terms);

struct PowerNorm {
  double norm = 0.0;
  int iterations = 0;
  double last_delta = 0.0;
  bool converged = false;
};

// Power iteration for ‖A‖ given matvec callbacks for A and A†.
PowerNorm power_norm(const std::function<Vector(const Vector&)>& apply,
                     const std::function<Vector(const Vector&)>& apply_adjoint,
                     Eigen::Index dim, std::uint64_t seed = 12345,
                     double tol = 1e-10, int max_iter = 20000);

}  // namespace linalg
}  // namespace coxfock
