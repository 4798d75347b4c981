#include "coxfock/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace coxfock::fock {

void QSpec::validate() const {
  if (d < 1) throw error(errc::validation_error, "q spec needs dimension d >= 1");
  if (q.rows() != d || q.cols() != d)
    throw error(errc::validation_error, "q matrix shape does not match d");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (q(i, j) != std::conj(q(j, i)))
        throw error(errc::validation_error,
                    "q violates Hermitian symmetry: q[" + std::to_string(i + 1) + "][" +
                        std::to_string(j + 1) + "] != conj(q[" + std::to_string(j + 1) + "][" +
                        std::to_string(i + 1) + "])");
  if (bound() > 1.0)
    throw error(errc::validation_error, "q violates the contraction bound max|q_ij| <= 1");
}

double QSpec::bound() const { return q.size() ? q.cwiseAbs().maxCoeff() : 0.0; }

double QSpec::diag(int i) const { return q(i, i).real(); }

DeformationTensor DeformationTensor::from_q(const QSpec& spec) {
  spec.validate();
  const int d = spec.d;
  DeformationTensor out;
  out.d = d;
  out.t = Matrix::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  // T e_a (x) e_b = q_ba e_b (x) e_a, i.e. t^{dc}_{ab} = q_ba delta_bd delta_ca
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      out.t(static_cast<Eigen::Index>(b) * d + a, static_cast<Eigen::Index>(a) * d + b) = spec.q(b, a);
  out.norm_bound = spec.bound();
  return out;
}

DeformationTensor DeformationTensor::from_matrix(int d, Matrix t) {
  if (d < 1) throw error(errc::validation_error, "tensor needs dimension d >= 1");
  if (t.rows() != static_cast<Eigen::Index>(d) * d || t.cols() != t.rows())
    throw error(errc::dimension_mismatch, "deformation tensor must be a square d^2 x d^2 matrix");
  DeformationTensor out;
  out.d = d;
  out.t = std::move(t);
  out.norm_bound = linalg::spectral_norm(out.t);
  return out;
}

double DeformationTensor::traciality_residual() const {
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int dd = 0; dd < d; ++dd)
          worst = std::max(worst, std::abs(coeff(dd, c, a, b) - coeff(c, b, dd, a)));
  return worst;
}

std::vector<Certificate> validate(const DeformationTensor& tensor) {
  const double tol = 1e-9 * (1.0 + tensor.norm_bound);
  std::vector<Certificate> certs;
  certs.push_back(residual_cert("tensor/hermitian", linalg::hermiticity_residual(tensor.t), tol));
  certs.push_back(residual_cert("tensor/contraction", tensor.norm_bound, 1.0 + tol));
  const Eigen::Index d = tensor.d;
  const Matrix id = Matrix::Identity(d, d);
  const Matrix t1 = linalg::kron(tensor.t, id);   // T (x) 1 on H^(x)3
  const Matrix t2 = linalg::kron(id, tensor.t);   // 1 (x) T
  certs.push_back(residual_cert("tensor/braid",
                                linalg::spectral_norm(t2 * t1 * t2 - t1 * t2 * t1), tol));
  return certs;
}

namespace {

Eigen::Index pow_dim(int d, int n) {
  double dims = std::pow(static_cast<double>(d), n);
  if (dims > static_cast<double>(kSceneDimBudget) * 64)
    throw error(errc::budget_exceeded, "tensor power dimension overflow");
  Eigen::Index out = 1;
  for (int k = 0; k < n; ++k) out *= d;
  return out;
}

}  // namespace

Matrix amplify(const DeformationTensor& tensor, int i, int n) {
  if (n < 2 || i < 1 || i > n - 1)
    throw error(errc::invalid_argument, "amplify slot must satisfy 1 <= i <= n-1");
  const Eigen::Index left = pow_dim(tensor.d, i - 1);
  const Eigen::Index right = pow_dim(tensor.d, n - i - 1);
  return linalg::kron(linalg::kron(Matrix::Identity(left, left), tensor.t),
                      Matrix::Identity(right, right));
}

Matrix build_rn(const DeformationTensor& tensor, int n) {
  if (n < 0) throw error(errc::invalid_argument, "negative level");
  const Eigen::Index dim = pow_dim(tensor.d, n);
  Matrix r = Matrix::Identity(dim, dim);
  Matrix prod = Matrix::Identity(dim, dim);
  for (int k = 1; k <= n - 1; ++k) {
    prod = prod * amplify(tensor, k, n);
    r += prod;
  }
  return r;
}

qmap::OperatorFamily braid_family(const DeformationTensor& tensor, int n) {
  if (n < 1) throw error(errc::invalid_argument, "braid family needs n >= 1 tensor factors");
  qmap::OperatorFamily fam;
  fam.cox = coxeter::CoxeterMatrix::type_a(n - 1);
  fam.dim = pow_dim(tensor.d, n);
  for (int i = 1; i <= n - 1; ++i) fam.ops.push_back(amplify(tensor, i, n));
  return fam;
}

namespace {

Matrix build_pn_impl(const DeformationTensor& tensor, int n, bool parallel) {
  if (n < 0) throw error(errc::invalid_argument, "negative level");
  if (n > kDirectLevelCap)
    throw error(errc::budget_exceeded, "direct factorial sum capped at level " +
                                           std::to_string(kDirectLevelCap));
  const Eigen::Index dim = pow_dim(tensor.d, n);
  if (dim > kLevelDimCap) throw error(errc::budget_exceeded, "level dimension beyond budget");
  if (n <= 1) return Matrix::Identity(dim, dim);
  const auto sys = coxeter::CoxeterSystem::build(coxeter::CoxeterMatrix::type_a(n - 1));
  const auto fam = braid_family(tensor, n);
  std::vector<std::uint32_t> ids(sys.order());
  std::iota(ids.begin(), ids.end(), 0u);
  return parallel ? qmap::p_of(sys, fam, ids) : qmap::p_of_serial(sys, fam, ids);
}

}  // namespace

Matrix build_pn(const DeformationTensor& tensor, int n) { return build_pn_impl(tensor, n, true); }
Matrix build_pn_serial(const DeformationTensor& tensor, int n) { return build_pn_impl(tensor, n, false); }

bool FockScene::has_kernel() const {
  for (const auto& lvl : levels)
    if (lvl.root.rank != lvl.dim) return true;
  return false;
}

FockScene build_scene(const DeformationTensor& tensor, int cap) {
  if (cap < 0) throw error(errc::invalid_argument, "negative level cap");
  std::size_t total = 0;
  {
    double dims = 0.0;
    for (int n = 0; n <= cap; ++n) dims += std::pow(static_cast<double>(tensor.d), n);
    if (dims > static_cast<double>(kSceneDimBudget))
      throw error(errc::budget_exceeded, "scene levels exceed the total dimension budget");
  }

  FockScene scene;
  scene.tensor = tensor;
  scene.cap = cap;
  scene.levels.resize(static_cast<std::size_t>(cap) + 1);
  const Eigen::Index d = tensor.d;
  for (int n = 0; n <= cap; ++n) {
    auto& lvl = scene.levels[static_cast<std::size_t>(n)];
    lvl.dim = pow_dim(tensor.d, n);
    lvl.r = build_rn(tensor, n);
    if (n <= 1) {
      lvl.gram = Matrix::Identity(lvl.dim, lvl.dim);
    } else {
      const Matrix& prev = scene.levels[static_cast<std::size_t>(n - 1)].gram;
      Matrix p = linalg::kron(Matrix::Identity(d, d), prev) * lvl.r;
      lvl.gram = 0.5 * (p + p.adjoint());
    }
    lvl.root = linalg::hermitian_root(lvl.gram);
    total += static_cast<std::size_t>(lvl.dim);
  }
  scene.total_dim = static_cast<Eigen::Index>(total);
  return scene;
}

FockScene build_scene(const QSpec& spec, int cap) {
  FockScene scene = build_scene(DeformationTensor::from_q(spec), cap);
  scene.origin = spec;
  return scene;
}

// --------------------------------------------------------------------------
// FockOperator
// --------------------------------------------------------------------------

FockOperator::FockOperator(std::vector<Eigen::Index> dims) : dims_(std::move(dims)) {}

FockOperator FockOperator::identity(const std::vector<Eigen::Index>& dims) {
  FockOperator out(dims);
  for (int n = 0; n < out.num_levels(); ++n)
    out.set_block(n, 0, Matrix::Identity(dims[static_cast<std::size_t>(n)], dims[static_cast<std::size_t>(n)]));
  return out;
}

void FockOperator::set_block(int level, int shift, Matrix block) {
  const int target = level + shift;
  if (level < 0 || level >= num_levels() || target < 0 || target >= num_levels())
    throw error(errc::invalid_argument, "operator block outside the level range");
  if (block.rows() != dims_[static_cast<std::size_t>(target)] ||
      block.cols() != dims_[static_cast<std::size_t>(level)])
    throw error(errc::dimension_mismatch, "operator block shape does not match level dimensions");
  auto& row = blocks_[shift];
  row.resize(static_cast<std::size_t>(num_levels()));
  row[static_cast<std::size_t>(level)] = std::move(block);
}

const Matrix* FockOperator::find_block(int level, int shift) const {
  auto it = blocks_.find(shift);
  if (it == blocks_.end()) return nullptr;
  if (level < 0 || level >= num_levels()) return nullptr;
  const Matrix& b = it->second[static_cast<std::size_t>(level)];
  return b.size() ? &b : nullptr;
}

Matrix FockOperator::block_or_zero(int level, int shift) const {
  if (const Matrix* b = find_block(level, shift)) return *b;
  const int target = std::clamp(level + shift, 0, num_levels() - 1);
  return Matrix::Zero(dims_[static_cast<std::size_t>(target)], dims_[static_cast<std::size_t>(level)]);
}

FockOperator FockOperator::operator*(const FockOperator& rhs) const {
  if (dims_ != rhs.dims_) throw error(errc::dimension_mismatch, "operator level dimensions differ");
  FockOperator out(dims_);
  for (const auto& [sa, rowa] : blocks_)
    for (const auto& [sb, rowb] : rhs.blocks_) {
      const int shift = sa + sb;
      for (int n = 0; n < num_levels(); ++n) {
        const int mid = n + sb, target = n + shift;
        if (mid < 0 || mid >= num_levels() || target < 0 || target >= num_levels()) continue;
        const Matrix& b = rowb[static_cast<std::size_t>(n)];
        const Matrix& a = rowa[static_cast<std::size_t>(mid)];
        if (!a.size() || !b.size()) continue;
        if (const Matrix* existing = out.find_block(n, shift))
          out.set_block(n, shift, *existing + a * b);
        else
          out.set_block(n, shift, a * b);
      }
    }
  return out;
}

FockOperator FockOperator::operator+(const FockOperator& rhs) const {
  if (dims_ != rhs.dims_) throw error(errc::dimension_mismatch, "operator level dimensions differ");
  FockOperator out = *this;
  for (const auto& [shift, row] : rhs.blocks_)
    for (int n = 0; n < num_levels(); ++n) {
      const Matrix& b = row[static_cast<std::size_t>(n)];
      if (!b.size()) continue;
      if (const Matrix* existing = out.find_block(n, shift)) out.set_block(n, shift, *existing + b);
      else out.set_block(n, shift, b);
    }
  return out;
}

FockOperator FockOperator::operator-(const FockOperator& rhs) const { return *this + rhs.scaled(-1.0); }

FockOperator FockOperator::scaled(cxd factor) const {
  FockOperator out(dims_);
  for (const auto& [shift, row] : blocks_)
    for (int n = 0; n < num_levels(); ++n)
      if (row[static_cast<std::size_t>(n)].size())
        out.set_block(n, shift, factor * row[static_cast<std::size_t>(n)]);
  return out;
}

FockOperator FockOperator::adjoint() const {
  FockOperator out(dims_);
  for (const auto& [shift, row] : blocks_)
    for (int n = 0; n < num_levels(); ++n)
      if (row[static_cast<std::size_t>(n)].size())
        out.set_block(n + shift, -shift, row[static_cast<std::size_t>(n)].adjoint());
  return out;
}

FockOperator FockOperator::restricted(int max_level) const {
  FockOperator out(dims_);
  for (const auto& [shift, row] : blocks_)
    for (int n = 0; n < num_levels(); ++n) {
      if (n > max_level || n + shift > max_level) continue;
      if (row[static_cast<std::size_t>(n)].size()) out.set_block(n, shift, row[static_cast<std::size_t>(n)]);
    }
  return out;
}

std::vector<Vector> FockOperator::apply(const std::vector<Vector>& in) const {
  if (in.size() != static_cast<std::size_t>(num_levels()))
    throw error(errc::dimension_mismatch, "vector level count does not match operator");
  std::vector<Vector> out(in.size());
  for (int n = 0; n < num_levels(); ++n) out[static_cast<std::size_t>(n)] = Vector::Zero(dims_[static_cast<std::size_t>(n)]);
  for (const auto& [shift, row] : blocks_)
    for (int n = 0; n < num_levels(); ++n) {
      const Matrix& b = row[static_cast<std::size_t>(n)];
      if (!b.size()) continue;
      out[static_cast<std::size_t>(n + shift)] += b * in[static_cast<std::size_t>(n)];
    }
  return out;
}

Matrix FockOperator::dense() const {
  std::vector<Eigen::Index> offset(dims_.size() + 1, 0);
  for (std::size_t n = 0; n < dims_.size(); ++n) offset[n + 1] = offset[n] + dims_[n];
  Matrix out = Matrix::Zero(offset.back(), offset.back());
  for (const auto& [shift, row] : blocks_)
    for (int n = 0; n < num_levels(); ++n) {
      const Matrix& b = row[static_cast<std::size_t>(n)];
      if (!b.size()) continue;
      out.block(offset[static_cast<std::size_t>(n + shift)], offset[static_cast<std::size_t>(n)],
                b.rows(), b.cols()) = b;
    }
  return out;
}

// --------------------------------------------------------------------------

std::vector<Eigen::Index> level_dims(const FockScene& scene) {
  std::vector<Eigen::Index> dims;
  dims.reserve(scene.levels.size());
  for (const auto& lvl : scene.levels) dims.push_back(lvl.dim);
  return dims;
}

std::vector<Vector> vacuum(const FockScene& scene) {
  std::vector<Vector> v(scene.levels.size());
  for (std::size_t n = 0; n < scene.levels.size(); ++n) v[n] = Vector::Zero(scene.levels[n].dim);
  v[0](0) = 1.0;
  return v;
}

FockOperator creation(const FockScene& scene, const Vector& f) {
  if (f.size() != scene.tensor.d) throw error(errc::dimension_mismatch, "vector dimension != d");
  FockOperator out(level_dims(scene));
  for (int n = 0; n + 1 <= scene.cap; ++n) {
    const Eigen::Index dn = scene.level_dim(n);
    out.set_block(n, +1, linalg::kron(f, Matrix::Identity(dn, dn)));
  }
  return out;
}

FockOperator annihilation(const FockScene& scene, const Vector& f) {
  if (f.size() != scene.tensor.d) throw error(errc::dimension_mismatch, "vector dimension != d");
  FockOperator out(level_dims(scene));
  for (int n = 1; n <= scene.cap; ++n) {
    const Eigen::Index dprev = scene.level_dim(n - 1);
    const Matrix free_part = linalg::kron(f.adjoint(), Matrix::Identity(dprev, dprev));
    out.set_block(n, -1, free_part * scene.levels[static_cast<std::size_t>(n)].r);
  }
  return out;
}

FockOperator position(const FockScene& scene, int i) {
  if (i < 0 || i >= scene.tensor.d) throw error(errc::invalid_argument, "basis index out of range");
  Vector e = Vector::Zero(scene.tensor.d);
  e(i) = 1.0;
  return annihilation(scene, e) + creation(scene, e);
}

FockOperator r_operator(const FockScene& scene) {
  FockOperator out(level_dims(scene));
  for (int n = 0; n <= scene.cap; ++n) out.set_block(n, 0, scene.levels[static_cast<std::size_t>(n)].r);
  return out;
}

namespace {

// dense matrix of S X S^+ restricted to input levels <= max_level
Matrix t_weighted_dense(const FockScene& scene, const FockOperator& x, int max_level) {
  const auto dims = level_dims(scene);
  std::vector<Eigen::Index> offset(dims.size() + 1, 0);
  for (std::size_t n = 0; n < dims.size(); ++n) offset[n + 1] = offset[n] + dims[n];
  std::vector<Eigen::Index> in_offset(dims.size() + 1, 0);
  for (std::size_t n = 0; n < dims.size(); ++n)
    in_offset[n + 1] = in_offset[n] + (static_cast<int>(n) <= max_level ? dims[n] : 0);

  Matrix out = Matrix::Zero(offset.back(), in_offset.back());
  for (int n = 0; n < x.num_levels() && n <= max_level; ++n)
    for (int shift = -x.num_levels(); shift <= x.num_levels(); ++shift) {
      if (const Matrix* b = x.find_block(n, shift)) {
        const auto& src = scene.levels[static_cast<std::size_t>(n)];
        const auto& dst = scene.levels[static_cast<std::size_t>(n + shift)];
        out.block(offset[static_cast<std::size_t>(n + shift)], in_offset[static_cast<std::size_t>(n)],
                  dst.dim, src.dim) = dst.root.sqrt * (*b) * src.root.pinv_sqrt;
      }
    }
  return out;
}

}  // namespace

double t_norm(const FockScene& scene, const FockOperator& x) {
  return linalg::spectral_norm(t_weighted_dense(scene, x, scene.cap));
}

double t_norm(const FockScene& scene, const FockOperator& x, int max_level) {
  return linalg::spectral_norm(t_weighted_dense(scene, x.restricted(max_level), max_level));
}

Certificate adjointness_residual(const FockScene& scene, const Vector& f, const Tolerances& tol) {
  const FockOperator create = creation(scene, f);
  const FockOperator annih = annihilation(scene, f);
  double worst = 0.0;
  int argmax = 0;
  for (int n = 0; n + 1 <= scene.cap; ++n) {
    const Matrix* c = create.find_block(n, +1);
    const Matrix* a = annih.find_block(n + 1, -1);
    const Matrix& gn = scene.levels[static_cast<std::size_t>(n)].gram;
    const Matrix& gn1 = scene.levels[static_cast<std::size_t>(n + 1)].gram;
    const double res = linalg::spectral_norm(gn1 * (*c) - a->adjoint() * gn);
    if (res > worst) {
      worst = res;
      argmax = n;
    }
  }
  return residual_cert("fock/adjointness", worst, tol.residual, "worst_level=" + std::to_string(argmax));
}

Certificate relation_residual(const FockScene& scene, int i, int j, const Tolerances& tol) {
  const int d = scene.tensor.d;
  if (i < 0 || i >= d || j < 0 || j >= d) throw error(errc::invalid_argument, "basis index out of range");
  if (scene.cap < 1) throw error(errc::invalid_argument, "relation check needs cap >= 1");
  std::vector<FockOperator> a, c;
  for (int k = 0; k < d; ++k) {
    Vector e = Vector::Zero(d);
    e(k) = 1.0;
    a.push_back(annihilation(scene, e));
    c.push_back(creation(scene, e));
  }
  FockOperator x = a[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)];
  for (int r = 0; r < d; ++r)
    for (int s = 0; s < d; ++s) {
      const cxd w = scene.tensor.coeff(i, r, j, s);
      if (w != cxd{0.0, 0.0})
        x = x - (c[static_cast<std::size_t>(r)] * a[static_cast<std::size_t>(s)]).scaled(w);
    }
  double worst = 0.0;
  int argmax = 0;
  for (int n = 0; n <= scene.cap - 1; ++n) {
    Matrix blk = x.block_or_zero(n, 0);
    blk -= (i == j ? 1.0 : 0.0) * Matrix::Identity(blk.rows(), blk.cols());
    const double res = linalg::spectral_norm(blk);
    if (res > worst) {
      worst = res;
      argmax = n;
    }
  }
  return residual_cert("fock/wick_relation (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                       worst, tol.residual, "worst_level=" + std::to_string(argmax));
}

Certificate gram_recursion_certificate(const FockScene& scene, const Tolerances& tol) {
  const Eigen::Index d = scene.tensor.d;
  double worst = 0.0;
  for (int n = 1; n <= scene.cap; ++n) {
    const Matrix& prev = scene.levels[static_cast<std::size_t>(n - 1)].gram;
    const Matrix rhs = linalg::kron(Matrix::Identity(d, d), prev) * scene.levels[static_cast<std::size_t>(n)].r;
    worst = std::max(worst, linalg::spectral_norm(scene.levels[static_cast<std::size_t>(n)].gram - rhs));
  }
  return residual_cert("fock/gram_recursion", worst, tol.residual);
}

Certificate sum_rule_certificate(const FockScene& scene, const Tolerances& tol) {
  const int d = scene.tensor.d;
  FockOperator acc(level_dims(scene));
  for (int k = 0; k < d; ++k) {
    Vector e = Vector::Zero(d);
    e(k) = 1.0;
    acc = acc + creation(scene, e) * annihilation(scene, e);
  }
  double worst = 0.0;
  for (int n = 0; n <= scene.cap - 1; ++n) {
    Matrix blk = acc.block_or_zero(n, 0);
    if (n >= 1) blk -= scene.levels[static_cast<std::size_t>(n)].r;
    worst = std::max(worst, linalg::spectral_norm(blk));
  }
  return residual_cert("fock/sum_rule", worst, tol.residual);
}

Certificate domination_certificate(const FockScene& scene, const Tolerances& tol) {
  const double q = scene.tensor.norm_bound;
  if (q >= 1.0)
    throw error(errc::invalid_argument, "domination bound requires ‖T‖ < 1");
  const Eigen::Index d = scene.tensor.d;
  double worst = std::numeric_limits<double>::infinity();
  for (int n = 0; n + 1 <= scene.cap; ++n) {
    const Matrix& prev = scene.levels[static_cast<std::size_t>(n)].gram;
    const Matrix diff = linalg::kron(Matrix::Identity(d, d), prev) / (1.0 - q) -
                        scene.levels[static_cast<std::size_t>(n + 1)].gram;
    worst = std::min(worst, linalg::min_hermitian_eig(0.5 * (diff + diff.adjoint())));
  }
  if (scene.cap == 0) worst = 0.0;
  return min_eig_cert("fock/gram_domination", worst, -tol.psd, "q=" + std::to_string(q));
}

std::vector<Certificate> gram_psd_certificates(const FockScene& scene, const Tolerances& tol) {
  std::vector<Certificate> certs;
  for (int n = 0; n <= scene.cap; ++n) {
    const auto& lvl = scene.levels[static_cast<std::size_t>(n)];
    const double m0 = lvl.root.evals.size() ? lvl.root.evals.minCoeff() : 0.0;
    const double top = lvl.root.evals.size() ? lvl.root.evals.cwiseAbs().maxCoeff() : 0.0;
    certs.push_back(min_eig_cert("fock/gram_psd n=" + std::to_string(n), m0,
                                 -tol.psd * std::max(1.0, top),
                                 "rank=" + std::to_string(lvl.root.rank) + "/" + std::to_string(lvl.dim)));
  }
  return certs;
}

std::vector<Certificate> norm_suite(const FockScene& scene, const Tolerances& tol) {
  if (!scene.origin)
    throw error(errc::invalid_argument, "norm suite applies to scenes built from a q spec");
  const QSpec& spec = *scene.origin;
  std::vector<Certificate> certs;
  for (int i = 0; i < spec.d; ++i) {
    Vector e = Vector::Zero(spec.d);
    e(i) = 1.0;
    const FockOperator di = annihilation(scene, e);
    const double norm_full = t_norm(scene, di);
    const double qii = spec.diag(i);
    const double bound = qii < 0.0 ? 1.0
                         : qii >= 1.0 ? std::numeric_limits<double>::infinity()
                                      : 1.0 / std::sqrt(1.0 - qii);
    certs.push_back(residual_cert("fock/annihilator_norm d" + std::to_string(i + 1), norm_full,
                                  bound + tol.residual * (1.0 + bound),
                                  "q_ii=" + std::to_string(qii)));
    if (scene.cap >= 1) {
      const double norm_prev = t_norm(scene, di, scene.cap - 1);
      certs.push_back(residual_cert("fock/annihilator_norm_monotone d" + std::to_string(i + 1),
                                    norm_prev - norm_full, tol.residual,
                                    "caps=(" + std::to_string(scene.cap - 1) + "," +
                                        std::to_string(scene.cap) + ")"));
    }
  }
  return certs;
}

namespace {

// index of the reversed multi-index, base d, n digits, first factor major
Eigen::Index reversed_index(Eigen::Index idx, int d, int n) {
  Eigen::Index out = 0;
  for (int k = 0; k < n; ++k) {
    out = out * d + idx % d;
    idx /= d;
  }
  return out;
}

Matrix reversal_permutation(int d, int n, Eigen::Index dim) {
  Matrix p = Matrix::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) p(reversed_index(c, d, n), c) = 1.0;
  return p;
}

}  // namespace

Certificate right_commutant_check(const FockScene& scene, double tol) {
  if (scene.tensor.traciality_residual() > 1e-9 * (1.0 + scene.tensor.norm_bound))
    throw error(errc::validation_error,
                "right-action commutant check requires a tracial deformation tensor");
  const int d = scene.tensor.d;
  std::vector<Matrix> rev;
  for (int n = 0; n <= scene.cap; ++n)
    rev.push_back(reversal_permutation(d, n, scene.level_dim(n)));

  std::vector<FockOperator> g, jgj;
  for (int i = 0; i < d; ++i) {
    g.push_back(position(scene, i));
    // J X J with J = (reversal) ∘ (complex conjugation), taken blockwise
    FockOperator b(level_dims(scene));
    for (int n = 0; n <= scene.cap; ++n)
      for (int shift : {-1, +1}) {
        if (const Matrix* blk = g.back().find_block(n, shift))
          b.set_block(n, shift,
                      rev[static_cast<std::size_t>(n + shift)] * blk->conjugate() *
                          rev[static_cast<std::size_t>(n)]);
      }
    jgj.push_back(std::move(b));
  }

  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const FockOperator comm = g[static_cast<std::size_t>(i)] * jgj[static_cast<std::size_t>(j)] -
                                jgj[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(i)];
      worst = std::max(worst, t_norm(scene, comm, scene.cap - 2));
    }
  return residual_cert("fock/right_commutant", worst, tol,
                       "levels<=" + std::to_string(scene.cap - 2));
}

}  // namespace coxfock::fock
