#pragma once

#include <cstdint>
#include <vector>

#include "coxfock/certificate.hpp"
#include "coxfock/fock.hpp"

namespace coxfock::opspace {

using qmap::Tolerances;

struct CoefficientTuple {
  Eigen::Index aux_dim = 0;
  std::vector<Matrix> mats;
};

// max( ‖sum a_i a_i†‖^{1/2}, ‖sum a_i† a_i‖^{1/2} ) — the R∩C norm of the tuple.
double max_norm(const CoefficientTuple& t);

// ‖sum a_i (x) G_i‖ on aux (x) (truncated Fock space), computed in the
// deformed geometry.  Monotone nondecreasing in the level cap.
double embedded_norm(const CoefficientTuple& t, const fock::FockScene& scene);
double embedded_norm(const CoefficientTuple& t, const fock::FockScene& scene, int max_level);

struct SandwichReport {
  double lower = 0.0;   // ‖(a_i)‖ in the R∩C norm
  double middle = 0.0;  // truncated ‖sum a_i (x) G_i‖
  double upper = 0.0;   // 2/sqrt(1-q) * lower
  double tol = 0.0;     // 1e-8 * (1 + upper)
  bool pass = false;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

// Independent Gaussian coefficient tuples; trial k draws from the stream
// (seed, k), so reports do not depend on the execution schedule.
std::vector<SandwichReport> sandwich_check(std::uint64_t seed, int trials, Eigen::Index aux_dim,
                                           int n_ops, const fock::FockScene& scene);

SandwichReport sandwich_single(const CoefficientTuple& t, const fock::FockScene& scene,
                               std::uint64_t seed = 0, std::uint64_t trial = 0);

// Truncated ‖sum_{i<=m} G_i (x) conj(G_i)‖ against the bound 4 sqrt(m)/(1-q),
// evaluated by power iteration on the structured operator, plus the exact
// vacuum trace side eps(sum G_i G_i) = m.
std::vector<Certificate> injectivity_witness(int m, const fock::FockScene& scene,
                                             const Tolerances& tol = {});

}  // namespace coxfock::opspace
