#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "coxfock/certificate.hpp"
#include "coxfock/fock.hpp"

namespace coxfock::wick {

using fock::QSpec;
using qmap::Tolerances;

constexpr int kMaxPairingPoints = 16;

// Perfect matching of {0..2r-1} with a_k < z_k and a_1 < a_2 < ... < a_r.
struct PairPartition {
  std::vector<std::pair<int, int>> pairs;
};

// Enumeration in canonical order: smallest unpaired point first, partner
// ascending.  m must be even and <= 16.
void for_each_pairing(int m, const std::function<void(const PairPartition&)>& fn);
std::vector<PairPartition> pair_partitions(int m);
std::uint64_t count_pairings(int m);

// Crossing set I(V): pair-index pairs (k, l) with a_k < a_l < z_k < z_l.
std::vector<std::pair<int, int>> crossings(const PairPartition& v);

struct MomentQuery {
  std::vector<int> word;  // 0-based basis letters
  QSpec spec;
};

// Diagram weight of one pairing: the delta prefactor over the pairs times
// the product of q_{i(a_k), i(a_l)} over the crossings.
cxd q_weight(const PairPartition& v, const MomentQuery& query);

// Vacuum moment of G_{i(1)}...G_{i(m)} as the crossing-weighted pairing sum.
// Branch partial sums (by the partner of the first point) are combined with a
// fixed pairwise tree, so the value is independent of the thread count; the
// serial variant is bit-identical.
cxd moment(const MomentQuery& query);
cxd moment_serial(const MomentQuery& query);

// Same moment through the matrix representation: requires cap >= m/2 so that
// no returning path is truncated.
cxd moment_matrix(const std::vector<int>& word, const fock::FockScene& scene);
cxd moment_matrix(const MomentQuery& query, const fock::FockScene& scene);

Certificate compare(const MomentQuery& query, const fock::FockScene& scene,
                    const Tolerances& tol = {});

struct TracialityResult {
  Certificate structural;  // max |t^{dc}_{ab} - t^{cb}_{da}|
  Certificate empirical;   // max |eps(AB) - eps(BA)| over sampled monomials
  double max_violation = 0.0;
  std::vector<int> witness_a, witness_b;  // words attaining the violation
};

// Structural cyclicity of the tensor plus an empirical trace check on vacuum
// moments of monomial pairs with total degree <= 6 (exhaustive for d <= 3,
// seeded sample otherwise).
TracialityResult traciality_check(const fock::DeformationTensor& tensor, std::uint64_t seed = 0,
                                  const Tolerances& tol = {});

}  // namespace coxfock::wick
