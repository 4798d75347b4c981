#include "coxfock/wick.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coxfock/rng.hpp"

namespace coxfock::wick {

namespace {

void check_points(int m) {
  if (m < 0 || m % 2 != 0) throw error(errc::invalid_argument, "pairings need an even point count");
  if (m > kMaxPairingPoints)
    throw error(errc::budget_exceeded,
                "pairing enumeration capped at " + std::to_string(kMaxPairingPoints) + " points");
}

// Recursive canonical enumeration over the unpaired points in `free`.
void enumerate(std::vector<int>& free, PairPartition& acc,
               const std::function<void(const PairPartition&)>& fn) {
  if (free.empty()) {
    fn(acc);
    return;
  }
  const int a = free.front();
  for (std::size_t pick = 1; pick < free.size(); ++pick) {
    const int z = free[pick];
    std::vector<int> rest;
    rest.reserve(free.size() - 2);
    for (std::size_t t = 1; t < free.size(); ++t)
      if (t != pick) rest.push_back(free[t]);
    acc.pairs.emplace_back(a, z);
    enumerate(rest, acc, fn);
    acc.pairs.pop_back();
  }
}

}  // namespace

void for_each_pairing(int m, const std::function<void(const PairPartition&)>& fn) {
  check_points(m);
  if (m == 0) {
    fn(PairPartition{});
    return;
  }
  std::vector<int> free(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) free[static_cast<std::size_t>(i)] = i;
  PairPartition acc;
  acc.pairs.reserve(static_cast<std::size_t>(m / 2));
  enumerate(free, acc, fn);
}

std::vector<PairPartition> pair_partitions(int m) {
  std::vector<PairPartition> out;
  for_each_pairing(m, [&out](const PairPartition& v) { out.push_back(v); });
  return out;
}

std::uint64_t count_pairings(int m) {
  std::uint64_t n = 0;
  for_each_pairing(m, [&n](const PairPartition&) { ++n; });
  return n;
}

std::vector<std::pair<int, int>> crossings(const PairPartition& v) {
  std::vector<std::pair<int, int>> out;
  const int r = static_cast<int>(v.pairs.size());
  for (int k = 0; k < r; ++k)
    for (int l = 0; l < r; ++l) {
      const auto [ak, zk] = v.pairs[static_cast<std::size_t>(k)];
      const auto [al, zl] = v.pairs[static_cast<std::size_t>(l)];
      if (ak < al && al < zk && zk < zl) out.emplace_back(k, l);
    }
  return out;
}

cxd q_weight(const PairPartition& v, const MomentQuery& query) {
  const auto& word = query.word;
  for (const auto& [a, z] : v.pairs)
    if (word[static_cast<std::size_t>(a)] != word[static_cast<std::size_t>(z)]) return {0.0, 0.0};
  cxd w{1.0, 0.0};
  const int r = static_cast<int>(v.pairs.size());
  for (int k = 0; k < r; ++k)
    for (int l = 0; l < r; ++l) {
      const auto [ak, zk] = v.pairs[static_cast<std::size_t>(k)];
      const auto [al, zl] = v.pairs[static_cast<std::size_t>(l)];
      if (ak < al && al < zk && zk < zl)
        w *= query.spec.q(word[static_cast<std::size_t>(ak)], word[static_cast<std::size_t>(al)]);
    }
  return w;
}

namespace {

cxd moment_impl(const MomentQuery& query, bool parallel) {
  query.spec.validate();
  const int m = static_cast<int>(query.word.size());
  if (m > kMaxPairingPoints)
    throw error(errc::budget_exceeded, "moment words capped at 16 letters");
  for (int letter : query.word)
    if (letter < 0 || letter >= query.spec.d)
      throw error(errc::invalid_argument, "moment word letter out of range");
  if (m % 2 == 1) return {0.0, 0.0};
  if (m == 0) return {1.0, 0.0};

  // branch on the partner of point 0; each branch runs in canonical order
  std::vector<cxd> branch(static_cast<std::size_t>(m - 1), cxd{0.0, 0.0});
#pragma omp parallel for schedule(dynamic) if (parallel && m > 2)
  for (long long pick = 1; pick < m; ++pick) {
    std::vector<int> rest;
    rest.reserve(static_cast<std::size_t>(m - 2));
    for (int t = 1; t < m; ++t)
      if (t != pick) rest.push_back(t);
    PairPartition acc;
    acc.pairs.reserve(static_cast<std::size_t>(m / 2));
    acc.pairs.emplace_back(0, static_cast<int>(pick));
    cxd sum{0.0, 0.0};
    enumerate(rest, acc, [&](const PairPartition& v) { sum += q_weight(v, query); });
    branch[static_cast<std::size_t>(pick - 1)] = sum;
  }
  return parallel ? linalg::pairwise_sum(std::move(branch))
                  : linalg::pairwise_sum_serial(std::move(branch));
}

}  // namespace

cxd moment(const MomentQuery& query) { return moment_impl(query, true); }
cxd moment_serial(const MomentQuery& query) { return moment_impl(query, false); }

cxd moment_matrix(const std::vector<int>& word, const fock::FockScene& scene) {
  const int m = static_cast<int>(word.size());
  if (scene.cap < (m + 1) / 2)
    throw error(errc::invalid_argument,
                "moment of a length-" + std::to_string(m) + " word needs level cap >= " +
                    std::to_string((m + 1) / 2));
  std::vector<fock::FockOperator> g;
  for (int i = 0; i < scene.tensor.d; ++i) g.push_back(fock::position(scene, i));
  auto v = fock::vacuum(scene);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it < 0 || *it >= scene.tensor.d)
      throw error(errc::invalid_argument, "moment word letter out of range");
    v = g[static_cast<std::size_t>(*it)].apply(v);
  }
  return v[0](0);  // level-0 Gram is 1
}

cxd moment_matrix(const MomentQuery& query, const fock::FockScene& scene) {
  return moment_matrix(query.word, scene);
}

Certificate compare(const MomentQuery& query, const fock::FockScene& scene, const Tolerances& tol) {
  const cxd diagram = moment(query);
  const cxd matrix = moment_matrix(query, scene);
  std::ostringstream ctx;
  ctx << "diagram=" << diagram.real() << (diagram.imag() < 0 ? "-" : "+")
      << std::abs(diagram.imag()) << "i matrix=" << matrix.real()
      << (matrix.imag() < 0 ? "-" : "+") << std::abs(matrix.imag()) << "i";
  return residual_cert("wick/moment_compare", std::abs(diagram - matrix), tol.residual, ctx.str());
}

TracialityResult traciality_check(const fock::DeformationTensor& tensor, std::uint64_t seed,
                                  const Tolerances& tol) {
  TracialityResult out;
  const double structural = tensor.traciality_residual();
  out.structural = residual_cert("wick/traciality_structural", structural, tol.residual);

  const int d = tensor.d;
  const int max_total = 6;
  const auto scene = fock::build_scene(tensor, max_total / 2);

  std::vector<std::pair<std::vector<int>, std::vector<int>>> samples;
  if (d <= 3) {
    // exhaustive even-total-degree monomial pairs
    for (int la = 1; la < max_total; ++la)
      for (int lb = 1; la + lb <= max_total; ++lb) {
        if ((la + lb) % 2 != 0) continue;
        std::vector<int> a(static_cast<std::size_t>(la), 0);
        while (true) {
          std::vector<int> bb(static_cast<std::size_t>(lb), 0);
          while (true) {
            samples.emplace_back(a, bb);
            int k = lb - 1;
            while (k >= 0 && ++bb[static_cast<std::size_t>(k)] == d) bb[static_cast<std::size_t>(k--)] = 0;
            if (k < 0) break;
          }
          int k = la - 1;
          while (k >= 0 && ++a[static_cast<std::size_t>(k)] == d) a[static_cast<std::size_t>(k--)] = 0;
          if (k < 0) break;
        }
      }
  } else {
    RandomStream rs(seed, 0x7261636524);
    for (int trial = 0; trial < 400; ++trial) {
      const int la = 1 + static_cast<int>(rs.next() % (max_total - 1));
      const int lb_max = max_total - la;
      int lb = 1 + static_cast<int>(rs.next() % static_cast<std::uint64_t>(lb_max));
      if ((la + lb) % 2 != 0) {
        if (lb > 1) --lb;
        else if (la + lb + 1 <= max_total) ++lb;
        else continue;
      }
      std::vector<int> a(static_cast<std::size_t>(la)), b(static_cast<std::size_t>(lb));
      for (auto& x : a) x = static_cast<int>(rs.next() % static_cast<std::uint64_t>(d));
      for (auto& x : b) x = static_cast<int>(rs.next() % static_cast<std::uint64_t>(d));
      samples.emplace_back(std::move(a), std::move(b));
    }
  }

  double worst = 0.0;
  for (const auto& [a, b] : samples) {
    std::vector<int> ab = a, ba = b;
    ab.insert(ab.end(), b.begin(), b.end());
    ba.insert(ba.end(), a.begin(), a.end());
    const double viol = std::abs(moment_matrix(ab, scene) - moment_matrix(ba, scene));
    if (viol > worst) {
      worst = viol;
      out.witness_a = a;
      out.witness_b = b;
    }
  }
  out.max_violation = worst;
  out.empirical = residual_cert("wick/traciality_empirical", worst, tol.residual,
                                "pairs=" + std::to_string(samples.size()));
  return out;
}

}  // namespace coxfock::wick
