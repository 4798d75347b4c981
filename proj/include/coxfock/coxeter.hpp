#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coxfock/errors.hpp"

namespace coxfock::coxeter {

// Generator subsets as bit masks; generators are 0-based internally.
using GenSet = std::uint32_t;
using Word = std::vector<int>;

inline int popcount(GenSet s) { return __builtin_popcount(s); }

struct CoxeterMatrix {
  int n = 0;
  std::vector<int> m;  // n*n row-major, m_ii = 1, m_ij = m_ji >= 2

  int order(int i, int j) const { return m[static_cast<std::size_t>(i) * n + j]; }
  void validate() const;
  bool operator==(const CoxeterMatrix&) const = default;

  static CoxeterMatrix from_rows(const std::vector<std::vector<int>>& rows);
  static CoxeterMatrix type_a(int n);    // symmetric group S_{n+1}
  static CoxeterMatrix type_b(int n);    // hyperoctahedral, order 2^n n!
  static CoxeterMatrix type_d(int n);    // even-signed permutations
  static CoxeterMatrix dihedral(int m);  // I2(m), order 2m
};

struct Element {
  std::uint32_t id = 0;
  Word canonical_word;  // ShortLex-minimal reduced word
  int length = 0;
};

enum class Realization { automatic, geometric, permutation };

constexpr std::size_t kDefaultBudget = 50000;

// A finite Coxeter group as an enumerated element table with full Cayley
// structure.  Construction is single-threaded; the finished object is
// immutable and safe to share across threads.
class CoxeterSystem {
 public:
  static CoxeterSystem build(const CoxeterMatrix& m, std::size_t budget = kDefaultBudget,
                             Realization realization = Realization::automatic);

  const CoxeterMatrix& matrix() const { return matrix_; }
  int rank() const { return matrix_.n; }
  std::size_t order() const { return elements_.size(); }
  GenSet full_set() const { return rank() == 0 ? 0 : ((GenSet{1} << rank()) - 1); }

  const Element& element(std::uint32_t id) const;
  std::uint32_t generator(int s) const;            // id of s
  std::uint32_t right(std::uint32_t a, int s) const;  // Cayley step a -> a*s
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t invert(std::uint32_t a) const;

  int length(std::uint32_t a) const;
  GenSet block_set(std::uint32_t a) const;  // generators appearing in reduced words
  int block_length(std::uint32_t a) const { return popcount(block_set(a)); }

  // J_sigma = { s : |sigma s| = |sigma| + 1 }
  GenSet descent_complement(std::uint32_t a) const;
  // D_J = { sigma : J subset of J_sigma }, in element-id order
  std::vector<std::uint32_t> coset_minima(GenSet j) const;
  long euler_solomon(std::uint32_t a) const;
  std::uint32_t longest() const { return sigma0_; }

  struct Parabolic {
    CoxeterSystem system;                  // W_J with re-indexed generators
    std::vector<std::uint32_t> to_parent;  // sub id -> parent id
    std::vector<int> generators;           // sub generator -> parent generator
  };
  Parabolic parabolic(GenSet j) const;

  // coefficient k = number of elements of length k
  std::vector<std::int64_t> length_distribution() const;

 private:
  CoxeterSystem() = default;

  CoxeterMatrix matrix_;
  std::vector<Element> elements_;
  std::vector<std::uint32_t> cayley_;  // order * n
  std::vector<GenSet> ascent_;         // cached J_sigma
  std::uint32_t sigma0_ = 0;
};

// Named standard groups: "A_3", "B_2", "D_4", "I2(7)".
CoxeterMatrix matrix_by_name(const std::string& name);

}  // namespace coxfock::coxeter
