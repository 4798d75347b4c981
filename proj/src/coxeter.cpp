#include "coxfock/coxeter.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace coxfock::coxeter {

void CoxeterMatrix::validate() const {
  if (n < 0) throw error(errc::invalid_matrix, "negative generator count");
  if (m.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw error(errc::invalid_matrix, "Coxeter matrix storage does not match rank");
  for (int i = 0; i < n; ++i) {
    if (order(i, i) != 1) throw error(errc::invalid_matrix, "diagonal entries must be 1");
    for (int j = i + 1; j < n; ++j) {
      if (order(i, j) != order(j, i)) throw error(errc::invalid_matrix, "Coxeter matrix must be symmetric");
      if (order(i, j) < 2)
        throw error(errc::invalid_matrix,
                    "off-diagonal bond orders must be finite integers >= 2 (infinite bonds unsupported)");
    }
  }
}

CoxeterMatrix CoxeterMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  CoxeterMatrix cm;
  cm.n = static_cast<int>(rows.size());
  cm.m.assign(static_cast<std::size_t>(cm.n) * cm.n, 2);
  for (int i = 0; i < cm.n; ++i) {
    if (rows[i].size() != static_cast<std::size_t>(cm.n))
      throw error(errc::invalid_matrix, "ragged Coxeter matrix rows");
    for (int j = 0; j < cm.n; ++j) cm.m[static_cast<std::size_t>(i) * cm.n + j] = rows[i][j];
  }
  cm.validate();
  return cm;
}

namespace {
CoxeterMatrix blank(int n) {
  CoxeterMatrix cm;
  cm.n = n;
  cm.m.assign(static_cast<std::size_t>(n) * n, 2);
  for (int i = 0; i < n; ++i) cm.m[static_cast<std::size_t>(i) * n + i] = 1;
  return cm;
}
void set_bond(CoxeterMatrix& cm, int i, int j, int v) {
  cm.m[static_cast<std::size_t>(i) * cm.n + j] = v;
  cm.m[static_cast<std::size_t>(j) * cm.n + i] = v;
}
}  // namespace

CoxeterMatrix CoxeterMatrix::type_a(int n) {
  if (n < 0) throw error(errc::invalid_matrix, "type A rank must be >= 0");
  CoxeterMatrix cm = blank(n);
  for (int i = 0; i + 1 < n; ++i) set_bond(cm, i, i + 1, 3);
  return cm;
}

CoxeterMatrix CoxeterMatrix::type_b(int n) {
  if (n < 2) throw error(errc::invalid_matrix, "type B rank must be >= 2");
  CoxeterMatrix cm = blank(n);
  for (int i = 0; i + 2 < n; ++i) set_bond(cm, i, i + 1, 3);
  set_bond(cm, n - 2, n - 1, 4);
  return cm;
}

CoxeterMatrix CoxeterMatrix::type_d(int n) {
  if (n < 3) throw error(errc::invalid_matrix, "type D rank must be >= 3");
  CoxeterMatrix cm = blank(n);
  for (int i = 0; i + 2 < n; ++i) set_bond(cm, i, i + 1, 3);
  set_bond(cm, n - 3, n - 1, 3);
  return cm;
}

CoxeterMatrix CoxeterMatrix::dihedral(int m) {
  if (m < 2) throw error(errc::invalid_matrix, "dihedral bond order must be >= 2");
  CoxeterMatrix cm = blank(2);
  set_bond(cm, 0, 1, m);
  return cm;
}

CoxeterMatrix matrix_by_name(const std::string& name) {
  auto rank_of = [&](std::size_t prefix) {
    int r = 0;
    std::istringstream in(name.substr(prefix));
    if (!(in >> r)) throw error(errc::parse_error, "cannot parse group rank in '" + name + "'");
    return r;
  };
  if (name.rfind("A_", 0) == 0) return CoxeterMatrix::type_a(rank_of(2));
  if (name.rfind("B_", 0) == 0) return CoxeterMatrix::type_b(rank_of(2));
  if (name.rfind("D_", 0) == 0) return CoxeterMatrix::type_d(rank_of(2));
  if (name.rfind("I2(", 0) == 0 && name.back() == ')') {
    std::istringstream in(name.substr(3, name.size() - 4));
    int m = 0;
    if (!(in >> m)) throw error(errc::parse_error, "cannot parse bond order in '" + name + "'");
    return CoxeterMatrix::dihedral(m);
  }
  throw error(errc::parse_error, "unknown group name '" + name + "' (expected A_n, B_n, D_n, I2(m))");
}

// ---------------------------------------------------------------------------
// Element realizations used for deduplication during the breadth-first search.
//
// The permutation models are exact; the geometric representation is the
// standard faithful reflection representation and is deduplicated through
// fingerprints rounded at absolute resolution 1e-9.
// ---------------------------------------------------------------------------
namespace {

struct PermutationModel {  // type A_{n-1}: w stored as images of 0..n-1
  using State = std::vector<std::uint8_t>;
  using Key = State;
  int points;
  explicit PermutationModel(int rank) : points(rank + 1) {}
  State identity() const {
    State s(points);
    for (int i = 0; i < points; ++i) s[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    return s;
  }
  State mul(const State& w, int s) const {  // w * s_i swaps positions i, i+1
    State out = w;
    std::swap(out[static_cast<std::size_t>(s)], out[static_cast<std::size_t>(s) + 1]);
    return out;
  }
  Key key(const State& w) const { return w; }
};

struct SignedModel {  // types B_n / D_n: images of coordinates 1..n, signed
  using State = std::vector<std::int8_t>;
  using Key = State;
  int n;
  bool d_type;  // last generator: B flips the last sign, D swaps-and-flips the last two
  SignedModel(int rank, bool d) : n(rank), d_type(d) {}
  State identity() const {
    State s(n);
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(i + 1);
    return s;
  }
  State mul(const State& w, int s) const {
    State out = w;
    if (s < n - 1) {
      std::swap(out[static_cast<std::size_t>(s)], out[static_cast<std::size_t>(s) + 1]);
    } else if (!d_type) {
      out[static_cast<std::size_t>(n - 1)] = static_cast<std::int8_t>(-out[static_cast<std::size_t>(n - 1)]);
    } else {
      std::int8_t a = out[static_cast<std::size_t>(n - 2)], b = out[static_cast<std::size_t>(n - 1)];
      out[static_cast<std::size_t>(n - 2)] = static_cast<std::int8_t>(-b);
      out[static_cast<std::size_t>(n - 1)] = static_cast<std::int8_t>(-a);
    }
    return out;
  }
  Key key(const State& w) const { return w; }
};

struct GeometricModel {
  using State = Eigen::MatrixXd;
  using Key = std::vector<std::int64_t>;
  std::vector<State> gens;
  explicit GeometricModel(const CoxeterMatrix& cm) {
    const int n = cm.n;
    gens.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      State g = State::Identity(n, n);
      for (int j = 0; j < n; ++j)
        g(i, j) += (i == j) ? -2.0 : 2.0 * std::cos(M_PI / cm.order(i, j));
      gens.push_back(std::move(g));
    }
  }
  State identity() const {
    const int n = gens.empty() ? 0 : static_cast<int>(gens[0].rows());
    return State::Identity(n, n);
  }
  State mul(const State& w, int s) const { return w * gens[static_cast<std::size_t>(s)]; }
  Key key(const State& w) const {
    Key k(static_cast<std::size_t>(w.size()));
    const double* p = w.data();
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = std::llround(p[i] * 1e9);
    return k;
  }
};

struct BuildResult {
  std::vector<Element> elements;
  std::vector<std::uint32_t> cayley;
};

// Breadth-first enumeration by word length.  Elements are processed in
// discovery order, which is ShortLex order of the canonical words, so the
// first word reaching an element is its ShortLex-minimal reduced word.
template <typename Model>
BuildResult bfs(const Model& model, int n, std::size_t budget) {
  BuildResult out;
  std::vector<typename Model::State> states;
  std::map<typename Model::Key, std::uint32_t> seen;

  states.push_back(model.identity());
  seen.emplace(model.key(states[0]), 0);
  out.elements.push_back(Element{0, {}, 0});
  out.cayley.assign(static_cast<std::size_t>(n), 0);

  for (std::uint32_t head = 0; head < states.size(); ++head) {
    for (int s = 0; s < n; ++s) {
      auto st = model.mul(states[head], s);
      auto key = model.key(st);
      auto it = seen.find(key);
      std::uint32_t id;
      if (it == seen.end()) {
        if (states.size() >= budget)
          throw error(errc::budget_exceeded,
                      "group enumeration exceeded the element budget (group infinite or too large)");
        id = static_cast<std::uint32_t>(states.size());
        seen.emplace(std::move(key), id);
        states.push_back(std::move(st));
        Element e;
        e.id = id;
        e.canonical_word = out.elements[head].canonical_word;
        e.canonical_word.push_back(s);
        e.length = out.elements[head].length + 1;
        out.elements.push_back(std::move(e));
        out.cayley.resize(states.size() * static_cast<std::size_t>(n), 0);
      } else {
        id = it->second;
      }
      out.cayley[static_cast<std::size_t>(head) * n + s] = id;
    }
  }
  return out;
}

bool is_type_a(const CoxeterMatrix& cm) { return cm == CoxeterMatrix::type_a(cm.n); }
bool is_type_b(const CoxeterMatrix& cm) { return cm.n >= 2 && cm == CoxeterMatrix::type_b(cm.n); }
bool is_type_d(const CoxeterMatrix& cm) { return cm.n >= 3 && cm == CoxeterMatrix::type_d(cm.n); }

}  // namespace

CoxeterSystem CoxeterSystem::build(const CoxeterMatrix& m, std::size_t budget, Realization realization) {
  m.validate();
  if (m.n > 31) throw error(errc::invalid_matrix, "generator sets are limited to 31 generators");

  CoxeterSystem sys;
  sys.matrix_ = m;

  BuildResult res;
  const bool want_exact = realization != Realization::geometric;
  if (want_exact && is_type_a(m)) {
    res = bfs(PermutationModel(m.n), m.n, budget);
  } else if (want_exact && is_type_b(m)) {
    res = bfs(SignedModel(m.n, false), m.n, budget);
  } else if (want_exact && is_type_d(m)) {
    res = bfs(SignedModel(m.n, true), m.n, budget);
  } else {
    if (realization == Realization::permutation)
      throw error(errc::invalid_argument, "no exact permutation model for this Coxeter matrix");
    res = bfs(GeometricModel(m), m.n, budget);
  }
  sys.elements_ = std::move(res.elements);
  sys.cayley_ = std::move(res.cayley);

  // cache J_sigma and locate the longest element
  const std::size_t order = sys.elements_.size();
  sys.ascent_.assign(order, 0);
  std::uint32_t longest = 0;
  std::size_t empty_count = 0;
  for (std::uint32_t a = 0; a < order; ++a) {
    GenSet up = 0;
    for (int s = 0; s < m.n; ++s) {
      const std::uint32_t b = sys.cayley_[static_cast<std::size_t>(a) * m.n + s];
      if (sys.elements_[b].length == sys.elements_[a].length + 1) up |= GenSet{1} << s;
      else if (sys.elements_[b].length != sys.elements_[a].length - 1)
        throw error(errc::numeric_error, "Cayley structure corrupt: generator step changed length by != 1");
    }
    sys.ascent_[a] = up;
    if (up == 0) {
      longest = a;
      ++empty_count;
    }
  }
  if (empty_count != 1)
    throw error(errc::numeric_error, "longest element is not unique; element identification failed");
  sys.sigma0_ = longest;
  return sys;
}

const Element& CoxeterSystem::element(std::uint32_t id) const {
  if (id >= elements_.size()) throw error(errc::invalid_argument, "element id out of range");
  return elements_[id];
}

std::uint32_t CoxeterSystem::generator(int s) const {
  if (s < 0 || s >= rank()) throw error(errc::invalid_argument, "generator index out of range");
  return cayley_[static_cast<std::size_t>(s)];
}

std::uint32_t CoxeterSystem::right(std::uint32_t a, int s) const {
  if (a >= elements_.size() || s < 0 || s >= rank())
    throw error(errc::invalid_argument, "Cayley lookup out of range");
  return cayley_[static_cast<std::size_t>(a) * rank() + s];
}

std::uint32_t CoxeterSystem::multiply(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t out = a;
  for (int s : element(b).canonical_word) out = right(out, s);
  return out;
}

std::uint32_t CoxeterSystem::invert(std::uint32_t a) const {
  const Word& w = element(a).canonical_word;
  std::uint32_t out = 0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out = right(out, *it);
  return out;
}

int CoxeterSystem::length(std::uint32_t a) const { return element(a).length; }

GenSet CoxeterSystem::block_set(std::uint32_t a) const {
  GenSet b = 0;
  for (int s : element(a).canonical_word) b |= GenSet{1} << s;
  return b;
}

GenSet CoxeterSystem::descent_complement(std::uint32_t a) const {
  if (a >= elements_.size()) throw error(errc::invalid_argument, "element id out of range");
  return ascent_[a];
}

std::vector<std::uint32_t> CoxeterSystem::coset_minima(GenSet j) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t a = 0; a < elements_.size(); ++a)
    if ((j & ~ascent_[a]) == 0) out.push_back(a);
  return out;
}

long CoxeterSystem::euler_solomon(std::uint32_t a) const {
  const GenSet js = descent_complement(a);
  // literal alternating sum over the subsets of J_sigma
  std::vector<int> bits;
  for (int s = 0; s < rank(); ++s)
    if (js & (GenSet{1} << s)) bits.push_back(s);
  long sum = 0;
  for (GenSet sub = 0; sub < (GenSet{1} << bits.size()); ++sub)
    sum += (popcount(sub) % 2 == 0) ? 1 : -1;
  return sum;
}

CoxeterSystem::Parabolic CoxeterSystem::parabolic(GenSet j) const {
  Parabolic out;
  for (int s = 0; s < rank(); ++s)
    if (j & (GenSet{1} << s)) out.generators.push_back(s);
  const int k = static_cast<int>(out.generators.size());
  CoxeterMatrix sub;
  sub.n = k;
  sub.m.assign(static_cast<std::size_t>(k) * k, 1);
  for (int i = 0; i < k; ++i)
    for (int l = 0; l < k; ++l)
      sub.m[static_cast<std::size_t>(i) * k + l] = matrix_.order(out.generators[i], out.generators[l]);
  out.system = build(sub, elements_.size());
  out.to_parent.reserve(out.system.order());
  for (std::uint32_t a = 0; a < out.system.order(); ++a) {
    std::uint32_t p = 0;
    for (int s : out.system.element(a).canonical_word) p = right(p, out.generators[s]);
    out.to_parent.push_back(p);
  }
  return out;
}

std::vector<std::int64_t> CoxeterSystem::length_distribution() const {
  std::vector<std::int64_t> dist(static_cast<std::size_t>(elements_[sigma0_].length) + 1, 0);
  for (const auto& e : elements_) ++dist[static_cast<std::size_t>(e.length)];
  return dist;
}

}  // namespace coxfock::coxeter
