#include "coxfock/scenario.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "coxfock/coxeter.hpp"
#include "coxfock/errors.hpp"
#include "coxfock/fock.hpp"
#include "coxfock/rng.hpp"

namespace coxfock::shell {

namespace {

constexpr const char* kHeader = "coxfock-scenario v1";

const std::vector<std::string> kKinds = {"coxeter", "positivity", "blocklength",
                                         "fock", "wick", "opspace"};

bool known_kind(const std::string& k) {
  for (const auto& s : kKinds)
    if (s == k) return true;
  return false;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  throw error(errc::parse_error, origin + ":" + std::to_string(line) + ": " + what);
}

struct RowAccum {
  std::vector<std::vector<double>> rows;
};

}  // namespace

bool ScenarioSpec::operator==(const ScenarioSpec& o) const {
  auto mat_eq = [](const std::optional<Matrix>& a, const std::optional<Matrix>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->rows() == b->rows() && a->cols() == b->cols() && *a == *b;
  };
  return kind == o.kind && group == o.group && cox_rows == o.cox_rows && d == o.d &&
         levels == o.levels && seed == o.seed && trials == o.trials && m == o.m &&
         aux_dim == o.aux_dim && word == o.word && mat_eq(q, o.q) && mat_eq(tensor, o.tensor) &&
         tol_residual == o.tol_residual && tol_psd == o.tol_psd && q_bound == o.q_bound;
}

ScenarioSpec parse_spec_text(const std::string& text, const std::string& origin) {
  ScenarioSpec spec;
  RowAccum q_re, q_im, t_re, t_im;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_header = false, have_kind = false;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    const auto first = trimmed.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (trimmed[first] == '#') continue;
    if (!have_header) {
      if (trimmed != kHeader) fail(origin, lineno, "missing header line '" + std::string(kHeader) + "'");
      have_header = true;
      continue;
    }
    std::istringstream ls(trimmed);
    std::string key;
    ls >> key;
    auto want_int = [&](int lo = INT32_MIN) {
      long long v;
      if (!(ls >> v) || v < lo) fail(origin, lineno, "field '" + key + "' needs an integer argument");
      return static_cast<int>(v);
    };
    auto want_u64 = [&]() {
      std::uint64_t v;
      if (!(ls >> v)) fail(origin, lineno, "field '" + key + "' needs an unsigned integer argument");
      return v;
    };
    auto want_double = [&]() {
      double v;
      if (!(ls >> v)) fail(origin, lineno, "field '" + key + "' needs a number argument");
      return v;
    };
    auto want_row = [&]() {
      std::vector<double> row;
      double v;
      while (ls >> v) row.push_back(v);
      if (row.empty()) fail(origin, lineno, "field '" + key + "' needs at least one number");
      return row;
    };
    auto reject_trailing = [&]() {
      std::string rest;
      if (ls >> rest) fail(origin, lineno, "unexpected trailing token '" + rest + "'");
    };

    if (key == "kind") {
      std::string k;
      ls >> k;
      if (!known_kind(k)) fail(origin, lineno, "unknown kind '" + k + "'");
      spec.kind = k;
      have_kind = true;
      reject_trailing();
    } else if (key == "group") {
      std::string g;
      ls >> g;
      if (g.empty()) fail(origin, lineno, "field 'group' needs a name");
      spec.group = g;
      reject_trailing();
    } else if (key == "cox_row") {
      std::vector<int> row;
      long long v;
      while (ls >> v) row.push_back(static_cast<int>(v));
      if (row.empty()) fail(origin, lineno, "field 'cox_row' needs integers");
      if (!spec.cox_rows) spec.cox_rows.emplace();
      spec.cox_rows->push_back(std::move(row));
    } else if (key == "d") {
      spec.d = want_int(1);
      reject_trailing();
    } else if (key == "levels") {
      spec.levels = want_int(0);
      reject_trailing();
    } else if (key == "seed") {
      spec.seed = want_u64();
      reject_trailing();
    } else if (key == "trials") {
      spec.trials = want_int(0);
      reject_trailing();
    } else if (key == "m") {
      spec.m = want_int(0);
      reject_trailing();
    } else if (key == "aux_dim") {
      spec.aux_dim = want_int(1);
      reject_trailing();
    } else if (key == "q_bound") {
      spec.q_bound = want_double();
      reject_trailing();
    } else if (key == "word") {
      int v;
      spec.word.clear();
      while (ls >> v) spec.word.push_back(v);
      if (spec.word.empty()) fail(origin, lineno, "field 'word' needs letters");
    } else if (key == "q_re") {
      q_re.rows.push_back(want_row());
    } else if (key == "q_im") {
      q_im.rows.push_back(want_row());
    } else if (key == "tensor_re") {
      t_re.rows.push_back(want_row());
    } else if (key == "tensor_im") {
      t_im.rows.push_back(want_row());
    } else if (key == "tol_residual") {
      spec.tol_residual = want_double();
      reject_trailing();
    } else if (key == "tol_psd") {
      spec.tol_psd = want_double();
      reject_trailing();
    } else {
      fail(origin, lineno, "unknown field '" + key + "'");
    }
  }
  if (!have_header) fail(origin, lineno, "empty document");
  if (!have_kind) fail(origin, lineno, "missing 'kind' field");

  auto assemble = [&](const RowAccum& re, const RowAccum& im, const char* what) -> std::optional<Matrix> {
    if (re.rows.empty() && im.rows.empty()) return std::nullopt;
    const std::size_t n = std::max(re.rows.size(), im.rows.size());
    if (!re.rows.empty() && re.rows.size() != n)
      throw error(errc::parse_error, origin + ": " + what + " real/imaginary row counts differ");
    if (!im.rows.empty() && im.rows.size() != n)
      throw error(errc::parse_error, origin + ": " + what + " real/imaginary row counts differ");
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      if (!re.rows.empty() && re.rows[r].size() != n)
        throw error(errc::parse_error, origin + ": " + what + " rows must be square");
      if (!im.rows.empty() && im.rows[r].size() != n)
        throw error(errc::parse_error, origin + ": " + what + " rows must be square");
      for (std::size_t c = 0; c < n; ++c) {
        const double vr = re.rows.empty() ? 0.0 : re.rows[r][c];
        const double vi = im.rows.empty() ? 0.0 : im.rows[r][c];
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cxd{vr, vi};
      }
    }
    return out;
  };
  spec.q = assemble(q_re, q_im, "q");
  spec.tensor = assemble(t_re, t_im, "tensor");
  validate(spec);
  return spec;
}

ScenarioSpec parse_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str(), path);
}

std::string serialize(const ScenarioSpec& spec) {
  std::ostringstream out;
  out << kHeader << "\n";
  out << "kind " << spec.kind << "\n";
  if (spec.group) out << "group " << *spec.group << "\n";
  if (spec.cox_rows)
    for (const auto& row : *spec.cox_rows) {
      out << "cox_row";
      for (int v : row) out << " " << v;
      out << "\n";
    }
  if (spec.d != 0) out << "d " << spec.d << "\n";
  out << "levels " << spec.levels << "\n";
  out << "seed " << spec.seed << "\n";
  if (spec.trials != 0) out << "trials " << spec.trials << "\n";
  if (spec.m != 0) out << "m " << spec.m << "\n";
  if (spec.aux_dim != 0) out << "aux_dim " << spec.aux_dim << "\n";
  if (spec.q_bound != 0.0) out << "q_bound " << fmt_double(spec.q_bound) << "\n";
  if (!spec.word.empty()) {
    out << "word";
    for (int v : spec.word) out << " " << v;
    out << "\n";
  }
  auto emit = [&out](const char* prefix, const Matrix& m, bool imag) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out << prefix;
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        out << " " << fmt_double(imag ? m(r, c).imag() : m(r, c).real());
      out << "\n";
    }
  };
  if (spec.q) {
    emit("q_re", *spec.q, false);
    emit("q_im", *spec.q, true);
  }
  if (spec.tensor) {
    emit("tensor_re", *spec.tensor, false);
    emit("tensor_im", *spec.tensor, true);
  }
  if (spec.tol_residual) out << "tol_residual " << fmt_double(*spec.tol_residual) << "\n";
  if (spec.tol_psd) out << "tol_psd " << fmt_double(*spec.tol_psd) << "\n";
  return out.str();
}

void validate(const ScenarioSpec& spec) {
  if (!known_kind(spec.kind)) throw error(errc::validation_error, "unknown scenario kind");
  const bool fock_kind = spec.kind == "fock" || spec.kind == "wick" || spec.kind == "opspace";
  if (spec.group && spec.cox_rows)
    throw error(errc::validation_error, "give either a group name or explicit cox_row lines, not both");
  if (fock_kind) {
    if (spec.d < 1) throw error(errc::validation_error, spec.kind + " scenarios need d >= 1");
    if (spec.q.has_value() == spec.tensor.has_value())
      throw error(errc::validation_error,
                  spec.kind + " scenarios need exactly one of q or tensor");
  }
  if (spec.kind == "coxeter" || spec.kind == "positivity" || spec.kind == "blocklength") {
    if (!spec.group && !spec.cox_rows)
      throw error(errc::validation_error, spec.kind + " scenarios need a group name or cox_row lines");
  }
  if (spec.q) {
    if (spec.d != 0 && spec.q->rows() != spec.d)
      throw error(errc::validation_error, "q matrix shape does not match d");
    fock::QSpec qs{static_cast<int>(spec.q->rows()), *spec.q};
    qs.validate();
  }
  if (spec.tensor) {
    if (spec.d < 1 || spec.tensor->rows() != static_cast<Eigen::Index>(spec.d) * spec.d)
      throw error(errc::validation_error, "tensor must be a d^2 x d^2 matrix");
  }
  for (int letter : spec.word)
    if (letter < 1 || (spec.d != 0 && letter > spec.d))
      throw error(errc::validation_error, "word letters must lie in 1..d");
}

ScenarioSpec gen_random(const std::string& kind, std::uint64_t seed, const GenParams& params) {
  if (!known_kind(kind)) throw error(errc::validation_error, "unsupported kind '" + kind + "'");
  ScenarioSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  spec.levels = params.levels;
  RandomStream rs(seed, 0x67656e);

  if (kind == "coxeter") {
    spec.group = params.group;
    return spec;
  }
  if (kind == "positivity" || kind == "blocklength") {
    spec.group = params.group;
    spec.d = params.d;
    if (kind == "positivity") {
      spec.q = random_hermitian(params.d, params.bound, rs);
      spec.q_bound = params.bound;
    }
    return spec;
  }
  spec.d = params.d;
  spec.q = random_hermitian(params.d, params.bound, rs);
  spec.q_bound = params.bound;
  if (kind == "wick") {
    const int len = params.word_length > 0 ? params.word_length : 4;
    for (int k = 0; k < len; ++k)
      spec.word.push_back(1 + static_cast<int>(rs.next() % static_cast<std::uint64_t>(params.d)));
  }
  if (kind == "opspace") {
    spec.trials = params.trials;
    spec.aux_dim = params.aux_dim;
    spec.m = params.m > 0 ? std::min(params.m, params.d) : params.d;
  }
  validate(spec);
  return spec;
}

}  // namespace coxfock::shell
