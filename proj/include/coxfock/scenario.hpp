#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coxfock/certificate.hpp"
#include "coxfock/linalg.hpp"

namespace coxfock::shell {

// Line-oriented scenario document.  Complex data is stored as separate real
// and imaginary row lines; floats round-trip exactly through %.17g.
struct ScenarioSpec {
  std::string kind;  // coxeter | positivity | blocklength | fock | wick | opspace
  std::optional<std::string> group;                     // A_n, B_n, D_n, I2(m)
  std::optional<std::vector<std::vector<int>>> cox_rows;  // explicit Coxeter matrix
  int d = 0;
  int levels = 4;
  std::uint64_t seed = 0;
  int trials = 0;
  int m = 0;
  int aux_dim = 0;
  std::vector<int> word;  // 1-based letters in the document
  std::optional<Matrix> q;
  std::optional<Matrix> tensor;
  std::optional<double> tol_residual;
  std::optional<double> tol_psd;
  double q_bound = 0.0;  // recorded generation bound (informational)

  bool operator==(const ScenarioSpec& o) const;
};

ScenarioSpec parse_spec_text(const std::string& text, const std::string& origin = "<memory>");
ScenarioSpec parse_spec(const std::string& path);
std::string serialize(const ScenarioSpec& spec);

// Semantic validation beyond the grammar (named invariants).
void validate(const ScenarioSpec& spec);

struct GenParams {
  int d = 2;
  double bound = 0.9;
  int levels = 4;
  std::string group = "A_3";
  int trials = 20;
  int m = 0;
  int aux_dim = 2;
  int word_length = 4;
};

ScenarioSpec gen_random(const std::string& kind, std::uint64_t seed, const GenParams& params = {});

struct Report {
  ScenarioSpec spec;
  std::vector<Certificate> certs;
  std::vector<std::string> notes;
  bool pass = false;
  double seconds = 0.0;
  std::string version;
  std::optional<std::string> error_code;  // set when a module error aborted the run
  std::string error_message;
};

Report run(const ScenarioSpec& spec);

std::string render_text(const Report& report);
std::string render_structured(const Report& report);  // JSON

// 0 = all certificates pass, 1 = some fail, 2 = input/validation error
int exit_status(const Report& report);

}  // namespace coxfock::shell
