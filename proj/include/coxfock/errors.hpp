#pragma once

#include <stdexcept>
#include <string>

namespace coxfock {

enum class errc {
  invalid_argument,
  invalid_matrix,
  budget_exceeded,
  dimension_mismatch,
  parse_error,
  validation_error,
  numeric_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::invalid_matrix: return "invalid_matrix";
    case errc::budget_exceeded: return "budget_exceeded";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::parse_error: return "parse_error";
    case errc::validation_error: return "validation_error";
    case errc::numeric_error: return "numeric_error";
  }
  return "unknown";
}

struct error : std::runtime_error {
  errc code;
  error(errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

}  // namespace coxfock
