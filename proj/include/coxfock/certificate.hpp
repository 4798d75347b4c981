#pragma once

#include <string>
#include <vector>

namespace coxfock {

// A verdict record for one verified identity or inequality.  `value` is a
// residual (pass iff value <= tolerance) or an extremal eigenvalue
// (at_least = true, pass iff value >= tolerance).
struct Certificate {
  std::string label;
  double value = 0.0;
  double tolerance = 0.0;
  bool at_least = false;
  bool pass = false;
  std::string context;
};

inline Certificate residual_cert(std::string label, double value, double tol,
                                 std::string context = {}) {
  Certificate c;
  c.label = std::move(label);
  c.value = value;
  c.tolerance = tol;
  c.at_least = false;
  c.pass = value <= tol;
  c.context = std::move(context);
  return c;
}

inline Certificate min_eig_cert(std::string label, double min_eig, double threshold,
                                std::string context = {}) {
  Certificate c;
  c.label = std::move(label);
  c.value = min_eig;
  c.tolerance = threshold;
  c.at_least = true;
  c.pass = min_eig >= threshold;
  c.context = std::move(context);
  return c;
}

inline bool all_pass(const std::vector<Certificate>& certs) {
  for (const auto& c : certs)
    if (!c.pass) return false;
  return true;
}

}  // namespace coxfock
