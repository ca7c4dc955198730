#pragma once

#include <string>

#include "u21/classifier.hpp"

namespace u21 {

// Line-oriented input:
//
//   [field]
//   p = 5
//   ramified = false
//   precision = 24          (optional)
//
//   [stratum]
//   type = D                (A, B, C, D or depth_zero)
//   basis = orthogonal      (or witt; orthogonal needs lambda)
//   lambda = 1, 1, 1
//   beta1 = (1*p^-3)*d      (scalars; a matrix [a, b; c, d] for β2 of type B
//   beta2 = (2*p^-1)*d       and for β of type A)
//   beta3 = 0
//   lattice = L1            (optional)
//   sigma_generic = true    (depth zero)
//
// '#' starts a comment. Errors carry the line and column of the offending token.
Stratum parse_stratum_file(const std::string& text);
std::string emit_stratum_file(const Stratum& s);

enum class OutputFormat { text, machine };
OutputFormat parse_output_format(const std::string& s);

std::string emit_report(const ClassificationReport& r, OutputFormat fmt);
// Inverse of emit_report(·, machine). Witness coordinates are read in f; the
// Newton limit of a certificate is not serialised.
ClassificationReport parse_report(const std::string& machine, const FieldPtr& f);
bool same_report(const ClassificationReport& a, const ClassificationReport& b);

}  // namespace u21
