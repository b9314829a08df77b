#pragma once

// File formats used by the CLI: grid strings, CSV with 17-significant-digit
// numbers and \n line endings, and the problem/operator JSON schemas.

#include <string>
#include <vector>

#include "prabhakar/cauchy.hpp"

namespace prabhakar {

// "start:stop:step" -> inclusive grid (stop kept when within half a step);
// a bare number yields a single-point grid.  Throws std::invalid_argument.
Array parse_grid(const std::string& text);

// %.17g rendering used for every CSV number; round-trips through strtod.
std::string format_number(double v);

// One CSV table: header row + equal-length columns.
struct CsvTable {
  std::string header;
  std::vector<Array> columns;
};
std::string to_csv(const CsvTable& table);
void write_file(const std::string& path, const std::string& content);

// Two-column CSV (header row skipped if present) -> sampled function.
SampledFunction read_xy_csv(const std::string& path);

// Operator description:
//   {"rho":1.0,"alpha":0.5,"gamma":1.0,"omega":0.3,
//    "psi":{"kind":"identity"},"interval":[0,1]}
// psi kinds: identity | affine (c0, c1) | log | power (sigma) | exp.
OperatorSpec load_operator(const std::string& path);

// Cauchy problem description:
//   {"beta":0.7,"lambda":0.4,
//    "op":{"rho":1.0,"alpha":0.5,"gamma":1.0,"omega":0.3},
//    "psi":{"kind":"identity"},"interval":[0,1],"b":[1.0],
//    "forcing":{"type":"ml","xi":1.0,"mu":1.2,"sigma":1.0}}
// forcing types: zero | power (c, delta) | ml (xi, mu, sigma).
CauchyProblem load_problem(const std::string& path);

// Parsers for in-memory JSON text (what the load_* functions defer to).
OperatorSpec operator_from_json(const std::string& text);
CauchyProblem problem_from_json(const std::string& text);

}  // namespace prabhakar
