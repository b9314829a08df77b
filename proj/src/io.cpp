#include "prabhakar/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace prabhakar {

using nlohmann::json;

Array parse_grid(const std::string& text) {
  const auto bad = [&text]() {
    throw std::invalid_argument("grid: expected <number> or start:stop:step, got '" +
                                text + "'");
  };
  auto to_double = [&bad](const std::string& part) {
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (end == part.c_str() || *end != '\0' || !std::isfinite(v)) bad();
    return v;
  };

  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);

  if (parts.size() == 1) {
    Array g(1);
    g[0] = to_double(parts[0]);
    return g;
  }
  if (parts.size() != 3) bad();
  const double start = to_double(parts[0]);
  const double stop = to_double(parts[1]);
  const double step = to_double(parts[2]);
  if (!(step > 0.0) || stop < start - 0.5 * step) bad();
  std::vector<double> vals;
  for (double v = start; v <= stop + 0.5 * step; v += step) vals.push_back(v);
  Array g(Eigen::Index(vals.size()));
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = vals[i];
  return g;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::string out = table.header + "\n";
  if (table.columns.empty()) return out;
  const Eigen::Index rows = table.columns.front().size();
  for (const Array& c : table.columns) {
    if (c.size() != rows) {
      throw std::invalid_argument("to_csv: column length mismatch");
    }
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += format_number(table.columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::invalid_argument("write failed: " + path);
}

SampledFunction read_xy_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open: " + path);
  std::vector<double> xs, ys;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument(path + ": expected two comma-separated columns");
    }
    char* end = nullptr;
    const std::string c0 = line.substr(0, comma);
    const std::string c1 = line.substr(comma + 1);
    const double x = std::strtod(c0.c_str(), &end);
    if (end == c0.c_str()) continue;  // header row
    const double y = std::strtod(c1.c_str(), &end);
    xs.push_back(x);
    ys.push_back(y);
  }
  if (xs.size() < 2) {
    throw std::invalid_argument(path + ": needs at least 2 data rows");
  }
  Array nodes(Eigen::Index(xs.size())), values(Eigen::Index(ys.size()));
  for (size_t i = 0; i < xs.size(); ++i) {
    nodes[Eigen::Index(i)] = xs[i];
    values[Eigen::Index(i)] = ys[i];
  }
  return SampledFunction(std::move(nodes), std::move(values));
}

namespace {

json parse_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return j;
}

double need_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw std::invalid_argument(std::string("missing numeric field '") + key +
                                "'");
  }
  return j[key].get<double>();
}

Interval need_interval(const json& j) {
  if (!j.contains("interval") || !j["interval"].is_array() ||
      j["interval"].size() != 2) {
    throw std::invalid_argument("missing two-element 'interval'");
  }
  return {j["interval"][0].get<double>(), j["interval"][1].get<double>()};
}

PsiMap psi_from_json(const json& spec, Interval iv) {
  if (!spec.contains("psi") || !spec["psi"].is_object() ||
      !spec["psi"].contains("kind")) {
    throw std::invalid_argument("missing psi description with 'kind'");
  }
  const json& p = spec["psi"];
  const std::string kind = p["kind"].get<std::string>();
  if (kind == "identity") return PsiMap::identity(iv);
  if (kind == "affine") {
    return PsiMap::affine(need_number(p, "c0"), need_number(p, "c1"), iv);
  }
  if (kind == "log") return PsiMap::log(iv);
  if (kind == "power") return PsiMap::power(need_number(p, "sigma"), iv);
  if (kind == "exp") return PsiMap::exp(iv);
  throw std::invalid_argument("unknown psi kind '" + kind + "'");
}

OperatorSpec operator_from(const json& j, const json& op_fields) {
  const MLParams ml(need_number(op_fields, "rho"),
                    need_number(op_fields, "alpha"),
                    need_number(op_fields, "gamma"),
                    need_number(op_fields, "omega"));
  return OperatorSpec(ml, psi_from_json(j, need_interval(j)));
}

Forcing forcing_from(const json& j) {
  if (!j.contains("forcing")) return ZeroForcing{};
  const json& f = j["forcing"];
  if (!f.is_object() || !f.contains("type")) {
    throw std::invalid_argument("forcing needs a 'type'");
  }
  const std::string type = f["type"].get<std::string>();
  if (type == "zero") return ZeroForcing{};
  if (type == "power") {
    return PowerForcing{need_number(f, "c"), need_number(f, "delta")};
  }
  if (type == "ml") {
    return MLForcing{need_number(f, "xi"), need_number(f, "mu"),
                     need_number(f, "sigma")};
  }
  throw std::invalid_argument("unknown forcing type '" + type + "'");
}

CauchyProblem problem_from(const json& j) {
  if (!j.contains("op") || !j["op"].is_object()) {
    throw std::invalid_argument("missing 'op' object");
  }
  OperatorSpec op = operator_from(j, j["op"]);
  if (!j.contains("b") || !j["b"].is_array() || j["b"].empty()) {
    throw std::invalid_argument("missing nonempty 'b' array");
  }
  std::vector<double> b;
  for (const auto& v : j["b"]) {
    if (!v.is_number()) throw std::invalid_argument("'b' must hold numbers");
    b.push_back(v.get<double>());
  }
  return CauchyProblem(need_number(j, "beta"), need_number(j, "lambda"),
                       std::move(op), std::move(b), forcing_from(j));
}

// Wrong JSON value types (string where a number belongs, ...) raise
// library-specific exceptions; callers see a uniform invalid_argument.
template <typename Fn>
auto guard_json(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

}  // namespace

OperatorSpec load_operator(const std::string& path) {
  const json j = parse_json_file(path);
  return guard_json([&] { return operator_from(j, j); });
}

CauchyProblem load_problem(const std::string& path) {
  const json j = parse_json_file(path);
  return guard_json([&] { return problem_from(j); });
}

OperatorSpec operator_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(e.what());
  }
  return guard_json([&] { return operator_from(j, j); });
}

CauchyProblem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(e.what());
  }
  return guard_json([&] { return problem_from(j); });
}

}  // namespace prabhakar
