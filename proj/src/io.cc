// Copyright 2026 The conicpd Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "conicpd/io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace conicpd {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Non-finite values are written as strings; JSON has no infinity.
Json NumberToJson(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json VectorToJson(std::span<const double> v) {
  Json out = Json::array();
  for (double e : v) out.push_back(NumberToJson(e));
  return out;
}

Json ConesToJson(const std::vector<Cone>& cones) {
  Json out = Json::array();
  for (const Cone& cone : cones) {
    Json entry;
    entry["kind"] = std::string(ConeKindName(cone.kind));
    entry["dim"] = cone.dim;
    out.push_back(std::move(entry));
  }
  return out;
}

const Json& Field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InstanceError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InstanceError(where + ": missing field '" + key + "'");
  return *it;
}

double NumberFromJson(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw InstanceError(where + ": unexpected string '" + s + "'");
  }
  throw InstanceError(where + ": expected a number");
}

Vector VectorFromJson(const Json& obj, const char* key) {
  const Json& arr = Field(obj, key, "instance");
  if (!arr.is_array()) throw InstanceError(std::string(key) + ": expected an array");
  Vector out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(NumberFromJson(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Index IndexFromJson(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InstanceError(where + ": expected an integer");
  return v.get<Index>();
}

std::vector<Cone> ConesFromJson(const Json& obj, const char* key) {
  const Json& arr = Field(obj, key, "instance");
  if (!arr.is_array()) throw InstanceError(std::string(key) + ": expected an array");
  std::vector<Cone> out;
  for (std::size_t b = 0; b < arr.size(); ++b) {
    const std::string where = std::string(key) + "[" + std::to_string(b) + "]";
    const Json& kind = Field(arr[b], "kind", where);
    if (!kind.is_string()) throw InstanceError(where + ".kind: expected a string");
    const std::string name = kind.get<std::string>();
    const std::optional<ConeKind> parsed = ParseConeKind(name);
    if (!parsed) {
      throw InstanceError(where + ".kind: unknown cone kind '" + name + "'");
    }
    out.push_back({*parsed, IndexFromJson(Field(arr[b], "dim", where), where + ".dim")});
  }
  return out;
}

ConicProgram Checked(ConicProgram program) {
  const std::vector<std::string> violations = Validate(program);
  if (!violations.empty()) {
    std::string message = "invalid instance:";
    for (const std::string& v : violations) message += " " + v + ";";
    throw InstanceError(message);
  }
  return program;
}

// ---------------------------------------------------------------------------
// CBF subset.

class CbfLines {
 public:
  explicit CbfLines(std::istream& in) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      lines_.push_back({number, line.substr(first)});
    }
  }

  bool Done() const { return next_ >= lines_.size(); }

  // Next non-blank line split into tokens.
  std::vector<std::string> Tokens() {
    if (Done()) throw InstanceError("cbf: unexpected end of file");
    current_ = lines_[next_].first;
    std::istringstream ss(lines_[next_++].second);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }

  int line() const { return current_; }

  [[noreturn]] void Fail(const std::string& what) const {
    throw InstanceError("cbf line " + std::to_string(current_) + ": " + what);
  }

 private:
  std::vector<std::pair<int, std::string>> lines_;
  std::size_t next_ = 0;
  int current_ = 0;
};

Index ParseIndex(CbfLines& lines, const std::string& tok) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) lines.Fail("bad integer '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    lines.Fail("bad integer '" + tok + "'");
  }
}

double ParseReal(CbfLines& lines, const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) lines.Fail("bad number '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    lines.Fail("bad number '" + tok + "'");
  }
}

struct CbfBlock {
  std::string code;
  Index dim = 0;
};

std::vector<CbfBlock> ReadCbfCones(CbfLines& lines, Index* total) {
  std::vector<std::string> head = lines.Tokens();
  if (head.size() != 2) lines.Fail("expected '<size> <blocks>'");
  *total = ParseIndex(lines, head[0]);
  const Index count = ParseIndex(lines, head[1]);
  std::vector<CbfBlock> blocks;
  Index sum = 0;
  for (Index k = 0; k < count; ++k) {
    std::vector<std::string> t = lines.Tokens();
    if (t.size() != 2) lines.Fail("expected '<cone> <dim>'");
    const std::string& code = t[0];
    static constexpr std::string_view kKnown[] = {"F", "L+", "L-", "L=", "Q",
                                                  "QR", "EXP", "EXP*"};
    if (std::find(std::begin(kKnown), std::end(kKnown), code) == std::end(kKnown)) {
      lines.Fail("unsupported cone '" + code + "'");
    }
    blocks.push_back({code, ParseIndex(lines, t[1])});
    if (blocks.back().dim < 1) lines.Fail("cone dimension must be positive");
    sum += blocks.back().dim;
  }
  if (sum != *total) lines.Fail("cone dimensions do not add up to the declared size");
  return blocks;
}

bool IsScalarCone(const std::string& code) {
  return code == "F" || code == "L+" || code == "L-" || code == "L=";
}

ConeKind VectorConeKind(const std::string& code) {
  if (code == "Q") return ConeKind::kSecondOrder;
  if (code == "QR") return ConeKind::kRotatedSecondOrder;
  if (code == "EXP") return ConeKind::kExponential;
  return ConeKind::kDualExponential;
}

// Position of coordinate k inside a block after conversion.
Index WithinBlock(const std::string& code, Index k) {
  return (code == "EXP" || code == "EXP*") ? 2 - k : k;
}

}  // namespace

std::string InstanceToJson(const ConicProgram& program) {
  Json doc;
  doc["n1"] = program.n1();
  doc["n2"] = program.n2();
  doc["m"] = program.m();
  doc["c"] = VectorToJson(program.c);
  doc["h"] = VectorToJson(program.h);
  doc["l"] = VectorToJson(program.l);
  doc["u"] = VectorToJson(program.u);
  doc["primal_cones"] = ConesToJson(program.primal_cones);
  doc["dual_cones"] = ConesToJson(program.dual_cones);
  Json rows = Json::array();
  Json cols = Json::array();
  Json vals = Json::array();
  for (const Triplet& t : program.G.ToTriplets()) {
    rows.push_back(t.row);
    cols.push_back(t.col);
    vals.push_back(t.value);
  }
  doc["G"]["rows"] = std::move(rows);
  doc["G"]["cols"] = std::move(cols);
  doc["G"]["vals"] = std::move(vals);
  return doc.dump(2) + "\n";
}

ConicProgram InstanceFromJson(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InstanceError(std::string("json: ") + e.what());
  }
  if (!doc.is_object()) throw InstanceError("json: top level must be an object");
  ConicProgram program;
  const Index n1 = IndexFromJson(Field(doc, "n1", "instance"), "n1");
  const Index n2 = IndexFromJson(Field(doc, "n2", "instance"), "n2");
  const Index m = IndexFromJson(Field(doc, "m", "instance"), "m");
  if (n1 < 0 || n2 < 0 || m < 0) throw InstanceError("negative dimension");
  program.c = VectorFromJson(doc, "c");
  program.h = VectorFromJson(doc, "h");
  program.l = VectorFromJson(doc, "l");
  program.u = VectorFromJson(doc, "u");
  if (static_cast<Index>(program.c.size()) != n1 + n2) {
    throw InstanceError("c: length " + std::to_string(program.c.size()) +
                        ", expected n1 + n2 = " + std::to_string(n1 + n2));
  }
  if (static_cast<Index>(program.h.size()) != m) {
    throw InstanceError("h: length " + std::to_string(program.h.size()) +
                        ", expected m = " + std::to_string(m));
  }
  if (static_cast<Index>(program.l.size()) != n1 ||
      static_cast<Index>(program.u.size()) != n1) {
    throw InstanceError("l, u: expected length n1 = " + std::to_string(n1));
  }
  program.primal_cones = ConesFromJson(doc, "primal_cones");
  program.dual_cones = ConesFromJson(doc, "dual_cones");
  const Json& g = Field(doc, "G", "instance");
  const Json& rows = Field(g, "rows", "G");
  const Json& cols = Field(g, "cols", "G");
  const Json& vals = Field(g, "vals", "G");
  if (!rows.is_array() || !cols.is_array() || !vals.is_array() ||
      rows.size() != cols.size() || rows.size() != vals.size()) {
    throw InstanceError("G: rows, cols and vals must be arrays of equal length");
  }
  std::vector<Triplet> entries;
  entries.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string where = "G[" + std::to_string(k) + "]";
    entries.push_back({IndexFromJson(rows[k], where + ".row"),
                       IndexFromJson(cols[k], where + ".col"),
                       NumberFromJson(vals[k], where + ".val")});
  }
  try {
    program.G = SparseMatrix::FromTriplets(m, n1 + n2, entries);
  } catch (const std::invalid_argument& e) {
    throw InstanceError(std::string("G: ") + e.what());
  }
  return Checked(std::move(program));
}

ConicProgram ReadCbf(std::istream& in) {
  CbfLines lines(in);
  bool have_var = false;
  bool have_con = false;
  Index nvar = 0;
  Index ncon = 0;
  std::vector<CbfBlock> var_blocks;
  std::vector<CbfBlock> con_blocks;
  std::vector<std::pair<Index, double>> obj;
  std::vector<Triplet> acoord;
  std::vector<std::pair<Index, double>> bcoord;

  auto read_count = [&lines]() {
    std::vector<std::string> t = lines.Tokens();
    if (t.size() != 1) lines.Fail("expected an entry count");
    return ParseIndex(lines, t[0]);
  };

  while (!lines.Done()) {
    std::vector<std::string> t = lines.Tokens();
    const std::string key = t[0];
    if (t.size() != 1) lines.Fail("unexpected tokens after '" + key + "'");
    if (key == "VER") {
      const Index version = read_count();
      if (version < 1 || version > 4) lines.Fail("unsupported version");
    } else if (key == "OBJSENSE") {
      std::vector<std::string> s = lines.Tokens();
      if (s.size() != 1) lines.Fail("expected MIN or MAX");
      if (s[0] != "MIN") lines.Fail("unsupported objective sense '" + s[0] + "'");
    } else if (key == "VAR") {
      var_blocks = ReadCbfCones(lines, &nvar);
      have_var = true;
    } else if (key == "CON") {
      con_blocks = ReadCbfCones(lines, &ncon);
      have_con = true;
    } else if (key == "OBJACOORD") {
      const Index count = read_count();
      for (Index k = 0; k < count; ++k) {
        std::vector<std::string> e = lines.Tokens();
        if (e.size() != 2) lines.Fail("expected '<var> <value>'");
        obj.push_back({ParseIndex(lines, e[0]), ParseReal(lines, e[1])});
      }
    } else if (key == "ACOORD") {
      const Index count = read_count();
      for (Index k = 0; k < count; ++k) {
        std::vector<std::string> e = lines.Tokens();
        if (e.size() != 3) lines.Fail("expected '<con> <var> <value>'");
        acoord.push_back({ParseIndex(lines, e[0]), ParseIndex(lines, e[1]),
                          ParseReal(lines, e[2])});
      }
    } else if (key == "BCOORD") {
      const Index count = read_count();
      for (Index k = 0; k < count; ++k) {
        std::vector<std::string> e = lines.Tokens();
        if (e.size() != 2) lines.Fail("expected '<con> <value>'");
        bcoord.push_back({ParseIndex(lines, e[0]), ParseReal(lines, e[1])});
      }
    } else if (key == "INT") {
      lines.Fail("integer variables are not supported; relax them before reading");
    } else if (key == "PSDVAR" || key == "PSDCON" || key == "FCOORD" ||
               key == "HCOORD" || key == "DCOORD") {
      lines.Fail("semidefinite records are not supported ('" + key + "')");
    } else if (key == "OBJBCOORD") {
      lines.Fail("objective constants are not supported ('OBJBCOORD')");
    } else {
      lines.Fail("unsupported record '" + key + "'");
    }
  }
  if (!have_var || nvar == 0) throw InstanceError("cbf: empty program (no VAR section)");

  // Column layout: scalar-cone variables first, vector cones after.
  ConicProgram program;
  std::vector<Index> col_of(static_cast<std::size_t>(nvar));
  {
    Index next = 0;
    Index offset = 0;
    for (const CbfBlock& b : var_blocks) {
      if (IsScalarCone(b.code)) {
        const double lo = (b.code == "L+" || b.code == "L=") ? 0.0 : -kInf;
        const double hi = (b.code == "L-" || b.code == "L=") ? 0.0 : kInf;
        for (Index k = 0; k < b.dim; ++k) {
          col_of[offset + k] = next++;
          program.l.push_back(lo);
          program.u.push_back(hi);
        }
      }
      offset += b.dim;
    }
    offset = 0;
    for (const CbfBlock& b : var_blocks) {
      if (!IsScalarCone(b.code)) {
        for (Index k = 0; k < b.dim; ++k) col_of[offset + k] = next + WithinBlock(b.code, k);
        next += b.dim;
        program.primal_cones.push_back({VectorConeKind(b.code), b.dim});
      }
      offset += b.dim;
    }
  }

  // Row layout: free rows dropped, L- rows negated, exponential rows
  // reversed; everything else in order.
  std::vector<Index> row_of(static_cast<std::size_t>(ncon), -1);
  std::vector<double> row_sign(static_cast<std::size_t>(ncon), 1.0);
  Index nrows = 0;
  {
    Index offset = 0;
    for (const CbfBlock& b : con_blocks) {
      if (b.code != "F") {
        for (Index k = 0; k < b.dim; ++k) {
          row_of[offset + k] = nrows + WithinBlock(b.code, k);
          if (b.code == "L-") row_sign[offset + k] = -1.0;
        }
        nrows += b.dim;
        ConeKind kind = ConeKind::kZero;
        if (b.code == "L+" || b.code == "L-") {
          kind = ConeKind::kNonNeg;
        } else if (b.code != "L=") {
          kind = VectorConeKind(b.code);
        }
        if (!program.dual_cones.empty() && program.dual_cones.back().kind == kind &&
            (kind == ConeKind::kZero || kind == ConeKind::kNonNeg)) {
          program.dual_cones.back().dim += b.dim;
        } else {
          program.dual_cones.push_back({kind, b.dim});
        }
      }
      offset += b.dim;
    }
  }
  if (!have_con && (!acoord.empty() || !bcoord.empty())) {
    throw InstanceError("cbf: ACOORD/BCOORD without a CON section");
  }

  program.c.assign(static_cast<std::size_t>(nvar), 0.0);
  for (const auto& [j, v] : obj) {
    if (j < 0 || j >= nvar) throw InstanceError("cbf: OBJACOORD index out of range");
    program.c[col_of[j]] += v;
  }
  program.h.assign(static_cast<std::size_t>(nrows), 0.0);
  for (const auto& [i, v] : bcoord) {
    if (i < 0 || i >= ncon) throw InstanceError("cbf: BCOORD index out of range");
    if (row_of[i] >= 0) program.h[row_of[i]] -= row_sign[i] * v;
  }
  std::vector<Triplet> entries;
  for (const Triplet& t : acoord) {
    if (t.row < 0 || t.row >= ncon || t.col < 0 || t.col >= nvar) {
      throw InstanceError("cbf: ACOORD index out of range");
    }
    if (row_of[t.row] >= 0) {
      entries.push_back({row_of[t.row], col_of[t.col], row_sign[t.row] * t.value});
    }
  }
  program.G = SparseMatrix::FromTriplets(nrows, nvar, entries);
  return Checked(std::move(program));
}

ConicProgram ReadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open '" + path + "'");
  const bool cbf = path.size() >= 4 && path.compare(path.size() - 4, 4, ".cbf") == 0;
  if (cbf) return ReadCbf(in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return InstanceFromJson(buffer.str());
}

void WriteInstance(const ConicProgram& program, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write '" + path + "'");
  out << InstanceToJson(program);
  if (!out) throw InstanceError("write failed for '" + path + "'");
}

std::string ReportToJson(const SolveReport& report, bool include_solution) {
  Json doc;
  doc["status"] = std::string(StatusName(report.status));
  doc["primal_obj"] = NumberToJson(report.residuals.primal_obj);
  doc["dual_obj"] = NumberToJson(report.residuals.dual_obj);
  doc["err_p"] = NumberToJson(report.residuals.err_p);
  doc["err_d"] = NumberToJson(report.residuals.err_d);
  doc["err_gap"] = NumberToJson(report.residuals.err_gap);
  doc["iterations"] = report.iterations;
  doc["restarts"] = report.restarts;
  doc["spmv_count"] = report.spmv_count;
  doc["projection_count"] = report.projection_count;
  doc["wall_seconds"] = report.wall_seconds;
  doc["anchor_kkt"] = NumberToJson(report.anchor_residuals.Max());
  doc["final_eta"] = NumberToJson(report.final_eta);
  doc["final_omega"] = NumberToJson(report.final_omega);
  const SolverParams& p = report.params;
  Json params;
  params["tol"] = p.tol;
  params["max_iters"] = p.max_iters;
  params["time_limit"] = p.time_limit;
  params["max_spmv"] = p.max_spmv;
  params["eta0"] = p.eta0;
  params["omega0"] = p.omega0;
  params["reflection_beta_max"] = p.reflection_beta_max;
  params["reflection_window"] = p.reflection_window;
  params["beta_sufficient"] = p.beta_sufficient;
  params["beta_necessary"] = p.beta_necessary;
  params["artificial_fraction"] = p.artificial_fraction;
  params["primal_weight_smoothing"] = p.primal_weight_smoothing;
  params["step_shrink"] = p.step_shrink;
  params["step_growth"] = p.step_growth;
  params["max_step_rejects"] = p.max_step_rejects;
  params["check_interval"] = p.check_interval;
  params["scaling"] = p.scaling;
  params["ruiz_iters"] = p.scaling_options.ruiz_iters;
  params["pock_chambolle"] = p.scaling_options.pock_chambolle;
  params["exp_uniform"] = p.scaling_options.exp_uniform;
  params["vanilla_pdhg"] = p.vanilla_pdhg;
  doc["params"] = std::move(params);
  if (include_solution) {
    doc["x"] = VectorToJson(report.x);
    doc["y"] = VectorToJson(report.y);
  }
  return doc.dump(2) + "\n";
}

}  // namespace conicpd
