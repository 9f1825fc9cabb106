// Copyright 2026 The quboreg developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quboreg/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace quboreg::io {

namespace {

using nlohmann::json;

void check_finite_value(double v, std::size_t line = 0) {
  if (!std::isfinite(v)) {
    throw ParseError("coefficients must be finite (no NaN/Inf)", line);
  }
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double require_number(const json& j, const char* what) {
  if (!j.is_number()) {
    throw ParseError(std::string(what) + " must be a number");
  }
  const double v = j.get<double>();
  check_finite_value(v);
  return v;
}

VarId require_index(const json& j, const char* what) {
  if (!j.is_number_unsigned()) {
    throw ParseError(std::string(what) + " must be a non-negative integer");
  }
  return j.get<VarId>();
}

}  // namespace

QuboModel read_qubo_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("model must be a JSON object");
  if (!j.contains("num_vars")) throw ParseError("missing \"num_vars\"");

  const auto num_vars = static_cast<std::size_t>(
      require_index(j.at("num_vars"), "\"num_vars\""));
  const double offset =
      j.contains("offset") ? require_number(j.at("offset"), "\"offset\"") : 0.0;

  QuboModel::LinMap linear;
  if (j.contains("linear")) {
    for (const auto& entry : j.at("linear")) {
      if (!entry.is_array() || entry.size() != 2) {
        throw ParseError("linear entries must be [i, v] pairs");
      }
      const VarId i = require_index(entry[0], "linear index");
      const double v = require_number(entry[1], "linear coefficient");
      if (!linear.emplace(i, v).second) {
        throw ParseError("duplicate linear entry for variable " +
                         std::to_string(i));
      }
    }
  }

  QuboModel::QuadMap quadratic;
  if (j.contains("quadratic")) {
    for (const auto& entry : j.at("quadratic")) {
      if (!entry.is_array() || entry.size() != 3) {
        throw ParseError("quadratic entries must be [i, j, v] triples");
      }
      const VarId i = require_index(entry[0], "quadratic index");
      const VarId jdx = require_index(entry[1], "quadratic index");
      const double v = require_number(entry[2], "quadratic coefficient");
      if (i >= jdx) {
        throw ParseError("quadratic entries must satisfy i < j, got (" +
                         std::to_string(i) + ", " + std::to_string(jdx) + ")");
      }
      if (!quadratic.emplace(std::make_pair(i, jdx), v).second) {
        throw ParseError("duplicate quadratic entry (" + std::to_string(i) +
                         ", " + std::to_string(jdx) + ")");
      }
    }
  }

  try {
    return QuboModel(num_vars, std::move(quadratic), std::move(linear),
                     offset);
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

void write_qubo_json(const QuboModel& model, std::ostream& out) {
  json j;
  j["num_vars"] = model.num_vars();
  j["offset"] = model.offset();
  auto& lin = j["linear"] = json::array();
  for (const auto& [i, v] : model.linear()) {
    lin.push_back(json::array({i, v}));
  }
  auto& quad = j["quadratic"] = json::array();
  for (const auto& [key, v] : model.quadratic()) {
    quad.push_back(json::array({key.first, key.second, v}));
  }
  out << j.dump(2) << '\n';
}

QuboModel read_qubo_coord(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_n = false;
  bool have_offset = false;
  std::size_t num_vars = 0;
  double offset = 0.0;
  QuboModel::LinMap linear;
  QuboModel::QuadMap quadratic;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (first == "c") continue;
    if (first == "n") {
      if (have_n) throw ParseError("repeated n line", lineno);
      long long n = -1;
      if (!(ls >> n) || n < 0) {
        throw ParseError("n line requires a non-negative variable count",
                         lineno);
      }
      num_vars = static_cast<std::size_t>(n);
      have_n = true;
      continue;
    }
    if (first == "o") {
      if (have_offset) throw ParseError("repeated o line", lineno);
      if (!(ls >> offset)) throw ParseError("o line requires a value", lineno);
      check_finite_value(offset, lineno);
      have_offset = true;
      continue;
    }

    long long i = 0, j = 0;
    double v = 0.0;
    std::istringstream entry(line);
    if (!(entry >> i >> j >> v) || i < 0 || j < 0) {
      throw ParseError("expected `i j v` with non-negative indices", lineno);
    }
    std::string trailing;
    if (entry >> trailing) {
      throw ParseError("unexpected trailing token '" + trailing + "'", lineno);
    }
    check_finite_value(v, lineno);
    if (!have_n) {
      throw ParseError("coefficient line before the n header", lineno);
    }
    const auto a = static_cast<VarId>(i);
    const auto b = static_cast<VarId>(j);
    if (a == b) {
      if (!linear.emplace(a, v).second) {
        throw ParseError("duplicate linear entry for variable " +
                         std::to_string(a), lineno);
      }
    } else {
      const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      if (!quadratic.emplace(key, v).second) {
        throw ParseError("duplicate quadratic entry (" +
                         std::to_string(key.first) + ", " +
                         std::to_string(key.second) + ")", lineno);
      }
    }
  }
  if (!have_n) throw ParseError("missing n header line");

  try {
    return QuboModel(num_vars, std::move(quadratic), std::move(linear),
                     offset);
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

void write_qubo_coord(const QuboModel& model, std::ostream& out) {
  out << "c qubo coordinate format\n";
  out << "n " << model.num_vars() << '\n';
  out << "o " << fmt_double(model.offset()) << '\n';
  for (const auto& [i, v] : model.linear()) {
    out << i << ' ' << i << ' ' << fmt_double(v) << '\n';
  }
  for (const auto& [key, v] : model.quadratic()) {
    out << key.first << ' ' << key.second << ' ' << fmt_double(v) << '\n';
  }
}

ModelFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".json" ? ModelFormat::json : ModelFormat::coord;
}

QuboModel read_model_file(const std::filesystem::path& path) {
  return read_model_file(path, format_from_path(path));
}

QuboModel read_model_file(const std::filesystem::path& path,
                          ModelFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return format == ModelFormat::json ? read_qubo_json(in)
                                     : read_qubo_coord(in);
}

void write_model_file(const QuboModel& model,
                      const std::filesystem::path& path) {
  write_model_file(model, path, format_from_path(path));
}

void write_model_file(const QuboModel& model,
                      const std::filesystem::path& path, ModelFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  if (format == ModelFormat::json) {
    write_qubo_json(model, out);
  } else {
    write_qubo_coord(model, out);
  }
  if (!out) throw ParseError("write to " + path.string() + " failed");
}

namespace {

json affine_to_json(const AffineExpr& e) {
  json j;
  auto& terms = j["terms"] = json::array();
  for (const auto& [id, c] : e.terms()) {
    terms.push_back(json::array({id, c}));
  }
  j["constant"] = e.constant();
  return j;
}

AffineExpr affine_from_json(const json& j) {
  AffineExpr e(require_number(j.at("constant"), "\"constant\""));
  for (const auto& entry : j.at("terms")) {
    if (!entry.is_array() || entry.size() != 2) {
      throw ParseError("affine terms must be [id, c] pairs");
    }
    e += AffineExpr::variable(require_index(entry[0], "term id"),
                              require_number(entry[1], "term coefficient"));
  }
  return e;
}

json encoding_to_json(const FixedPointEncoding& enc) {
  json j;
  j["var_ids"] = enc.var_ids();
  j["lo"] = enc.lo();
  j["hi"] = enc.hi();
  return j;
}

FixedPointEncoding encoding_from_json(const json& j) {
  std::vector<VarId> ids;
  for (const auto& id : j.at("var_ids")) {
    ids.push_back(require_index(id, "encoding var id"));
  }
  return FixedPointEncoding(std::move(ids),
                            require_number(j.at("lo"), "\"lo\""),
                            require_number(j.at("hi"), "\"hi\""));
}

}  // namespace

void write_gadget_metadata(const GadgetExpansion& gadget, std::ostream& out) {
  json j;
  j["variant"] = to_string(gadget.variant);
  j["M"] = gadget.penalty.weight;
  j["input"] = affine_to_json(gadget.input);
  auto& aux = j["aux"] = json::object();
  for (const auto& [name, enc] : gadget.aux) {
    aux[name] = encoding_to_json(enc);
  }
  out << j.dump(2) << '\n';
}

GadgetMetadata read_gadget_metadata(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  try {
    GadgetMetadata meta{gadget_variant_from_string(j.at("variant")),
                        require_number(j.at("M"), "\"M\""),
                        affine_from_json(j.at("input")),
                        {}};
    for (const auto& [name, enc] : j.at("aux").items()) {
      meta.aux.emplace(name, encoding_from_json(enc));
    }
    return meta;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace quboreg::io
