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

#ifndef QUBOREG_MODEL_IO_HPP_
#define QUBOREG_MODEL_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "quboreg/gadgets.hpp"
#include "quboreg/qubo.hpp"

namespace quboreg::io {

/// Malformed input; line() is 1-based and 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line != 0 ? "line " + std::to_string(line) + ": " +
                                           message
                                     : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// JSON model format:
//   {"num_vars": n, "linear": [[i, v], ...],
//    "quadratic": [[i, j, v], ...], "offset": v}
// Quadratic keys must already satisfy i < j; duplicates, NaN and Inf are
// rejected.
QuboModel read_qubo_json(std::istream& in);
void write_qubo_json(const QuboModel& model, std::ostream& out);

// Coordinate text format: optional `c` comment lines, then `n <num_vars>`,
// one `o <offset>` line, `i i v` lines for linear terms and `i j v` lines
// for quadratic terms. Writers emit ascending-index order; readers
// normalize i > j and reject i == j duplicates.
QuboModel read_qubo_coord(std::istream& in);
void write_qubo_coord(const QuboModel& model, std::ostream& out);

enum class ModelFormat { json, coord };

/// .json selects the JSON format, anything else the coordinate format.
ModelFormat format_from_path(const std::filesystem::path& path);

QuboModel read_model_file(const std::filesystem::path& path);
QuboModel read_model_file(const std::filesystem::path& path,
                          ModelFormat format);
void write_model_file(const QuboModel& model,
                      const std::filesystem::path& path);
void write_model_file(const QuboModel& model,
                      const std::filesystem::path& path, ModelFormat format);

/// The decoding recipe for a gadget model, emitted alongside the model file:
///   {"variant": str, "M": v, "input": {"terms": [[id, c], ...],
///    "constant": v}, "aux": {name: {"var_ids": [...], "lo": v, "hi": v}}}
struct GadgetMetadata {
  GadgetVariant variant;
  double penalty_weight;
  AffineExpr input;
  std::map<std::string, FixedPointEncoding> aux;
};

void write_gadget_metadata(const GadgetExpansion& gadget, std::ostream& out);
GadgetMetadata read_gadget_metadata(std::istream& in);

}  // namespace quboreg::io

#endif  // QUBOREG_MODEL_IO_HPP_
