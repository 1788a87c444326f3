#pragma once

// JSON state documents:
//   {"n_modes": n, "ordering": "xxpp", "hbar_vacuum_variance": 0.5,
//    "mean": [2n numbers], "cov": [[2n numbers] x 2n]}
// Only xxpp ordering and vacuum variance 0.5 are accepted.

#include "gstein/states.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace gstein {

/// Malformed or non-conforming state document. what() is
/// "<source>:<line>: <detail>".
class StateParseError : public std::invalid_argument {
 public:
  StateParseError(const std::string& source, int line, const std::string& detail);
  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

[[nodiscard]] GaussianState parse_state_json(std::string_view text,
                                             std::string_view source = "<memory>");
[[nodiscard]] GaussianState read_state_file(const std::string& path);

[[nodiscard]] nlohmann::ordered_json state_to_json(const GaussianState& state);
/// Pretty-printed document; doubles are written with round-trip precision.
[[nodiscard]] std::string serialize_state(const GaussianState& state);

[[nodiscard]] nlohmann::ordered_json matrix_to_json(const Matrix& m);
[[nodiscard]] nlohmann::ordered_json vector_to_json(const Vector& v);

}  // namespace gstein
