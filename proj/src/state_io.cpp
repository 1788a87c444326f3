#include "gstein/state_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace gstein {
namespace {

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line of the first occurrence of "key"; line 1 if absent.
int line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 1 : line_of_offset(text, pos);
}

struct Context {
  std::string_view text;
  std::string source;

  [[noreturn]] void fail(std::string_view key, const std::string& detail) const {
    throw StateParseError(source, line_of_key(text, key), detail);
  }
};

double number_at(const nlohmann::json& j, const Context& ctx, std::string_view key,
                 const std::string& where) {
  if (!j.is_number()) ctx.fail(key, where + " must be a number");
  return j.get<double>();
}

}  // namespace

StateParseError::StateParseError(const std::string& source, int line, const std::string& detail)
    : std::invalid_argument(source + ":" + std::to_string(line) + ": " + detail), line_(line) {}

GaussianState parse_state_json(std::string_view text, std::string_view source) {
  Context ctx{text, std::string(source)};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw StateParseError(ctx.source, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1),
                          std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) ctx.fail("", "state document must be a JSON object");

  for (const char* key : {"n_modes", "ordering", "hbar_vacuum_variance", "mean", "cov"}) {
    if (!doc.contains(key)) ctx.fail("", std::string("missing required field \"") + key + "\"");
  }
  const auto& ordering = doc["ordering"];
  if (!ordering.is_string() || ordering.get<std::string>() != "xxpp") {
    ctx.fail("ordering", "unsupported quadrature ordering " + ordering.dump() +
                             " (only \"xxpp\" is accepted; convert xpxp data first)");
  }
  const double vacuum = number_at(doc["hbar_vacuum_variance"], ctx, "hbar_vacuum_variance",
                                  "hbar_vacuum_variance");
  if (vacuum != 0.5) {
    ctx.fail("hbar_vacuum_variance", "unsupported convention hbar_vacuum_variance = " +
                                         doc["hbar_vacuum_variance"].dump() + " (expected 0.5)");
  }
  const auto& n_json = doc["n_modes"];
  if (!n_json.is_number_integer() || n_json.get<long long>() < 1) {
    ctx.fail("n_modes", "n_modes must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(n_json.get<long long>());
  const Eigen::Index dim = 2 * n;

  const auto& mean_json = doc["mean"];
  if (!mean_json.is_array() || static_cast<Eigen::Index>(mean_json.size()) != dim) {
    ctx.fail("mean", "mean must be an array of " + std::to_string(dim) + " numbers");
  }
  Vector mean(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    mean(i) = number_at(mean_json[i], ctx, "mean", "mean[" + std::to_string(i) + "]");
  }

  const auto& cov_json = doc["cov"];
  if (!cov_json.is_array() || static_cast<Eigen::Index>(cov_json.size()) != dim) {
    ctx.fail("cov", "cov must be an array of " + std::to_string(dim) + " rows");
  }
  Matrix cov(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& row = cov_json[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      ctx.fail("cov", "cov row " + std::to_string(i) + " must have " + std::to_string(dim) +
                          " entries");
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      cov(i, j) = number_at(row[j], ctx, "cov",
                            "cov[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  try {
    return {mean, cov};
  } catch (const std::invalid_argument& e) {
    ctx.fail("cov", e.what());
  }
}

GaussianState read_state_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StateParseError(path, 0, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_state_json(buffer.str(), path);
}

nlohmann::ordered_json vector_to_json(const Vector& v) {
  auto out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  auto out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::ordered_json state_to_json(const GaussianState& state) {
  nlohmann::ordered_json doc;
  doc["n_modes"] = state.n_modes();
  doc["ordering"] = "xxpp";
  doc["hbar_vacuum_variance"] = 0.5;
  doc["mean"] = vector_to_json(state.mean());
  doc["cov"] = matrix_to_json(state.cov());
  return doc;
}

std::string serialize_state(const GaussianState& state) { return state_to_json(state).dump(2) + "\n"; }

}  // namespace gstein
