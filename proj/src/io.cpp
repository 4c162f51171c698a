#include "lnnreg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "lnnreg/error.hpp"

namespace lnnreg::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::ParseError,
              std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

bool parse_size(std::string_view tok, std::size_t& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

Matrix parse_matrix_csv(std::string_view text, std::string_view source) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::optional<std::pair<std::size_t, std::size_t>> header;
  std::size_t header_line = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (rows == 0 && !header) {
        // Optional "# rows cols" header; other comments are ignored.
        std::istringstream hs{std::string(line.substr(1))};
        std::string r, c, extra;
        std::size_t nr = 0, nc = 0;
        if ((hs >> r >> c) && !(hs >> extra) && parse_size(r, nr) && parse_size(c, nc)) {
          header = std::make_pair(nr, nc);
          header_line = line_no;
        }
      }
      continue;
    }

    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto tok = trim(line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                              : comma - start));
      double x = 0.0;
      if (!parse_double(tok, x)) {
        parse_fail(source, line_no, "invalid number '" + std::string(tok) + "'");
      }
      values.push_back(x);
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      parse_fail(source, line_no,
                 "row has " + std::to_string(count) + " entries, expected " + std::to_string(cols));
    }
    ++rows;
  }

  if (rows == 0) parse_fail(source, line_no, "no matrix rows");
  if (header && (header->first != rows || header->second != cols)) {
    parse_fail(source, header_line,
               "header declares " + std::to_string(header->first) + "x" +
                   std::to_string(header->second) + " but data is " + std::to_string(rows) + "x" +
                   std::to_string(cols));
  }
  return Matrix(rows, cols, std::move(values));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << text;
}

Matrix read_matrix(const std::filesystem::path& path) {
  return parse_matrix_csv(read_text(path), path.string());
}

Vector as_vector(const Matrix& m, std::string_view source) {
  if (m.rows() == 1) return m.row(0);
  if (m.cols() == 1) return m.col(0);
  throw Error(ErrorCode::DimMismatch, std::string(source) + ": expected a single row or column, got " +
                                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

Vector read_vector(const std::filesystem::path& path) {
  return as_vector(read_matrix(path), path.string());
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw Error(ErrorCode::InternalError, "number formatting failed");
  return std::string(buf, ptr);
}

std::string format_row(const Vector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

std::string format_matrix(const Matrix& m, bool with_header) {
  std::string out;
  if (with_header) out += "# " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += format_row(m.row(i));
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

Vector vector_from_json(const nlohmann::json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": expected a non-empty number array");
  }
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + ": non-numeric entry");
    v.push_back(x.get<double>());
  }
  try {
    return Vector(std::move(v));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

Matrix matrix_from_json(const nlohmann::json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": expected an array of rows");
  }
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r, what));
  try {
    return Matrix::from_rows(rows);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

nlohmann::json model_to_json(const WeightModel& model) {
  nlohmann::json j;
  j["q"] = nlohmann::json::array();
  for (std::size_t i = 0; i < model.q.rows(); ++i) j["q"].push_back(model.q.row(i).as_std());
  j["bias"] = model.bias ? nlohmann::json(model.bias->as_std()) : nlohmann::json(nullptr);
  j["method_tag"] = model.method_tag;
  return j;
}

WeightModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("q")) {
    throw Error(ErrorCode::ParseError, "model: missing key 'q'");
  }
  WeightModel model;
  model.q = matrix_from_json(j.at("q"), "model.q");
  if (j.contains("bias") && !j.at("bias").is_null()) {
    model.bias = vector_from_json(j.at("bias"), "model.bias");
    if (model.bias->size() != model.q.rows()) {
      throw Error(ErrorCode::ParseError, "model.bias length does not match the rows of q");
    }
  }
  if (j.contains("method_tag")) {
    if (!j.at("method_tag").is_string()) {
      throw Error(ErrorCode::ParseError, "model.method_tag must be a string");
    }
    model.method_tag = j.at("method_tag").get<std::string>();
  }
  return model;
}

}  // namespace lnnreg::io
