#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lnnreg/lnn.hpp"
#include "lnnreg/matrix.hpp"

namespace lnnreg::io {

/// Parses matrix CSV: one row per line, comma-separated decimals. Blank lines
/// and lines starting with '#' are skipped, except an optional leading
/// `# rows cols` header, which is checked against the data. Throws
/// Error{ParseError} naming the offending line.
Matrix parse_matrix_csv(std::string_view text, std::string_view source = "<input>");

Matrix read_matrix(const std::filesystem::path& path);

/// A matrix file holding a single row or a single column.
Vector read_vector(const std::filesystem::path& path);
Vector as_vector(const Matrix& m, std::string_view source = "<input>");

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

std::string format_row(const Vector& v);
std::string format_matrix(const Matrix& m, bool with_header = false);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

nlohmann::json model_to_json(const WeightModel& model);
/// Throws Error{ParseError} on missing keys or malformed values.
WeightModel model_from_json(const nlohmann::json& j);

Matrix matrix_from_json(const nlohmann::json& j, std::string_view what);
Vector vector_from_json(const nlohmann::json& j, std::string_view what);

}  // namespace lnnreg::io
