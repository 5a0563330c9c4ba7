#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "opmean/hermitian.hpp"

namespace opmean {

// Matrix file format: {"n": int, "re": [[...]], "im": [[...]]}, row-major,
// "im" optional (zero when absent).

HermitianMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const HermitianMatrix& h);

HermitianMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const HermitianMatrix& h);

/// Parses a whole file as JSON, wrapping I/O and syntax errors in InvalidArgument.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace opmean
