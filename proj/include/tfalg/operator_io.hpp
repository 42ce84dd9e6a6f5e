#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "tfalg/operator.hpp"

namespace tfalg {

/// {"dim": d, "terms": [{"t": [...], "omega": [...], "re": x, "im": y}, ...]}
///
/// Terms are written in quantized-key order; duplicate points are summed on
/// read. Malformed input raises ParseError.
nlohmann::json to_json(const TFOperator& op);
TFOperator operator_from_json(const nlohmann::json& j);

TFOperator read_operator(const std::filesystem::path& path);
void write_operator(const std::filesystem::path& path, const TFOperator& op);

/// Parses a point given as {"t": [...], "omega": [...]}.
TFPoint point_from_json(const nlohmann::json& j, int dim);
nlohmann::json to_json(const TFPoint& p);

/// Reads a whole file; ParseError when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
/// Writes text verbatim (creates or truncates).
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tfalg
