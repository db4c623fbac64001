#pragma once

#include <string>
#include <vector>

#include "delayq/common.hpp"

#include "json.hpp"

namespace delayq {

/// Floats are emitted with 17 significant digits so that repeated runs
/// produce byte-identical files and values round-trip exactly.
std::string format_float(double x);

/// One CSV table: fixed header, rows of preformatted cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const;
};

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// Serializes with 17-significant-digit floats (nlohmann's default already
/// round-trips doubles; this pins the convention in one place).
std::string json_to_string(const nlohmann::json& j);

}  // namespace delayq
