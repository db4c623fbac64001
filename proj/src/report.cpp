#include "delayq/report.hpp"

#include <cstdio>
#include <fstream>

namespace delayq {

std::string format_float(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, json_to_string(j) + "\n");
}

std::string json_to_string(const nlohmann::json& j) { return j.dump(2); }

}  // namespace delayq
