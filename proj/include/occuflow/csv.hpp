#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace occuflow {

// Minimal CSV table: header row plus string cells. Quoted fields with embedded
// commas and doubled quotes are handled; embedded newlines are not.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name; throws SchemaError if absent.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable read_csv_string(const std::string& content);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace occuflow
