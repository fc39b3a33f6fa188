#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace restlab {

// Tabular experiment output: rows go to CSV, everything (params, rows,
// summary) to JSON. Serialization is deterministic for identical inputs.
struct ExperimentReport {
    std::string name;
    nlohmann::json params = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json summary = nlohmann::json::object();

    void add_row(std::vector<double> row) { rows.push_back(std::move(row)); }

    nlohmann::json to_json() const;
    void write_json(std::ostream& os) const;
    void write_csv(std::ostream& os) const; // comma separated, header, LF
    void write(const std::string& path, const std::string& format) const;
};

} // namespace restlab
