#include "restlab/report.hpp"

#include "restlab/errors.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace restlab {

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["params"] = params;
    j["columns"] = columns;
    j["rows"] = rows;
    j["summary"] = summary;
    return j;
}

void ExperimentReport::write_json(std::ostream& os) const { os << to_json().dump(2) << '\n'; }

void ExperimentReport::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ',';
        os << columns[i];
    }
    os << '\n';
    std::ostringstream cell;
    cell.precision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            cell.str("");
            cell << row[i];
            os << cell.str();
        }
        os << '\n';
    }
}

void ExperimentReport::write(const std::string& path, const std::string& format) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    if (format == "json")
        write_json(out);
    else if (format == "csv")
        write_csv(out);
    else
        throw Error("unknown report format: " + format);
}

} // namespace restlab
