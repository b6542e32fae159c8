#ifndef SPECFLOW_REPORT_HPP
#define SPECFLOW_REPORT_HPP

#include <string>
#include <vector>

#include "specflow/json_io.hpp"

namespace specflow {

/// One named table; every row carries the method that produced it.
struct Table {
    std::string name;
    std::vector<std::string> columns;  // includes "method"
    std::vector<Json> rows;            // objects keyed by column name

    void add_row(Json row) { rows.push_back(std::move(row)); }
};

/// One verified invariant with its residual and threshold.
struct Check {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

/// Run artifact: config echo, result tables and invariant checks.  The file
/// output is deterministic for a fixed config and seed; wall-clock timing is
/// reported on stderr only.
struct Report {
    Json inputs;
    std::vector<Table> tables;
    std::vector<Check> checks;
    Json extra;  // task-specific payloads (full result objects etc.)

    bool all_passed() const;
    Json to_json() const;

    /// Writes <dir>/report.json and/or one CSV per table (RFC 4180 line
    /// endings, 17 significant digits).  format: "json", "csv" or "both".
    void write(const std::string& dir, const std::string& format) const;
};

}  // namespace specflow

#endif
