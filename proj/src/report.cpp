#include "specflow/report.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace specflow {

bool Report::all_passed() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

Json Report::to_json() const {
    Json out;
    out["inputs"] = inputs;
    Json jtables = Json::object();
    for (const auto& t : tables) {
        Json jt;
        jt["columns"] = t.columns;
        jt["rows"] = t.rows;
        jtables[t.name] = std::move(jt);
    }
    out["tables"] = std::move(jtables);
    Json jchecks = Json::array();
    for (const auto& c : checks) {
        jchecks.push_back(Json{{"name", c.name},
                               {"pass", c.pass},
                               {"residual", c.residual},
                               {"tolerance", c.tolerance},
                               {"detail", c.detail}});
    }
    out["checks"] = std::move(jchecks);
    if (!extra.is_null()) out["extra"] = extra;
    out["all_passed"] = all_passed();
    return out;
}

namespace {

std::string csv_cell(const Json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    // RFC 4180 quoting.
    if (s.find_first_of(",\"\r\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : s) {
            quoted += c;
            if (c == '"') quoted += '"';
        }
        quoted += '"';
        return quoted;
    }
    return s;
}

}  // namespace

void Report::write(const std::string& dir, const std::string& format) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const bool want_json = format == "json" || format == "both";
    const bool want_csv = format == "csv" || format == "both";
    if (!want_json && !want_csv) {
        throw std::invalid_argument("Report::write: format must be json, csv or both");
    }
    if (want_json) {
        std::ofstream out(fs::path(dir) / "report.json", std::ios::binary);
        out << to_json().dump(2) << "\n";
    }
    if (want_csv) {
        for (const auto& t : tables) {
            std::ofstream out(fs::path(dir) / (t.name + ".csv"), std::ios::binary);
            for (size_t i = 0; i < t.columns.size(); ++i) {
                out << (i ? "," : "") << t.columns[i];
            }
            out << "\r\n";
            for (const auto& row : t.rows) {
                for (size_t i = 0; i < t.columns.size(); ++i) {
                    const auto it = row.find(t.columns[i]);
                    out << (i ? "," : "") << (it != row.end() ? csv_cell(*it) : "");
                }
                out << "\r\n";
            }
        }
    }
}

}  // namespace specflow
