#pragma once

// CSV and JSON artifact serialization. All floating CSV output uses %.17g so
// identical configs produce byte-identical files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "shocklab/diagnostics.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/profile.hpp"
#include "shocklab/run.hpp"

namespace shocklab {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw numerical_error("cannot open for writing: " + path.string());
    out << text;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::span<const double>>& columns) {
    if (header.size() != columns.size()) throw config_error("write_csv: header/column mismatch");
    std::string text;
    for (std::size_t c = 0; c < header.size(); ++c) {
        text += header[c];
        text += (c + 1 < header.size()) ? ',' : '\n';
    }
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows) throw config_error("write_csv: ragged columns");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            text += fmt17(columns[c][r]);
            text += (c + 1 < columns.size()) ? ',' : '\n';
        }
    }
    write_text(path, text);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return columns[c];
        throw config_error("csv column not found: " + name);
    }
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open csv: " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty csv: " + path.string());
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const auto comma = line.find(',', pos);
        table.header.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (!table.header.empty() && !table.header.back().empty() && table.header.back().back() == '\r')
        table.header.back().pop_back();
    table.columns.resize(table.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t c = 0, p = 0;
        while (c < table.columns.size()) {
            const auto comma = line.find(',', p);
            const std::string cell = line.substr(p, comma == std::string::npos ? comma : comma - p);
            table.columns[c].push_back(std::strtod(cell.c_str(), nullptr));
            ++c;
            if (comma == std::string::npos) break;
            p = comma + 1;
        }
        if (c != table.columns.size())
            throw config_error("ragged csv row in " + path.string());
    }
    return table;
}

inline void write_profile_csv(const std::filesystem::path& path, const ShockProfile& p) {
    write_csv(path, {"xi", "V", "U", "H"}, {p.xi, p.V, p.U, p.H});
}

inline void write_snapshot_csv(const std::filesystem::path& path, const Grid1D& grid,
                               const FluidState& st) {
    write_csv(path, {"x", "v", "u"}, {grid.x, st.v, st.u});
}

inline void write_diagnostics_csv(const std::filesystem::path& path,
                                  const DiagnosticsRecord& rec) {
    write_csv(path,
              {"t", "sup_error", "E2", "D", "D_integral", "mass_defect", "boundary_trace",
               "E1_phi_Psi"},
              {rec.times, rec.sup_error, rec.E2, rec.D, rec.D_integral, rec.mass_defect,
               rec.boundary_trace, rec.E1_phi_Psi});
}

inline nlohmann::json profile_summary_json(const ShockProfile& p, double measured_C_minus,
                                           double measured_C_plus) {
    nlohmann::json j;
    j["s"] = p.states.s;
    j["v_minus"] = p.states.v_minus;
    j["v_plus"] = p.states.v_plus;
    j["u_plus"] = p.states.u_plus;
    j["b"] = p.states.b;
    j["C_minus"] = p.C_minus;
    j["C_plus"] = p.C_plus;
    j["measured_C_minus"] = measured_C_minus;
    j["measured_C_plus"] = measured_C_plus;
    j["ode_residual_sup"] = p.ode_residual_sup;
    j["half_width"] = p.half_width;
    j["resolution"] = p.dxi;
    j["nodes"] = p.size();
    return j;
}

}  // namespace shocklab
