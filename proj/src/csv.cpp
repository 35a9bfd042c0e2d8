#include "recoh/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "recoh/errors.hpp"

namespace recoh {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw ValidationError("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty CSV: " + path);
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(table.header.size());
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw ValidationError("non-numeric CSV cell in " + path + ": " + cell);
            row.push_back(v);
        }
        if (row.size() != table.header.size())
            throw ValidationError("ragged CSV row in " + path);
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable trace_table(const DephasingTrace& trace, double mass) {
    CsvTable t;
    t.header = {"t", "rho1", "rho2", "rho3", "reJ", "imJ", "absJ", "entropy", "adiabaticity"};
    if (trace.has_theta_r) t.header.push_back("theta_R");
    t.rows.reserve(trace.samples.size());
    for (const TraceSample& s : trace.samples) {
        std::vector<double> row{s.t * mass, s.rho[0], s.rho[1], s.rho[2],
                                s.J.real(), s.J.imag(), std::abs(s.J),
                                s.entropy, s.adiabaticity};
        if (trace.has_theta_r) row.push_back(s.theta_R);
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace recoh
