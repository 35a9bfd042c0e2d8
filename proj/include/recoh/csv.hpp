// csv.hpp — header-row CSV with full-precision floats (round-trip exact)

#pragma once

#include <string>
#include <vector>

#include "recoh/bloch.hpp"

namespace recoh {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Trace serialization; times are written in units of 1/m.
CsvTable trace_table(const DephasingTrace& trace, double mass);

} // namespace recoh
