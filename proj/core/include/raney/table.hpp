#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "raney/search.hpp"

namespace raney {

struct ReferenceTableEntry {
    std::int64_t p = 0;
    Int num_under_root, denom;  // minimum = sqrt(N)/d
    Period period;
    Symmetry symmetry = Symmetry::S;
};

// Embedded reference data: the minimum of the p-Lagrange spectrum for the primes
// below 2000 not matched by the Markoff congruence cases.
const std::vector<ReferenceTableEntry>& reference_table();
std::string_view reference_table_text();

// Table file format: one row per line, "p N d period symmetry"; '#' comments.
std::vector<ReferenceTableEntry> parse_table(std::string_view text);

// The rows verify-table checks by default (the long-period rows are stretch
// targets and excluded here).
const std::vector<std::int64_t>& default_verify_rows();

struct RowVerdict {
    std::int64_t p = 0;
    bool terminated = false;
    bool alpha_ok = false;
    bool period_ok = false;
    bool symmetry_ok = false;
    double seconds = 0;
    std::string detail;
    bool pass() const { return terminated && alpha_ok && period_ok && symmetry_ok; }
};

RowVerdict verify_row(const ReferenceTableEntry& row, const SearchOptions& opt);

// "p alpha_decimal symmetry" lines for external plotting.
std::string table_plot_data();

}  // namespace raney
