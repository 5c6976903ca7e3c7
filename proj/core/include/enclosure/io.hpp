#pragma once

#include <string>
#include <vector>

#include "enclosure/forward.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure {

// Stamped into every output file.
struct OutputMeta {
    std::string config_hash;
    int dim = 3;
};

// Shortest decimal form that round-trips a double.
std::string format_double(double v);

// <stem>.bin holds complex128 values in node order (re, im interleaved,
// little-endian); <stem>.json holds the grid header.
void write_field(const std::string& stem, const Grid& grid, const CVector& values, const OutputMeta& meta);
void write_grid(const std::string& stem, const Grid& grid, const OutputMeta& meta);
void write_mask(const std::string& stem, const Grid& grid, const EnclosureMask& mask, const OutputMeta& meta);

void write_dtn_csv(const std::string& path, const Grid& grid, const DtNTrace& dtn, const OutputMeta& meta);
void write_indicator_csv(const std::string& path, const IndicatorTable& table, const OutputMeta& meta);
void write_support_csv(const std::string& path, const std::vector<SupportEstimate>& estimates, int dim,
                       const OutputMeta& meta);

// One CSV row for a sample, shared by the table writer and the sweep checkpoint.
std::string indicator_row(const IndicatorSample& s, int dim);
std::string indicator_header(int dim);

} // namespace enclosure
