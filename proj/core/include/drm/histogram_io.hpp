#pragma once

// CSV form of a HistogramMeasure:
//
//   cell_index,x_left,x_right,mass
//   0,0,0.25,0.125
//   ...
//   tail,40,inf,2.5e-10
//   # tail_mean=41.5
//
// Numbers are written with 17 significant digits, so reading a file back
// reproduces every double bit for bit.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "drm/histogram.hpp"

namespace drm {

/// Shortest-safe round-trip decimal form (17 significant digits).
std::string format_double(double v);

void write_histogram_csv(std::ostream& out, const HistogramMeasure& p);
void write_histogram_csv(const std::filesystem::path& path, const HistogramMeasure& p);

/// Throws std::runtime_error with a line number on malformed input.
HistogramMeasure read_histogram_csv(std::istream& in);
HistogramMeasure read_histogram_csv(const std::filesystem::path& path);

}  // namespace drm
