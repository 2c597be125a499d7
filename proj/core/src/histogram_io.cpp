#include "drm/histogram_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace drm {
namespace {

constexpr std::string_view kHeader = "cell_index,x_left,x_right,mass";
constexpr std::string_view kTailMeanTag = "# tail_mean=";

double parse_double(std::string_view text, std::size_t line_no) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error("histogram csv line " + std::to_string(line_no) + ": bad number '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_histogram_csv(std::ostream& out, const HistogramMeasure& p) {
  const auto& grid = p.grid();
  const auto cells = p.cell_mass();
  out << kHeader << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out << i << ',' << format_double(grid.left(i)) << ',' << format_double(grid.right(i)) << ','
        << format_double(cells[i]) << '\n';
  }
  out << "tail," << format_double(grid.x_max()) << ",inf," << format_double(p.tail_mass()) << '\n';
  out << kTailMeanTag << format_double(p.tail_mean()) << '\n';
}

void write_histogram_csv(const std::filesystem::path& path, const HistogramMeasure& p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_histogram_csv(out, p);
}

HistogramMeasure read_histogram_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("histogram csv line 1: missing header");
  ++line_no;

  std::vector<double> mass;
  bool have_tail = false;
  double x_max = 0.0;
  double tail_mass = 0.0;
  double tail_mean = 0.0;
  bool have_tail_mean = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.starts_with(kTailMeanTag)) {
      tail_mean = parse_double(std::string_view(line).substr(kTailMeanTag.size()), line_no);
      have_tail_mean = true;
      continue;
    }
    if (line.front() == '#') continue;
    const auto fields = split_commas(line);
    if (fields.size() != 4) throw std::runtime_error("histogram csv line " + std::to_string(line_no) + ": expected 4 fields");
    if (fields[0] == "tail") {
      x_max = parse_double(fields[1], line_no);
      tail_mass = parse_double(fields[3], line_no);
      have_tail = true;
      continue;
    }
    if (have_tail) throw std::runtime_error("histogram csv line " + std::to_string(line_no) + ": cell row after tail row");
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), index);
    if (ec != std::errc() || index != mass.size())
      throw std::runtime_error("histogram csv line " + std::to_string(line_no) + ": cell indices must run 0, 1, 2, ...");
    mass.push_back(parse_double(fields[3], line_no));
  }
  if (!have_tail) throw std::runtime_error("histogram csv: missing tail row");
  if (!have_tail_mean) throw std::runtime_error("histogram csv: missing tail_mean comment");
  const GridSpec grid(x_max, mass.size());
  return HistogramMeasure(grid, std::move(mass), tail_mass, tail_mean);
}

HistogramMeasure read_histogram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_histogram_csv(in);
}

}  // namespace drm
