#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace glimm {

// Full precision, comma separated, no quoting (fields never contain commas).
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void header(const std::vector<std::string>& names);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(long long v);
  CsvWriter& operator<<(const std::string& v);
  void end_row();

 private:
  void sep();
  std::ostream& os_;
  bool first_ = true;
};

std::string format_double(double v);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

// Log-log polyline plot.
void write_loglog_svg(const std::string& path, const std::vector<Series>& series, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel);

// Creates the directory if needed; returns dir/name.
std::string output_path(const std::string& dir, const std::string& name);

}  // namespace glimm
