#include "lqm/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace lqm {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + target.parent_path().string() + ": " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError("cannot move " + tmp.string() + " to " + target.string() + ": " + ec.message());
  }
}

CsvTable::CsvTable(std::vector<std::string> columns) : width_(columns.size()) {
  add_text_row(columns);
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_text_row(cells);
}

void CsvTable::add_text_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw InternalError("csv row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

std::string CsvTable::str() const { return body_; }

std::string snapshot_csv(const Wavefunction& psi, std::size_t step) {
  const Grid& g = psi.grid();
  std::string out = "# x_min=" + format_number(g.x_min()) + " x_max=" + format_number(g.x_max()) +
                    " n_points=" + std::to_string(g.n_points()) + " boundary=" +
                    std::string(to_string(g.boundary())) + " dx=" + format_number(g.dx()) +
                    " step=" + std::to_string(step) + " time=" + format_number(psi.time()) + "\n";
  out += "re,im\n";
  for (std::size_t j = 0; j < psi.size(); ++j) {
    out += format_number(psi[j].real());
    out += ',';
    out += format_number(psi[j].imag());
    out += '\n';
  }
  return out;
}

}  // namespace lqm
