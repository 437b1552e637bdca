#pragma once

#include <string>
#include <vector>

#include "lqm/errors.hpp"
#include "lqm/wavefunction.hpp"

namespace lqm {

class IoError : public Error {
 public:
  using Error::Error;
};

// 17 significant digits; non-finite values print as nan / inf / -inf.
std::string format_number(double v);

// Writes content to a temporary sibling and renames it over path, so readers
// never see a partial file. Creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

// Accumulates comma-separated rows in memory.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(const std::vector<double>& values);
  void add_text_row(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::size_t width_;
  std::string body_;
};

// "# grid ..." metadata line, "re,im" header, one row per node.
std::string snapshot_csv(const Wavefunction& psi, std::size_t step);

}  // namespace lqm
