#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fds/linalg.hpp"

namespace fds {

// 17 significant digits: round-trips every double.
std::string format_double(double v);

// Buffered CSV writer; the file is written on close() (or destruction), so a
// failed command leaves no partially written data file behind.
class CsvWriter {
 public:
  explicit CsvWriter(std::filesystem::path path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void comment(const std::string& line);
  void header(const std::vector<std::string>& columns);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(long v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(unsigned long v) { return cell(static_cast<long long>(v)); }
  void end_row();
  void close();

 private:
  std::filesystem::path path_;
  std::string buffer_;
  bool row_open_ = false;
  bool closed_ = false;
};

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fds
