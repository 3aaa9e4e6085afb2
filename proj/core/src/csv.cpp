#include "fds/csv.hpp"

#include <cstdio>

#include "fds/errors.hpp"

namespace fds {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path) : path_(std::move(path)) {}

CsvWriter::~CsvWriter() {
  if (!closed_) {
    try {
      close();
    } catch (...) {
    }
  }
}

void CsvWriter::comment(const std::string& line) { buffer_ += "# " + line + "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (const auto& c : columns) cell(c);
  end_row();
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (row_open_) buffer_ += ',';
  buffer_ += s;
  row_open_ = true;
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }
CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
  buffer_ += '\n';
  row_open_ = false;
}

void CsvWriter::close() {
  closed_ = true;
  write_text_file(path_, buffer_);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace fds
