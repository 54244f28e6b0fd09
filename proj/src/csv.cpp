#include "rps/io/csv.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "rps/errors.hpp"

namespace rps::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void CsvWriter::meta(std::string_view key, std::string_view value) {
  out_ += "# ";
  out_ += key;
  out_ += '=';
  out_ += value;
  out_ += '\n';
}

void CsvWriter::meta(std::string_view key, double value) {
  meta(key, format_double(value));
}

void CsvWriter::meta(std::string_view key, std::uint64_t value) {
  meta(key, std::to_string(value));
}

void CsvWriter::header(std::initializer_list<std::string_view> columns) {
  bool first = true;
  for (const auto& col : columns) {
    if (!first) out_ += ',';
    out_ += col;
    first = false;
  }
  out_ += '\n';
}

void CsvWriter::sep() {
  if (row_open_) out_ += ',';
  row_open_ = true;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  out_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  sep();
  out_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(int v) { return cell(static_cast<long long>(v)); }

CsvWriter& CsvWriter::cell(std::string_view v) {
  sep();
  out_ += v;
  return *this;
}

void CsvWriter::end_row() {
  out_ += '\n';
  row_open_ = false;
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path.string());
  out << out_;
  if (!out) throw ConfigError("write failed: " + path.string());
}

}  // namespace rps::io
