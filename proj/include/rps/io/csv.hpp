#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

namespace rps::io {

/// Shortest round-trip decimal form, locale-independent ('.' separator).
std::string format_double(double v);

/// Builds CSV text with '#'-prefixed metadata lines before the header row.
/// Output is byte-deterministic for identical inputs.
class CsvWriter {
 public:
  void meta(std::string_view key, std::string_view value);
  void meta(std::string_view key, double value);
  void meta(std::string_view key, std::uint64_t value);

  void header(std::initializer_list<std::string_view> columns);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v);
  CsvWriter& cell(std::string_view v);
  void end_row();

  const std::string& str() const { return out_; }
  void write(const std::filesystem::path& path) const;

 private:
  void sep();
  std::string out_;
  bool row_open_ = false;
};

}  // namespace rps::io
