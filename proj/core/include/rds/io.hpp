#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rds {

/// 17 significant digits, general format, '.' decimal separator.
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t x);

/// Buffers a CSV table and, on finish(), appends "# fnv1a64=<hex>" computed
/// over every byte written before it.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  ~CsvWriter();

  CsvWriter& comment(std::string_view text);
  CsvWriter& header(std::initializer_list<std::string_view> columns);
  CsvWriter& header(const std::vector<std::string>& columns);

  CsvWriter& cell(double x);
  CsvWriter& cell(std::int64_t x);
  CsvWriter& cell(std::string_view text);
  CsvWriter& end_row();

  void finish();

 private:
  void separator();

  std::ostream* out_;
  std::string buffer_;
  bool row_open_ = false;
  bool finished_ = false;
};

/// Returns the checksum recorded in a trailing "# fnv1a64=" line, or 0.
std::uint64_t recorded_checksum(std::string_view csv);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace rds
