#include "rds/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "rds/errors.hpp"

namespace rds {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  std::array<char, 17> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, 16);
  std::string s(buf.data(), res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

CsvWriter::~CsvWriter() {
  if (!finished_) {
    try {
      finish();
    } catch (...) {
    }
  }
}

void CsvWriter::separator() {
  if (row_open_) buffer_ += ',';
  row_open_ = true;
}

CsvWriter& CsvWriter::comment(std::string_view text) {
  buffer_ += "# ";
  buffer_ += text;
  buffer_ += '\n';
  return *this;
}

CsvWriter& CsvWriter::header(std::initializer_list<std::string_view> columns) {
  for (auto c : columns) cell(c);
  return end_row();
}

CsvWriter& CsvWriter::header(const std::vector<std::string>& columns) {
  for (const auto& c : columns) cell(std::string_view(c));
  return end_row();
}

CsvWriter& CsvWriter::cell(double x) {
  separator();
  buffer_ += format_double(x);
  return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t x) {
  separator();
  buffer_ += std::to_string(x);
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  buffer_ += text;
  return *this;
}

CsvWriter& CsvWriter::end_row() {
  buffer_ += '\n';
  row_open_ = false;
  return *this;
}

void CsvWriter::finish() {
  if (finished_) return;
  finished_ = true;
  if (row_open_) end_row();
  buffer_ += "# fnv1a64=" + hex64(fnv1a64(buffer_)) + "\n";
  *out_ << buffer_;
  out_->flush();
}

std::uint64_t recorded_checksum(std::string_view csv) {
  constexpr std::string_view kTag = "# fnv1a64=";
  const auto pos = csv.rfind(kTag);
  if (pos == std::string_view::npos) return 0;
  std::uint64_t value = 0;
  const char* begin = csv.data() + pos + kTag.size();
  std::from_chars(begin, csv.data() + csv.size(), value, 16);
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << content;
}

}  // namespace rds
