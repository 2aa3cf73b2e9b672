#include "skg/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace skg {

std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string_view> header)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
  bool first = true;
  for (auto h : header) append(first, h);
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  out_.close();
}

}  // namespace skg
