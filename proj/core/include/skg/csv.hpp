#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

namespace skg {

// Shortest decimal string that round-trips the exact double (std::to_chars).
std::string format_double(double value);

// Minimal CSV emitter: comma separator, '\n' line ends, doubles rendered by
// format_double so identical runs produce identical bytes.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

  template <class... Cols>
  void row(const Cols&... cols) {
    bool first = true;
    (append(first, cols), ...);
    out_ << '\n';
  }

  void close();

 private:
  void sep(bool& first) {
    if (!first) out_ << ',';
    first = false;
  }
  void append(bool& first, double v) {
    sep(first);
    out_ << format_double(v);
  }
  void append(bool& first, int v) {
    sep(first);
    out_ << v;
  }
  void append(bool& first, std::int64_t v) {
    sep(first);
    out_ << v;
  }
  void append(bool& first, std::uint64_t v) {  // also covers std::size_t on LP64
    sep(first);
    out_ << v;
  }
  void append(bool& first, std::string_view v) {
    sep(first);
    out_ << v;
  }
  void append(bool& first, const std::string& v) { append(first, std::string_view{v}); }
  void append(bool& first, const char* v) { append(first, std::string_view{v}); }

  std::ofstream out_;
};

}  // namespace skg
