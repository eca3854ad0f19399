#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gllab {

using CsvField = std::variant<std::string, double, std::int64_t>;

/// Formats a double so that reruns print identical bytes; non-finite values
/// print as inf, -inf or nan.
std::string format_number(double value);

/// RFC-4180 style writer: comma separated, LF line endings, fields quoted
/// only when they contain a comma, quote or newline.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}

  void comment(std::string_view text);
  void header(std::initializer_list<std::string_view> names);
  void row(const std::vector<CsvField>& fields);

 private:
  void field(std::string_view text, bool first);

  std::ostream* out_;
};

}  // namespace gllab
