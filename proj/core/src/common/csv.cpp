#include "gllab/common/csv.hpp"

#include <cmath>
#include <cstdio>

namespace gllab {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

void CsvWriter::comment(std::string_view text) { *out_ << "# " << text << '\n'; }

void CsvWriter::header(std::initializer_list<std::string_view> names) {
  bool first = true;
  for (auto name : names) {
    field(name, first);
    first = false;
  }
  *out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvField>& fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (const auto* s = std::get_if<std::string>(&f)) {
      field(*s, first);
    } else if (const auto* d = std::get_if<double>(&f)) {
      field(format_number(*d), first);
    } else {
      field(std::to_string(std::get<std::int64_t>(f)), first);
    }
    first = false;
  }
  *out_ << '\n';
}

void CsvWriter::field(std::string_view text, bool first) {
  if (!first) *out_ << ',';
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    *out_ << text;
    return;
  }
  *out_ << '"';
  for (char c : text) {
    if (c == '"') *out_ << '"';
    *out_ << c;
  }
  *out_ << '"';
}

}  // namespace gllab
