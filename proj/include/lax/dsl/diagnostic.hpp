#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lax::dsl {

/// Byte range in the source; line and column are 1-based.
struct Span {
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

enum class Severity { error, warning };

inline const char* severity_name(Severity s) { return s == Severity::error ? "error" : "warning"; }

struct Diagnostic {
  Severity severity = Severity::error;
  Span span;
  std::string message;
  std::string code;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::error)
      return true;
  return false;
}

/// "file:3:7: error[unknown-identifier]: ..." followed by the source line and
/// a caret underline.
inline std::string render(const Diagnostic& d, std::string_view source, std::string_view file = "<input>") {
  std::ostringstream os;
  os << file << ':' << d.span.line << ':' << d.span.column << ": " << severity_name(d.severity) << '['
     << d.code << "]: " << d.message << '\n';
  std::size_t start = std::min(d.span.offset, source.size());
  while (start > 0 && source[start - 1] != '\n')
    --start;
  std::size_t end = source.find('\n', start);
  if (end == std::string_view::npos)
    end = source.size();
  std::string line(source.substr(start, end - start));
  for (auto& c : line)
    if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
      c = ' ';
  os << "  " << line << '\n' << "  " << std::string(d.span.column - 1, ' ')
     << std::string(std::max<std::size_t>(d.span.length, 1), '^') << '\n';
  return os.str();
}

}  // namespace lax::dsl
