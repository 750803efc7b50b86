#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csts::csv {

/// Streaming RFC 4180 reader: quoted fields, doubled quotes, embedded
/// newlines, LF or CRLF line endings. A UTF-8 BOM before the header is skipped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (std::string_view(bom, 3) != "\xEF\xBB\xBF") throw std::runtime_error("csv: malformed byte order mark");
    }
  }

  /// Next record, or nullopt at end of input. Blank lines are skipped.
  std::optional<std::vector<std::string>> next() {
    for (;;) {
      if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;
      auto rec = read_record();
      ++line_;
      if (rec.size() == 1 && rec[0].empty()) continue;
      return rec;
    }
  }

  /// 1-based count of records consumed so far, blank lines included.
  std::size_t records_read() const { return line_; }

 private:
  std::vector<std::string> read_record() {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (;;) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) {
        if (quoted) throw std::runtime_error("csv: unterminated quoted field");
        return fields;
      }
      const char ch = static_cast<char>(c);
      if (quoted) {
        if (ch != '"') {
          fields.back() += ch;
        } else if (in_.peek() == '"') {
          fields.back() += '"';
          in_.get();
        } else {
          quoted = false;
        }
        continue;
      }
      if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        fields.emplace_back();
      } else if (ch == '\n') {
        return fields;
      } else if (ch == '\r') {
        if (in_.peek() == '\n') in_.get();
        return fields;
      } else {
        fields.back() += ch;
      }
    }
  }

  std::istream& in_;
  std::size_t line_ = 0;
};

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace csts::csv
