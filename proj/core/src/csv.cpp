#include "eit/csv.hpp"

#include <istream>
#include <ostream>

#include "eit/error.hpp"

namespace eit::csv {

Reader::Reader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {}

bool Reader::next(Record& out) {
  out.fields.clear();
  out.line = line_;
  if (first_) {
    first_ = false;
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(static_cast<unsigned char>(bom[1]) == 0xBB && static_cast<unsigned char>(bom[2]) == 0xBF)) {
        for (int i = 2; i >= 0; --i) in_.putback(bom[i]);
      }
    }
  }
  if (in_.peek() == std::char_traits<char>::eof()) return false;

  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;
  int c;
  while ((c = in_.get()) != std::char_traits<char>::eof()) {
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (ch == delimiter_) {
      out.fields.push_back(std::move(field));
      field.clear();
      field_started_quoted = false;
    } else if (ch == '\r' && in_.peek() == '\n') {
      // CRLF: the LF ends the record.
    } else if (ch == '\n') {
      ++line_;
      out.fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw DataError("unterminated quoted field starting on line " + std::to_string(out.line));
  out.fields.push_back(std::move(field));
  return true;
}

std::vector<Record> read_all(std::istream& in, char delimiter) {
  Reader reader(in, delimiter);
  std::vector<Record> records;
  Record r;
  while (reader.next(r)) records.push_back(r);
  return records;
}

std::string escape(std::string_view field, char delimiter) {
  if (field.find_first_of(std::string{delimiter, '"', '\r', '\n'}) == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row, char delimiter) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.put(delimiter);
    out << escape(row[i], delimiter);
  }
  out.put('\n');
}

}  // namespace eit::csv
