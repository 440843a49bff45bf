#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace eit::csv {

using Row = std::vector<std::string>;

struct Record {
  std::size_t line = 0;  // 1-based line on which the record starts
  Row fields;
};

/// RFC 4180 style reader: quoted fields may contain the delimiter, doubled
/// quotes and line breaks. Accepts LF and CRLF. A UTF-8 BOM is skipped.
class Reader {
 public:
  Reader(std::istream& in, char delimiter = ',');

  /// False at end of input. Throws DataError on an unterminated quote.
  bool next(Record& out);

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t line_ = 1;
  bool first_ = true;
};

std::vector<Record> read_all(std::istream& in, char delimiter = ',');

/// Quotes a field only when it contains the delimiter, a quote, CR or LF.
std::string escape(std::string_view field, char delimiter = ',');

void write_row(std::ostream& out, const Row& row, char delimiter = ',');

}  // namespace eit::csv
