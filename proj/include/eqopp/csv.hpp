// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqopp {

// Minimal RFC-4180 CSV reader: quoted fields, escaped quotes, embedded
// separators and newlines, CRLF or LF line endings.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads one record into `fields`. Returns false at end of input.
  bool next(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    if (c == EOF) return false;
    ++record_;
    std::string field;
    bool quoted = false;
    while (true) {
      if (quoted) {
        if (c == EOF)
          throw std::runtime_error("csv: unterminated quoted field at record " +
                                   std::to_string(record_));
        if (c == '"') {
          int peek = in_.get();
          if (peek == '"') {
            field.push_back('"');
          } else {
            quoted = false;
            c = peek;
            continue;  // reprocess the delimiter that ended the quote
          }
        } else {
          field.push_back(static_cast<char>(c));
        }
      } else {
        if (c == '"' && field.empty()) {
          quoted = true;
        } else if (c == ',') {
          fields.push_back(std::move(field));
          field.clear();
        } else if (c == '\n' || c == EOF) {
          break;
        } else if (c == '\r') {
          // CRLF or bare CR both terminate the record.
          if (in_.peek() == '\n') in_.get();
          break;
        } else {
          field.push_back(static_cast<char>(c));
        }
      }
      c = in_.get();
    }
    fields.push_back(std::move(field));
    return true;
  }

  // 1-based index of the record most recently returned by next().
  std::size_t record_number() const { return record_; }

 private:
  std::istream& in_;
  std::size_t record_ = 0;
};

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += "\"";
  return out;
}

inline void csv_write_row(std::ostream& out,
                          const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace eqopp
