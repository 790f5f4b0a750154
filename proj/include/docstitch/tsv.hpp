// Copyright 2026 The docstitch Authors.
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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace docstitch::tsv {

// Splits on every tab; "a\t\tb" yields three fields.
inline std::vector<std::string_view> split(std::string_view line, char delim = '\t') {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find(delim, start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline bool is_clean_field(std::string_view field) {
  return field.find_first_of("\t\n\r") == std::string_view::npos;
}

// Drops a trailing '\r' so CRLF input reads the same as LF input.
inline std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

template <typename Range>
std::string join(const Range &fields, std::string_view delim = "\t") {
  std::string out;
  bool first = true;
  for (const auto &f : fields) {
    if (!first) out.append(delim);
    out.append(f);
    first = false;
  }
  return out;
}

}  // namespace docstitch::tsv
