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

// Loading monolingual documents: either a directory holding one document
// per file (file name = doc_id) or a two-column TSV of doc_id and the
// base64-encoded raw text.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include <openssl/evp.h>

#include "docstitch/error.hpp"
#include "docstitch/tsv.hpp"

namespace docstitch {

inline std::string base64_decode(std::string_view in) {
  while (!in.empty() && (in.back() == '\n' || in.back() == '\r' || in.back() == ' ')) in.remove_suffix(1);
  if (in.empty()) return {};
  if (in.size() % 4 != 0) throw ParseError("base64 length is not a multiple of 4", 0);
  std::string out(in.size() / 4 * 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char *>(out.data()),
                                reinterpret_cast<const unsigned char *>(in.data()), static_cast<int>(in.size()));
  if (n < 0) throw ParseError("invalid base64 payload", 0);
  // EVP_DecodeBlock counts padding as decoded zero bytes.
  std::size_t len = static_cast<std::size_t>(n);
  if (in.ends_with("==")) {
    len -= 2;
  } else if (in.ends_with("=")) {
    len -= 1;
  }
  out.resize(len);
  return out;
}

inline std::string base64_encode(std::string_view in) {
  std::string out(4 * ((in.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char *>(out.data()),
                                reinterpret_cast<const unsigned char *>(in.data()), static_cast<int>(in.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

// doc_id -> raw document text.
using MonoStore = std::unordered_map<std::string, std::string>;

inline MonoStore read_mono_tsv(std::istream &in) {
  MonoStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view l = tsv::chomp(line);
    if (l.empty()) continue;
    const auto fields = tsv::split(l);
    if (fields.size() != 2) {
      throw SchemaError("line " + std::to_string(line_no) + ": monolingual store expects 2 columns (doc_id, base64 text), got " +
                        std::to_string(fields.size()));
    }
    try {
      store[std::string(fields[0])] = base64_decode(fields[1]);
    } catch (const ParseError &e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return store;
}

inline MonoStore load_mono_store(const std::filesystem::path &path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) {
    MonoStore store;
    for (const auto &entry : fs::directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      std::ifstream in(entry.path(), std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      store[entry.path().filename().string()] = buf.str();
    }
    return store;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open monolingual store " + path.string());
  return read_mono_tsv(in);
}

}  // namespace docstitch
