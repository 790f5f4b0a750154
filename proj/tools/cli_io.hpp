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

// File plumbing for the command line tool: atomic outputs, run manifests,
// input digests and streaming record readers.

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "docstitch/error.hpp"
#include "docstitch/record.hpp"
#include "docstitch/tsv.hpp"

namespace docstitch::cli {

// A required input that is missing or unreadable.
class InputError : public Error {
 public:
  using Error::Error;
};

inline std::ifstream open_input(const std::string &path) {
  if (std::filesystem::is_directory(path)) throw InputError("input " + path + " is a directory");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input " + path);
  return in;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr); }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256 &) = delete;
  Sha256 &operator=(const Sha256 &) = delete;

  void update(std::string_view data) { EVP_DigestUpdate(ctx_, data.data(), data.size()); }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
    return out.str();
  }

 private:
  EVP_MD_CTX *ctx_;
};

inline void hash_file(Sha256 &h, const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input " + path.string());
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
  }
}

// Digest of a file, or of a directory's regular files in name order
// (each as name, NUL, contents).
inline std::string sha256_path(const std::string &path) {
  namespace fs = std::filesystem;
  Sha256 h;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto &e : fs::directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto &f : files) {
      h.update(f.filename().string());
      h.update(std::string_view("\0", 1));
      hash_file(h, f);
    }
  } else {
    hash_file(h, path);
  }
  return h.hex();
}

// Writes to a temporary sibling and renames it over `path` on commit().
// An uncommitted file is removed on destruction.
class AtomicOutput {
 public:
  explicit AtomicOutput(std::string path)
      : path_(std::move(path)), tmp_(path_ + ".tmp." + std::to_string(::getpid())) {
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw InputError("cannot write " + tmp_);
  }

  ~AtomicOutput() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }

  AtomicOutput(const AtomicOutput &) = delete;
  AtomicOutput &operator=(const AtomicOutput &) = delete;

  std::ostream &stream() { return out_; }
  const std::string &path() const { return path_; }

  void commit() {
    out_.flush();
    if (!out_) throw InputError("write failed for " + path_);
    out_.close();
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

// Run manifest written next to an output as <output>.manifest.json.
struct Manifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  nlohmann::ordered_json records = nlohmann::ordered_json::object();
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  void add_input(const std::string &role, const std::string &path) {
    inputs.push_back({{"role", role}, {"path", path}, {"sha256", sha256_path(path)}});
  }

  void write_next_to(const std::string &output) const {
    nlohmann::ordered_json j;
    j["tool"] = "docstitch";
    j["command"] = command;
    j["config"] = config;
    j["inputs"] = inputs;
    j["records"] = records;
    if (!extra.empty()) j["report"] = extra;
    AtomicOutput out(output + ".manifest.json");
    out.stream() << j.dump(2) << '\n';
    out.commit();
  }
};

// Reads annotated (19-column) or scored (20-column) record lines.
class RecordReader {
 public:
  explicit RecordReader(const std::string &path) : in_(open_input(path)) {}

  std::optional<ScoredRecord> next() {
    while (std::getline(in_, line_)) {
      ++line_no_;
      const std::string_view l = tsv::chomp(line_);
      if (l.empty()) continue;
      const std::size_t columns = static_cast<std::size_t>(std::count(l.begin(), l.end(), '\t')) + 1;
      ScoredRecord r;
      if (columns == kScoredRecordColumns) {
        r = parse_scored_record(l, line_no_);
      } else {
        r.record = parse_record(l, line_no_);
      }
      ++count_;
      return r;
    }
    return std::nullopt;
  }

  std::size_t line() const { return line_no_; }
  std::size_t count() const { return count_; }

 private:
  std::ifstream in_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::size_t count_ = 0;
};

// Two-column (src, tgt) TSV rows; extra columns are an error.
inline std::vector<std::pair<std::string, std::string>> read_pairs(const std::string &path) {
  auto in = open_input(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view l = tsv::chomp(line);
    if (l.empty()) continue;
    const auto f = tsv::split(l);
    if (f.size() != 2) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected 2 columns (src, tgt), got " +
                        std::to_string(f.size()));
    }
    out.emplace_back(std::string(f[0]), std::string(f[1]));
  }
  return out;
}

}  // namespace docstitch::cli
