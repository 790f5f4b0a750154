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

// Rule-based sentence splitting over whitespace-normalized text.
//
// A boundary is placed at a space when the preceding token ends in . ! or ?
// (optionally followed by closing quotes or brackets) and the following
// token starts with an uppercase letter or an opening quote/bracket.  A
// period does not end a sentence after a non-breaking prefix ("Mr.", "Dr.")
// or after a single uppercase initial ("J.").
//
// Prefix files use the Moses layout: one prefix per line, '#' comments,
// and a trailing "#NUMERIC_ONLY#" marker for prefixes that only block a
// break before a number.

#include <cstddef>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "docstitch/error.hpp"
#include "docstitch/record.hpp"
#include "docstitch/unicode.hpp"

namespace docstitch {

class NonBreakingPrefixes {
 public:
  NonBreakingPrefixes() = default;

  void add(std::string_view prefix, bool numeric_only = false) {
    while (!prefix.empty() && prefix.back() == '.') prefix.remove_suffix(1);
    if (prefix.empty()) return;
    (numeric_only ? numeric_only_ : always_).emplace(prefix);
  }

  // Parses one line of a Moses-style prefix file.
  void add_line(std::string_view line) {
    line = tsv::chomp(line);
    const std::size_t hash = line.find('#');
    bool numeric_only = false;
    if (hash != std::string_view::npos) {
      numeric_only = line.substr(hash).starts_with("#NUMERIC_ONLY#");
      line = line.substr(0, hash);
    }
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    add(line, numeric_only);
  }

  static NonBreakingPrefixes from_stream(std::istream &in) {
    NonBreakingPrefixes p;
    std::string line;
    while (std::getline(in, line)) p.add_line(line);
    return p;
  }

  static NonBreakingPrefixes from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open non-breaking prefix file " + path);
    return from_stream(in);
  }

  // Whether a period after `word` should not end a sentence when the next
  // token starts with `next_first`.
  bool blocks(std::string_view word, char32_t next_first) const {
    if (always_.count(std::string(word))) return true;
    return unicode::is_digit(next_first) && numeric_only_.count(std::string(word));
  }

  std::size_t size() const { return always_.size() + numeric_only_.size(); }

 private:
  std::unordered_set<std::string> always_;
  std::unordered_set<std::string> numeric_only_;
};

namespace detail {

// Compact built-in prefix lists for the languages the pipeline is usually
// run on.  Space-separated; a leading '+' marks a numeric-only entry.
inline const std::unordered_map<std::string, std::string_view> &builtin_prefix_lists() {
  static const std::unordered_map<std::string, std::string_view> lists = {
      {"en",
       "Adj Adm Adv Asst Bart Bldg Brig Bros Capt Cmdr Col Comdr Con Corp Cpl DR Dr Drs Ens Gen Gov Hon "
       "Hr Hosp Insp Lt MM MR MRS MS Maj Messrs Mlle Mme Mr Mrs Ms Msgr Op Ord Pfc Ph Prof Pvt Rep Reps "
       "Res Rev Rt Sen Sens Sfc Sgt Sr St Supt Surg v vs i.e rev e.g Jan Feb Mar Apr Jun Jul Aug Sep "
       "Sept Oct Nov Dec etc al Inc Ltd Co Jr +No +Nos +Art +Nr +pp"},
      {"de",
       "Dr Prof Hr Fr Hrn Frl bzw ca usw vgl z.B d.h u.a u.U s.o s.u Nr Str Abs Abt Bd Bsp evtl ggf "
       "inkl Jh Jhd Mio Mrd Tel allg bspw Dipl Ing zzgl zB dh Jan Feb Mär Apr Jun Jul Aug Sep Sept Okt "
       "Nov Dez St +Art +Nr +S"},
      {"fr",
       "M MM Mme Mlle Mgr Dr Pr Me St Ste av bd boul ch cf etc ex Ibid p pp vol env fig janv févr avr "
       "juil sept oct nov déc +No +n"},
      {"es",
       "Sr Sra Srta Sres Dr Dra D Dña Ud Uds Vd Vds Lic Ing Prof etc pág págs p pp vol aprox av avda "
       "c cap ej ene feb mar abr jun jul ago sep sept oct nov dic Cía +No +Nº +núm"},
      {"it",
       "Sig Sigg Sig.ra Dott Dott.ssa Prof Avv Ing Geom Arch On Egr Gent Mons Rev S Sr ca ecc es pag "
       "pagg vol fig cfr gen feb mar apr mag giu lug ago set ott nov dic +n +art +No"},
      {"pt",
       "Sr Sra Srta Dr Dra Prof Profa Eng Exmo Exma Ilmo Ilma V.Exa etc pág págs p pp vol cap fig ex "
       "jan fev mar abr mai jun jul ago set out nov dez Av +No +n +art"},
      {"pl",
       "Dr Prof hab inż mgr lek red tzw np itd itp tj m.in ok ul al pl św ks wg nr godz ust art poz "
       "sty lut mar kwi maj cze lip sie wrz paź lis gru +nr +art +ust"},
  };
  return lists;
}

}  // namespace detail

// Pluggable sentence splitter interface.  Returned spans are inclusive code
// point ranges over the normalized text and never include the separating
// space.
class SentenceSplitter {
 public:
  virtual ~SentenceSplitter() = default;
  virtual std::vector<CharSpan> split(std::string_view norm_text, std::string_view lang) const = 0;
};

class RuleBasedSplitter : public SentenceSplitter {
 public:
  using WarningSink = std::function<void(const std::string &)>;

  RuleBasedSplitter() : warn_([](const std::string &msg) { std::cerr << "warning: " << msg << '\n'; }) {}
  explicit RuleBasedSplitter(WarningSink warn) : warn_(std::move(warn)) {}

  // Overrides (or adds) the prefix list for one language.
  void set_prefixes(std::string lang, NonBreakingPrefixes prefixes) {
    custom_[std::move(lang)] = std::make_shared<NonBreakingPrefixes>(std::move(prefixes));
  }

  std::vector<CharSpan> split(std::string_view text, std::string_view lang) const override {
    const NonBreakingPrefixes &prefixes = prefixes_for(lang);
    std::vector<CharSpan> spans;
    if (text.empty()) return spans;

    // Walk tokens separated by single spaces, tracking code point offsets.
    std::size_t sentence_start = 0;
    std::size_t byte = 0;
    std::size_t cp = 0;
    std::string_view prev_token;
    std::size_t prev_end_cp = 0;
    bool have_prev = false;
    while (byte <= text.size()) {
      std::size_t space = text.find(' ', byte);
      if (space == std::string_view::npos) space = text.size();
      const std::string_view token = text.substr(byte, space - byte);
      const std::size_t token_cps = unicode::length(token);
      if (have_prev && !token.empty() && is_boundary(prev_token, token, prefixes)) {
        spans.push_back({sentence_start, prev_end_cp});
        sentence_start = cp;
      }
      if (!token.empty()) {
        prev_token = token;
        prev_end_cp = cp + token_cps - 1;
        have_prev = true;
      }
      cp += token_cps + 1;
      byte = space + 1;
    }
    if (have_prev) spans.push_back({sentence_start, prev_end_cp});
    return spans;
  }

 private:
  const NonBreakingPrefixes &prefixes_for(std::string_view lang) const {
    std::string key(lang);
    if (auto it = custom_.find(key); it != custom_.end()) return *it->second;
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return *it->second;
    auto prefixes = std::make_shared<NonBreakingPrefixes>();
    const auto &builtin = detail::builtin_prefix_lists();
    if (auto it = builtin.find(key); it != builtin.end()) {
      std::string_view list = it->second;
      while (!list.empty()) {
        std::size_t sp = list.find(' ');
        std::string_view word = list.substr(0, sp);
        const bool numeric = !word.empty() && word.front() == '+';
        if (numeric) word.remove_prefix(1);
        prefixes->add(word, numeric);
        if (sp == std::string_view::npos) break;
        list.remove_prefix(sp + 1);
      }
    } else if (warn_) {
      warn_("no sentence-splitting rules for language '" + key + "'; using language-neutral rules");
    }
    return *cache_.emplace(std::move(key), std::move(prefixes)).first->second;
  }

  static bool is_boundary(std::string_view prev, std::string_view next, const NonBreakingPrefixes &prefixes) {
    // Strip closing quotes/brackets from the end of the previous token.
    const std::u32string cps = unicode::decode(prev);
    std::size_t end = cps.size();
    while (end > 0 && unicode::is_closing(cps[end - 1])) --end;
    if (end == 0) return false;
    const char32_t terminal = cps[end - 1];
    if (terminal != '.' && terminal != '!' && terminal != '?') return false;

    std::size_t i = 0;
    const char32_t next_first = unicode::next(next, i);
    if (!unicode::is_upper(next_first) && !unicode::is_opening(next_first)) return false;

    if (terminal == '.') {
      std::size_t word_end = end - 1;
      if (word_end > 0 && cps[word_end - 1] == '.') return true;  // ellipsis
      std::size_t word_begin = 0;
      while (word_begin < word_end && !unicode::is_alnum(cps[word_begin])) ++word_begin;
      if (word_begin == word_end) return true;
      const std::u32string_view word(cps.data() + word_begin, word_end - word_begin);
      if (word.size() == 1 && unicode::is_upper(word[0])) return false;  // initial
      std::string word_utf8;
      for (char32_t c : word) unicode::append(word_utf8, c);
      if (prefixes.blocks(word_utf8, next_first)) return false;
      // Dotted uppercase acronyms such as "U.S." inside a sentence.
      if (word.find(U'.') != std::u32string_view::npos && unicode::is_upper(word.back())) return false;
    }
    return true;
  }

  WarningSink warn_;
  std::unordered_map<std::string, std::shared_ptr<NonBreakingPrefixes>> custom_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::string, std::shared_ptr<NonBreakingPrefixes>> cache_;
};

}  // namespace docstitch
