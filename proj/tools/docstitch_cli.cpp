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

// docstitch-cli: pipeline stages as subcommands over TSV files.

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <CLI11.hpp>

#include "cli_io.hpp"
#include "docstitch.hpp"

namespace docstitch::cli {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitService = 3;

constexpr const char *kScorerEnv = "DOCSTITCH_SCORER_ENDPOINT";

struct Global {
  std::size_t workers = 1;
};

void warn(const std::string &msg) {
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  std::cerr << "docstitch: warning: " << msg << '\n';
}

// Option values of a subcommand, for the manifest.
nlohmann::ordered_json snapshot(const CLI::App &app, const CLI::App &sub) {
  nlohmann::ordered_json j;
  auto add = [&](const CLI::App &a, const std::string &prefix) {
    for (const CLI::Option *opt : a.get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string &name = opt->get_lnames().front();
      if (name == "help" || name == "config") continue;
      std::string value;
      if (opt->count()) {
        for (const auto &r : opt->results()) value += (value.empty() ? "" : ",") + r;
      } else {
        value = opt->get_default_str();
      }
      j[prefix + name] = value;
    }
  };
  add(app, "");
  add(sub, sub.get_name() + ".");
  return j;
}

// The endpoint variable overrides the config file but not the flag.
std::optional<std::string> scorer_from_env(int argc, char **argv) {
  const char *env = std::getenv(kScorerEnv);
  if (!env || !*env) return std::nullopt;
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--scorer" || arg.starts_with("--scorer=")) return std::nullopt;
  }
  return std::string(env);
}

std::pair<std::string, std::string> split_assignment(const std::string &s, const char *what) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(std::string(what) + " expects LANG=FILE, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

// "const:<p>" or "table:<file>" where the file holds "text<TAB>probability".
ClassifierHandle make_classifier(const std::string &spec) {
  if (spec.rfind("const:", 0) == 0) {
    const std::string v = spec.substr(6);
    std::size_t used = 0;
    double p = 0;
    try {
      p = std::stod(v, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != v.size() || !(p >= 0.0 && p <= 1.0)) throw ConfigError("bad classifier constant '" + v + "'");
    return constant_classifier(p);
  }
  if (spec.rfind("table:", 0) == 0) {
    const std::string path = spec.substr(6);
    auto in = open_input(path);
    auto table = std::make_shared<std::unordered_map<std::string, double>>();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string_view l = tsv::chomp(line);
      if (l.empty()) continue;
      const auto f = tsv::split(l);
      if (f.size() != 2) throw SchemaError("line " + std::to_string(line_no) + " of " + path + ": expected text, probability");
      double p = -1;
      const auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), p);
      if (ec != std::errc() || ptr != f[1].data() + f[1].size() || !(p >= 0.0 && p <= 1.0)) {
        throw ParseError("probability \"" + std::string(f[1]) + "\" in " + path + " is not in [0,1]", line_no);
      }
      (*table)[normalize_segment(f[0])] = p;
    }
    return {"table:" + path, [table, path](std::string_view text, std::string_view) {
              auto it = table->find(std::string(text));
              if (it == table->end()) throw InputError("no classifier entry in " + path + " for \"" + std::string(text) + "\"");
              return it->second;
            }};
  }
  throw ConfigError("classifier must be const:<p> or table:<file>, got '" + spec + "'");
}

SimilarityHandle make_similarity(const std::string &spec) {
  if (spec == "mock") {
    return {std::string(kMockBackend), [](std::string_view a, std::string_view b) { return mock_score(a, b); }};
  }
  if (spec.rfind("const:", 0) == 0) {
    const ClassifierHandle c = make_classifier(spec);
    return {c.identifier, [c](std::string_view, std::string_view) { return c("", ""); }};
  }
  throw ConfigError("similarity must be mock or const:<s>, got '" + spec + "'");
}

ScorerHandle make_scorer(const std::string &spec, std::size_t batch_size) {
  if (spec.empty() || spec == "mock") return mock_scorer();
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) return remote_scorer(spec, batch_size);
  throw ConfigError("scorer must be mock or an http(s) endpoint, got '" + spec + "'");
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructArgs {
  std::string bitext;
  std::string src_mono;
  std::string tgt_mono;
  std::string output;
  std::string corpus = "other";
  std::string src_lang = "en";
  std::string tgt_lang = "de";
  std::string lid = "const:1";
  std::string src_prefixes;
  std::string tgt_prefixes;
};

struct BitextDoc {
  std::string doc_id;
  std::vector<SegmentPair> segments;
};

std::vector<BitextDoc> read_bitext(const std::string &path) {
  auto in = open_input(path);
  std::vector<BitextDoc> docs;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view l = tsv::chomp(line);
    if (l.empty()) continue;
    const auto f = tsv::split(l);
    if (f.size() != 3) {
      throw SchemaError("line " + std::to_string(line_no) + " of " + path +
                        ": expected 3 columns (doc_id, src_text, tgt_text), got " + std::to_string(f.size()));
    }
    auto [it, added] = index.emplace(std::string(f[0]), docs.size());
    if (added) docs.push_back({std::string(f[0]), {}});
    docs[it->second].segments.push_back({std::string(f[1]), std::string(f[2])});
  }
  return docs;
}

int run_reconstruct(const ReconstructArgs &a, const Global &g, Manifest &m) {
  const auto corpus = corpus_from_string(a.corpus);
  if (!corpus) throw ConfigError("unknown corpus '" + a.corpus + "'");
  const ClassifierHandle lid = make_classifier(a.lid);
  RuleBasedSplitter splitter([](const std::string &w) { warn(w); });
  if (!a.src_prefixes.empty()) splitter.set_prefixes(a.src_lang, NonBreakingPrefixes::from_file(a.src_prefixes));
  if (!a.tgt_prefixes.empty()) splitter.set_prefixes(a.tgt_lang, NonBreakingPrefixes::from_file(a.tgt_prefixes));

  m.add_input("bitext", a.bitext);
  m.add_input("src_mono", a.src_mono);
  m.add_input("tgt_mono", a.tgt_mono);
  const auto docs = read_bitext(a.bitext);
  if (!std::filesystem::exists(a.src_mono)) throw InputError("cannot open monolingual store " + a.src_mono);
  if (!std::filesystem::exists(a.tgt_mono)) throw InputError("cannot open monolingual store " + a.tgt_mono);
  const MonoStore src_store = load_mono_store(a.src_mono);
  const MonoStore tgt_store = load_mono_store(a.tgt_mono);

  std::optional<DupTable> dups;
  if (has_duplication_annotation(*corpus)) {
    dups.emplace();
    for (const auto &d : docs) {
      for (const auto &s : d.segments) {
        dups->add(Side::source, normalize_segment(s.src));
        dups->add(Side::target, normalize_segment(s.tgt));
      }
    }
  }

  std::atomic<std::size_t> missing{0};
  auto annotate = [&](std::size_t i) {
    const BitextDoc &d = docs[i];
    auto load = [&](const MonoStore &store, const std::string &lang) {
      auto it = store.find(d.doc_id);
      if (it == store.end()) {
        ++missing;
        return index_document(d.doc_id, "", lang, splitter);
      }
      return index_document(d.doc_id, it->second, lang, splitter);
    };
    const MonoDocument src = load(src_store, a.src_lang);
    const MonoDocument tgt = load(tgt_store, a.tgt_lang);
    return annotate_document(src, tgt, d.segments, lid, dups ? &*dups : nullptr, *corpus);
  };
  const auto per_doc = parallel_map(docs.size(), g.workers, annotate);
  if (missing) warn(std::to_string(missing.load()) + " document side(s) missing from the monolingual stores");

  AtomicOutput out(a.output);
  std::size_t written = 0, not_found = 0;
  for (const auto &recs : per_doc) {
    for (const auto &r : recs) {
      out.stream() << serialize_record(r) << '\n';
      ++written;
      not_found += !r.src.found || !r.tgt.found;
    }
  }
  out.commit();
  m.records = {{"documents", docs.size()}, {"output", written}, {"not_found", not_found}};
  return 0;
}

// ---------------------------------------------------------------- break

struct BreakArgs {
  std::string input;
  std::string output;
  BreakConfig cfg;
};

int run_break(const BreakArgs &a, const Global &, Manifest &m) {
  a.cfg.validate();
  m.add_input("records", a.input);
  RecordReader reader(a.input);
  AtomicOutput out(a.output);
  std::unordered_set<std::string> finished;
  std::vector<AnnotatedRecord> doc;
  std::size_t subdocs = 0, written = 0;
  auto flush = [&] {
    if (doc.empty()) return;
    if (!finished.insert(doc.front().doc_id).second) {
      throw PipelineError("records of document '" + doc.front().doc_id + "' are not contiguous");
    }
    for (const SubDocument &sub : break_document(doc, a.cfg)) {
      ++subdocs;
      for (const auto &r : sub.records) {
        out.stream() << serialize_record(r) << '\n';
        ++written;
      }
    }
    doc.clear();
  };
  while (auto r = reader.next()) {
    if (!doc.empty() && r->record.doc_id != doc.front().doc_id) flush();
    r->record.sub_doc_id.reset();
    r->record.slide_score.reset();
    doc.push_back(std::move(r->record));
  }
  flush();
  out.commit();
  m.records = {{"input", reader.count()}, {"output", written}, {"sub_documents", subdocs}};
  return 0;
}

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string input;
  std::string output;
  std::string scorer = "mock";
  std::size_t batch_size = 64;
  WindowConfig window;
  double fraction = 0.0;
};

// Streams contiguous sub-documents out of a record file.
class SubDocReader {
 public:
  explicit SubDocReader(const std::string &path) : reader_(path) {}

  std::optional<SubDocument> next() {
    if (!pending_) pending_ = reader_.next();
    if (!pending_) return std::nullopt;
    SubDocument sub;
    sub.sub_doc_id = require_id(*pending_);
    sub.parent_doc_id = pending_->record.doc_id;
    if (!seen_.insert(sub.sub_doc_id).second) {
      throw PipelineError("records of sub-document '" + sub.sub_doc_id + "' are not contiguous");
    }
    while (pending_ && require_id(*pending_) == sub.sub_doc_id) {
      sub.records.push_back(std::move(pending_->record));
      pending_ = reader_.next();
    }
    return sub;
  }

  std::size_t records() const { return reader_.count(); }

 private:
  const std::string &require_id(const ScoredRecord &r) const {
    if (!r.record.sub_doc_id) {
      throw SchemaError("line " + std::to_string(reader_.line()) + ": record has no sub_doc_id (run break first)");
    }
    return *r.record.sub_doc_id;
  }

  RecordReader reader_;
  std::optional<ScoredRecord> pending_;
  std::unordered_set<std::string> seen_;
};

// Rewrites `input` with per-sub-document scores and cutoff tags; when
// `keep` is set only its members are written.
std::size_t write_scored(const std::string &input, AtomicOutput &out,
                         const std::unordered_map<std::string, ScoredSubDocument> &by_id,
                         const std::unordered_set<std::string> *keep) {
  RecordReader reader(input);
  std::size_t written = 0;
  while (auto r = reader.next()) {
    const auto &id = *r->record.sub_doc_id;
    if (keep && !keep->count(id)) continue;
    const ScoredSubDocument &s = by_id.at(id);
    r->record.slide_score = s.score;
    r->kept_at = s.kept_at;
    out.stream() << serialize_scored_record(*r) << '\n';
    ++written;
  }
  return written;
}

std::unordered_set<std::string> top_ids(const std::vector<ScoredSubDocument> &scored, double fraction) {
  std::unordered_set<std::string> ids;
  for (std::size_t i : select_top(scored, fraction)) ids.insert(scored[i].sub_doc_id);
  return ids;
}

int run_score(const ScoreArgs &a, const Global &g, Manifest &m) {
  a.window.validate();
  if (a.fraction != 0.0) keep_count(a.fraction, 0);
  const ScorerHandle scorer = make_scorer(a.scorer, a.batch_size);
  m.config["score.scorer"] = scorer.identifier;
  m.add_input("records", a.input);

  std::vector<ScoredSubDocument> scored;
  SubDocReader subs(a.input);
  constexpr std::size_t kChunk = 1024;
  for (bool done = false; !done;) {
    std::vector<SubDocument> chunk;
    while (chunk.size() < kChunk) {
      auto sub = subs.next();
      if (!sub) {
        done = true;
        break;
      }
      chunk.push_back(std::move(*sub));
    }
    const auto scores = parallel_map(chunk.size(), g.workers, [&](std::size_t i) {
      return quantize4(score_subdoc(chunk[i], scorer, a.window));
    });
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      scored.push_back({chunk[i].sub_doc_id, chunk[i].size(), scores[i], {}});
    }
  }
  assign_cutoffs(scored);

  std::unordered_map<std::string, ScoredSubDocument> by_id;
  for (const auto &s : scored) by_id.emplace(s.sub_doc_id, s);
  std::optional<std::unordered_set<std::string>> keep;
  if (a.fraction != 0.0) keep = top_ids(scored, a.fraction);

  AtomicOutput out(a.output);
  const std::size_t written = write_scored(a.input, out, by_id, keep ? &*keep : nullptr);
  out.commit();
  m.records = {{"input", subs.records()},
               {"output", written},
               {"sub_documents", scored.size()},
               {"kept_sub_documents", keep ? keep->size() : scored.size()}};
  return 0;
}

// ---------------------------------------------------------------- filter-docs

struct FilterDocsArgs {
  std::string input;
  std::string output;
  std::string level;
  double fraction = 0.0;
};

int run_filter_docs(const FilterDocsArgs &a, const Global &, Manifest &m) {
  if (a.level.empty() == (a.fraction == 0.0)) throw ConfigError("filter-docs needs exactly one of --level, --fraction");
  std::optional<Cutoff> level;
  if (!a.level.empty()) {
    level = cutoff_from_string(a.level);
    if (!level) throw ConfigError("--level must be one of loose75, medium50, strict25");
  }
  m.add_input("records", a.input);

  std::unordered_set<std::string> keep;
  if (!level) {
    std::vector<ScoredSubDocument> scored;
    std::unordered_set<std::string> seen;
    RecordReader reader(a.input);
    while (auto r = reader.next()) {
      if (!r->record.sub_doc_id || !r->record.slide_score) {
        throw SchemaError("line " + std::to_string(reader.line()) + ": record has no sub_doc_id/slide_score (run score first)");
      }
      if (seen.insert(*r->record.sub_doc_id).second) {
        scored.push_back({*r->record.sub_doc_id, 0, *r->record.slide_score, {}});
      }
    }
    keep = top_ids(scored, a.fraction);
  }

  RecordReader reader(a.input);
  AtomicOutput out(a.output);
  std::size_t written = 0;
  while (auto r = reader.next()) {
    const bool kept = level ? r->kept_at.contains(*level) : keep.count(r->record.sub_doc_id.value_or("")) > 0;
    if (!kept) continue;
    out.stream() << serialize_scored_record(*r) << '\n';
    ++written;
  }
  out.commit();
  m.records = {{"input", reader.count()}, {"output", written}};
  return 0;
}

// ---------------------------------------------------------------- filter-sents

struct FilterSentsArgs {
  std::string input;
  std::string output;
  std::string rejects;
  std::string src_lang = "en";
  std::string tgt_lang = "de";
  std::vector<std::string> charsets;
  std::string lid = "const:1";
  std::string lid2;
  std::string sim = "const:1";
  SentFilterConfig cfg;
};

int run_filter_sents(const FilterSentsArgs &a, const Global &, Manifest &m) {
  a.cfg.validate();
  CharsetRegistry registry;
  for (const auto &spec : a.charsets) {
    const auto [lang, path] = split_assignment(spec, "--charset");
    auto in = open_input(path);
    registry.add(lang, CharsetTable::from_stream(in));
    m.add_input("charset:" + lang, path);
  }
  registry.get(a.src_lang);
  registry.get(a.tgt_lang);
  const ClassifierHandle lid = make_classifier(a.lid);
  std::optional<ClassifierHandle> lid2;
  if (!a.lid2.empty()) lid2 = make_classifier(a.lid2);
  const SimilarityHandle sim = make_similarity(a.sim);
  m.add_input("pairs", a.input);

  std::vector<SegmentPair> pairs;
  for (auto &[s, t] : read_pairs(a.input)) pairs.push_back({std::move(s), std::move(t)});
  const FilterModels models{&lid, lid2 ? &*lid2 : nullptr, &sim, &registry};
  const FilterResult result = filter_stream(pairs, a.cfg, {a.src_lang, a.tgt_lang}, models);

  const std::string rejects = a.rejects.empty() ? a.output + ".rejects.tsv" : a.rejects;
  AtomicOutput out(a.output);
  for (const auto &p : result.kept) out.stream() << p.src << '\t' << p.tgt << '\n';
  AtomicOutput rej(rejects);
  for (const auto &r : result.rejected) rej.stream() << r.pair.src << '\t' << r.pair.tgt << '\t' << to_string(r.reason) << '\n';
  out.commit();
  rej.commit();

  nlohmann::ordered_json reasons = nlohmann::ordered_json::object();
  for (RejectReason r : kRejectReasons) {
    auto it = result.report.rejected.find(r);
    reasons[std::string(to_string(r))] = it == result.report.rejected.end() ? 0 : it->second;
  }
  m.records = {{"input", result.report.input},
               {"duplicates", result.report.duplicates},
               {"rejected", reasons},
               {"output", result.report.kept}};
  std::cerr << "filter-sents: " << result.report.input << " in, " << result.report.duplicates << " duplicates, "
            << result.rejected.size() << " rejected, " << result.report.kept << " kept\n";
  return 0;
}

// ---------------------------------------------------------------- contextgen

struct ContextArgs {
  std::string input;
  std::string output;
  std::string mode = "train";
  std::size_t max_segments = 10;
  std::size_t max_tokens = 256;
  std::string separator = "<eos>";
  std::string sentences;
  std::string ratio = "1:1";
  bool cycle = false;
  std::size_t limit = 0;
  std::uint64_t seed = 0;
};

struct MixItem {
  std::string src;
  std::string tgt;
  std::string meta;  // sidecar row
};

std::pair<std::size_t, std::size_t> parse_ratio(const std::string &s) {
  const auto colon = s.find(':');
  try {
    if (colon != std::string::npos && s.find_first_not_of("0123456789:") == std::string::npos) {
      return {std::stoul(s.substr(0, colon)), std::stoul(s.substr(colon + 1))};
    }
  } catch (const std::exception &) {
  }
  throw ConfigError("--ratio must look like A:B, got '" + s + "'");
}

int run_contextgen(const ContextArgs &a, const Global &, Manifest &m) {
  if (a.mode != "train" && a.mode != "eval") throw ConfigError("--mode must be train or eval");
  ContextConfig cfg;
  cfg.max_segments = a.max_segments;
  cfg.max_tokens = a.max_tokens;
  cfg.separator = a.separator;
  cfg.validate();
  MixConfig mix;
  std::tie(mix.take_a, mix.take_b) = parse_ratio(a.ratio);
  mix.cycle = a.cycle;
  mix.seed = a.seed;
  if (mix.take_a == 0 && mix.take_b == 0) throw ConfigError("mixing ratio cannot be 0:0");
  if (a.cycle && a.limit == 0) throw ConfigError("--cycle needs --limit");
  m.add_input("records", a.input);

  std::vector<MixItem> samples;
  std::size_t oversize = 0;
  SubDocReader subs(a.input);
  while (auto sub = subs.next()) {
    const auto out = a.mode == "train" ? emit_train_samples(*sub, cfg) : emit_eval_inputs(*sub, cfg);
    for (const auto &s : out) {
      oversize += s.oversize;
      samples.push_back({s.src_text, s.tgt_text,
                         s.sub_doc_id + '\t' + std::to_string(s.first_seg_index) + '\t' +
                             std::to_string(s.last_seg_index) + '\t' + std::to_string(s.n_segments) + '\t' +
                             (s.oversize ? "1" : "0")});
    }
  }
  const std::size_t n_context = samples.size();
  std::vector<MixItem> items;
  std::size_t n_sentences = 0;
  if (!a.sentences.empty()) {
    m.add_input("sentences", a.sentences);
    std::vector<MixItem> sentences;
    for (auto &[s, t] : read_pairs(a.sentences)) sentences.push_back({std::move(s), std::move(t), "-\t-\t-\t1\t0"});
    n_sentences = sentences.size();
    items = mix_streams(std::move(samples), std::move(sentences), mix, a.limit);
  } else {
    items = std::move(samples);
    if (a.limit && items.size() > a.limit) items.resize(a.limit);
  }

  AtomicOutput out(a.output);
  AtomicOutput meta(a.output + ".meta.tsv");
  meta.stream() << "sub_doc_id\tfirst_seg_index\tlast_seg_index\tn_segments\toversize\n";
  for (const auto &it : items) {
    out.stream() << it.src << '\t' << it.tgt << '\n';
    meta.stream() << it.meta << '\n';
  }
  out.commit();
  meta.commit();
  m.records = {{"input", subs.records()},
               {"context_samples", n_context},
               {"oversize", oversize},
               {"sentences", n_sentences},
               {"output", items.size()}};
  return 0;
}

// ---------------------------------------------------------------- stats / analyze

struct StatsArgs {
  std::string input;
  std::string output;
  std::string pair;
};

int run_stats(const StatsArgs &a, const Global &, Manifest &m) {
  m.add_input("records", a.input);
  StatsAccumulator acc(a.pair.empty() ? "all" : a.pair);
  RecordReader reader(a.input);
  while (auto r = reader.next()) acc.add(*r);
  const StatsReport rep = acc.report();
  write_stats_table(std::cout, rep);
  if (!a.output.empty()) {
    AtomicOutput out(a.output);
    write_stats_tsv(out.stream(), rep);
    out.commit();
  }
  m.records = {{"input", reader.count()}};
  return 0;
}

struct AnalyzeArgs {
  std::string scores;
  std::string phenomena;
  std::string output;
};

int run_analyze(const AnalyzeArgs &a, const Global &, Manifest &m) {
  m.add_input("records", a.scores);
  m.add_input("phenomena", a.phenomena);
  std::vector<std::string> ids;
  std::vector<double> scores;
  std::unordered_set<std::string> seen;
  RecordReader reader(a.scores);
  while (auto r = reader.next()) {
    if (!r->record.sub_doc_id || !r->record.slide_score) {
      throw SchemaError("line " + std::to_string(reader.line()) + ": record has no sub_doc_id/slide_score (run score first)");
    }
    if (seen.insert(*r->record.sub_doc_id).second) {
      ids.push_back(*r->record.sub_doc_id);
      scores.push_back(*r->record.slide_score);
    }
  }
  const auto quartiles = assign_quartiles(scores);
  std::unordered_map<std::string, int> quartile_of;
  for (std::size_t i = 0; i < ids.size(); ++i) quartile_of[ids[i]] = quartiles[i];

  auto in = open_input(a.phenomena);
  const auto examples = read_phenomena(in);
  const DistributionTable table = phenomenon_distribution(examples, quartile_of);
  write_distribution_table(std::cout, table);
  if (!a.output.empty()) {
    AtomicOutput out(a.output);
    write_distribution_tsv(out.stream(), table);
    out.commit();
  }
  m.records = {{"sub_documents", ids.size()}, {"examples", examples.size()}};
  return 0;
}

// ---------------------------------------------------------------- main

int report(const std::string &kind, const std::exception &e, int code) {
  std::cerr << "docstitch: " << kind << ": " << e.what() << '\n';
  return code;
}

int main_impl(int argc, char **argv) {
  CLI::App app{"Document-level bitext reconstruction, filtering and scoring", "docstitch-cli"};
  app.set_config("--config", "", "TOML configuration file; flags override its values");
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);
  Global global;
  app.add_option("--workers", global.workers, "Worker threads for per-document stages")
      ->capture_default_str()
      ->check(CLI::Range(1, 256));

  ReconstructArgs rec;
  auto *c_rec = app.add_subcommand("reconstruct", "Annotate bitext segments with document positions");
  c_rec->add_option("--bitext", rec.bitext, "TSV: doc_id, src_text, tgt_text")->required();
  c_rec->add_option("--src-mono", rec.src_mono, "Source documents (directory or doc_id/base64 TSV)")->required();
  c_rec->add_option("--tgt-mono", rec.tgt_mono, "Target documents (directory or doc_id/base64 TSV)")->required();
  c_rec->add_option("-o,--output", rec.output, "Annotated record TSV")->required();
  c_rec->add_option("--corpus", rec.corpus, "paracrawl, europarl, news-commentary or other")->capture_default_str();
  c_rec->add_option("--src-lang", rec.src_lang)->capture_default_str();
  c_rec->add_option("--tgt-lang", rec.tgt_lang)->capture_default_str();
  c_rec->add_option("--lid", rec.lid, "Language identifier: const:<p> or table:<file>")->capture_default_str();
  c_rec->add_option("--src-prefixes", rec.src_prefixes, "Non-breaking prefix file for the source language");
  c_rec->add_option("--tgt-prefixes", rec.tgt_prefixes, "Non-breaking prefix file for the target language");

  BreakArgs brk;
  auto *c_brk = app.add_subcommand("break", "Split annotated documents into sub-documents");
  c_brk->add_option("-i,--input", brk.input, "Annotated record TSV")->required();
  c_brk->add_option("-o,--output", brk.output, "Sub-document record TSV")->required();
  c_brk->add_option("--lid-threshold", brk.cfg.lid_threshold)->capture_default_str();
  c_brk->add_option("--dup-threshold", brk.cfg.dup_threshold)->capture_default_str();
  c_brk->add_option("--min-len", brk.cfg.min_subdoc_len)->capture_default_str();

  ScoreArgs sc;
  auto *c_sc = app.add_subcommand("score", "Score sub-documents with sliding windows and tag cutoffs");
  c_sc->add_option("-i,--input", sc.input, "Sub-document record TSV")->required();
  c_sc->add_option("-o,--output", sc.output, "Scored record TSV")->required();
  c_sc->add_option("--scorer", sc.scorer, "mock or the scoring service URL; DOCSTITCH_SCORER_ENDPOINT overrides the config file")->capture_default_str();
  c_sc->add_option("--batch-size", sc.batch_size, "Pairs per service request")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, kMaxServiceBatch));
  c_sc->add_option("--window", sc.window.window)->capture_default_str();
  c_sc->add_option("--stride", sc.window.stride)->capture_default_str();
  c_sc->add_option("--fraction", sc.fraction, "Only write the top fraction of sub-documents")->check(CLI::Range(0.0, 1.0));

  FilterDocsArgs fd;
  auto *c_fd = app.add_subcommand("filter-docs", "Keep sub-documents at a cutoff level or top fraction");
  c_fd->add_option("-i,--input", fd.input, "Scored record TSV")->required();
  c_fd->add_option("-o,--output", fd.output, "Scored record TSV")->required();
  c_fd->add_option("--level", fd.level, "loose75, medium50 or strict25");
  c_fd->add_option("--fraction", fd.fraction, "Top fraction by slide_score")->check(CLI::Range(0.0, 1.0));

  FilterSentsArgs fs;
  auto *c_fs = app.add_subcommand("filter-sents", "Sentence-level bitext filtering baseline");
  c_fs->add_option("-i,--input", fs.input, "TSV: src, tgt")->required();
  c_fs->add_option("-o,--output", fs.output, "Kept pairs TSV")->required();
  c_fs->add_option("--rejects", fs.rejects, "Reject log TSV (default <output>.rejects.tsv)");
  c_fs->add_option("--src-lang", fs.src_lang)->capture_default_str();
  c_fs->add_option("--tgt-lang", fs.tgt_lang)->capture_default_str();
  c_fs->add_option("--charset", fs.charsets, "LANG=FILE character histogram (repeatable)")->required();
  c_fs->add_option("--lid", fs.lid, "Primary language identifier: const:<p> or table:<file>")->capture_default_str();
  c_fs->add_option("--lid2", fs.lid2, "Secondary language identifier");
  c_fs->add_option("--sim", fs.sim, "Similarity model: mock or const:<s>")->capture_default_str();
  c_fs->add_option("--max-punct", fs.cfg.max_punct_frac)->capture_default_str();
  c_fs->add_option("--max-ratio", fs.cfg.max_len_ratio)->capture_default_str();
  c_fs->add_option("--lid-threshold", fs.cfg.lid_threshold)->capture_default_str();
  c_fs->add_option("--sim-threshold", fs.cfg.sim_threshold)->capture_default_str();
  c_fs->add_option("--charset-min", fs.cfg.charset_min_frac)->capture_default_str();

  ContextArgs cx;
  auto *c_cx = app.add_subcommand("contextgen", "Emit context-concatenated samples");
  c_cx->add_option("-i,--input", cx.input, "Sub-document or scored record TSV")->required();
  c_cx->add_option("-o,--output", cx.output, "Samples TSV (src, tgt); sidecar <output>.meta.tsv")->required();
  c_cx->add_option("--mode", cx.mode, "train or eval")->capture_default_str();
  c_cx->add_option("--max-segments", cx.max_segments)->capture_default_str();
  c_cx->add_option("--max-tokens", cx.max_tokens)->capture_default_str();
  c_cx->add_option("--separator", cx.separator)->capture_default_str();
  c_cx->add_option("--sentences", cx.sentences, "Sentence-level TSV (src, tgt) to mix in");
  c_cx->add_option("--ratio", cx.ratio, "Context:sentence mixing ratio")->capture_default_str();
  c_cx->add_flag("--cycle", cx.cycle, "Restart exhausted streams");
  c_cx->add_option("--limit", cx.limit, "Maximum number of output rows");
  c_cx->add_option("--seed", cx.seed)->capture_default_str();

  StatsArgs st;
  auto *c_st = app.add_subcommand("stats", "Segment and sub-document counts per filtering level");
  c_st->add_option("-i,--input", st.input, "Scored record TSV")->required();
  c_st->add_option("-o,--output", st.output, "Report TSV");
  c_st->add_option("--pair", st.pair, "Language pair label");

  AnalyzeArgs an;
  auto *c_an = app.add_subcommand("analyze", "Quartile distribution of annotated phenomena");
  c_an->add_option("--scores", an.scores, "Scored record TSV")->required();
  c_an->add_option("--phenomena", an.phenomena, "TSV: sub_doc_id, category")->required();
  c_an->add_option("-o,--output", an.output, "Report TSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App *sub = app.get_subcommands().front();
  Manifest manifest;
  manifest.command = sub->get_name();
  manifest.config = snapshot(app, *sub);
  if (sub == c_sc) {
    if (const auto env = scorer_from_env(argc, argv)) {
      sc.scorer = *env;
      manifest.config["score.scorer"] = *env;
    }
  }
  std::string output;
  int code = 0;
  try {
    if (sub == c_rec) {
      output = rec.output;
      code = run_reconstruct(rec, global, manifest);
    } else if (sub == c_brk) {
      output = brk.output;
      code = run_break(brk, global, manifest);
    } else if (sub == c_sc) {
      output = sc.output;
      code = run_score(sc, global, manifest);
    } else if (sub == c_fd) {
      output = fd.output;
      code = run_filter_docs(fd, global, manifest);
    } else if (sub == c_fs) {
      output = fs.output;
      code = run_filter_sents(fs, global, manifest);
    } else if (sub == c_cx) {
      output = cx.output;
      code = run_contextgen(cx, global, manifest);
    } else if (sub == c_st) {
      output = st.output;
      code = run_stats(st, global, manifest);
    } else if (sub == c_an) {
      output = an.output;
      code = run_analyze(an, global, manifest);
    }
    if (code == 0 && !output.empty()) manifest.write_next_to(output);
  } catch (const ScoringError &e) {
    return report("scoring service error", e, kExitService);
  } catch (const ProtocolError &e) {
    return report("scoring service protocol error", e, kExitService);
  } catch (const ConfigError &e) {
    return report("configuration error", e, kExitUsage);
  } catch (const Error &e) {
    return report("input error", e, kExitInput);
  } catch (const std::exception &e) {
    return report("error", e, kExitInput);
  }
  return code;
}

}  // namespace
}  // namespace docstitch::cli

int main(int argc, char **argv) { return docstitch::cli::main_impl(argc, argv); }
