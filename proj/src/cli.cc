// Copyright 2026 The TMTC Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tmtc/cli.h"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "tmtc/align.h"
#include "tmtc/construct.h"
#include "tmtc/error.h"
#include "tmtc/eval.h"
#include "tmtc/labels.h"
#include "tmtc/textcore.h"
#include "tmtc/turn_instance.h"

namespace tmtc::cli {
namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kJsonlSchemaHelp = R"(JSONL schema (one object per line, keys in this order):
  {"origin_id": int, "turn": int, "strategy": string, "src": [string],
   "tgt": [string], "labels": [string], "mask": [0|1]}
labels[i] is one of "$KEEP", "$DELETE", "$APPEND_<t>", "$REPLACE_<t>";
len(labels) == len(mask) == len(src). With --sentinel (the default), a
record whose target gains a token before the first source token carries the
sentinel label and mask bit as element 0 of both arrays plus a trailing
"sentinel": true key.
Strategy tags: "random:<ratio>", "append-first", "delete-first",
"replace-first", "ordered:app+rep+del", "kturn:<k>", "original".)";

constexpr const char* kLossSchemaHelp = R"(Loss input JSONL (one object per line):
  {"log_probs": [{"<label>": logp, ...}, ...], "labels": ["<label>", ...],
   "mask": [0|1, ...], "ged_log_probs": [[logp0, logp1], ...],
   "second": {"log_probs": [...], "labels": [...]}}
"mask", "ged_log_probs" and "second" are optional. Log-probabilities are
natural logs; each position must sum to 1 within 1e-6.
Output: one {"l_d", "l_c", "l_c1", "l_c2", "l_total"} object per line.)";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void WriteJsonReport(const fs::path& path, const RunConfig& config,
                     ordered_json report) {
  ordered_json doc;
  doc["config"] = ConfigToJson(config);
  for (auto& [key, value] : report.items()) doc[key] = std::move(value);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::vector<ActionKind> ParseKindList(const std::string& text) {
  std::vector<ActionKind> out;
  std::stringstream ss(text);
  std::string item;
  const char sep = text.find('+') != std::string::npos ? '+' : ',';
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    const auto kind = ParseActionKind(item);
    if (!kind) throw UsageError("unknown action kind '" + item + "'");
    out.push_back(*kind);
  }
  return out;
}

ActionKind ParseKind(const std::string& text) {
  const auto kind = ParseActionKind(text);
  if (!kind) throw UsageError("unknown action kind '" + text + "'");
  return *kind;
}

struct Options {
  // Shared.
  std::string src, ref, hyp, out, in, json;
  std::uint64_t seed = kDefaultSeed;
  int workers = 1;
  bool sentinel = true;
  // construct
  std::string strategy = "random";
  double ratio = 0.5;
  int turns = 2;
  std::string order = "app+rep+del";
  bool include_original = true;
  bool invert_typefirst = false;
  std::string stats_json;
  // eval / quantexp
  std::string labels = "append,delete,replace";
  double beta = 0.5;
  bool kind_only = false;
  std::string action;
  std::string prepare_dir, pred_raw, pred_checked;
  // m2
  std::string convert;
  int annotator = 0;
  std::string out_src, out_ref;
};

Strategy MakeStrategy(const Options& o) {
  Strategy s;
  if (o.strategy == "random") {
    s = RandomStrategy{o.ratio};
  } else if (o.strategy == "append-first" || o.strategy == "delete-first" ||
             o.strategy == "replace-first") {
    const std::string kind = o.strategy.substr(0, o.strategy.find('-'));
    s = TypeFirstStrategy{ParseKind(kind), o.invert_typefirst};
  } else if (o.strategy == "ordered") {
    s = OrderedStrategy{ParseKindList(o.order)};
  } else if (o.strategy == "kturn") {
    s = KTurnStrategy{o.turns};
  } else {
    throw UsageError("unknown strategy '" + o.strategy + "'");
  }
  try {
    ValidateStrategy(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

int CmdDerive(const Options& o, RunConfig& config, std::ostream&) {
  const auto corpus = ReadParallel(o.src, o.ref);
  std::ofstream out = OpenOut(o.out);
  const JsonlOptions jopts{o.sentinel};
  for (const ParallelInstance& inst : corpus) {
    out << ToJsonLine(OriginalRecord(inst, 0), jopts) << '\n';
  }
  if (!o.json.empty()) {
    WriteJsonReport(o.json, config, {{"records", corpus.size()}});
  }
  return kExitOk;
}

int CmdApply(const Options& o, RunConfig&, std::ostream&) {
  const auto records = ReadJsonl(fs::path(o.in));
  std::vector<Sentence> out;
  out.reserve(records.size());
  for (const TurnInstance& r : records) out.push_back(ApplyLabels(r.source, r.labels));
  WriteSentences(out, o.out);
  return kExitOk;
}

int CmdConstruct(const Options& o, RunConfig& config, std::ostream& err) {
  const Strategy strategy = MakeStrategy(o);
  config.strategy = StrategyTag(strategy);
  const auto corpus = ReadParallel(o.src, o.ref);

  ConstructOptions copts;
  copts.strategy = strategy;
  copts.seed = o.seed;
  copts.include_original = o.include_original;
  copts.workers = o.workers;

  std::ofstream out = OpenOut(o.out);
  const JsonlOptions jopts{o.sentinel};
  StatsAccumulator stats;
  ConstructCorpus(corpus, copts, [&](const TurnInstance& t) {
    out << ToJsonLine(t, jopts) << '\n';
    stats.Add(t);
  });
  out.close();
  if (!out) throw DataError("write failed: " + o.out);

  const CorpusStats summary = stats.Finish();
  err << RenderStatsTable(summary);
  if (!o.stats_json.empty()) {
    WriteJsonReport(o.stats_json, config, {{"stats", StatsToJson(summary)}});
  }
  return kExitOk;
}

int CmdStats(const Options& o, RunConfig& config, std::ostream& out) {
  const CorpusStats summary = ComputeCorpusStats(ReadJsonl(fs::path(o.in)));
  out << RenderStatsTable(summary);
  if (!o.json.empty()) {
    WriteJsonReport(o.json, config, {{"stats", StatsToJson(summary)}});
  }
  return kExitOk;
}

int CmdEval(const Options& o, RunConfig& config, std::ostream& out) {
  ScoreOptions sopts{ParseKindList(o.labels), o.beta, o.kind_only};
  if (sopts.kinds.empty()) throw UsageError("--labels selects no kinds");
  const EvalReport report = Score(ReadSentences(fs::path(o.src)),
                                  ReadSentences(fs::path(o.hyp)),
                                  ReadSentences(fs::path(o.ref)), sopts);
  out << RenderEvalTable(report);
  if (!o.json.empty()) {
    WriteJsonReport(o.json, config, {{"report", EvalReportToJson(report)}});
  }
  return kExitOk;
}

int CmdQuantexp(const Options& o, RunConfig& config, std::ostream& out,
                std::ostream& err) {
  const ActionKind kind = ParseKind(o.action);
  const ActionSubsets subsets = BuildActionSubsets(ReadParallel(o.src, o.ref), kind);

  if (!o.prepare_dir.empty()) {
    const fs::path dir(o.prepare_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create " + dir.string());
    std::vector<Sentence> raw_src, checked_src, refs;
    std::ofstream ids = OpenOut(dir / "ids.txt");
    for (std::size_t i = 0; i < subsets.raw.size(); ++i) {
      raw_src.push_back(subsets.raw[i].source);
      checked_src.push_back(subsets.checked[i].source);
      refs.push_back(subsets.raw[i].reference);
      ids << subsets.raw[i].id << '\n';
    }
    WriteSentences(raw_src, dir / "d_action.src");
    WriteSentences(refs, dir / "d_action.ref");
    WriteSentences(checked_src, dir / "d_action_checked.src");
    WriteSentences(refs, dir / "d_action_checked.ref");
    if (subsets.raw.empty()) {
      err << "warning: no instance contains a " << ActionKindName(kind)
          << " error; subset files are empty\n";
    }
    out << subsets.raw.size() << " instances written to " << dir.string()
        << '\n';
    if (!o.json.empty()) {
      WriteJsonReport(o.json, config, {{"instances", subsets.raw.size()}});
    }
    return kExitOk;
  }

  if (o.pred_raw.empty() || o.pred_checked.empty()) {
    throw UsageError("quantexp needs --prepare or both --pred-raw and --pred-checked");
  }
  const QuantexpReport report =
      QuantExp(subsets, ReadSentences(fs::path(o.pred_raw)),
               ReadSentences(fs::path(o.pred_checked)), o.beta, o.kind_only);
  out << RenderQuantexpTable(report);
  if (!o.json.empty()) {
    WriteJsonReport(o.json, config, {{"report", QuantexpReportToJson(report)}});
  }
  return kExitOk;
}

int CmdM2(const Options& o, RunConfig& config, std::ostream& out) {
  const auto pairs = M2ToParallel(ParseM2(fs::path(o.convert)), o.annotator);
  std::vector<Sentence> src, ref;
  for (const ParallelInstance& p : pairs) {
    src.push_back(p.source);
    ref.push_back(p.reference);
  }
  WriteSentences(src, o.out_src);
  WriteSentences(ref, o.out_ref);
  out << pairs.size() << " sentence pairs written\n";
  if (!o.json.empty()) {
    WriteJsonReport(o.json, config, {{"pairs", pairs.size()}});
  }
  return kExitOk;
}

int CmdLoss(const Options& o, RunConfig& config, std::ostream& out) {
  std::ifstream in(o.in, std::ios::binary);
  if (!in) throw DataError("cannot open " + o.in);
  std::optional<std::ofstream> file;
  if (!o.out.empty()) file = OpenOut(o.out);
  std::ostream& sink = file ? *file : out;

  LossReport total;
  std::size_t records = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    LossReport r;
    try {
      r = ComputeLosses(ParseLossInput(line));
    } catch (const DataError& e) {
      throw DataError("loss input line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    sink << LossReportToJson(r).dump() << '\n';
    total.l_d += r.l_d;
    total.l_c += r.l_c;
    total.l_c1 += r.l_c1;
    total.l_c2 += r.l_c2;
    total.l_total += r.l_total;
    total.has_l_d = total.has_l_d || r.has_l_d;
    total.has_l_c2 = total.has_l_c2 || r.has_l_c2;
    ++records;
  }
  if (!o.json.empty()) {
    WriteJsonReport(o.json, config,
                    {{"records", records}, {"total", LossReportToJson(total)}});
  }
  return kExitOk;
}

}  // namespace

ordered_json ConfigToJson(const RunConfig& c) {
  ordered_json j;
  j["subcommand"] = c.subcommand;
  ordered_json inputs = ordered_json::object();
  for (const auto& [k, v] : c.inputs) inputs[k] = v;
  j["inputs"] = std::move(inputs);
  j["strategy"] = c.strategy.empty() ? ordered_json(nullptr) : ordered_json(c.strategy);
  j["seed"] = c.seed;
  j["beta"] = c.beta;
  j["annotator"] = c.annotator;
  j["workers"] = c.workers;
  j["flags"] = {{"include_original", c.include_original},
                {"invert_typefirst", c.invert_typefirst},
                {"kind_only", c.kind_only},
                {"sentinel", c.sentinel}};
  return j;
}

std::uint64_t DefaultSeed() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  std::uint64_t value = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(std::string(kSeedEnvVar) +
                                " must be an unsigned 64-bit integer");
  }
  return value;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  try {
    o.seed = DefaultSeed();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Multi-turn GEC training data construction and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tmtc 1.0.0");

  auto add_json = [&](CLI::App* sub) {
    sub->add_option("--json", o.json, "Write a JSON report (with config)");
  };
  auto add_sentinel = [&](CLI::App* sub) {
    sub->add_flag("--sentinel,!--no-sentinel", o.sentinel,
                  "Render a leading-insertion sentinel label (default on)");
  };

  CLI::App* derive = app.add_subcommand("derive", "Derive editing-action labels for sentence pairs");
  derive->add_option("--src", o.src, "Erroneous sentences")->required()->check(CLI::ExistingFile);
  derive->add_option("--ref", o.ref, "Reference sentences")->required()->check(CLI::ExistingFile);
  derive->add_option("--out", o.out, "Output JSONL")->required();
  add_sentinel(derive);
  add_json(derive);
  derive->footer(kJsonlSchemaHelp);

  CLI::App* apply = app.add_subcommand("apply", "Apply the labels of JSONL records to their source sentences");
  apply->add_option("--in", o.in, "Input JSONL")->required()->check(CLI::ExistingFile);
  apply->add_option("--out", o.out, "Output sentences, one per line")->required();
  apply->footer(kJsonlSchemaHelp);

  CLI::App* construct = app.add_subcommand("construct", "Build multi-turn training records");
  construct->add_option("--src", o.src, "Erroneous sentences")->required()->check(CLI::ExistingFile);
  construct->add_option("--ref", o.ref, "Reference sentences")->required()->check(CLI::ExistingFile);
  construct->add_option("--out", o.out, "Output JSONL")->required();
  construct->add_option("--strategy", o.strategy,
                        "random | append-first | delete-first | replace-first | ordered | kturn")
      ->capture_default_str();
  construct->add_option("--ratio", o.ratio, "Correction ratio for random")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  construct->add_option("--turns", o.turns, "Number of turns for kturn")
      ->check(CLI::Range(2, 1 << 20))->capture_default_str();
  construct->add_option("--order", o.order, "Kind order for ordered, e.g. app+rep+del")
      ->capture_default_str();
  construct->add_option("--seed", o.seed, "RNG seed (default $TMTC_SEED or 42)");
  construct->add_flag("--include-original,!--no-include-original", o.include_original,
                      "Re-emit decomposed originals as a final turn (default on)");
  construct->add_flag("--invert-typefirst", o.invert_typefirst,
                      "Type-first strategies leave the featured kind for the second turn");
  construct->add_option("--workers", o.workers, "Worker threads")
      ->check(CLI::PositiveNumber)->capture_default_str();
  construct->add_option("--stats-json", o.stats_json, "Write corpus statistics as JSON");
  add_sentinel(construct);
  construct->footer(kJsonlSchemaHelp);

  CLI::App* stats = app.add_subcommand("stats", "Summarize a JSONL record file");
  stats->add_option("--in", o.in, "Input JSONL")->required()->check(CLI::ExistingFile);
  add_json(stats);
  stats->footer(kJsonlSchemaHelp);

  CLI::App* eval = app.add_subcommand("eval", "Score hypotheses per editing action");
  eval->add_option("--src", o.src, "Erroneous sentences")->required()->check(CLI::ExistingFile);
  eval->add_option("--hyp", o.hyp, "Hypotheses")->required()->check(CLI::ExistingFile);
  eval->add_option("--ref", o.ref, "References")->required()->check(CLI::ExistingFile);
  eval->add_option("--labels", o.labels, "Kinds to score, comma separated")->capture_default_str();
  eval->add_option("--beta", o.beta, "F-measure beta")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_flag("--kind-only", o.kind_only, "Match edits by anchor and kind only");
  add_json(eval);

  CLI::App* quantexp = app.add_subcommand("quantexp", "Cross-type correction interdependence experiment");
  quantexp->add_option("--src", o.src, "Erroneous sentences")->required()->check(CLI::ExistingFile);
  quantexp->add_option("--ref", o.ref, "Reference sentences")->required()->check(CLI::ExistingFile);
  quantexp->add_option("--action", o.action, "Featured action: append | delete | replace")->required();
  quantexp->add_option("--prepare", o.prepare_dir, "Write D(ACTION) / D(ACTION checked) files here");
  quantexp->add_option("--pred-raw", o.pred_raw, "Predictions on d_action.src")->check(CLI::ExistingFile);
  quantexp->add_option("--pred-checked", o.pred_checked, "Predictions on d_action_checked.src")
      ->check(CLI::ExistingFile);
  quantexp->add_option("--beta", o.beta, "F-measure beta")->check(CLI::PositiveNumber);
  quantexp->add_flag("--kind-only", o.kind_only, "Match edits by anchor and kind only");
  add_json(quantexp);

  CLI::App* m2 = app.add_subcommand("m2", "Convert M2 annotations to parallel text");
  m2->add_option("--convert", o.convert, "M2 file")->required()->check(CLI::ExistingFile);
  m2->add_option("--annotator", o.annotator, "Annotator id")->capture_default_str();
  m2->add_option("--out-src", o.out_src, "Output source sentences")->required();
  m2->add_option("--out-ref", o.out_ref, "Output reference sentences")->required();
  add_json(m2);

  CLI::App* loss = app.add_subcommand("loss", "Compute tagging losses from label log-probabilities");
  loss->add_option("--in", o.in, "Loss input JSONL")->required()->check(CLI::ExistingFile);
  loss->add_option("--out", o.out, "Output JSONL (default stdout)");
  add_json(loss);
  loss->footer(kLossSchemaHelp);

  std::vector<std::string> argv_store(args.begin(), args.end());
  if (argv_store.empty()) argv_store.emplace_back("tmtc");
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());

  bool quantexp_beta_given = false;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    quantexp_beta_given = quantexp->count("--beta") > 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  // The interdependence experiment reports F1 unless told otherwise.
  if (quantexp->parsed() && !quantexp_beta_given) o.beta = 1.0;

  RunConfig config;
  config.subcommand = app.get_subcommands().front()->get_name();
  for (const auto& [name, value] :
       {std::pair{"src", o.src}, {"ref", o.ref}, {"hyp", o.hyp}, {"in", o.in},
        {"convert", o.convert}, {"pred_raw", o.pred_raw},
        {"pred_checked", o.pred_checked}}) {
    if (!value.empty()) config.inputs[name] = value;
  }
  config.seed = o.seed;
  config.beta = o.beta;
  config.annotator = o.annotator;
  config.workers = o.workers;
  config.include_original = o.include_original;
  config.invert_typefirst = o.invert_typefirst;
  config.kind_only = o.kind_only;
  config.sentinel = o.sentinel;

  try {
    if (derive->parsed()) return CmdDerive(o, config, err);
    if (apply->parsed()) return CmdApply(o, config, err);
    if (construct->parsed()) return CmdConstruct(o, config, err);
    if (stats->parsed()) return CmdStats(o, config, out);
    if (eval->parsed()) return CmdEval(o, config, out);
    if (quantexp->parsed()) return CmdQuantexp(o, config, out, err);
    if (m2->parsed()) return CmdM2(o, config, out);
    if (loss->parsed()) return CmdLoss(o, config, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace tmtc::cli
