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

#include "tmtc/eval.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "tmtc/error.h"

namespace tmtc {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNormTolerance = 1e-6;

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<ActionKind> OtherKinds(ActionKind featured) {
  std::vector<ActionKind> out;
  for (ActionKind k : kAllActionKinds) {
    if (k != featured) out.push_back(k);
  }
  return out;
}

void CheckSize(std::size_t got, std::size_t want, const std::string& what) {
  if (got != want) {
    throw DataError(what + ": expected " + std::to_string(want) +
                    " sentences, got " + std::to_string(got));
  }
}

ordered_json CountsToJson(const KindCounts& c, double beta) {
  ordered_json j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["num_gold"] = c.num_gold();
  j["precision"] = c.precision();
  j["recall"] = c.recall();
  j["f"] = c.f(beta);
  return j;
}

std::string BetaLabel(double beta) {
  std::ostringstream s;
  s << "F" << beta;
  return s.str();
}

double GoldLogProb(const LabelLogProbs& table, const EditLabel& gold,
                   std::size_t pos) {
  const auto it = table.find(gold.ToString());
  if (it == table.end()) {
    throw DataError("position " + std::to_string(pos) + ": gold label " +
                    gold.ToString() + " missing from the distribution");
  }
  return it->second;
}

void CheckDistribution(const LabelLogProbs& table, std::size_t pos) {
  double mass = 0.0;
  for (const auto& [label, lp] : table) {
    if (!std::isfinite(lp) || lp > kNormTolerance) {
      throw DataError("position " + std::to_string(pos) +
                      ": invalid log-probability for " + label);
    }
    mass += std::exp(lp);
  }
  if (std::abs(mass - 1.0) > kNormTolerance) {
    throw DataError("position " + std::to_string(pos) +
                    ": distribution sums to " + std::to_string(mass));
  }
}

double LabelLoss(const std::vector<LabelLogProbs>& log_probs,
                 const LabelSequence& gold,
                 const std::vector<std::uint8_t>* mask) {
  if (log_probs.size() != gold.size()) {
    throw DataError("got " + std::to_string(log_probs.size()) +
                    " distributions for " + std::to_string(gold.size()) +
                    " labels");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CheckDistribution(log_probs[i], i);
    const double lp = GoldLogProb(log_probs[i], gold.labels[i], i);
    if (mask == nullptr || (*mask)[i] != 0) loss -= lp;
  }
  return loss;
}

std::vector<LabelLogProbs> TablesFromJson(const ordered_json& arr) {
  std::vector<LabelLogProbs> out;
  for (const auto& pos : arr) {
    LabelLogProbs table;
    for (const auto& [label, lp] : pos.items()) table[label] = lp.get<double>();
    out.push_back(std::move(table));
  }
  return out;
}

LabelSequence LabelsFromJson(const ordered_json& arr) {
  LabelSequence out = LabelSequence::AllKeep(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto l = EditLabel::Parse(arr[i].get<std::string>());
    if (!l) throw DataError("unknown label '" + arr[i].get<std::string>() + "'");
    out.labels[i] = *l;
  }
  return out;
}

}  // namespace

double FBeta(double precision, double recall, double beta) {
  if (precision < 0.0 || recall < 0.0) {
    throw std::invalid_argument("precision and recall must be non-negative");
  }
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double b2 = beta * beta;
  const double den = b2 * precision + recall;
  if (den == 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / den;
}

double KindCounts::precision() const { return Ratio(tp, tp + fp); }
double KindCounts::recall() const { return Ratio(tp, tp + fn); }

std::vector<EditMatchKey> ExtractEditKeys(const Sentence& source,
                                          const Sentence& target,
                                          bool kind_only) {
  std::vector<EditMatchKey> out;
  for (const EditOp& op : Align(source, target).ops) {
    if (!op.is_error_unit()) continue;
    EditMatchKey key{op.src_pos, UnitActionKind(op), {}};
    if (!kind_only) key.tokens = op.new_tokens;
    out.push_back(std::move(key));
  }
  std::sort(out.begin(), out.end());
  return out;
}

EvalReport Score(const std::vector<Sentence>& sources,
                 const std::vector<Sentence>& hypotheses,
                 const std::vector<Sentence>& references,
                 const ScoreOptions& options) {
  CheckSize(hypotheses.size(), sources.size(), "hypotheses");
  CheckSize(references.size(), sources.size(), "references");
  if (!(options.beta > 0.0)) throw std::invalid_argument("beta must be positive");

  EvalReport report;
  report.beta = options.beta;
  report.kind_only = options.kind_only;
  report.sentences = sources.size();
  for (ActionKind k : options.kinds) report.per_kind[k];

  for (std::size_t s = 0; s < sources.size(); ++s) {
    const auto pred = ExtractEditKeys(sources[s], hypotheses[s], options.kind_only);
    const auto gold = ExtractEditKeys(sources[s], references[s], options.kind_only);
    for (const EditMatchKey& k : pred) {
      auto it = report.per_kind.find(k.kind);
      if (it == report.per_kind.end()) continue;
      if (std::binary_search(gold.begin(), gold.end(), k)) {
        ++it->second.tp;
      } else {
        ++it->second.fp;
      }
    }
    for (const EditMatchKey& k : gold) {
      auto it = report.per_kind.find(k.kind);
      if (it == report.per_kind.end()) continue;
      if (!std::binary_search(pred.begin(), pred.end(), k)) ++it->second.fn;
    }
  }
  for (const auto& [kind, counts] : report.per_kind) report.total += counts;
  return report;
}

std::string RenderEvalTable(const EvalReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "Label" << std::right << std::setw(8)
      << "Num." << std::setw(9) << "Prec." << std::setw(9) << "Rec."
      << std::setw(9) << BetaLabel(report.beta) << '\n';
  out << std::fixed << std::setprecision(2);
  auto row = [&](std::string_view name, const KindCounts& c) {
    out << std::left << std::setw(14) << name << std::right << std::setw(8)
        << c.num_gold() << std::setw(9) << 100.0 * c.precision()
        << std::setw(9) << 100.0 * c.recall() << std::setw(9)
        << 100.0 * c.f(report.beta) << '\n';
  };
  for (const auto& [kind, counts] : report.per_kind) {
    const std::string name =
        kind == ActionKind::kDelete
            ? "$DELETE"
            : (kind == ActionKind::kAppend ? "$APPEND_{t}" : "$REPLACE_{t}");
    row(name, counts);
  }
  row("all", report.total);
  return out.str();
}

ordered_json EvalReportToJson(const EvalReport& report) {
  ordered_json j;
  j["beta"] = report.beta;
  j["kind_only"] = report.kind_only;
  j["sentences"] = report.sentences;
  ordered_json kinds = ordered_json::object();
  for (const auto& [kind, counts] : report.per_kind) {
    kinds[std::string(ActionKindName(kind))] = CountsToJson(counts, report.beta);
  }
  j["per_kind"] = std::move(kinds);
  j["total"] = CountsToJson(report.total, report.beta);
  return j;
}

ActionSubsets BuildActionSubsets(const std::vector<ParallelInstance>& corpus,
                                 ActionKind kind) {
  ActionSubsets out;
  out.kind = kind;
  const UnitPredicate featured = KeepKinds({kind});
  for (const ParallelInstance& inst : corpus) {
    const EditScript script = Align(inst.source, inst.reference);
    const bool has_kind = std::any_of(
        script.ops.begin(), script.ops.end(), [kind](const EditOp& op) {
          return op.is_error_unit() && UnitActionKind(op) == kind;
        });
    if (!has_kind) continue;
    out.raw.push_back(inst);
    out.checked.push_back(
        {inst.id, ApplyScript(inst.source, FilterScript(script, featured)),
         inst.reference});
  }
  return out;
}

QuantexpReport QuantExp(const ActionSubsets& subsets,
                        const std::vector<Sentence>& predictions_on_raw,
                        const std::vector<Sentence>& predictions_on_checked,
                        double beta, bool kind_only) {
  CheckSize(predictions_on_raw.size(), subsets.raw.size(),
            "predictions on the raw subset");
  CheckSize(predictions_on_checked.size(), subsets.checked.size(),
            "predictions on the checked subset");

  auto score = [&](const std::vector<ParallelInstance>& subset,
                   const std::vector<Sentence>& hyps) {
    std::vector<Sentence> sources;
    std::vector<Sentence> references;
    for (const ParallelInstance& inst : subset) {
      sources.push_back(inst.source);
      references.push_back(inst.reference);
    }
    return Score(sources, hyps, references,
                 {OtherKinds(subsets.kind), beta, kind_only});
  };

  QuantexpReport report;
  report.featured = subsets.kind;
  report.beta = beta;
  report.instances = subsets.raw.size();
  report.before = score(subsets.raw, predictions_on_raw);
  report.after = score(subsets.checked, predictions_on_checked);
  return report;
}

std::string RenderQuantexpTable(const QuantexpReport& report) {
  std::ostringstream out;
  const std::string name(ActionKindName(report.featured));
  out << "featured action: " << name << " (" << report.instances
      << " instances)\n";
  out << std::left << std::setw(10) << "subset" << std::setw(10) << "label"
      << std::right << std::setw(8) << "Num." << std::setw(9) << "Prec."
      << std::setw(9) << "Rec." << std::setw(9) << BetaLabel(report.beta)
      << std::setw(10) << "delta" << '\n';
  out << std::fixed << std::setprecision(2);
  for (const auto& [kind, before] : report.before.per_kind) {
    const KindCounts& after = report.after.per_kind.at(kind);
    const double f_before = 100.0 * before.f(report.beta);
    const double f_after = 100.0 * after.f(report.beta);
    out << std::left << std::setw(10) << "raw" << std::setw(10)
        << ActionKindName(kind) << std::right << std::setw(8)
        << before.num_gold() << std::setw(9) << 100.0 * before.precision()
        << std::setw(9) << 100.0 * before.recall() << std::setw(9) << f_before
        << '\n';
    out << std::left << std::setw(10) << "checked" << std::setw(10)
        << ActionKindName(kind) << std::right << std::setw(8)
        << after.num_gold() << std::setw(9) << 100.0 * after.precision()
        << std::setw(9) << 100.0 * after.recall() << std::setw(9) << f_after
        << std::setw(10) << std::showpos << f_after - f_before
        << std::noshowpos << '\n';
  }
  return out.str();
}

ordered_json QuantexpReportToJson(const QuantexpReport& report) {
  ordered_json j;
  j["featured"] = std::string(ActionKindName(report.featured));
  j["beta"] = report.beta;
  j["instances"] = report.instances;
  ordered_json kinds = ordered_json::object();
  for (const auto& [kind, before] : report.before.per_kind) {
    const KindCounts& after = report.after.per_kind.at(kind);
    ordered_json k;
    k["before"] = CountsToJson(before, report.beta);
    k["after"] = CountsToJson(after, report.beta);
    k["delta_f"] = after.f(report.beta) - before.f(report.beta);
    kinds[std::string(ActionKindName(kind))] = std::move(k);
  }
  j["per_kind"] = std::move(kinds);
  return j;
}

LossReport ComputeLosses(const LossInput& input) {
  const std::size_t n = input.gold.size();
  if (!input.mask.empty() && input.mask.size() != n) {
    throw DataError("mask has " + std::to_string(input.mask.size()) +
                    " entries for " + std::to_string(n) + " labels");
  }
  LossReport out;
  out.l_c = LabelLoss(input.log_probs, input.gold, nullptr);
  out.l_c1 = input.mask.empty()
                 ? out.l_c
                 : LabelLoss(input.log_probs, input.gold, &input.mask);

  if (!input.ged_log_probs.empty()) {
    const GedLabelSequence ged =
        input.ged_gold.empty() ? GedLabels(input.gold) : input.ged_gold;
    if (input.ged_log_probs.size() != n || ged.size() != n) {
      throw DataError("detection tables must cover all " + std::to_string(n) +
                      " positions");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& lp = input.ged_log_probs[i];
      if (!std::isfinite(lp[0]) || !std::isfinite(lp[1]) ||
          std::abs(std::exp(lp[0]) + std::exp(lp[1]) - 1.0) > kNormTolerance) {
        throw DataError("position " + std::to_string(i) +
                        ": detection distribution is not normalized");
      }
      out.l_d -= lp[ged[i] != 0 ? 1 : 0];
    }
    out.has_l_d = true;
  }
  if (input.second) {
    out.l_c2 = LabelLoss(input.second->log_probs, input.second->gold, nullptr);
    out.has_l_c2 = true;
  }
  out.l_total = out.l_c1 + out.l_c2 + out.l_d + out.l_c;
  return out;
}

LossInput ParseLossInput(std::string_view line) {
  try {
    const ordered_json j = ordered_json::parse(line);
    LossInput in;
    in.log_probs = TablesFromJson(j.at("log_probs"));
    in.gold = LabelsFromJson(j.at("labels"));
    if (j.contains("mask")) {
      for (const auto& b : j["mask"]) {
        const int v = b.get<int>();
        if (v != 0 && v != 1) throw DataError("mask values must be 0 or 1");
        in.mask.push_back(static_cast<std::uint8_t>(v));
      }
    }
    if (j.contains("ged_log_probs")) {
      for (const auto& p : j["ged_log_probs"]) {
        if (p.size() != 2) throw DataError("ged_log_probs entries need 2 values");
        in.ged_log_probs.push_back({p[0].get<double>(), p[1].get<double>()});
      }
    }
    if (j.contains("second")) {
      const auto& s = j["second"];
      in.second = LossInput::Turn{TablesFromJson(s.at("log_probs")),
                                  LabelsFromJson(s.at("labels"))};
    }
    return in;
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("loss input: ") + e.what());
  }
}

ordered_json LossReportToJson(const LossReport& report) {
  ordered_json j;
  j["l_d"] = report.has_l_d ? ordered_json(report.l_d) : ordered_json(nullptr);
  j["l_c"] = report.l_c;
  j["l_c1"] = report.l_c1;
  j["l_c2"] =
      report.has_l_c2 ? ordered_json(report.l_c2) : ordered_json(nullptr);
  j["l_total"] = report.l_total;
  return j;
}

}  // namespace tmtc
