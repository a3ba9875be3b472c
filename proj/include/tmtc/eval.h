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

// Per-action scoring, the cross-type interdependence experiment and the
// tagging losses.

#ifndef TMTC_EVAL_H_
#define TMTC_EVAL_H_

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tmtc/align.h"
#include "tmtc/labels.h"
#include "tmtc/textcore.h"

namespace tmtc {

// (1 + b^2) P R / (b^2 P + R), or 0 when the denominator is 0. Works on
// either the [0, 1] or the percentage scale; the result is on the scale of
// the inputs. Throws std::invalid_argument on negative inputs or beta <= 0.
double FBeta(double precision, double recall, double beta);

// Two edits match iff anchor, kind and tokens are all equal. The anchor of
// an insertion is the source token it follows (-1 before the first token).
struct EditMatchKey {
  int anchor = 0;
  ActionKind kind = ActionKind::kAppend;
  std::vector<std::string> tokens;

  friend auto operator<=>(const EditMatchKey&, const EditMatchKey&) = default;
};

// Error units of Align(source, target) as match keys. With `kind_only`
// the argument tokens are dropped from the keys.
std::vector<EditMatchKey> ExtractEditKeys(const Sentence& source,
                                          const Sentence& target,
                                          bool kind_only = false);

struct KindCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t num_gold() const { return tp + fn; }
  // 0/0 is defined as 0 for both.
  double precision() const;
  double recall() const;
  double f(double beta) const { return FBeta(precision(), recall(), beta); }

  KindCounts& operator+=(const KindCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const KindCounts&, const KindCounts&) = default;
};

struct EvalReport {
  double beta = 0.5;
  bool kind_only = false;
  std::size_t sentences = 0;
  // Only the requested kinds are present.
  std::map<ActionKind, KindCounts> per_kind;
  // Micro-average over the requested kinds.
  KindCounts total;
};

struct ScoreOptions {
  std::vector<ActionKind> kinds{std::begin(kAllActionKinds),
                                std::end(kAllActionKinds)};
  double beta = 0.5;
  bool kind_only = false;
};

// Scores hypotheses against references by exact edit-key matching. Throws
// DataError when the corpora differ in length.
EvalReport Score(const std::vector<Sentence>& sources,
                 const std::vector<Sentence>& hypotheses,
                 const std::vector<Sentence>& references,
                 const ScoreOptions& options = {});

// Table with Num./Prec./Rec./F columns, percentages to two decimals.
std::string RenderEvalTable(const EvalReport& report);
nlohmann::ordered_json EvalReportToJson(const EvalReport& report);

// D(ACTION): instances with at least one unit of `kind`. D(ACTION checked):
// the same instances with exactly those units already corrected in the
// source. References and ids are unchanged.
struct ActionSubsets {
  ActionKind kind = ActionKind::kAppend;
  std::vector<ParallelInstance> raw;
  std::vector<ParallelInstance> checked;
};

ActionSubsets BuildActionSubsets(const std::vector<ParallelInstance>& corpus,
                                 ActionKind kind);

struct QuantexpReport {
  ActionKind featured = ActionKind::kAppend;
  double beta = 1.0;
  std::size_t instances = 0;
  // Scores on the raw subset (before) and on the checked subset (after),
  // for the two non-featured kinds.
  EvalReport before;
  EvalReport after;
};

// Throws DataError when a prediction corpus does not match its subset.
QuantexpReport QuantExp(const ActionSubsets& subsets,
                        const std::vector<Sentence>& predictions_on_raw,
                        const std::vector<Sentence>& predictions_on_checked,
                        double beta = 1.0, bool kind_only = false);

std::string RenderQuantexpTable(const QuantexpReport& report);
nlohmann::ordered_json QuantexpReportToJson(const QuantexpReport& report);

// Log-probabilities (natural log) over label strings at one position.
using LabelLogProbs = std::map<std::string, double>;

struct LossInput {
  // One table per source token; the sentinel slot is not scored.
  std::vector<LabelLogProbs> log_probs;
  LabelSequence gold;
  // Empty means all ones.
  std::vector<std::uint8_t> mask;
  // [log p(y=0), log p(y=1)] per token. Empty skips the detection loss.
  std::vector<std::array<double, 2>> ged_log_probs;
  // Empty means GedLabels(gold).
  GedLabelSequence ged_gold;

  // Optional second-turn input (X', X_c).
  struct Turn {
    std::vector<LabelLogProbs> log_probs;
    LabelSequence gold;
  };
  std::optional<Turn> second;
};

struct LossReport {
  double l_d = 0.0;
  double l_c = 0.0;
  double l_c1 = 0.0;
  double l_c2 = 0.0;
  // l_c1 + l_c2 + l_d + l_c; absent components count as 0.
  double l_total = 0.0;
  bool has_l_d = false;
  bool has_l_c2 = false;
};

// l_c = -sum log p(gold_i); l_c1 = -sum mask_i log p(gold_i);
// l_d = -sum log p(ged_i); l_c2 = l_c of the second input. Throws DataError
// on length mismatches, missing gold labels, or a table whose probabilities
// do not sum to 1 within 1e-6 (the message names the position).
LossReport ComputeLosses(const LossInput& input);

// Parses one line of the loss JSONL input:
//   {"log_probs": [{"<label>": logp, ...}, ...], "labels": ["<label>", ...],
//    "mask": [0|1, ...], "ged_log_probs": [[logp0, logp1], ...],
//    "second": {"log_probs": [...], "labels": [...]}}
// "mask", "ged_log_probs" and "second" are optional.
LossInput ParseLossInput(std::string_view line);
nlohmann::ordered_json LossReportToJson(const LossReport& report);

}  // namespace tmtc

#endif  // TMTC_EVAL_H_
