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

// Multi-turn training data construction.
//
// Every training pair (X_e, X_c) is decomposed into a correction chain
// X_e = X^(0), X^(1), ..., X^(m) = X_c where each intermediate sentence
// corrects a growing subset of the error units of Align(X_e, X_c). Each hop
// becomes one training record. Labels of a non-final hop that disagree with
// the labels toward X_c are masked out of the loss.

#ifndef TMTC_CONSTRUCT_H_
#define TMTC_CONSTRUCT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "tmtc/align.h"
#include "tmtc/textcore.h"
#include "tmtc/turn_instance.h"

namespace tmtc {

// Corrects round(ratio * |E|) randomly chosen error units first.
struct RandomStrategy {
  double ratio = 0.5;
};

// Corrects all units of one kind in the first turn and the rest in the
// second. `inverted` instead corrects every other kind first and leaves the
// featured kind for the second turn.
struct TypeFirstStrategy {
  ActionKind kind = ActionKind::kAppend;
  bool inverted = false;
};

// One turn per kind, in the given order (2 or 3 distinct kinds). Kinds not
// listed are corrected in the final turn.
struct OrderedStrategy {
  std::vector<ActionKind> kinds;
};

// Shuffles the error units and corrects them in k near-equal groups.
struct KTurnStrategy {
  int k = 2;
};

using Strategy = std::variant<RandomStrategy, TypeFirstStrategy,
                              OrderedStrategy, KTurnStrategy>;

// Throws std::invalid_argument on out-of-range parameters.
void ValidateStrategy(const Strategy& strategy);

// "random:<ratio>", "append-first", "delete-first", "replace-first",
// "ordered:app+rep+del", "kturn:<k>". Inverted type-first strategies carry
// an "-inverted" suffix.
std::string StrategyTag(const Strategy& strategy);

// Per-instance RNG seed, independent of processing order.
std::uint64_t InstanceSeed(std::uint64_t seed, std::uint64_t origin_id);

// The correction chain, starting at inst.source and ending at
// inst.reference, with consecutive duplicates removed. A chain of length 2
// means the instance is not decomposed.
std::vector<Sentence> BuildIntermediate(const ParallelInstance& inst,
                                        const Strategy& strategy,
                                        std::uint64_t seed);

// One record per hop of `chain`, turns numbered from 1. A chain of length 2
// yields the single original record (turn 0, strategy "original"). Throws
// DataError if the chain endpoints do not match the instance.
std::vector<TurnInstance> EmitTurns(const ParallelInstance& inst,
                                    const std::vector<Sentence>& chain,
                                    const Strategy& strategy);

// The undecomposed (X_e, X_c) record with an all-ones mask.
TurnInstance OriginalRecord(const ParallelInstance& inst, int turn);

struct ConstructOptions {
  Strategy strategy = RandomStrategy{};
  std::uint64_t seed = 42;
  // Re-emit every decomposed instance as a final full-correction turn.
  bool include_original = true;
  int workers = 1;
};

// Records for one instance, ordered by turn.
std::vector<TurnInstance> ConstructInstance(const ParallelInstance& inst,
                                            const ConstructOptions& options);

// Processes `instances` with `options.workers` threads and hands records to
// `sink` in (input order, turn) order. Output is independent of the worker
// count.
void ConstructCorpus(const std::vector<ParallelInstance>& instances,
                     const ConstructOptions& options,
                     const std::function<void(const TurnInstance&)>& sink);
std::vector<TurnInstance> ConstructCorpus(
    const std::vector<ParallelInstance>& instances,
    const ConstructOptions& options);

struct CorpusStats {
  std::size_t records = 0;
  std::size_t original_records = 0;
  // Records from decomposed chains (strategy != "original").
  std::size_t additional_instances = 0;
  // Distinct origin ids that contributed at least one additional record.
  std::size_t decomposed_origins = 0;
  // (strategy, turn) -> record count.
  std::map<std::pair<std::string, int>, std::size_t> by_strategy_turn;
  // Label kind name ("keep", "delete", "append", "replace") -> count,
  // including non-Keep sentinel slots.
  std::map<std::string, std::size_t> label_counts;
  std::size_t mask_positions = 0;
  std::size_t mask_zeros = 0;

  double mask_zero_rate() const {
    return mask_positions == 0
               ? 0.0
               : static_cast<double>(mask_zeros) /
                     static_cast<double>(mask_positions);
  }
};

// Streaming accumulator.
class StatsAccumulator {
 public:
  void Add(const TurnInstance& inst);
  CorpusStats Finish() const;

 private:
  CorpusStats stats_;
  std::vector<std::uint64_t> decomposed_ids_;
};

CorpusStats ComputeCorpusStats(const std::vector<TurnInstance>& instances);
std::string RenderStatsTable(const CorpusStats& stats);
nlohmann::ordered_json StatsToJson(const CorpusStats& stats);

}  // namespace tmtc

#endif  // TMTC_CONSTRUCT_H_
