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

#include "tmtc/construct.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tmtc/error.h"
#include "tmtc/labels.h"

namespace tmtc {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Unbiased draw from [0, bound). std::uniform_int_distribution is not
// specified bit-exactly across standard libraries, so it is avoided here.
std::size_t UniformIndex(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::mt19937_64::max() -
                              (std::mt19937_64::max() % b + 1) % b;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return static_cast<std::size_t>(x % b);
}

void Shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[UniformIndex(rng, i)]);
  }
}

Sentence Corrected(const Sentence& source, const EditScript& script,
                   const UnitPredicate& keep) {
  return ApplyScript(source, FilterScript(script, keep));
}

std::vector<std::size_t> FirstN(std::vector<std::size_t> v, std::size_t n) {
  v.resize(n);
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Sentence> Collapse(const std::vector<Sentence>& chain,
                               const Sentence& reference) {
  std::vector<Sentence> out;
  for (const Sentence& s : chain) {
    if (out.empty() || !(out.back() == s)) out.push_back(s);
  }
  if (out.size() == 1) out.push_back(reference);
  return out;
}

std::string_view LabelKindName(EditLabel::Kind kind) {
  switch (kind) {
    case EditLabel::Kind::kKeep: return "keep";
    case EditLabel::Kind::kDelete: return "delete";
    case EditLabel::Kind::kAppend: return "append";
    case EditLabel::Kind::kReplace: return "replace";
  }
  return "";
}

}  // namespace

void ValidateStrategy(const Strategy& strategy) {
  std::visit(
      Overloaded{
          [](const RandomStrategy& s) {
            if (!(s.ratio >= 0.0 && s.ratio <= 1.0)) {
              throw std::invalid_argument("random ratio must be in [0, 1]");
            }
          },
          [](const TypeFirstStrategy&) {},
          [](const OrderedStrategy& s) {
            if (s.kinds.size() < 2 || s.kinds.size() > 3) {
              throw std::invalid_argument("ordered strategy needs 2 or 3 kinds");
            }
            for (std::size_t i = 0; i < s.kinds.size(); ++i) {
              for (std::size_t j = i + 1; j < s.kinds.size(); ++j) {
                if (s.kinds[i] == s.kinds[j]) {
                  throw std::invalid_argument(
                      "ordered strategy kinds must be distinct");
                }
              }
            }
          },
          [](const KTurnStrategy& s) {
            if (s.k < 2) throw std::invalid_argument("kturn needs k >= 2");
          },
      },
      strategy);
}

std::string StrategyTag(const Strategy& strategy) {
  return std::visit(
      Overloaded{
          [](const RandomStrategy& s) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%g", s.ratio);
            return "random:" + std::string(buf);
          },
          [](const TypeFirstStrategy& s) {
            std::string tag = std::string(ActionKindName(s.kind)) + "-first";
            if (s.inverted) tag += "-inverted";
            return tag;
          },
          [](const OrderedStrategy& s) {
            std::string tag = "ordered:";
            for (std::size_t i = 0; i < s.kinds.size(); ++i) {
              if (i > 0) tag += '+';
              tag += ActionKindAbbrev(s.kinds[i]);
            }
            return tag;
          },
          [](const KTurnStrategy& s) { return "kturn:" + std::to_string(s.k); },
      },
      strategy);
}

std::uint64_t InstanceSeed(std::uint64_t seed, std::uint64_t origin_id) {
  return SplitMix64(seed ^ SplitMix64(origin_id));
}

std::vector<Sentence> BuildIntermediate(const ParallelInstance& inst,
                                        const Strategy& strategy,
                                        std::uint64_t seed) {
  ValidateStrategy(strategy);
  const Sentence& xe = inst.source;
  const Sentence& xc = inst.reference;
  const EditScript script = Align(xe, xc);
  const std::size_t units = script.NumErrorUnits();
  std::mt19937_64 rng(InstanceSeed(seed, inst.id));

  std::vector<std::size_t> order(units);
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<Sentence> chain{xe};
  std::visit(
      Overloaded{
          [&](const RandomStrategy& s) {
            const auto n = static_cast<std::size_t>(
                std::floor(s.ratio * static_cast<double>(units) + 0.5));
            // Partial Fisher-Yates: the first n slots are a uniform sample.
            for (std::size_t i = 0; i < n; ++i) {
              std::swap(order[i], order[i + UniformIndex(rng, units - i)]);
            }
            chain.push_back(Corrected(xe, script, KeepOrdinals(FirstN(order, n))));
          },
          [&](const TypeFirstStrategy& s) {
            std::vector<ActionKind> first;
            for (ActionKind k : kAllActionKinds) {
              if ((k == s.kind) != s.inverted) first.push_back(k);
            }
            chain.push_back(Corrected(xe, script, KeepKinds(first)));
          },
          [&](const OrderedStrategy& s) {
            std::vector<ActionKind> done;
            for (ActionKind k : s.kinds) {
              done.push_back(k);
              chain.push_back(Corrected(xe, script, KeepKinds(done)));
            }
          },
          [&](const KTurnStrategy& s) {
            Shuffle(order, rng);
            const std::size_t k = static_cast<std::size_t>(s.k);
            const std::size_t base = units / k;
            const std::size_t extra = units % k;
            std::size_t taken = 0;
            for (std::size_t g = 0; g + 1 < k; ++g) {
              taken += base + (g < extra ? 1 : 0);
              chain.push_back(
                  Corrected(xe, script, KeepOrdinals(FirstN(order, taken))));
            }
          },
      },
      strategy);
  chain.push_back(xc);
  return Collapse(chain, xc);
}

TurnInstance OriginalRecord(const ParallelInstance& inst, int turn) {
  TurnInstance out;
  out.origin_id = inst.id;
  out.turn = turn;
  out.strategy = std::string(kOriginalTag);
  out.source = inst.source;
  out.target = inst.reference;
  out.labels = DeriveLabels(inst.source, inst.reference);
  out.mask.assign(out.labels.size(), 1);
  return out;
}

std::vector<TurnInstance> EmitTurns(const ParallelInstance& inst,
                                    const std::vector<Sentence>& chain,
                                    const Strategy& strategy) {
  if (chain.size() < 2 || !(chain.front() == inst.source) ||
      !(chain.back() == inst.reference)) {
    throw DataError("instance " + std::to_string(inst.id) +
                    ": chain must run from the source to the reference");
  }
  if (chain.size() == 2) return {OriginalRecord(inst, 0)};

  const std::string tag = StrategyTag(strategy);
  std::vector<TurnInstance> out;
  out.reserve(chain.size() - 1);
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
    TurnInstance t;
    t.origin_id = inst.id;
    t.turn = static_cast<int>(j + 1);
    t.strategy = tag;
    t.source = chain[j];
    t.target = chain[j + 1];
    t.labels = DeriveLabels(chain[j], chain[j + 1]);
    t.mask.assign(t.labels.size(), 1);
    if (j + 2 < chain.size()) {
      const LabelSequence full = DeriveLabels(chain[j], inst.reference);
      for (std::size_t i = 0; i < t.labels.size(); ++i) {
        t.mask[i] = t.labels.labels[i] == full.labels[i] ? 1 : 0;
      }
      t.sentinel_mask = t.labels.sentinel == full.sentinel ? 1 : 0;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TurnInstance> ConstructInstance(const ParallelInstance& inst,
                                            const ConstructOptions& options) {
  const std::vector<Sentence> chain =
      BuildIntermediate(inst, options.strategy, options.seed);
  std::vector<TurnInstance> out = EmitTurns(inst, chain, options.strategy);
  if (options.include_original && chain.size() > 2) {
    out.push_back(OriginalRecord(inst, static_cast<int>(chain.size())));
  }
  return out;
}

void ConstructCorpus(const std::vector<ParallelInstance>& instances,
                     const ConstructOptions& options,
                     const std::function<void(const TurnInstance&)>& sink) {
  ValidateStrategy(options.strategy);
  const std::size_t workers =
      static_cast<std::size_t>(std::max(1, options.workers));
  const std::size_t block = 2048 * workers;

  std::vector<std::vector<TurnInstance>> results;
  for (std::size_t begin = 0; begin < instances.size(); begin += block) {
    const std::size_t end = std::min(instances.size(), begin + block);
    results.assign(end - begin, {});
    if (workers == 1) {
      for (std::size_t i = begin; i < end; ++i) {
        results[i - begin] = ConstructInstance(instances[i], options);
      }
    } else {
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          try {
            for (std::size_t i = begin + w; i < end; i += workers) {
              results[i - begin] = ConstructInstance(instances[i], options);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (std::thread& t : threads) t.join();
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    for (const auto& records : results) {
      for (const TurnInstance& r : records) sink(r);
    }
  }
}

std::vector<TurnInstance> ConstructCorpus(
    const std::vector<ParallelInstance>& instances,
    const ConstructOptions& options) {
  std::vector<TurnInstance> out;
  ConstructCorpus(instances, options,
                  [&out](const TurnInstance& t) { out.push_back(t); });
  return out;
}

void StatsAccumulator::Add(const TurnInstance& inst) {
  ++stats_.records;
  if (inst.is_original()) {
    ++stats_.original_records;
  } else {
    ++stats_.additional_instances;
    if (decomposed_ids_.empty() || decomposed_ids_.back() != inst.origin_id) {
      decomposed_ids_.push_back(inst.origin_id);
    }
  }
  ++stats_.by_strategy_turn[{inst.strategy, inst.turn}];
  if (inst.labels.has_sentinel_edit()) {
    ++stats_.label_counts[std::string(LabelKindName(inst.labels.sentinel.kind))];
    ++stats_.mask_positions;
    if (inst.sentinel_mask == 0) ++stats_.mask_zeros;
  }
  for (const EditLabel& l : inst.labels.labels) {
    ++stats_.label_counts[std::string(LabelKindName(l.kind))];
  }
  stats_.mask_positions += inst.mask.size();
  stats_.mask_zeros += static_cast<std::size_t>(
      std::count(inst.mask.begin(), inst.mask.end(), std::uint8_t{0}));
}

CorpusStats StatsAccumulator::Finish() const {
  CorpusStats out = stats_;
  std::vector<std::uint64_t> ids = decomposed_ids_;
  std::sort(ids.begin(), ids.end());
  out.decomposed_origins = static_cast<std::size_t>(
      std::unique(ids.begin(), ids.end()) - ids.begin());
  for (std::string_view k : {"keep", "delete", "append", "replace"}) {
    out.label_counts.try_emplace(std::string(k), 0);
  }
  return out;
}

CorpusStats ComputeCorpusStats(const std::vector<TurnInstance>& instances) {
  StatsAccumulator acc;
  for (const TurnInstance& t : instances) acc.Add(t);
  return acc.Finish();
}

std::string RenderStatsTable(const CorpusStats& stats) {
  std::ostringstream out;
  out << std::left;
  out << std::setw(28) << "records" << stats.records << '\n';
  out << std::setw(28) << "original records" << stats.original_records << '\n';
  out << std::setw(28) << "additional instances" << stats.additional_instances
      << '\n';
  out << std::setw(28) << "decomposed originals" << stats.decomposed_origins
      << '\n';
  out << std::setw(28) << "mask zeros / positions" << stats.mask_zeros << " / "
      << stats.mask_positions << " (" << std::fixed << std::setprecision(4)
      << stats.mask_zero_rate() << ")\n";
  out << '\n' << std::setw(28) << "strategy" << std::setw(6) << "turn"
      << "records\n";
  for (const auto& [key, count] : stats.by_strategy_turn) {
    out << std::setw(28) << key.first << std::setw(6) << key.second << count
        << '\n';
  }
  out << '\n' << std::setw(28) << "label" << "count\n";
  for (const auto& [label, count] : stats.label_counts) {
    out << std::setw(28) << label << count << '\n';
  }
  return out.str();
}

nlohmann::ordered_json StatsToJson(const CorpusStats& stats) {
  nlohmann::ordered_json j;
  j["records"] = stats.records;
  j["original_records"] = stats.original_records;
  j["additional_instances"] = stats.additional_instances;
  j["decomposed_origins"] = stats.decomposed_origins;
  j["mask_positions"] = stats.mask_positions;
  j["mask_zeros"] = stats.mask_zeros;
  j["mask_zero_rate"] = stats.mask_zero_rate();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& [key, count] : stats.by_strategy_turn) {
    rows.push_back({{"strategy", key.first}, {"turn", key.second},
                    {"records", count}});
  }
  j["by_strategy_turn"] = std::move(rows);
  auto labels = nlohmann::ordered_json::object();
  for (const auto& [label, count] : stats.label_counts) labels[label] = count;
  j["label_counts"] = std::move(labels);
  return j;
}

}  // namespace tmtc
