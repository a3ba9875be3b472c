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

#include "tmtc/turn_instance.h"

#include <fstream>
#include <string>

#include "json.hpp"
#include "tmtc/error.h"

namespace tmtc {
namespace {

using ordered_json = nlohmann::ordered_json;

Sentence SentenceFromJson(const ordered_json& j, const char* key) {
  const ordered_json& arr = j.at(key);
  if (!arr.is_array()) throw DataError(std::string(key) + " must be an array");
  std::vector<std::string> tokens;
  tokens.reserve(arr.size());
  for (const auto& t : arr) tokens.push_back(t.get<std::string>());
  try {
    return Sentence(std::move(tokens));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

std::string ToJsonLine(const TurnInstance& inst, const JsonlOptions& options) {
  const bool with_sentinel = options.sentinel && inst.labels.has_sentinel_edit();
  ordered_json labels = ordered_json::array();
  ordered_json mask = ordered_json::array();
  if (with_sentinel) {
    labels.push_back(inst.labels.sentinel.ToString());
    mask.push_back(static_cast<int>(inst.sentinel_mask));
  }
  for (const EditLabel& l : inst.labels.labels) labels.push_back(l.ToString());
  for (std::uint8_t b : inst.mask) mask.push_back(static_cast<int>(b));

  ordered_json j;
  j["origin_id"] = inst.origin_id;
  j["turn"] = inst.turn;
  j["strategy"] = inst.strategy;
  j["src"] = inst.source.tokens();
  j["tgt"] = inst.target.tokens();
  j["labels"] = std::move(labels);
  j["mask"] = std::move(mask);
  if (with_sentinel) j["sentinel"] = true;
  return j.dump();
}

TurnInstance ParseJsonLine(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  try {
    TurnInstance inst;
    inst.origin_id = j.at("origin_id").get<std::uint64_t>();
    inst.turn = j.at("turn").get<int>();
    inst.strategy = j.at("strategy").get<std::string>();
    inst.source = SentenceFromJson(j, "src");
    inst.target = SentenceFromJson(j, "tgt");
    const bool with_sentinel = j.value("sentinel", false);

    const auto& labels = j.at("labels");
    const auto& mask = j.at("mask");
    const std::size_t expected = inst.source.size() + (with_sentinel ? 1 : 0);
    if (labels.size() != expected || mask.size() != expected) {
      throw DataError("labels/mask length must be " + std::to_string(expected));
    }
    inst.labels = LabelSequence::AllKeep(inst.source.size());
    inst.mask.assign(inst.source.size(), 1);
    for (std::size_t k = 0; k < expected; ++k) {
      const auto label = EditLabel::Parse(labels[k].get<std::string>());
      if (!label) {
        throw DataError("unknown label '" + labels[k].get<std::string>() + "'");
      }
      const int bit = mask[k].get<int>();
      if (bit != 0 && bit != 1) throw DataError("mask values must be 0 or 1");
      if (with_sentinel && k == 0) {
        if (label->kind != EditLabel::Kind::kAppend) {
          throw DataError("sentinel label must be an $APPEND");
        }
        inst.labels.sentinel = *label;
        inst.sentinel_mask = static_cast<std::uint8_t>(bit);
      } else {
        const std::size_t i = k - (with_sentinel ? 1 : 0);
        inst.labels.labels[i] = *label;
        inst.mask[i] = static_cast<std::uint8_t>(bit);
      }
    }
    return inst;
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("schema violation: ") + e.what());
  }
}

void WriteJsonl(const std::vector<TurnInstance>& instances, std::ostream& out,
                const JsonlOptions& options) {
  for (const TurnInstance& inst : instances) {
    out << ToJsonLine(inst, options) << '\n';
  }
}

void WriteJsonl(const std::vector<TurnInstance>& instances,
                const std::filesystem::path& path,
                const JsonlOptions& options) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  WriteJsonl(instances, out, options);
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<TurnInstance> ReadJsonl(std::istream& in) {
  std::vector<TurnInstance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(ParseJsonLine(line));
    } catch (const DataError& e) {
      throw DataError("JSONL line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return out;
}

std::vector<TurnInstance> ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return ReadJsonl(in);
}

}  // namespace tmtc
