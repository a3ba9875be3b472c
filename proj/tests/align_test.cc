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

#include "tmtc/align.h"

#include "doctest.h"
#include "testing/oracles.h"
#include "tmtc/error.h"

namespace tmtc {
namespace {

using testing::S;
using testing::TestRng;
using Kind = EditOp::Kind;

EditOp Eq(int pos, const std::string& t) { return {Kind::kEqual, pos, t, {}}; }
EditOp Rep(int pos, const std::string& from, const std::string& to) {
  return {Kind::kReplace, pos, from, {to}};
}
EditOp Ins(int anchor, std::vector<std::string> run) {
  return {Kind::kInsertRun, anchor, std::nullopt, std::move(run)};
}

TEST_CASE("Align on the oldest/old example") {
  const Sentence src = S("How oldest are you !");
  const Sentence tgt = S("How old are you ?");
  const EditScript script = Align(src, tgt);
  const std::vector<EditOp> expected = {Eq(0, "How"), Rep(1, "oldest", "old"),
                                        Eq(2, "are"), Eq(3, "you"),
                                        Rep(4, "!", "?")};
  CHECK(script.ops == expected);
  CHECK(script.NumErrorUnits() == 2);
  CHECK(script.ErrorUnitIndices() == std::vector<std::size_t>{1, 4});
  CHECK(ApplyScript(src, script) == tgt);
}

TEST_CASE("Align identity has no error units") {
  const Sentence s = S("a b c a");
  const EditScript script = Align(s, s);
  CHECK(script.NumErrorUnits() == 0);
  CHECK(script.TokenCost() == 0);
  for (const EditOp& op : script.ops) CHECK(op.kind == Kind::kEqual);
}

TEST_CASE("Align coalesces an insert run") {
  const EditScript script = Align(S("a b"), S("a x y b"));
  const std::vector<EditOp> expected = {Eq(0, "a"), Ins(0, {"x", "y"}),
                                        Eq(1, "b")};
  CHECK(script.ops == expected);
  CHECK(script.NumErrorUnits() == 1);
  CHECK(script.TokenCost() == 2);

  // The exhaustive oracle agrees on cost and winner.
  const auto brute = testing::BruteForceAlign(S("a b"), S("a x y b"));
  CHECK(brute.cost == 2);
  CHECK(testing::ScriptFromPath(S("a b"), S("a x y b"), brute.path) == script);
}

TEST_CASE("Align anchors a leading insert at -1") {
  const EditScript script = Align(S("b"), S("x b"));
  REQUIRE(script.ops.size() == 2);
  CHECK(script.ops[0] == Ins(-1, {"x"}));
  CHECK(UnitActionKind(script.ops[0]) == ActionKind::kAppend);
}

TEST_CASE("Align empty sides") {
  CHECK(Align(Sentence(), Sentence()).ops.empty());
  const EditScript ins = Align(Sentence(), S("a b"));
  REQUIRE(ins.ops.size() == 1);
  CHECK(ins.ops[0] == Ins(-1, {"a", "b"}));
  const EditScript del = Align(S("a b"), Sentence());
  CHECK(del.NumErrorUnits() == 2);
  CHECK(ApplyScript(S("a b"), del).empty());
  CHECK(ApplyScript(Sentence(), Align(Sentence(), Sentence())).empty());
}

TEST_CASE("ApplyScript rejects a script for another sentence") {
  const EditScript script = Align(S("a b c"), S("a x c"));
  CHECK_THROWS_AS(ApplyScript(S("a b"), script), DataError);
  try {
    ApplyScript(S("a q c"), script);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("position 1") != std::string::npos);
  }
}

TEST_CASE("FilterScript keep-all and keep-none") {
  const Sentence src = S("How oldest are you !");
  const EditScript script = Align(src, S("How old are you ?"));
  CHECK(FilterScript(script, [](std::size_t, const EditOp&) { return true; }) ==
        script);
  const EditScript none =
      FilterScript(script, [](std::size_t, const EditOp&) { return false; });
  CHECK(none.NumErrorUnits() == 0);
  CHECK(ApplyScript(src, none) == src);
}

TEST_CASE("FilterScript keeping only the punctuation unit") {
  const Sentence src = S("How oldest are you !");
  const EditScript script = Align(src, S("How old are you ?"));
  const EditScript only_last = FilterScript(script, KeepOrdinals({1}));
  CHECK(ApplyScript(src, only_last).ToText() == "How oldest are you ?");
  CHECK(only_last.tgt_len == 5);
}

TEST_CASE("FilterScript by kind") {
  const Sentence src = S("a b c d e f g h");
  const Sentence tgt = S("a x b c e f Y h");  // append x, delete d, replace g
  const EditScript script = Align(src, tgt);
  REQUIRE(script.NumErrorUnits() == 3);
  CHECK(ApplyScript(src, FilterScript(script, KeepKinds({ActionKind::kAppend})))
            .ToText() == "a x b c d e f g h");
  CHECK(ApplyScript(src, FilterScript(script, KeepKinds({ActionKind::kDelete})))
            .ToText() == "a b c e f g h");
  CHECK(ApplyScript(src, FilterScript(script, KeepKinds({ActionKind::kReplace})))
            .ToText() == "a b c d e f Y h");
}

TEST_CASE("ParseActionKind accepts names, abbreviations and label prefixes") {
  CHECK(ParseActionKind("append") == ActionKind::kAppend);
  CHECK(ParseActionKind("DEL") == ActionKind::kDelete);
  CHECK(ParseActionKind("$REPLACE") == ActionKind::kReplace);
  CHECK_FALSE(ParseActionKind("keep").has_value());
  for (ActionKind k : kAllActionKinds) {
    CHECK(ParseActionKind(ActionKindName(k)) == k);
    CHECK(ParseActionKind(ActionKindAbbrev(k)) == k);
  }
}

TEST_CASE("Property: align round-trips and is deterministic") {
  TestRng rng(1);
  for (int trial = 0; trial < 3000; ++trial) {
    auto [s, t] = testing::RandomPair(rng, {6, 12, 5});
    const EditScript script = Align(s, t);
    CHECK(ApplyScript(s, script) == t);
    CHECK(Align(s, t) == script);
    CHECK(script.src_len == s.size());
    CHECK(script.tgt_len == t.size());
    for (const EditOp& op : script.ops) {
      if (op.kind == Kind::kReplace) {
        CHECK(op.new_tokens.size() == 1);
        CHECK(op.new_tokens[0] != *op.src_token);
      }
      if (op.kind == Kind::kInsertRun) CHECK_FALSE(op.new_tokens.empty());
      if (op.kind == Kind::kEqual) CHECK(op.new_tokens.empty());
    }
  }
}

TEST_CASE("Property: cost and tie-break match the exhaustive oracle") {
  TestRng rng(2);
  for (int trial = 0; trial < 400; ++trial) {
    auto [s, t] = testing::RandomPair(rng, {4, 6, 3});
    const EditScript script = Align(s, t);
    const auto brute = testing::BruteForceAlign(s, t);
    CHECK(script.TokenCost() == brute.cost);
    CHECK(script == testing::ScriptFromPath(s, t, brute.path));
  }
}

TEST_CASE("Property: filter and complement compose to the target") {
  TestRng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    auto [s, t] = testing::RandomPair(rng);
    const EditScript script = Align(s, t);
    std::vector<bool> pick(script.NumErrorUnits());
    for (std::size_t k = 0; k < pick.size(); ++k) pick[k] = rng.Chance(0.5);
    const EditScript part = FilterScript(
        script, [&](std::size_t ord, const EditOp&) { return pick[ord]; });
    const Sentence mid = ApplyScript(s, part);
    // The complement, re-anchored by a fresh alignment, finishes the job.
    CHECK(ApplyScript(mid, Align(mid, t)) == t);
    CHECK(mid.size() == part.tgt_len);
    // Units kept never exceed the cost of the full script.
    CHECK(Align(s, mid).TokenCost() <= script.TokenCost());
  }
}

}  // namespace
}  // namespace tmtc
