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

#include <cmath>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "testing/oracles.h"
#include "tmtc/error.h"

namespace tmtc {
namespace {

using testing::S;
using testing::TestRng;
using L = EditLabel;

// Straight from the definition, with no shared code.
double FOracle(double p, double r, double beta) {
  const double b2 = beta * beta;
  return (p == 0 && r == 0) ? 0.0 : (1 + b2) * p * r / (b2 * p + r);
}

TEST_CASE("FBeta reference values") {
  CHECK(std::abs(FBeta(66.56, 45.08, 0.5) - 60.77) <= 0.01);
  CHECK(std::abs(FBeta(53.43, 35.22, 1.0) - 42.46) <= 0.01);
  CHECK(FBeta(0, 0, 0.5) == 0.0);
  CHECK(FBeta(0.3, 0.3, 0.5) == doctest::Approx(0.3));
  CHECK(FBeta(30, 30, 2) == doctest::Approx(30));
  // Fractions and percentages agree up to scale.
  CHECK(FBeta(0.6656, 0.4508, 0.5) * 100 == doctest::Approx(FBeta(66.56, 45.08, 0.5)));
  CHECK_THROWS_AS(FBeta(-1, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(FBeta(0.5, 0.5, 0), std::invalid_argument);
}

TEST_CASE("Property: FBeta symmetry, monotonicity and oracle agreement") {
  TestRng rng(3);
  for (int trial = 0; trial < 5000; ++trial) {
    const double p = rng.Unit();
    const double r = rng.Unit();
    const double beta = 0.1 + 3 * rng.Unit();
    CHECK(FBeta(p, r, 1) == doctest::Approx(FBeta(r, p, 1)));
    CHECK(FBeta(p, r, beta) == doctest::Approx(FOracle(p, r, beta)));
    const double dp = rng.Unit() * (1 - p);
    const double dr = rng.Unit() * (1 - r);
    CHECK(FBeta(p + dp, r, beta) >= FBeta(p, r, beta) - 1e-12);
    CHECK(FBeta(p, r + dr, beta) >= FBeta(p, r, beta) - 1e-12);
  }
}

TEST_CASE("ExtractEditKeys") {
  const auto keys = ExtractEditKeys(S("a b c d e f g h"), S("a x b c e f G h"));
  REQUIRE(keys.size() == 3);
  CHECK(keys[0] == EditMatchKey{0, ActionKind::kAppend, {"x"}});
  CHECK(keys[1] == EditMatchKey{3, ActionKind::kDelete, {}});
  CHECK(keys[2] == EditMatchKey{6, ActionKind::kReplace, {"G"}});
  const auto kinds = ExtractEditKeys(S("a b c d e f g h"), S("a x b c e f G h"), true);
  CHECK(kinds[2] == EditMatchKey{6, ActionKind::kReplace, {}});
  CHECK(ExtractEditKeys(S("b"), S("x y b"))[0] ==
        EditMatchKey{-1, ActionKind::kAppend, {"x", "y"}});
}

TEST_CASE("Score oracle and identity predictors") {
  const auto planted = testing::PlantCorpus(8, 200);
  std::vector<Sentence> src, ref;
  for (const auto& p : planted) {
    src.push_back(p.instance.source);
    ref.push_back(p.instance.reference);
  }
  const EvalReport oracle = Score(src, ref, ref);
  for (const auto& [kind, c] : oracle.per_kind) {
    REQUIRE(c.num_gold() > 0);
    CHECK(c.precision() == 1.0);
    CHECK(c.recall() == 1.0);
    CHECK(c.f(0.5) == 1.0);
  }
  const EvalReport identity = Score(src, src, ref);
  for (const auto& [kind, c] : identity.per_kind) {
    CHECK(c.tp == 0);
    CHECK(c.fp == 0);
    CHECK(c.recall() == 0.0);
  }
  CHECK_THROWS_AS(Score(src, {}, ref), DataError);
}

TEST_CASE("Score on a hand-built two-sentence corpus") {
  // Sentence 1: two replace errors; the hypothesis fixes one and deletes a
  // correct token. Sentence 2: a delete error left alone.
  const std::vector<Sentence> src = {S("a B c D e"), S("p q q r")};
  const std::vector<Sentence> ref = {S("a b c d e"), S("p q r")};
  const std::vector<Sentence> hyp = {S("a b c D"), S("p q q r")};
  const EvalReport r = Score(src, hyp, ref);
  const KindCounts& rep = r.per_kind.at(ActionKind::kReplace);
  CHECK(rep.tp == 1);
  CHECK(rep.fp == 0);
  CHECK(rep.fn == 1);
  CHECK(rep.precision() == 1.0);
  CHECK(rep.recall() == 0.5);
  const KindCounts& del = r.per_kind.at(ActionKind::kDelete);
  CHECK(del.tp == 0);
  CHECK(del.fp == 1);
  CHECK(del.fn == 1);
  CHECK(del.precision() == 0.0);
  CHECK(del.recall() == 0.0);
  CHECK(r.total.tp == 1);
  CHECK(r.per_kind.at(ActionKind::kAppend).num_gold() == 0);

  const EvalReport only_rep = Score(src, hyp, ref, {{ActionKind::kReplace}});
  CHECK(only_rep.per_kind.size() == 1);
  CHECK(only_rep.total == rep);

  const std::string table = RenderEvalTable(r);
  CHECK(table.find("$REPLACE_{t}") != std::string::npos);
  CHECK(table.find("50.00") != std::string::npos);
  CHECK(EvalReportToJson(r)["per_kind"]["replace"]["tp"] == 1);
}

TEST_CASE("Kind-only matching ignores the argument") {
  const std::vector<Sentence> src = {S("a b c")};
  const std::vector<Sentence> ref = {S("a x c")};
  const std::vector<Sentence> hyp = {S("a y c")};
  CHECK(Score(src, hyp, ref).per_kind.at(ActionKind::kReplace).tp == 0);
  ScoreOptions opts;
  opts.kind_only = true;
  CHECK(Score(src, hyp, ref, opts).per_kind.at(ActionKind::kReplace).tp == 1);
}

TEST_CASE("Property: tp + fn equals the gold count") {
  TestRng rng(4);
  std::vector<Sentence> src, hyp, ref;
  std::map<ActionKind, std::size_t> gold;
  for (int i = 0; i < 2000; ++i) {
    auto [s, t] = testing::RandomPair(rng);
    auto [s2, h] = testing::RandomPair(rng);
    (void)s2;
    src.push_back(s);
    ref.push_back(t);
    hyp.push_back(rng.Chance(0.3) ? t : h);
    for (const auto& k : ExtractEditKeys(s, t)) ++gold[k.kind];
  }
  const EvalReport r = Score(src, hyp, ref);
  for (const auto& [kind, c] : r.per_kind) {
    CHECK(c.tp + c.fn == gold[kind]);
  }
}

TEST_CASE("BuildActionSubsets") {
  const std::vector<ParallelInstance> corpus = {
      {0, S("How oldest are you !"), S("How old are you ?")},
      {1, S("a b c d"), S("a x b c D")},  // append + replace
      {2, S("a b"), S("a b")},
  };
  const ActionSubsets none = BuildActionSubsets(corpus, ActionKind::kDelete);
  CHECK(none.raw.empty());
  CHECK(none.checked.empty());

  const ActionSubsets rep = BuildActionSubsets(corpus, ActionKind::kReplace);
  REQUIRE(rep.raw.size() == 2);
  CHECK(rep.checked[0].source == rep.checked[0].reference);
  CHECK(rep.checked[1].source.ToText() == "a b c D");

  const ActionSubsets app = BuildActionSubsets(corpus, ActionKind::kAppend);
  REQUIRE(app.raw.size() == 1);
  CHECK(app.raw[0].id == 1);
  CHECK(app.checked[0].source.ToText() == "a x b c d");
  CHECK(app.checked[0].reference == corpus[1].reference);
  const auto keys = ExtractEditKeys(app.checked[0].source, app.checked[0].reference);
  REQUIRE(keys.size() == 1);
  CHECK(keys[0].kind == ActionKind::kReplace);
}

TEST_CASE("Property: checked subsets lose exactly the featured units") {
  const auto planted = testing::PlantCorpus(12, 1000, {1, 4, 2, 1, 1, 1});
  std::vector<ParallelInstance> corpus;
  for (const auto& p : planted) corpus.push_back(p.instance);
  for (ActionKind kind : kAllActionKinds) {
    const ActionSubsets subsets = BuildActionSubsets(corpus, kind);
    std::size_t expected = 0;
    for (const auto& p : planted) expected += p.Count(kind) > 0 ? 1 : 0;
    CHECK(subsets.raw.size() == expected);
    for (std::size_t i = 0; i < subsets.raw.size(); ++i) {
      const auto& p = planted[subsets.raw[i].id];
      std::vector<bool> chosen(p.edits.size());
      for (std::size_t e = 0; e < chosen.size(); ++e) {
        chosen[e] = p.edits[e].kind == kind;
      }
      CHECK(subsets.checked[i].source == testing::ApplyPlanted(p, chosen));
      for (const auto& k : ExtractEditKeys(subsets.checked[i].source,
                                           subsets.checked[i].reference)) {
        CHECK(k.kind != kind);
      }
    }
  }
}

TEST_CASE("QuantExp perfect and identity predictors") {
  const auto planted = testing::PlantCorpus(13, 500);
  std::vector<ParallelInstance> corpus;
  for (const auto& p : planted) corpus.push_back(p.instance);
  const ActionSubsets subsets = BuildActionSubsets(corpus, ActionKind::kAppend);
  std::vector<Sentence> refs, raw_src, checked_src;
  for (std::size_t i = 0; i < subsets.raw.size(); ++i) {
    refs.push_back(subsets.raw[i].reference);
    raw_src.push_back(subsets.raw[i].source);
    checked_src.push_back(subsets.checked[i].source);
  }
  const QuantexpReport perfect = QuantExp(subsets, refs, refs);
  CHECK(perfect.before.per_kind.size() == 2);
  CHECK_FALSE(perfect.before.per_kind.count(ActionKind::kAppend));
  for (const auto& [kind, c] : perfect.before.per_kind) {
    CHECK(c.f(1) == 1.0);
    CHECK(perfect.after.per_kind.at(kind).f(1) == 1.0);
  }
  CHECK(QuantexpReportToJson(perfect)["per_kind"]["delete"]["delta_f"] == 0.0);

  const QuantexpReport identity = QuantExp(subsets, raw_src, checked_src);
  for (const auto& [kind, c] : identity.before.per_kind) {
    CHECK(c.recall() == 0.0);
    CHECK(identity.after.per_kind.at(kind).recall() == 0.0);
  }
  CHECK_THROWS_AS(QuantExp(subsets, {}, refs), DataError);
  CHECK(RenderQuantexpTable(perfect).find("checked") != std::string::npos);
}

LabelLogProbs Uniform(int v) {
  LabelLogProbs t;
  t["$KEEP"] = -std::log(v);
  t["$DELETE"] = -std::log(v);
  for (int k = 2; k < v; ++k) t["$APPEND_t" + std::to_string(k)] = -std::log(v);
  return t;
}

TEST_CASE("Losses: one-hot, uniform and masked") {
  LossInput in;
  in.gold = LabelSequence{L::Keep(), {L::Keep(), L::Delete(), L::Keep()}};
  in.log_probs = {{{"$KEEP", 0.0}}, {{"$DELETE", 0.0}}, {{"$KEEP", 0.0}}};
  in.ged_log_probs = {{0.0, -1e300}, {-1e300, 0.0}, {0.0, -1e300}};
  in.second = LossInput::Turn{in.log_probs, in.gold};
  LossReport r = ComputeLosses(in);
  CHECK(r.l_c == 0.0);
  CHECK(r.l_c1 == 0.0);
  CHECK(r.l_d == 0.0);
  CHECK(r.l_c2 == 0.0);
  CHECK(r.l_total == 0.0);

  LossInput u;
  u.gold = LabelSequence::AllKeep(5);
  u.log_probs.assign(5, Uniform(4));
  u.mask = {1, 0, 1, 1, 1};
  r = ComputeLosses(u);
  CHECK(std::abs(r.l_c - 5 * std::log(4.0)) < 1e-9);
  CHECK(std::abs(r.l_c1 - 4 * std::log(4.0)) < 1e-9);
  CHECK(std::abs(r.l_c1 - 5.545177444479562) < 1e-9);
  CHECK_FALSE(r.has_l_d);
  CHECK_FALSE(r.has_l_c2);
  CHECK(r.l_total == doctest::Approx(r.l_c + r.l_c1));
}

TEST_CASE("Losses reject malformed input with the position") {
  LossInput in;
  in.gold = LabelSequence::AllKeep(2);
  in.log_probs = {{{"$KEEP", 0.0}}, {{"$KEEP", std::log(0.5)}}};
  try {
    ComputeLosses(in);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("position 1") != std::string::npos);
  }
  in.log_probs = {{{"$KEEP", 0.0}}, {{"$DELETE", 0.0}}};
  CHECK_THROWS_AS(ComputeLosses(in), DataError);
  in.log_probs = {{{"$KEEP", 0.0}}};
  CHECK_THROWS_AS(ComputeLosses(in), DataError);
  in.log_probs = {{{"$KEEP", 0.0}}, {{"$KEEP", 0.0}}};
  in.mask = {1};
  CHECK_THROWS_AS(ComputeLosses(in), DataError);
}

TEST_CASE("ParseLossInput") {
  const LossInput in = ParseLossInput(
      R"({"log_probs":[{"$KEEP":0.0},{"$KEEP":-0.6931471805599453,"$DELETE":-0.6931471805599453}],)"
      R"("labels":["$KEEP","$DELETE"],"mask":[1,0],)"
      R"("ged_log_probs":[[0.0,-1000],[-0.6931471805599453,-0.6931471805599453]],)"
      R"("second":{"log_probs":[{"$KEEP":0.0}],"labels":["$KEEP"]}})");
  const LossReport r = ComputeLosses(in);
  CHECK(r.l_c == doctest::Approx(std::log(2.0)));
  CHECK(r.l_c1 == 0.0);
  CHECK(r.l_d == doctest::Approx(std::log(2.0)));
  CHECK(r.l_c2 == 0.0);
  CHECK(r.l_total == doctest::Approx(2 * std::log(2.0)));
  const auto j = LossReportToJson(r);
  CHECK(j["l_total"].get<double>() == doctest::Approx(2 * std::log(2.0)));
  CHECK_THROWS_AS(ParseLossInput("{"), DataError);
  CHECK_THROWS_AS(ParseLossInput(R"({"log_probs":[],"labels":["$NOPE"]})"), DataError);
  CHECK(LossReportToJson(ComputeLosses(ParseLossInput(
                             R"({"log_probs":[],"labels":[]})")))["l_d"]
            .is_null());
}

TEST_CASE("Property: masked loss never exceeds the full loss") {
  TestRng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = rng.Below(12);
    LossInput in;
    in.gold = LabelSequence::AllKeep(n);
    bool all_ones = true;
    bool masked_loss = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = 0.05 + 0.9 * rng.Unit();
      in.log_probs.push_back({{"$KEEP", std::log(p)}, {"$DELETE", std::log1p(-p)}});
      in.mask.push_back(rng.Chance(0.7) ? 1 : 0);
      if (in.mask.back() == 0) {
        all_ones = false;
        masked_loss = true;
      }
    }
    const LossReport r = ComputeLosses(in);
    CHECK(r.l_c1 <= r.l_c + 1e-12);
    if (all_ones) CHECK(r.l_c1 == r.l_c);
    if (masked_loss) CHECK(r.l_c1 < r.l_c);
  }
}

}  // namespace
}  // namespace tmtc
