// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "goalcoach/backends/rule_backends.hpp"
#include "goalcoach/core/errors.hpp"
#include "goalcoach/corpus/augment.hpp"
#include "goalcoach/corpus/corpus.hpp"
#include "goalcoach/corpus/csv.hpp"
#include "goalcoach/corpus/empathy.hpp"
#include "goalcoach/corpus/import.hpp"
#include "goalcoach/corpus/toy.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace goalcoach;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("goalcoach_corpus_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p) << content;
    return p;
  }
};

AnnotatedUtterance utterance(const std::string& text, std::vector<SlotSpan> spans) {
  AnnotatedUtterance u = AnnotatedUtterance::make(text, spans);
  u.week_id = "w";
  return u;
}

class DroppingParaphraser final : public ParaphraserBackend {
 public:
  const BackendSpec& spec() const override { return spec_; }
  std::string paraphrase(const std::string&, std::uint64_t) const override { return "I will do it."; }

 private:
  BackendSpec spec_;
};

class FailingParaphraser final : public ParaphraserBackend {
 public:
  const BackendSpec& spec() const override { return spec_; }
  std::string paraphrase(const std::string&, std::uint64_t) const override { throw ParaphraserFailure("none"); }

 private:
  BackendSpec spec_;
};

}  // namespace

TEST_CASE("delexicalization") {
  CHECK(delexicalize_text("walk 3000 steps it is", {{Slot::kActivity, "walk", 0, 0}, {Slot::kAmount, "3000 steps", 1, 2}}) ==
        "[activity] [amount] it is");
  CHECK(delexicalize_text("see you soon", {}) == "see you soon");
  CHECK_THROWS_AS(delexicalize_text("walk 3000 steps", {{Slot::kActivity, "", 0, 1}, {Slot::kAmount, "", 1, 2}}),
                  SchemaError);
  CHECK_THROWS_AS(delexicalize_text("walk", {{Slot::kActivity, "", 0, 3}}), SchemaError);
}

TEST_CASE("annotated utterances") {
  const auto u = utterance("I will walk 3000 steps", {{Slot::kActivity, "walk", 2, 2}, {Slot::kAmount, "3000 steps", 3, 4}});
  CHECK(u.bio_labels == std::vector<std::string>{"O", "O", "B-activity", "B-amount", "I-amount"});
  CHECK(u.has_spans());
  REQUIRE(u.spans().size() == 2);
  CHECK(u.spans()[1].value == "3000 steps");
  CHECK_THROWS_AS(AnnotatedUtterance::make("walk", {{Slot::kActivity, "walk", 0, 1}}), SchemaError);
  const auto back = utterance_from_json(utterance_to_json(u));
  CHECK(back.text == u.text);
  CHECK(back.bio_labels == u.bio_labels);
}

TEST_CASE("value location") {
  std::vector<std::pair<Slot, std::string>> missing;
  const auto spans = locate_values("Walk on Monday, then walk on Friday",
                                   {{Slot::kActivity, "walk"}, {Slot::kActivity, "walk"}, {Slot::kDayname, "friday"},
                                    {Slot::kTime, "7am"}},
                                   &missing);
  REQUIRE(spans.size() == 3);
  CHECK(spans[0].token_start == 0);
  CHECK(spans[1].token_start == 5);
  CHECK(spans[2].token_start == 7);
  CHECK(missing == std::vector<std::pair<Slot, std::string>>{{Slot::kTime, "7am"}});
  CHECK(locate_values("walked", {{Slot::kActivity, "walk"}}).empty());
}

TEST_CASE("corpus loading") {
  TempDir dir;
  CHECK(load_corpus(dir.write("empty.jsonl", "")).weeks.empty());

  const std::string good =
      R"({"week": "w1", "dataset": 1, "turn": 0, "speaker": "coach", "text": "Hi", "stage": "goal_setting"})"
      "\n"
      R"({"week": "w1", "dataset": 1, "turn": 1, "speaker": "patient", "text": "I will walk", "stage": "goal_setting", "spans": [{"slot": "activity", "start": 2, "end": 2}]})"
      "\n";
  const Corpus c = load_corpus(dir.write("good.jsonl", good));
  REQUIRE(c.weeks.size() == 1);
  CHECK(c.utterance_count() == 2);
  CHECK(c.weeks[0].turns[1].spans()[0].value == "walk");

  auto expect_line = [&](const std::string& name, const std::string& body, std::size_t line) {
    try {
      load_corpus(dir.write(name, body));
      FAIL("expected SchemaError for " << name);
    } catch (const SchemaError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("unknown_slot.jsonl",
              R"({"week": "w1", "turn": 0, "speaker": "patient", "text": "walk", "spans": [{"slot": "steps", "start": 0, "end": 0}]})"
              "\n",
              1);
  expect_line("bad_json.jsonl", good + "{oops\n", 3);
  expect_line("order.jsonl",
              good + R"({"week": "w1", "dataset": 1, "turn": 1, "speaker": "coach", "text": "Ok", "stage": "goal_setting"})" "\n",
              3);
  expect_line("no_stage.jsonl", R"({"week": "w2", "dataset": 2, "turn": 0, "speaker": "patient", "text": "hi"})" "\n", 1);
  expect_line("range.jsonl",
              R"({"week": "w1", "turn": 0, "speaker": "patient", "text": "walk", "spans": [{"slot": "activity", "start": 0, "end": 4}]})"
              "\n",
              1);
}

TEST_CASE("corpus write and load round trip") {
  const Corpus toy = generate_toy_corpus(ToyConfig{12, 3});
  TempDir dir;
  write_corpus(toy, dir.path / "c");
  const Corpus back = load_corpus(dir.path / "c");
  REQUIRE(back.weeks.size() == toy.weeks.size());
  CHECK(back.goals.size() == toy.goals.size());
  for (std::size_t w = 0; w < toy.weeks.size(); ++w) {
    REQUIRE(back.weeks[w].turns.size() == toy.weeks[w].turns.size());
    for (std::size_t t = 0; t < toy.weeks[w].turns.size(); ++t) {
      const auto& a = toy.weeks[w].turns[t];
      const auto& b = back.weeks[w].turns[t];
      CHECK(a.text == b.text);
      CHECK(a.bio_labels == b.bio_labels);
      CHECK(a.stage == b.stage);
      CHECK(a.belief == b.belief);
    }
  }
}

TEST_CASE("corpus split") {
  const Corpus toy = generate_toy_corpus();
  const auto split = split_corpus(toy, 0.1);
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  for (const auto& w : toy.weeks) (w.dataset == 2 ? d2 : d1)++;
  CHECK(split.test.weeks.size() == d2);
  CHECK(split.dev.weeks.size() == static_cast<std::size_t>(std::lround(0.1 * static_cast<double>(d1))));
  CHECK(split.train.weeks.size() + split.dev.weeks.size() == d1);
  for (const auto& w : split.test.weeks) CHECK(w.dataset == 2);
  std::set<std::string> ids;
  for (const auto* part : {&split.train, &split.dev, &split.test}) {
    for (const auto& w : part->weeks) CHECK(ids.insert(w.week_id).second);
  }
  const auto again = split_corpus(toy, 0.1);
  REQUIRE(again.dev.weeks.size() == split.dev.weeks.size());
  for (std::size_t i = 0; i < again.dev.weeks.size(); ++i) CHECK(again.dev.weeks[i].week_id == split.dev.weeks[i].week_id);
}

TEST_CASE("toy grammar is tagged exactly by the rule tagger") {
  const Corpus toy = generate_toy_corpus();
  const RuleSlotTagger tagger;
  std::size_t mismatches = 0;
  for (const auto& w : toy.weeks) {
    for (const auto& u : w.turns) mismatches += tagger.tag(u.tokens) != u.bio_labels;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("training views") {
  const Corpus toy = generate_toy_corpus(ToyConfig{30, 5});
  const auto tagger = tagger_examples(toy);
  const auto all = tagger_examples(toy, false);
  CHECK(tagger.size() < all.size());
  CHECK(all.size() == toy.utterance_count());
  for (const auto& ex : tagger) CHECK_NOTHROW(ex.validate());

  const auto coll = mine_collisions(toy);
  REQUIRE_FALSE(coll.empty());
  std::size_t keep = 0;
  for (const auto& c : coll) keep += c.keep_previous;
  CHECK(keep > 0);
  CHECK(keep < coll.size());

  const auto seq = seq_examples(toy);
  std::size_t stage = 0;
  for (const auto& s : seq) {
    if (s.input.rfind("predict stage: ", 0) == 0) {
      ++stage;
      CHECK(parse_stage_token(s.target));
    } else {
      CHECK(s.input.rfind("generate response: ", 0) == 0);
    }
  }
  CHECK(stage * 2 == seq.size());

  Corpus unlabeled = toy;
  unlabeled.weeks[0].turns[1].stage.reset();
  CHECK_THROWS_AS(seq_examples(unlabeled), SchemaError);

  const auto delex = delexicalize_targets(toy);
  for (const auto& w : delex.weeks) {
    for (const auto& u : w.turns) {
      if (u.speaker == Speaker::kCoach) CHECK_FALSE(u.has_spans());
    }
  }
}

TEST_CASE("gold beliefs fall back to a last-mention fold") {
  Corpus toy = generate_toy_corpus(ToyConfig{3, 8});
  Week w = toy.weeks[0];
  const auto annotated = gold_beliefs(w);
  for (auto& u : w.turns) u.belief.reset();
  const auto folded = gold_beliefs(w);
  REQUIRE(folded.size() == w.turns.size());
  CHECK(annotated.size() == folded.size());
}

TEST_CASE("substitution shifts labels to the new value length") {
  const auto u = utterance("walk 2000 steps", {{Slot::kActivity, "walk", 0, 0}, {Slot::kAmount, "2000 steps", 1, 2}});
  const auto v = substitute_values(u, {"walk", "3000 steps"});
  CHECK(v.text == "walk 3000 steps");
  CHECK(v.bio_labels == std::vector<std::string>{"B-activity", "B-amount", "I-amount"});
  const auto longer = substitute_values(u, {"brisk walk", "three thousand steps"});
  CHECK(longer.bio_labels == std::vector<std::string>{"B-activity", "I-activity", "B-amount", "I-amount", "I-amount"});

  AugmentationRecipe r;
  r.value_alternatives[Slot::kAmount] = {"3000 steps"};
  r.max_variants = 1;
  const auto variants = augment(u, r, 1);
  REQUIRE(variants.size() == 1);
  CHECK(variants[0].text == "walk 3000 steps");
  CHECK(variants[0].bio_labels == std::vector<std::string>{"B-activity", "B-amount", "I-amount"});
}

TEST_CASE("augmentation preconditions and discard rules") {
  AugmentationRecipe r;
  r.value_alternatives[Slot::kAmount] = {"3000 steps", "5000 steps"};
  CHECK_THROWS_AS(augment(utterance("hello there", {}), r, 1), PreconditionError);

  const auto u = utterance("walk 2000 steps", {{Slot::kActivity, "walk", 0, 0}, {Slot::kAmount, "2000 steps", 1, 2}});
  r.paraphraser = std::make_shared<DroppingParaphraser>();
  CHECK(augment(u, r, 1).empty());
  r.paraphraser = std::make_shared<FailingParaphraser>();
  const auto kept = augment(u, r, 1);
  REQUIRE_FALSE(kept.empty());
  for (const auto& v : kept) CHECK(v.text.rfind("walk ", 0) == 0);

  AugmentationRecipe bad;
  bad.value_alternatives[Slot::kAmount] = {};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  AugmentationRecipe zero;
  zero.max_variants = 0;
  CHECK_THROWS_AS(zero.validate(), ConfigError);
  const auto round = AugmentationRecipe::from_json(r.to_json());
  CHECK(round.max_variants == r.max_variants);
  CHECK(round.value_alternatives == r.value_alternatives);
}

TEST_CASE("augmentation integrity on 200 slot-bearing utterances") {
  const Corpus toy = generate_toy_corpus();
  AugmentationRecipe r;
  r.value_alternatives = harvest_alternatives(toy);
  r.paraphraser = std::make_shared<IdentityParaphraser>();
  r.max_variants = 3;

  std::size_t sources = 0;
  std::size_t variants = 0;
  for (const auto& w : toy.weeks) {
    for (const auto& u : w.turns) {
      if (!u.has_spans() || sources == 200) continue;
      ++sources;
      const auto orig = u.spans();
      for (const auto& v : augment(u, r, sources)) {
        ++variants;
        CHECK_NOTHROW(BIOSequence{v.tokens, v.bio_labels}.validate());
        const auto decoded = decode_bio(tokenize(v.text), v.bio_labels, v.text);
        REQUIRE(decoded.size() == orig.size());
        std::vector<std::string> values;
        for (std::size_t i = 0; i < orig.size(); ++i) {
          CHECK(decoded[i].slot == orig[i].slot);
          const auto& pool = r.value_alternatives.at(orig[i].slot);
          CHECK(std::find(pool.begin(), pool.end(), decoded[i].value) != pool.end());
          values.push_back(decoded[i].value);
        }
        CHECK(oracle::splice(u, values) == v.text);
        CHECK(v.week_id == u.week_id);
      }
    }
  }
  CHECK(sources == 200);
  CHECK(variants > 200);
}

TEST_CASE("augment_corpus is seeded") {
  const Corpus toy = generate_toy_corpus(ToyConfig{10, 2});
  AugmentationRecipe r;
  r.value_alternatives = harvest_alternatives(toy);
  const auto a = augment_corpus(toy, r, 42);
  const auto b = augment_corpus(toy, r, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].text == b[i].text);
}

TEST_CASE("csv reader") {
  std::istringstream in("a,\"b,c\",\"d \"\"q\"\"\"\n\"multi\nline\",x\n");
  const auto rows = read_csv(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].fields == std::vector<std::string>{"a", "b,c", "d \"q\""});
  CHECK(rows[1].fields[0] == "multi\nline");
  CHECK(rows[1].line == 2);
  std::istringstream bad("\"open\n");
  CHECK_THROWS_AS(read_csv(bad), SchemaError);
  CHECK(split_plain_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
}

TEST_CASE("empathy corpus readers") {
  TempDir dir;
  dir.write("ed/train.csv",
            "conv_id,utterance_idx,context,prompt,speaker_idx,utterance,selfeval,tags\n"
            "c1,1,sad,p,1,I lost my job_comma_ sadly.,x,\n"
            "c1,2,sad,p,2,Oh no_comma_ I hope you are okay.,x,\n"
            "c1,3,sad,p,1,Thanks.,x,\n"
            "c2,1,proud,p,1,I ran a marathon!,x,\n"
            "c2,2,proud,p,2,Check your steps.,x,\n");
  const auto pairs = read_ed_pairs(dir.path / "ed/train.csv");
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].utterance == "I lost my job, sadly.");
  CHECK(pairs[0].response == "Oh no, I hope you are okay.");
  CHECK(pairs[0].emotion == "sad");

  dir.write("ep/emotional-reactions-reddit.csv",
            "sp_id,rp_id,seeker_post,response_post,level,rationales\n"
            "s1,r1,post,\"I'm so sorry, that is hard.\",2,\n"
            "s2,r2,post,Go outside.,0,\n");
  dir.write("ep/explorations-reddit.csv",
            "sp_id,rp_id,seeker_post,response_post,level,rationales\n"
            "s1,r1,post,\"I'm so sorry, that is hard.\",1,\n");
  const auto ep = read_epitome(dir.path / "ep");
  REQUIRE(ep.mechanisms.size() == 2);
  CHECK(ep.mechanisms[0].mechanisms == MechanismSet{Mechanism::kEmotionalReaction, Mechanism::kExploration});
  CHECK(ep.mechanisms[1].mechanisms.empty());
  CHECK(ep.levels[0].score == doctest::Approx(1.5));
  CHECK(ep.levels[1].score == 0.0);
  dir.write("bad/interpretations-reddit.csv", "sp_id,rp_id,seeker_post,response_post,level\ns,r,p,t,5\n");
  CHECK_THROWS_AS(read_epitome(dir.path / "bad"), SchemaError);

  const auto corpus = build_empathy_corpus(dir.path / "ed", dir.path / "ep", RuleMechanismLabeler{});
  CHECK(corpus.dropped == 2);
  REQUIRE(corpus.samples.size() == 1);
  CHECK(corpus.samples[0].split == "train");
  CHECK(corpus.samples[0].sample.mechanisms == MechanismSet{Mechanism::kEmotionalReaction});

  write_silver(corpus.samples, dir.path / "silver.jsonl");
  const auto back = read_silver(dir.path / "silver.jsonl");
  REQUIRE(back.size() == corpus.samples.size());
  CHECK(back[0].sample == corpus.samples[0].sample);
  CHECK(back[0].emotion == corpus.samples[0].emotion);

  const auto empty = build_empathy_corpus(dir.path / "none", dir.path / "none", RuleMechanismLabeler{});
  CHECK(empty.samples.empty());
}

TEST_CASE("release importer") {
  TempDir dir;
  dir.write("d1/week_a.jsonl",
            R"({"week_id": "a", "turn_index": 1, "role": "patient", "text": "I will walk 3000 steps", "slots": [{"slot": "activity", "value": "walk"}, {"slot": "amount", "value": "3000 steps"}, {"slot": "time", "value": "at noon"}]})"
            "\n"
            R"({"week_id": "a", "turn_index": 0, "role": "coach", "text": "What is your goal?"})"
            "\n");
  dir.write("d1/goals.jsonl", R"({"week": "a", "point": "forward", "slots": {"activity": ["walk"]}})" "\n");
  dir.write("d2/b.jsonl",
            R"({"week": "b", "turn": 0, "speaker": "patient", "text": "Monday works", "stage": "goal_setting", "slots": [{"slot": "dayname", "value": "Monday", "char_start": 0, "char_end": 6}]})"
            "\n");
  ImportStats stats;
  const Corpus c = import_release(dir.path / "d1", dir.path / "d2", &stats);
  REQUIRE(c.weeks.size() == 2);
  const Week* a = c.find_week("a");
  REQUIRE(a != nullptr);
  CHECK(a->turns[0].speaker == Speaker::kCoach);
  CHECK(a->turns[1].spans().size() == 2);
  CHECK(c.find_week("b")->dataset == 2);
  CHECK(c.find_week("b")->turns[0].spans()[0].value == "Monday");
  CHECK(stats.unlocated == 1);
  CHECK(c.goal("a", SnapshotPoint::kForward));

  dir.write("d3/x.jsonl",
            R"({"week": "x", "turn": 0, "speaker": "patient", "text": "a"})" "\n"
            R"({"week": "x", "turn": 0, "speaker": "coach", "text": "b"})" "\n");
  CHECK_THROWS_AS(import_release(dir.path / "d3", dir.path / "none"), SchemaError);
}

TEST_CASE("toy empathy samples encode") {
  const auto samples = toy_empathy_samples(50, 4);
  CHECK(samples.size() == 50);
  for (const auto& s : samples) CHECK_NOTHROW(encode_training_sequence(s));
}
