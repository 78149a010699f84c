#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "lingdim/error.hpp"
#include "lingdim/io/files.hpp"
#include "lingdim/stimuli/checker.hpp"
#include "lingdim/stimuli/generators.hpp"
#include "lingdim/stimuli/text.hpp"

using namespace lingdim;
using namespace lingdim::stimuli;
namespace fs = std::filesystem;

namespace {

const Lexicon& lexicon() {
  static const Lexicon lex = load_lexicon(default_lexicon_path());
  return lex;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  return s;
}

// A corpus item from a Table-style "x and/that y" row.
CorpusItem coord_item(const std::string& id, const std::string& row, int n_clauses) {
  CorpusItem it;
  it.id = id;
  it.sentences["coordination"] = replace_all(row, "and/that", "and");
  it.sentences["subordination"] = replace_all(row, "and/that", "that");
  it.metadata = {{"dataset", "coord_subord"}, {"n_clauses", n_clauses}};
  return it;
}

CorpusItem branch_item(const std::string& id, const std::string& right, const std::string& center) {
  CorpusItem it;
  it.id = id;
  it.sentences["right_branching"] = right;
  it.sentences["center_embedding"] = center;
  it.metadata = {{"dataset", "branching"}};
  return it;
}

CorpusItem attach_item(const std::string& id, const std::string& amb, const std::string& low, const std::string& high,
                       const std::string& bias) {
  CorpusItem it;
  it.id = id;
  it.sentences = {{"ambiguous", amb}, {"low", low}, {"high", high}};
  it.metadata = {{"dataset", "attachment"}, {"bias_type", bias}};
  return it;
}

std::vector<std::string> failed(const CheckReport& r) {
  std::vector<std::string> out;
  for (const auto& c : r.checks)
    if (!c.passed()) out.push_back(c.name);
  return out;
}

std::vector<Slot> quinn_slots() {
  return {{"NP1", "Quinn", "Quinn", Number::singular},
          {"PROPVERB1", "rejoice", "is rejoicing", Number::singular},
          {"NP2", "surgeon", "the surgeon", Number::singular},
          {"PROPVERB2", "doubt", "is doubting", Number::singular},
          {"NP3", "Mary", "Mary", Number::singular},
          {"PROPVERB3", "scream", "is screaming", Number::singular},
          {"NP4", "driver", "the driver", Number::singular},
          {"INTVERB", "falter", "is faltering", Number::singular}};
}

const std::string kTemplateLexicon = R"(# minimal
[prop_verbs]
think | is thinking | are thinking
hope | is hoping | are hoping
say | is saying | are saying
[intrans_verbs]
sleep | is sleeping | are sleeping | was sleeping | were sleeping
[trans_verbs]
see | saw
[proper_nouns]
Ann
[profession_nouns]
baker | bakers
[person_nouns]
aunt | age_class=adult gender_class=female role_class=none
boy | age_class=child gender_class=male role_class=none
[rc_items]
paid rent | age | age_class=adult
[continuations]
left early
)";

}  // namespace

TEST_CASE("text helpers") {
  CHECK(tokenize("  The  driver\tleft ") == std::vector<std::string>{"The", "driver", "left"});
  CHECK(capitalize("the x") == "The x");
  CHECK(lowercase("AbC") == "abc");
  CHECK(trim("  a b ") == "a b");
  CHECK(join({"a", "b", "c"}, " and ") == "a and b and c");
}

TEST_CASE("default lexicon inventory") {
  const auto c = lexicon().counts();
  CHECK(c.prop_verbs == 17);
  CHECK(c.intrans_verbs == 65);
  CHECK(c.trans_verbs == 100);
  CHECK(c.proper_nouns == 30);
  CHECK(c.profession_nouns == 44);
  CHECK(lexicon().inventory_warnings().empty());
  CHECK(c.rc_items * c.continuations >= 10880);
}

TEST_CASE("lexicon parse errors") {
  CHECK_NOTHROW(parse_lexicon(kTemplateLexicon, "t"));
  CHECK_FALSE(parse_lexicon(kTemplateLexicon, "t").inventory_warnings().empty());

  auto expect = [](const std::string& text, const std::string& needle) {
    try {
      parse_lexicon(text, "t.lex");
      FAIL("expected a load error");
    } catch (const LoadError& e) {
      const std::string what = e.what();
      CHECK_MESSAGE(what.find(needle) != std::string::npos, what);
    }
  };
  expect(replace_all(kTemplateLexicon, "see | saw\n", ""), "[trans_verbs]");
  expect(replace_all(kTemplateLexicon, "Ann\n", "Ann\nAnn\n"), "duplicate lemma 'Ann'");
  expect(replace_all(kTemplateLexicon, "[continuations]\nleft early\n", ""), "missing section [continuations]");
  expect(replace_all(kTemplateLexicon, "see | saw", "see | saw | seen"), "t.lex:9:");
  expect(replace_all(kTemplateLexicon, "paid rent | age |", "paid rent | mood |"), "mood");
  expect(replace_all(kTemplateLexicon, "hope | is hoping", "hope | be hoping"), "t.lex:4:");
  expect(replace_all(kTemplateLexicon, " role_class=none\nboy", "\nboy"), "role_class");
  expect(kTemplateLexicon + "[extra]\nx\n", "extra");
  CHECK_THROWS_AS(load_lexicon("/nonexistent/lexicon.lex"), LoadError);
}

TEST_CASE("attribute constraints treat 'any' as neither") {
  PersonNoun sister{"sister", {{"age_class", "any"}, {"gender_class", "female"}, {"role_class", "sibling"}}};
  AttributeConstraint age{"age_class", {"adult"}, false};
  CHECK_FALSE(age.compatible(sister));
  CHECK_FALSE(age.incompatible(sister));
  AttributeConstraint female{"gender_class", {"female"}, false};
  CHECK(female.compatible(sister));
  AttributeConstraint not_sibling{"role_class", {"sibling"}, true};
  CHECK(not_sibling.incompatible(sister));
  PersonNoun boy{"boy", {{"age_class", "child"}, {"gender_class", "male"}, {"role_class", "none"}}};
  CHECK(not_sibling.compatible(boy));
  CHECK(age.incompatible(boy));
}

TEST_CASE("Table 2 rows pass the checker, derivations match the caption") {
  const std::vector<std::string> rows{
      "Quinn is rejoicing and/that the surgeon is doubting and/that Mary is screaming and/that the driver is faltering",
      "The doctors are muttering and/that the firefighter is babbling and/that Bill is complaining and/that the consultants are hesitating",
      "The engineers are singing and/that Jordan is dreaming and/that the tutors are rejoicing and/that the soldier is sliding",
      "The artist is remembering and/that Matthew is doubting and/that the judge is writing and/that Taylor is trembling",
      "Emily is complaining and/that Casey is mumbling and/that the manager is writing and/that the blacksmith is shivering"};
  std::vector<CorpusItem> items;
  for (std::size_t i = 0; i < rows.size(); ++i) items.push_back(coord_item("t2-" + std::to_string(i), rows[i], 4));
  const auto report = check_constraints(items, Dataset::coord_subord, lexicon());
  CHECK(failed(report).empty());

  const auto pair = assemble_coord_subord("q", quinn_slots());
  CHECK(pair.easy_sentence == replace_all(rows[0], "and/that", "and"));
  CHECK(pair.hard_sentence == replace_all(rows[0], "and/that", "that"));

  const auto three = derive_shorter(pair, 3);
  const std::string caption3 = "Quinn is rejoicing and/that the surgeon is doubting and/that the driver is faltering";
  CHECK(three.easy_sentence == replace_all(caption3, "and/that", "and"));
  CHECK(three.hard_sentence == replace_all(caption3, "and/that", "that"));
  CHECK(three.id == "q-c3");
  CHECK(three.n_clauses == 3);
  auto expected = quinn_slots();
  expected.erase(expected.begin() + 4, expected.begin() + 6);
  CHECK(three.slots == expected);

  const auto two = derive_shorter(pair, 2);
  CHECK(two.easy_sentence == "Quinn is rejoicing and the driver is faltering");
  CHECK(two.hard_sentence == "Quinn is rejoicing that the driver is faltering");
  CHECK(two.slot("NP4").lemma == "driver");
  CHECK(two.slots.size() == 4);

  CHECK_THROWS_AS(derive_shorter(three, 2), ParameterError);
  CHECK_THROWS_AS(derive_shorter(pair, 4), ParameterError);

  const auto shorter = check_constraints(to_items(std::vector<StimulusPair>{three, two}), Dataset::coord_subord, lexicon());
  CHECK(failed(shorter).empty());
}

TEST_CASE("Table 3 rows pass the checker") {
  const std::vector<std::pair<std::string, std::string>> rows{
      {"Sarah intimidated the potters that were frowning", "The potters that Sarah intimidated were frowning"},
      {"James harassed the veterinarians that were sulking", "The veterinarians that James harassed were sulking"},
      {"Bill excluded the driver that was escaping", "The driver that Bill excluded was escaping"},
      {"Elizabeth praised the foresters that were chuckling", "The foresters that Elizabeth praised were chuckling"},
      {"The gardeners applauded the blacksmith that was hurrying",
       "The blacksmith that the gardeners applauded was hurrying"}};
  std::vector<CorpusItem> items;
  for (std::size_t i = 0; i < rows.size(); ++i)
    items.push_back(branch_item("t3-" + std::to_string(i), rows[i].first, rows[i].second));
  CHECK(failed(check_constraints(items, Dataset::branching, lexicon())).empty());

  const auto pair = assemble_branching("b", {{"NP1", "potter", "the potters", Number::plural},
                                             {"NP2", "Sarah", "Sarah", Number::singular},
                                             {"TRVERB", "intimidate", "intimidated", Number::none},
                                             {"INTVERB", "frown", "were frowning", Number::plural}});
  CHECK(pair.easy_sentence == rows[0].first);
  CHECK(pair.hard_sentence == rows[0].second);
}

TEST_CASE("Table 5 triplets pass the checker") {
  CHECK(render_attachment("neighbor", "grandpa", "paid a mortgage", "stood nearby") ==
        "The neighbor of the grandpa who paid a mortgage stood nearby");
  std::vector<CorpusItem> items{
      attach_item("age", "The neighbor of the grandpa who paid a mortgage stood nearby",
                  "The child of the comrade who paid a mortgage stood nearby",
                  "The uncle of the child who paid a mortgage stood nearby", "age"),
      attach_item("gender", "The sister of the heiress who was menstruating cooked rice",
                  "The uncle of the maiden who was menstruating cooked rice",
                  "The maiden of the uncle who was menstruating cooked rice", "gender")};
  const auto report = check_constraints(items, Dataset::attachment, lexicon());
  CHECK(failed(report).empty());

  // Swapping the low and high sentences breaks compatibility.
  std::swap(items[1].sentences["low"], items[1].sentences["high"]);
  const auto bad = check_constraints(items, Dataset::attachment, lexicon());
  CHECK(bad.check("compatibility").offending_ids == std::vector<std::string>{"gender"});
}

TEST_CASE("checker catches injected faults") {
  std::vector<CorpusItem> items{
      branch_item("ok", "Sarah intimidated the potters that were frowning",
                  "The potters that Sarah intimidated were frowning"),
      branch_item("bad", "Sarah intimidated the potters that was frowning",
                  "The potters that Sarah intimidated was frowning")};
  const auto r = check_constraints(items, Dataset::branching, lexicon());
  CHECK(r.check("agreement").offending_ids == std::vector<std::string>{"bad"});
  CHECK(r.check("word_multiset").passed());
  CHECK_FALSE(r.ok());
  CHECK(r.n_failed_checks() == 1);

  const auto row = "Quinn is rejoicing and/that the surgeon is doubting and/that Mary is screaming and/that the driver is faltering";
  const auto dup = "Quinn is rejoicing and/that the surgeon is doubting and/that Taylor is hoping and/that the judge is hesitating";
  const auto c = check_constraints({coord_item("a", row, 4), coord_item("b", dup, 4)}, Dataset::coord_subord, lexicon());
  CHECK(c.check("tuple_unique_np1_pv1_np2_pv2").offending_ids == std::vector<std::string>{"b"});
  CHECK(c.check("tuple_unique_np1_pv1_np4_iv").passed());

  auto mixed = coord_item("m", row, 4);
  mixed.sentences["subordination"] = replace_all(mixed.sentences["subordination"], "Mary", "Quinn");
  const auto m = check_constraints({mixed}, Dataset::coord_subord, lexicon());
  CHECK_FALSE(m.check("minimality").passed());
  CHECK_FALSE(m.check("no_repeated_lemma").passed());

  auto garbage = coord_item("g", "Quinn is flying and the zorp is doubting", 2);
  const auto g = check_constraints({garbage, garbage}, Dataset::coord_subord, lexicon());
  CHECK_FALSE(g.check("parse").passed());
  CHECK_FALSE(g.check("unique_ids").passed());
  CHECK_THROWS_AS(g.check("no_such_check"), ParameterError);
  CHECK(g.to_json(1)["checks"].is_array());

  auto lower = coord_item("l", row, 4);
  lower.sentences["coordination"][0] = 'q';
  CHECK_FALSE(check_constraints({lower}, Dataset::coord_subord, lexicon()).check("format").passed());
}

TEST_CASE("coord/subord generator") {
  const auto pairs = gen_coord_subord(lexicon(), 3000, 7);
  REQUIRE(pairs.size() == 3000);
  CHECK(pairs.front().id == "coord-000001");
  Corpus c;
  c.dataset = Dataset::coord_subord;
  c.pairs = pairs;
  const auto report = check_constraints(c, lexicon());
  CHECK(failed(report).empty());
  CHECK(corpus_to_jsonl(c) == [] {
    Corpus d;
    d.pairs = gen_coord_subord(lexicon(), 3000, 7);
    return corpus_to_jsonl(d);
  }());
  CHECK(gen_coord_subord(lexicon(), 50, 8) != gen_coord_subord(lexicon(), 50, 7));

  // Both noun kinds and both numbers occur.
  std::set<Number> numbers;
  bool proper = false;
  for (const auto& p : pairs)
    for (const auto& s : p.slots) {
      if (s.name.rfind("NP", 0) == 0) {
        numbers.insert(s.number);
        proper |= s.form.rfind("the ", 0) != 0;
      }
    }
  CHECK(numbers.count(Number::plural));
  CHECK(numbers.count(Number::singular));
  CHECK(proper);

  std::vector<StimulusPair> shorter;
  for (std::size_t i = 0; i < 200; ++i) shorter.push_back(derive_shorter(pairs[i], 2 + static_cast<int>(i % 2)));
  CHECK(failed(check_constraints(to_items(shorter), Dataset::coord_subord, lexicon())).empty());
}

TEST_CASE("generators report saturation with the achieved count") {
  const auto tiny = parse_lexicon(kTemplateLexicon, "t");
  try {
    gen_coord_subord(tiny, 10, 1, 20);
    FAIL("expected a generation error");
  } catch (const GenerationError& e) {
    CHECK(std::string(e.what()).find("0 of 10") != std::string::npos);
  }
  CHECK_THROWS_AS(gen_branching(tiny, 5, 1, 20), GenerationError);
  AttachmentOptions o;
  o.count = 2;
  CHECK_THROWS_AS(gen_attachment(tiny, o), GenerationError);
}

TEST_CASE("branching generator") {
  const auto pairs = gen_branching(lexicon(), 3000, 3);
  REQUIRE(pairs.size() == 3000);
  CHECK(pairs.front().id == "branch-000001");
  for (const auto& p : pairs) {
    auto a = tokenize(lowercase(p.easy_sentence));
    auto b = tokenize(lowercase(p.hard_sentence));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    REQUIRE(a == b);
    CHECK(p.slot("NP1").form.rfind("the ", 0) == 0);
  }
  Corpus c;
  c.dataset = Dataset::branching;
  c.pairs = pairs;
  CHECK(failed(check_constraints(c, lexicon())).empty());
}

TEST_CASE("attachment generator") {
  AttachmentOptions o;
  o.count = 1500;
  o.seed = 4;
  const auto trips = gen_attachment(lexicon(), o);
  REQUIRE(trips.size() == 1500);
  CHECK(trips.front().id == "attach-000001");
  const int cap = o.resolved_cap(lexicon().person_nouns.size());
  const int base = static_cast<int>((3 * 1500 + lexicon().person_nouns.size() - 1) / lexicon().person_nouns.size());
  CHECK(cap == base + (base + 3) / 4);
  Corpus c;
  c.dataset = Dataset::attachment;
  c.triplets = trips;
  CheckOptions co;
  co.noun_cap = cap;
  const auto report = check_constraints(c, lexicon(), co);
  CHECK(failed(report).empty());
  CHECK(report.check("noun_usage_cap").n_checked == 1500);

  for (const auto& t : trips) {
    CHECK(t.ambiguous_np2 == t.low_np2);
    CHECK(t.high_np1 == t.low_np2);
    CHECK(t.high_np2 == t.low_np1);
    CHECK(t.ambiguous == render_attachment(t.ambiguous_np1, t.ambiguous_np2, t.rc, t.continuation));
  }
  // A cap of 1 use per noun cannot hold 1500 triplets.
  o.noun_cap = 1;
  CHECK_THROWS_AS(gen_attachment(lexicon(), o), GenerationError);
  o.noun_cap.reset();
  o.slack = 0;
  CHECK(o.resolved_cap(72) == base);
}

TEST_CASE("corpus JSONL round trip and plain exports") {
  Corpus c;
  c.dataset = Dataset::coord_subord;
  c.header = {{"tool", "test"}};
  c.pairs = gen_coord_subord(lexicon(), 20, 1);
  c.pairs[3] = derive_shorter(c.pairs[3], 3);
  const auto text = corpus_to_jsonl(c);
  const auto back = parse_corpus_jsonl(text);
  CHECK(back.dataset == c.dataset);
  CHECK(back.pairs == c.pairs);
  CHECK(back.header.at("tool") == "test");
  CHECK(corpus_to_jsonl(back) == text);

  Corpus a;
  a.dataset = Dataset::attachment;
  AttachmentOptions o;
  o.count = 30;
  a.triplets = gen_attachment(lexicon(), o);
  const auto aback = parse_corpus_jsonl(corpus_to_jsonl(a));
  CHECK(aback.triplets == a.triplets);
  CHECK(aback.n_sentences() == 90);

  const fs::path dir = fs::temp_directory_path() / "lingdim_test_corpus";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto files = write_corpus(a, (dir / "att").string(), false);
  CHECK(files.size() == 5);
  const auto low = io::read_file(dir / "att.low.txt");
  CHECK(std::count(low.begin(), low.end(), '\n') == 30);
  CHECK(low.rfind(a.triplets[0].low_attach + "\n", 0) == 0);
  CHECK(io::read_file(dir / "att.ids.txt").rfind("attach-000001\n", 0) == 0);
  CHECK_THROWS_AS(write_corpus(a, (dir / "att").string(), false), IoError);
  CHECK(read_corpus(dir / "att.jsonl").triplets == a.triplets);

  CHECK_THROWS_AS(parse_corpus_jsonl("{\"corpus_header\":{\"dataset\":\"branching\"}}\n{\"id\":3}\n", "x"),
                  ValidationError);
  CHECK_THROWS_AS(parse_dataset("poetry"), ParameterError);
}
