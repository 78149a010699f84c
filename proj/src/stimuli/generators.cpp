#include "lingdim/stimuli/generators.hpp"

#include <cstdio>
#include <unordered_set>

#include "lingdim/error.hpp"
#include "lingdim/random.hpp"
#include "lingdim/stimuli/text.hpp"

namespace lingdim::stimuli {

std::string format_id(const std::string& prefix, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return prefix + "-" + buf;
}

namespace {

struct NounDraw {
  std::string lemma;
  std::string form;  // "Quinn", "the surgeon", "the surgeons"
  Number number;
};

// Uniform over all proper and profession lemmas; professions then flip a fair
// coin for number.
NounDraw draw_noun(const Lexicon& lex, Rng& rng) {
  const std::size_t n_proper = lex.proper_nouns.size();
  const std::size_t k = rng.index(n_proper + lex.profession_nouns.size());
  if (k < n_proper) return {lex.proper_nouns[k], lex.proper_nouns[k], Number::singular};
  const Profession& p = lex.profession_nouns[k - n_proper];
  if (rng.coin()) return {p.lemma(), "the " + p.plural, Number::plural};
  return {p.lemma(), "the " + p.singular, Number::singular};
}

NounDraw draw_profession(const Lexicon& lex, Rng& rng) {
  const Profession& p = lex.profession_nouns[rng.index(lex.profession_nouns.size())];
  if (rng.coin()) return {p.lemma(), "the " + p.plural, Number::plural};
  return {p.lemma(), "the " + p.singular, Number::singular};
}

Slot noun_slot(std::string name, const NounDraw& n) { return {std::move(name), n.lemma, n.form, n.number}; }

bool is_verb_slot(const std::string& name) { return name.rfind("PROPVERB", 0) == 0 || name == "INTVERB"; }

[[noreturn]] void saturated(const char* what, std::size_t achieved, std::size_t count, const std::string& why) {
  throw GenerationError(std::string(what) + ": " + why + " after " + std::to_string(achieved) + " of " +
                        std::to_string(count) + " items");
}

}  // namespace

StimulusPair assemble_coord_subord(const std::string& id, std::vector<Slot> slots) {
  if (slots.size() < 4 || slots.size() > 8 || slots.size() % 2 != 0) {
    throw ParameterError("coord/subord pair needs 2 to 4 (NP, verb) slot pairs, got " + std::to_string(slots.size()) +
                         " slots");
  }
  std::vector<std::string> clauses;
  for (std::size_t i = 0; i < slots.size(); i += 2) {
    if (slots[i].name.rfind("NP", 0) != 0 || !is_verb_slot(slots[i + 1].name)) {
      throw ParameterError("slots must alternate NPk and verb, got " + slots[i].name + ", " + slots[i + 1].name);
    }
    clauses.push_back(slots[i].form + " " + slots[i + 1].form);
  }
  StimulusPair p;
  p.id = id;
  p.contrast = Dataset::coord_subord;
  p.easy_sentence = capitalize(join(clauses, " and "));
  p.hard_sentence = capitalize(join(clauses, " that "));
  p.n_clauses = static_cast<int>(clauses.size());
  p.slots = std::move(slots);
  return p;
}

StimulusPair assemble_branching(const std::string& id, std::vector<Slot> slots) {
  StimulusPair p;
  p.id = id;
  p.contrast = Dataset::branching;
  p.slots = std::move(slots);
  const auto& np1 = p.slot("NP1").form;
  const auto& np2 = p.slot("NP2").form;
  const auto& tv = p.slot("TRVERB").form;
  const auto& iv = p.slot("INTVERB").form;
  p.easy_sentence = capitalize(np2 + " " + tv + " " + np1 + " that " + iv);
  p.hard_sentence = capitalize(np1 + " that " + np2 + " " + tv + " " + iv);
  return p;
}

std::string render_attachment(const std::string& np1, const std::string& np2, const std::string& rc,
                              const std::string& continuation) {
  return "The " + np1 + " of the " + np2 + " who " + rc + " " + continuation;
}

std::vector<StimulusPair> gen_coord_subord(const Lexicon& lex, std::size_t count, std::uint64_t seed,
                                           int max_attempts) {
  if (lex.prop_verbs.size() < 3) throw GenerationError("gen_coord_subord: need at least 3 propositional verbs");
  Rng rng(seed);
  std::vector<StimulusPair> out;
  out.reserve(count);
  std::unordered_set<std::string> tail_tuples;  // NP1, PV1, NP4, IV
  std::unordered_set<std::string> head_tuples;  // NP1, PV1, NP2, PV2

  while (out.size() < count) {
    bool placed = false;
    for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
      NounDraw np[4];
      const PropVerb* pv[3];
      for (auto& n : np) n = draw_noun(lex, rng);
      for (auto& v : pv) v = &lex.prop_verbs[rng.index(lex.prop_verbs.size())];
      const IntransVerb& iv = lex.intrans_verbs[rng.index(lex.intrans_verbs.size())];

      std::unordered_set<std::string> nouns, verbs;
      bool repeated = false;
      for (const auto& n : np) repeated |= !nouns.insert(n.lemma).second;
      for (const auto* v : pv) repeated |= !verbs.insert(v->lemma).second;
      repeated |= !verbs.insert(iv.lemma).second;
      if (repeated) continue;

      const std::string tail = np[0].form + "|" + pv[0]->lemma + "|" + np[3].form + "|" + iv.lemma;
      const std::string head = np[0].form + "|" + pv[0]->lemma + "|" + np[1].form + "|" + pv[1]->lemma;
      if (tail_tuples.count(tail) || head_tuples.count(head)) continue;
      tail_tuples.insert(tail);
      head_tuples.insert(head);

      std::vector<Slot> slots;
      for (int k = 0; k < 3; ++k) {
        const bool plural = np[k].number == Number::plural;
        slots.push_back(noun_slot("NP" + std::to_string(k + 1), np[k]));
        slots.push_back({"PROPVERB" + std::to_string(k + 1), pv[k]->lemma,
                         plural ? pv[k]->present_pl : pv[k]->present_sg, np[k].number});
      }
      slots.push_back(noun_slot("NP4", np[3]));
      slots.push_back({"INTVERB", iv.lemma, np[3].number == Number::plural ? iv.present_pl : iv.present_sg,
                       np[3].number});
      out.push_back(assemble_coord_subord(format_id("coord", out.size() + 1), std::move(slots)));
      placed = true;
    }
    if (!placed) {
      saturated("gen_coord_subord", out.size(), count,
                "rejection budget of " + std::to_string(max_attempts) + " attempts exhausted");
    }
  }
  return out;
}

StimulusPair derive_shorter(const StimulusPair& pair4, int target) {
  if (pair4.contrast != Dataset::coord_subord || pair4.n_clauses != 4 || pair4.slots.size() != 8) {
    throw ParameterError("derive_shorter needs a 4-clause coord/subord pair, got " + pair4.id);
  }
  if (target != 2 && target != 3) throw ParameterError("derive_shorter target must be 2 or 3");
  std::vector<Slot> kept;
  for (std::size_t c = 0; c < 4; ++c) {
    if (c == 2 || (target == 2 && c == 1)) continue;
    kept.push_back(pair4.slots[2 * c]);
    kept.push_back(pair4.slots[2 * c + 1]);
  }
  return assemble_coord_subord(pair4.id + "-c" + std::to_string(target), std::move(kept));
}

std::vector<StimulusPair> gen_branching(const Lexicon& lex, std::size_t count, std::uint64_t seed,
                                        int max_attempts) {
  Rng rng(seed);
  std::vector<StimulusPair> out;
  out.reserve(count);
  std::unordered_set<std::string> seen;

  while (out.size() < count) {
    bool placed = false;
    for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
      const NounDraw np1 = draw_profession(lex, rng);
      const NounDraw np2 = draw_noun(lex, rng);
      const TransVerb& tv = lex.trans_verbs[rng.index(lex.trans_verbs.size())];
      const IntransVerb& iv = lex.intrans_verbs[rng.index(lex.intrans_verbs.size())];
      if (np1.lemma == np2.lemma || tv.lemma == iv.lemma) continue;

      std::vector<Slot> slots{
          noun_slot("NP1", np1),
          noun_slot("NP2", np2),
          {"TRVERB", tv.lemma, tv.past, Number::none},
          {"INTVERB", iv.lemma, np1.number == Number::plural ? iv.past_pl : iv.past_sg, np1.number},
      };
      StimulusPair p = assemble_branching(format_id("branch", out.size() + 1), std::move(slots));
      if (!seen.insert(p.hard_sentence).second) continue;
      out.push_back(std::move(p));
      placed = true;
    }
    if (!placed) {
      saturated("gen_branching", out.size(), count,
                "rejection budget of " + std::to_string(max_attempts) + " attempts exhausted");
    }
  }
  return out;
}

int AttachmentOptions::resolved_cap(std::size_t n_person_nouns) const {
  if (noun_cap) return *noun_cap;
  if (n_person_nouns == 0) return 0;
  const auto base = static_cast<int>((3 * count + n_person_nouns - 1) / n_person_nouns);
  return base + (slack >= 0 ? slack : (base + 3) / 4);
}

std::vector<StimulusTriplet> gen_attachment(const Lexicon& lex, const AttachmentOptions& opts) {
  const std::size_t n_nouns = lex.person_nouns.size();
  if (n_nouns < 3) throw GenerationError("gen_attachment: need at least 3 person nouns");
  const int cap = opts.resolved_cap(n_nouns);
  Rng rng(opts.seed);

  std::vector<std::vector<std::size_t>> compatible(lex.rc_items.size()), incompatible(lex.rc_items.size());
  for (std::size_t r = 0; r < lex.rc_items.size(); ++r) {
    for (std::size_t n = 0; n < n_nouns; ++n) {
      if (lex.rc_items[r].constraint.compatible(lex.person_nouns[n])) compatible[r].push_back(n);
      if (lex.rc_items[r].constraint.incompatible(lex.person_nouns[n])) incompatible[r].push_back(n);
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> combos;
  combos.reserve(lex.rc_items.size() * lex.continuations.size());
  for (std::uint32_t r = 0; r < lex.rc_items.size(); ++r)
    for (std::uint32_t c = 0; c < lex.continuations.size(); ++c) combos.emplace_back(r, c);
  rng.shuffle(combos);

  std::vector<int> usage(n_nouns, 0);
  // Two random eligible candidates, keep the less used one (first on ties).
  auto pick = [&](const std::vector<std::size_t>& pool, std::size_t exclude) {
    std::vector<std::size_t> eligible;
    for (std::size_t n : pool)
      if (usage[n] < cap && n != exclude) eligible.push_back(n);
    if (eligible.empty()) return n_nouns;
    const std::size_t a = eligible[rng.index(eligible.size())];
    const std::size_t b = eligible[rng.index(eligible.size())];
    return usage[b] < usage[a] ? b : a;
  };

  std::vector<StimulusTriplet> out;
  out.reserve(opts.count);
  int failures = 0;
  for (const auto& [r, c] : combos) {
    if (out.size() == opts.count) break;
    const std::size_t x = pick(incompatible[r], n_nouns);
    const std::size_t y = x == n_nouns ? n_nouns : pick(compatible[r], n_nouns);
    const std::size_t a = y == n_nouns ? n_nouns : pick(compatible[r], y);
    if (a == n_nouns) {
      if (++failures >= opts.max_attempts) {
        saturated("gen_attachment", out.size(), opts.count,
                  std::to_string(failures) + " consecutive combinations found no nouns under the usage cap of " +
                      std::to_string(cap));
      }
      continue;
    }
    failures = 0;
    ++usage[x];
    ++usage[y];
    ++usage[a];

    const RcItem& rc = lex.rc_items[r];
    const std::string& cont = lex.continuations[c];
    const std::string& A = lex.person_nouns[a].noun;
    const std::string& X = lex.person_nouns[x].noun;
    const std::string& Y = lex.person_nouns[y].noun;
    StimulusTriplet t;
    t.id = format_id("attach", out.size() + 1);
    t.rc = rc.text;
    t.continuation = cont;
    t.bias = rc.bias;
    t.ambiguous_np1 = A;
    t.ambiguous_np2 = Y;
    t.low_np1 = X;
    t.low_np2 = Y;
    t.high_np1 = Y;
    t.high_np2 = X;
    t.ambiguous = render_attachment(A, Y, rc.text, cont);
    t.low_attach = render_attachment(X, Y, rc.text, cont);
    t.high_attach = render_attachment(Y, X, rc.text, cont);
    out.push_back(std::move(t));
  }
  if (out.size() < opts.count) {
    saturated("gen_attachment", out.size(), opts.count,
              "ran out of (relative clause, continuation) combinations (" + std::to_string(combos.size()) +
                  " available)");
  }
  return out;
}

}  // namespace lingdim::stimuli
