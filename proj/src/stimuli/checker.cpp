#include "lingdim/stimuli/checker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lingdim/error.hpp"
#include "lingdim/stimuli/text.hpp"

namespace lingdim::stimuli {

bool CheckReport::ok() const { return n_failed_checks() == 0; }

std::size_t CheckReport::n_failed_checks() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed(); }));
}

const CheckResult& CheckReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw ParameterError("no check named '" + name + "'");
}

nlohmann::json CheckReport::to_json(std::size_t max_ids) const {
  nlohmann::json j;
  j["dataset"] = to_string(dataset);
  j["n_items"] = n_items;
  j["ok"] = ok();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["description"] = c.description;
    cj["passed"] = c.passed();
    cj["n_checked"] = c.n_checked;
    cj["n_failed"] = c.offending_ids.size();
    const std::size_t shown = std::min(max_ids, c.offending_ids.size());
    cj["offending_ids"] = std::vector<std::string>(c.offending_ids.begin(), c.offending_ids.begin() + shown);
    j["checks"].push_back(std::move(cj));
  }
  return j;
}

namespace {

struct Np {
  std::string lemma;
  std::string form;  // article lowercased
  Number number = Number::singular;
  bool operator==(const Np&) const = default;
};

struct Verb {
  std::string lemma;
  Number number = Number::none;
  bool operator==(const Verb&) const = default;
};

struct FormIndex {
  std::set<std::string> proper;
  std::unordered_map<std::string, std::pair<std::string, Number>> profession;
  std::unordered_map<std::string, Verb> prop, intrans_present, intrans_past;
  std::unordered_map<std::string, std::string> trans;
  std::unordered_map<std::string, const PersonNoun*> person;
  std::unordered_map<std::string, const RcItem*> rc;
  std::unordered_set<std::string> continuation;

  explicit FormIndex(const Lexicon& lex) {
    proper.insert(lex.proper_nouns.begin(), lex.proper_nouns.end());
    for (const auto& p : lex.profession_nouns) {
      profession[p.singular] = {p.lemma(), Number::singular};
      profession[p.plural] = {p.lemma(), Number::plural};
    }
    for (const auto& v : lex.prop_verbs) {
      prop[v.present_sg] = {v.lemma, Number::singular};
      prop[v.present_pl] = {v.lemma, Number::plural};
    }
    for (const auto& v : lex.intrans_verbs) {
      intrans_present[v.present_sg] = {v.lemma, Number::singular};
      intrans_present[v.present_pl] = {v.lemma, Number::plural};
      intrans_past[v.past_sg] = {v.lemma, Number::singular};
      intrans_past[v.past_pl] = {v.lemma, Number::plural};
    }
    for (const auto& v : lex.trans_verbs) trans[v.past] = v.lemma;
    for (const auto& n : lex.person_nouns) person[n.noun] = &n;
    for (const auto& r : lex.rc_items) rc[r.text] = &r;
    continuation.insert(lex.continuations.begin(), lex.continuations.end());
  }
};

using Tokens = std::vector<std::string>;

// NP at tokens[i]: a proper noun, or the article plus a profession form. The
// article is "The" at sentence start and "the" elsewhere.
std::optional<Np> parse_np(const FormIndex& ix, const Tokens& t, std::size_t& i, bool profession_only = false) {
  if (i >= t.size()) return std::nullopt;
  const std::string article = i == 0 ? "The" : "the";
  if (t[i] == article) {
    if (i + 1 >= t.size()) return std::nullopt;
    const auto it = ix.profession.find(t[i + 1]);
    if (it == ix.profession.end()) return std::nullopt;
    Np np{it->second.first, "the " + t[i + 1], it->second.second};
    i += 2;
    return np;
  }
  if (profession_only || !ix.proper.count(t[i])) return std::nullopt;
  Np np{t[i], t[i], Number::singular};
  i += 1;
  return np;
}

std::optional<Verb> parse_aux_verb(const std::unordered_map<std::string, Verb>& forms, const Tokens& t,
                                   std::size_t& i) {
  if (i + 1 >= t.size()) return std::nullopt;
  const auto it = forms.find(t[i] + " " + t[i + 1]);
  if (it == forms.end()) return std::nullopt;
  i += 2;
  return it->second;
}

bool well_formatted(const std::string& s) {
  if (s.empty() || s != trim(s) || s.find("  ") != std::string::npos) return false;
  if (!std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::isalpha(static_cast<unsigned char>(s.back())) != 0;
}

class Checks {
 public:
  CheckResult& add(const std::string& name, const std::string& description) {
    index_[name] = results_.size();
    results_.push_back({name, description, 0, {}});
    return results_.back();
  }

  void record(const std::string& name, const std::string& id, bool ok) {
    auto& r = results_[index_.at(name)];
    ++r.n_checked;
    if (!ok) r.offending_ids.push_back(id);
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::vector<CheckResult> results_;
  std::map<std::string, std::size_t> index_;
};

// Common checks on every item: all conditions present, tidy strings, unique
// ids and metadata naming the right dataset.
std::vector<bool> check_common(Checks& ck, const std::vector<CorpusItem>& items, Dataset dataset) {
  ck.add("unique_ids", "item ids are unique");
  ck.add("dataset_tag", "metadata names the dataset being checked");
  ck.add("conditions", "each item has exactly the dataset's conditions");
  ck.add("format", "capitalized, single-spaced, no trailing punctuation");
  ck.add("unique_sentences", "no sentence occurs twice within a condition");

  const auto& names = condition_names(dataset);
  std::unordered_set<std::string> ids;
  std::vector<std::unordered_set<std::string>> seen(names.size());
  std::vector<bool> complete;
  for (const auto& item : items) {
    ck.record("unique_ids", item.id, ids.insert(item.id).second);
    const bool tagged = item.metadata.is_object() && item.metadata.contains("dataset") &&
                        item.metadata["dataset"].is_string() &&
                        item.metadata["dataset"].get<std::string>() == to_string(dataset);
    ck.record("dataset_tag", item.id, tagged);

    bool has_all = item.sentences.size() == names.size();
    for (const auto& n : names) has_all = has_all && item.sentences.count(n);
    ck.record("conditions", item.id, has_all);
    complete.push_back(has_all);
    if (!has_all) continue;

    bool formatted = true;
    bool unique = true;
    for (std::size_t c = 0; c < names.size(); ++c) {
      const std::string& s = item.sentences.at(names[c]);
      formatted = formatted && well_formatted(s);
      unique = seen[c].insert(s).second && unique;
    }
    ck.record("format", item.id, formatted);
    ck.record("unique_sentences", item.id, unique);
  }
  return complete;
}

// ---- coordination / subordination ------------------------------------------

struct ClauseParse {
  std::vector<Np> nps;
  std::vector<Verb> verbs;  // last one intransitive
  std::vector<std::size_t> conj_positions;
  std::vector<std::string> conjs;
};

std::optional<ClauseParse> parse_coord(const FormIndex& ix, const Tokens& t) {
  ClauseParse p;
  std::size_t i = 0;
  while (true) {
    auto np = parse_np(ix, t, i);
    if (!np) return std::nullopt;
    // Only the final clause carries the intransitive verb; it ends the sentence.
    std::size_t j = i;
    auto iv = parse_aux_verb(ix.intrans_present, t, j);
    if (iv && j == t.size()) {
      p.nps.push_back(*np);
      p.verbs.push_back(*iv);
      return p;
    }
    auto pv = parse_aux_verb(ix.prop, t, i);
    if (!pv || i >= t.size()) return std::nullopt;
    p.nps.push_back(*np);
    p.verbs.push_back(*pv);
    if (t[i] != "and" && t[i] != "that") return std::nullopt;
    p.conj_positions.push_back(i);
    p.conjs.push_back(t[i]);
    ++i;
  }
}

void check_coord(Checks& ck, const std::vector<CorpusItem>& items, const std::vector<bool>& complete,
                 const FormIndex& ix) {
  ck.add("parse", "both sentences parse as NP verb (CONJ NP verb)*, final verb intransitive");
  ck.add("conjunctions", "coordination joins with 'and' only, subordination with 'that' only");
  ck.add("n_clauses", "2 to 4 clauses, equal across the pair and matching metadata");
  ck.add("agreement", "every verb agrees in number with its subject");
  ck.add("minimality", "the pair differs only at the conjunction slots");
  ck.add("no_repeated_lemma", "no noun or verb lemma repeats within a sentence");
  ck.add("tuple_unique_np1_pv1_np4_iv", "4-clause tuples (NP1, PROPVERB1, NP4, INTVERB) are unique");
  ck.add("tuple_unique_np1_pv1_np2_pv2", "4-clause tuples (NP1, PROPVERB1, NP2, PROPVERB2) are unique");

  std::unordered_set<std::string> tail, head;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (!complete[k]) continue;
    const auto& item = items[k];
    const Tokens easy = tokenize(item.sentences.at("coordination"));
    const Tokens hard = tokenize(item.sentences.at("subordination"));
    const auto pe = parse_coord(ix, easy);
    const auto ph = parse_coord(ix, hard);
    ck.record("parse", item.id, pe && ph);
    if (!pe || !ph) continue;

    const bool conj_ok = std::all_of(pe->conjs.begin(), pe->conjs.end(), [](auto& c) { return c == "and"; }) &&
                         std::all_of(ph->conjs.begin(), ph->conjs.end(), [](auto& c) { return c == "that"; });
    ck.record("conjunctions", item.id, conj_ok);

    const std::size_t n = pe->nps.size();
    bool n_ok = n >= 2 && n <= 4 && ph->nps.size() == n;
    if (item.metadata.contains("n_clauses")) {
      n_ok = n_ok && item.metadata["n_clauses"].is_number_integer() &&
             item.metadata["n_clauses"].get<long long>() == static_cast<long long>(n);
    }
    ck.record("n_clauses", item.id, n_ok);

    bool agree = true;
    for (const auto* p : {&*pe, &*ph})
      for (std::size_t c = 0; c < p->nps.size(); ++c) agree = agree && p->nps[c].number == p->verbs[c].number;
    ck.record("agreement", item.id, agree);

    bool minimal = easy.size() == hard.size() && pe->conj_positions == ph->conj_positions;
    if (minimal) {
      std::set<std::size_t> conj(pe->conj_positions.begin(), pe->conj_positions.end());
      for (std::size_t i = 0; i < easy.size(); ++i) minimal = minimal && (conj.count(i) || easy[i] == hard[i]);
    }
    ck.record("minimality", item.id, minimal);

    bool distinct = true;
    for (const auto* p : {&*pe, &*ph}) {
      std::set<std::string> nouns, verbs;
      for (const auto& np : p->nps) distinct = nouns.insert(np.lemma).second && distinct;
      for (const auto& v : p->verbs) distinct = verbs.insert(v.lemma).second && distinct;
    }
    ck.record("no_repeated_lemma", item.id, distinct);

    if (n == 4) {
      const auto& p = *pe;
      ck.record("tuple_unique_np1_pv1_np4_iv", item.id,
                tail.insert(p.nps[0].form + "|" + p.verbs[0].lemma + "|" + p.nps[3].form + "|" + p.verbs[3].lemma)
                    .second);
      ck.record("tuple_unique_np1_pv1_np2_pv2", item.id,
                head.insert(p.nps[0].form + "|" + p.verbs[0].lemma + "|" + p.nps[1].form + "|" + p.verbs[1].lemma)
                    .second);
    }
  }
}

// ---- right branching / center embedding ------------------------------------

struct BranchParse {
  Np np1, np2;
  std::string tv;
  Verb iv;
  bool operator==(const BranchParse&) const = default;
};

std::optional<BranchParse> parse_center(const FormIndex& ix, const Tokens& t) {
  std::size_t i = 0;
  BranchParse p;
  auto np1 = parse_np(ix, t, i, true);
  if (!np1 || i >= t.size() || t[i] != "that") return std::nullopt;
  ++i;
  auto np2 = parse_np(ix, t, i);
  if (!np2 || i >= t.size()) return std::nullopt;
  const auto tv = ix.trans.find(t[i]);
  if (tv == ix.trans.end()) return std::nullopt;
  ++i;
  auto iv = parse_aux_verb(ix.intrans_past, t, i);
  if (!iv || i != t.size()) return std::nullopt;
  return BranchParse{*np1, *np2, tv->second, *iv};
}

std::optional<BranchParse> parse_right(const FormIndex& ix, const Tokens& t) {
  std::size_t i = 0;
  auto np2 = parse_np(ix, t, i);
  if (!np2 || i >= t.size()) return std::nullopt;
  const auto tv = ix.trans.find(t[i]);
  if (tv == ix.trans.end()) return std::nullopt;
  ++i;
  auto np1 = parse_np(ix, t, i, true);
  if (!np1 || i >= t.size() || t[i] != "that") return std::nullopt;
  ++i;
  auto iv = parse_aux_verb(ix.intrans_past, t, i);
  if (!iv || i != t.size()) return std::nullopt;
  return BranchParse{*np1, *np2, tv->second, *iv};
}

void check_branching(Checks& ck, const std::vector<CorpusItem>& items, const std::vector<bool>& complete,
                     const FormIndex& ix) {
  ck.add("parse", "center 'NP1 that NP2 TV IV' and right 'NP2 TV NP1 that IV' parse; NP1 is a profession");
  ck.add("slot_consistency", "both sentences carry the same NP1, NP2, TV and IV");
  ck.add("agreement", "the intransitive verb agrees in number with NP1");
  ck.add("word_multiset", "the two sentences are permutations of the same words (case-folded)");
  ck.add("no_repeated_lemma", "NP1 and NP2 lemmas differ, TV and IV lemmas differ");

  for (std::size_t k = 0; k < items.size(); ++k) {
    if (!complete[k]) continue;
    const auto& item = items[k];
    const Tokens right = tokenize(item.sentences.at("right_branching"));
    const Tokens center = tokenize(item.sentences.at("center_embedding"));

    Tokens a, b;
    for (const auto& w : right) a.push_back(lowercase(w));
    for (const auto& w : center) b.push_back(lowercase(w));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ck.record("word_multiset", item.id, a == b);

    const auto pr = parse_right(ix, right);
    const auto pc = parse_center(ix, center);
    ck.record("parse", item.id, pr && pc);
    if (!pr || !pc) continue;
    ck.record("slot_consistency", item.id, *pr == *pc);
    ck.record("agreement", item.id, pr->iv.number == pr->np1.number && pc->iv.number == pc->np1.number);
    bool distinct = true;
    for (const auto* p : {&*pr, &*pc}) distinct = distinct && p->np1.lemma != p->np2.lemma && p->tv != p->iv.lemma;
    ck.record("no_repeated_lemma", item.id, distinct);
  }
}

// ---- attachment -------------------------------------------------------------

struct AttachParse {
  const PersonNoun* np1 = nullptr;
  const PersonNoun* np2 = nullptr;
  const RcItem* rc = nullptr;
  std::string continuation;
};

std::optional<AttachParse> parse_attachment(const FormIndex& ix, const std::string& s) {
  static const std::string kThe = "The ";
  if (s.rfind(kThe, 0) != 0) return std::nullopt;
  const auto of = s.find(" of the ", kThe.size());
  if (of == std::string::npos) return std::nullopt;
  const auto who = s.find(" who ", of + 8);
  if (who == std::string::npos) return std::nullopt;
  const auto n1 = ix.person.find(s.substr(kThe.size(), of - kThe.size()));
  const auto n2 = ix.person.find(s.substr(of + 8, who - of - 8));
  if (n1 == ix.person.end() || n2 == ix.person.end()) return std::nullopt;

  // The RC / continuation boundary must be recoverable in exactly one way.
  const std::string rest = s.substr(who + 5);
  std::optional<AttachParse> found;
  for (std::size_t sp = rest.find(' '); sp != std::string::npos; sp = rest.find(' ', sp + 1)) {
    const auto rc = ix.rc.find(rest.substr(0, sp));
    if (rc == ix.rc.end() || !ix.continuation.count(rest.substr(sp + 1))) continue;
    if (found) return std::nullopt;
    found = AttachParse{n1->second, n2->second, rc->second, rest.substr(sp + 1)};
  }
  return found;
}

void check_attachment(Checks& ck, const std::vector<CorpusItem>& items, const std::vector<bool>& complete,
                      const FormIndex& ix, const CheckOptions& opts) {
  ck.add("parse", "every sentence reads 'The NP1 of the NP2 who RC CONTINUATION' with lexicon items");
  ck.add("shared_rc_continuation", "the three sentences share RC and continuation verbatim");
  ck.add("compatibility",
         "RC constraint holds for (NP1, NP2) as (yes, yes) / (no, yes) / (yes, no) in ambiguous / low / high");
  ck.add("bias_consistency", "metadata bias_type matches the RC's bias");
  ck.add("distinct_nouns", "NP1 and NP2 differ in every sentence");
  ck.add("combo_unique", "each (RC, continuation) combination is used by one triplet");
  if (opts.noun_cap) ck.add("noun_usage_cap", "no person noun appears in more triplets than the cap");

  std::set<std::pair<std::string, std::string>> combos;
  std::map<std::string, std::vector<std::string>> noun_items;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (!complete[k]) continue;
    const auto& item = items[k];
    const auto amb = parse_attachment(ix, item.sentences.at("ambiguous"));
    const auto low = parse_attachment(ix, item.sentences.at("low"));
    const auto high = parse_attachment(ix, item.sentences.at("high"));
    ck.record("parse", item.id, amb && low && high);
    if (!amb || !low || !high) continue;

    const bool shared = amb->rc == low->rc && amb->rc == high->rc && amb->continuation == low->continuation &&
                        amb->continuation == high->continuation;
    ck.record("shared_rc_continuation", item.id, shared);
    if (!shared) continue;

    const auto& c = amb->rc->constraint;
    const bool compat = c.compatible(*amb->np1) && c.compatible(*amb->np2) && c.incompatible(*low->np1) &&
                        c.compatible(*low->np2) && c.compatible(*high->np1) && c.incompatible(*high->np2);
    ck.record("compatibility", item.id, compat);

    const bool bias_ok = item.metadata.contains("bias_type") && item.metadata["bias_type"].is_string() &&
                         item.metadata["bias_type"].get<std::string>() == to_string(amb->rc->bias);
    ck.record("bias_consistency", item.id, bias_ok);

    ck.record("distinct_nouns", item.id,
              amb->np1 != amb->np2 && low->np1 != low->np2 && high->np1 != high->np2);
    ck.record("combo_unique", item.id, combos.emplace(amb->rc->text, amb->continuation).second);

    std::set<std::string> nouns;
    for (const auto* p : {&*amb, &*low, &*high}) {
      nouns.insert(p->np1->noun);
      nouns.insert(p->np2->noun);
    }
    for (const auto& n : nouns) noun_items[n].push_back(item.id);
  }
  if (opts.noun_cap) {
    // Items past the cap are the offenders.
    std::set<std::string> over;
    for (const auto& [noun, ids] : noun_items)
      for (std::size_t i = static_cast<std::size_t>(std::max(0, *opts.noun_cap)); i < ids.size(); ++i)
        over.insert(ids[i]);
    for (std::size_t k = 0; k < items.size(); ++k)
      if (complete[k]) ck.record("noun_usage_cap", items[k].id, !over.count(items[k].id));
  }
}

}  // namespace

CheckReport check_constraints(const std::vector<CorpusItem>& items, Dataset dataset, const Lexicon& lex,
                              const CheckOptions& opts) {
  const FormIndex ix(lex);
  Checks ck;
  const auto complete = check_common(ck, items, dataset);
  switch (dataset) {
    case Dataset::coord_subord: check_coord(ck, items, complete, ix); break;
    case Dataset::branching: check_branching(ck, items, complete, ix); break;
    case Dataset::attachment: check_attachment(ck, items, complete, ix, opts); break;
  }
  CheckReport report;
  report.dataset = dataset;
  report.n_items = items.size();
  report.checks = ck.take();
  return report;
}

CheckReport check_constraints(const Corpus& corpus, const Lexicon& lex, const CheckOptions& opts) {
  return check_constraints(corpus.items(), corpus.dataset, lex, opts);
}

}  // namespace lingdim::stimuli
