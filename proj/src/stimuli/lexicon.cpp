#include "lingdim/stimuli/lexicon.hpp"

#include <sstream>
#include <unordered_set>

#include "lingdim/error.hpp"
#include "lingdim/io/files.hpp"
#include "lingdim/stimuli/text.hpp"

namespace lingdim::stimuli {

std::string to_string(BiasType b) {
  switch (b) {
    case BiasType::age: return "age";
    case BiasType::gender: return "gender";
    case BiasType::role: return "role";
    case BiasType::contradiction: return "contradiction";
  }
  return "age";
}

BiasType parse_bias_type(const std::string& s) {
  if (s == "age") return BiasType::age;
  if (s == "gender") return BiasType::gender;
  if (s == "role") return BiasType::role;
  if (s == "contradiction") return BiasType::contradiction;
  throw ParameterError("unknown bias type '" + s + "'");
}

bool AttributeConstraint::compatible(const PersonNoun& n) const {
  const auto it = n.attributes.find(attribute);
  if (it == n.attributes.end() || it->second == "any") return false;
  return values.count(it->second) != static_cast<std::size_t>(negated);
}

bool AttributeConstraint::incompatible(const PersonNoun& n) const {
  const auto it = n.attributes.find(attribute);
  if (it == n.attributes.end() || it->second == "any") return false;
  return !compatible(n);
}

LexiconCounts Lexicon::counts() const {
  return {prop_verbs.size(),       intrans_verbs.size(), trans_verbs.size(), proper_nouns.size(),
          profession_nouns.size(), person_nouns.size(),  rc_items.size(),    continuations.size()};
}

std::vector<std::string> Lexicon::inventory_warnings() const {
  std::vector<std::string> out;
  auto check = [&](const char* what, std::size_t got, std::size_t want) {
    if (got != want) {
      out.push_back(std::string(what) + ": " + std::to_string(got) + " entries (reference inventory has " +
                    std::to_string(want) + ")");
    }
  };
  check("prop_verbs", prop_verbs.size(), 17);
  check("intrans_verbs", intrans_verbs.size(), 65);
  check("trans_verbs", trans_verbs.size(), 100);
  check("proper_nouns", proper_nouns.size(), 30);
  check("profession_nouns", profession_nouns.size(), 44);
  return out;
}

const PersonNoun* Lexicon::find_person(const std::string& noun) const {
  for (const auto& p : person_nouns)
    if (p.noun == noun) return &p;
  return nullptr;
}

namespace {

class Parser {
 public:
  Parser(const std::string& origin) : origin_(origin) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw LoadError(origin_ + ":" + std::to_string(line_) + ": " + msg);
  }

  void set_line(int line) { line_ = line; }

  std::vector<std::string> fields(const std::string& line, std::size_t n, const char* section,
                                  const char* layout) const {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      const std::size_t bar = line.find('|', start);
      out.push_back(trim(line.substr(start, bar == std::string::npos ? std::string::npos : bar - start)));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    if (out.size() != n) {
      fail(std::string("[") + section + "] expected " + std::to_string(n) + " fields (" + layout + "), got " +
           std::to_string(out.size()));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].empty()) fail(std::string("[") + section + "] field " + std::to_string(i + 1) + " is empty");
    }
    return out;
  }

  void single_token(const std::string& s, const char* field) const {
    if (tokenize(s).size() != 1) fail(std::string(field) + " '" + s + "' must be a single word");
  }

  // "<aux> <participle>", returns the participle.
  std::string aux_form(const std::string& s, const char* aux, const char* field) const {
    const auto t = tokenize(s);
    if (t.size() != 2 || t[0] != aux) {
      fail(std::string(field) + " '" + s + "' must read '" + aux + " <participle>'");
    }
    return t[1];
  }

  void unique(std::unordered_set<std::string>& seen, const std::string& lemma, const char* section) const {
    if (!seen.insert(lemma).second) fail(std::string("duplicate lemma '") + lemma + "' in [" + section + "]");
  }

 private:
  std::string origin_;
  int line_ = 0;
};

AttributeConstraint parse_constraint(const Parser& p, const std::string& s) {
  AttributeConstraint c;
  std::size_t eq = s.find("!=");
  std::size_t value_start;
  if (eq != std::string::npos) {
    c.negated = true;
    value_start = eq + 2;
  } else {
    eq = s.find('=');
    if (eq == std::string::npos) p.fail("constraint '" + s + "' must read attribute=values or attribute!=values");
    value_start = eq + 1;
  }
  c.attribute = trim(s.substr(0, eq));
  bool known = false;
  for (const auto& a : kPersonAttributes) known = known || a == c.attribute;
  if (!known) p.fail("constraint uses unknown attribute '" + c.attribute + "'");
  std::stringstream values(s.substr(value_start));
  std::string v;
  while (std::getline(values, v, ',')) {
    v = trim(v);
    if (v.empty()) p.fail("constraint '" + s + "' has an empty value");
    c.values.insert(v);
  }
  if (c.values.empty()) p.fail("constraint '" + s + "' lists no values");
  return c;
}

}  // namespace

Lexicon parse_lexicon(const std::string& text, const std::string& origin) {
  Lexicon lex;
  Parser p(origin);
  std::map<std::string, int> seen_sections;
  std::string section;
  std::unordered_set<std::string> lemmas;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    p.set_line(line_no);
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') p.fail("malformed section header '" + line + "'");
      section = line.substr(1, line.size() - 2);
      static const std::set<std::string> kSections{"prop_verbs",       "intrans_verbs", "trans_verbs",
                                                   "proper_nouns",     "profession_nouns", "person_nouns",
                                                   "rc_items",         "continuations"};
      if (!kSections.count(section)) p.fail("unknown section [" + section + "]");
      if (seen_sections.count(section)) p.fail("section [" + section + "] appears twice");
      seen_sections[section] = line_no;
      lemmas.clear();
      continue;
    }
    if (section.empty()) p.fail("entry before any section header");

    if (section == "prop_verbs") {
      auto f = p.fields(line, 3, "prop_verbs", "lemma | is <participle> | are <participle>");
      p.aux_form(f[1], "is", "singular form");
      p.aux_form(f[2], "are", "plural form");
      p.unique(lemmas, f[0], "prop_verbs");
      lex.prop_verbs.push_back({f[0], f[1], f[2]});
    } else if (section == "intrans_verbs") {
      auto f = p.fields(line, 5, "intrans_verbs", "lemma | is <p> | are <p> | was <p> | were <p>");
      p.aux_form(f[1], "is", "present singular form");
      p.aux_form(f[2], "are", "present plural form");
      p.aux_form(f[3], "was", "past singular form");
      p.aux_form(f[4], "were", "past plural form");
      p.unique(lemmas, f[0], "intrans_verbs");
      lex.intrans_verbs.push_back({f[0], f[1], f[2], f[3], f[4]});
    } else if (section == "trans_verbs") {
      auto f = p.fields(line, 2, "trans_verbs", "lemma | past simple");
      p.single_token(f[1], "past simple form");
      p.unique(lemmas, f[0], "trans_verbs");
      lex.trans_verbs.push_back({f[0], f[1]});
    } else if (section == "proper_nouns") {
      auto f = p.fields(line, 1, "proper_nouns", "name");
      p.single_token(f[0], "proper noun");
      p.unique(lemmas, f[0], "proper_nouns");
      lex.proper_nouns.push_back(f[0]);
    } else if (section == "profession_nouns") {
      auto f = p.fields(line, 2, "profession_nouns", "singular | plural");
      p.single_token(f[0], "singular form");
      p.single_token(f[1], "plural form");
      p.unique(lemmas, f[0], "profession_nouns");
      lex.profession_nouns.push_back({f[0], f[1]});
    } else if (section == "person_nouns") {
      auto f = p.fields(line, 2, "person_nouns", "noun | age_class=.. gender_class=.. role_class=..");
      if (f[0].find(" of ") != std::string::npos || f[0].find(" who ") != std::string::npos) {
        p.fail("person noun '" + f[0] + "' may not contain 'of' or 'who'");
      }
      PersonNoun n{f[0], {}};
      for (const auto& kv : tokenize(f[1])) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size()) {
          p.fail("attribute '" + kv + "' must read key=value");
        }
        const std::string key = kv.substr(0, eq);
        bool known = false;
        for (const auto& a : kPersonAttributes) known = known || a == key;
        if (!known) p.fail("unknown person attribute '" + key + "'");
        if (!n.attributes.emplace(key, kv.substr(eq + 1)).second) p.fail("attribute '" + key + "' given twice");
      }
      for (const auto& a : kPersonAttributes) {
        if (!n.attributes.count(a)) p.fail("person noun '" + f[0] + "' is missing field " + a);
      }
      p.unique(lemmas, f[0], "person_nouns");
      lex.person_nouns.push_back(std::move(n));
    } else if (section == "rc_items") {
      auto f = p.fields(line, 3, "rc_items", "relative clause | bias | constraint");
      RcItem rc;
      rc.text = f[0];
      try {
        rc.bias = parse_bias_type(f[1]);
      } catch (const ParameterError& e) {
        p.fail(e.what());
      }
      rc.constraint = parse_constraint(p, f[2]);
      p.unique(lemmas, f[0], "rc_items");
      lex.rc_items.push_back(std::move(rc));
    } else if (section == "continuations") {
      auto f = p.fields(line, 1, "continuations", "verb phrase");
      p.unique(lemmas, f[0], "continuations");
      lex.continuations.push_back(f[0]);
    }
  }

  const std::pair<const char*, std::size_t> sizes[] = {
      {"prop_verbs", lex.prop_verbs.size()},
      {"intrans_verbs", lex.intrans_verbs.size()},
      {"trans_verbs", lex.trans_verbs.size()},
      {"proper_nouns", lex.proper_nouns.size()},
      {"profession_nouns", lex.profession_nouns.size()},
      {"person_nouns", lex.person_nouns.size()},
      {"rc_items", lex.rc_items.size()},
      {"continuations", lex.continuations.size()},
  };
  for (const auto& [name, size] : sizes) {
    const auto it = seen_sections.find(name);
    if (it == seen_sections.end()) throw LoadError(origin + ": missing section [" + name + "]");
    if (size == 0) {
      throw LoadError(origin + ":" + std::to_string(it->second) + ": section [" + name + "] is empty");
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const IoError& e) {
    throw LoadError(e.what());
  }
  return parse_lexicon(text, path.string());
}

std::filesystem::path default_lexicon_path() {
#ifdef LINGDIM_DEFAULT_LEXICON
  return LINGDIM_DEFAULT_LEXICON;
#else
  return "data/lexicon/default.lex";
#endif
}

}  // namespace lingdim::stimuli
