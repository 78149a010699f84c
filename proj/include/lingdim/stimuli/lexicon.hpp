#ifndef LINGDIM_STIMULI_LEXICON_HPP
#define LINGDIM_STIMULI_LEXICON_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lingdim::stimuli {

// Lexicon file format (UTF-8 text, '#' starts a comment line):
//
//   [prop_verbs]        lemma | is <participle> | are <participle>
//   [intrans_verbs]     lemma | is <p> | are <p> | was <p> | were <p>
//   [trans_verbs]       lemma | <past simple>
//   [proper_nouns]      Name
//   [profession_nouns]  singular | plural
//   [person_nouns]      noun | age_class=<v> gender_class=<v> role_class=<v>
//   [rc_items]          relative clause | <bias> | <attribute>=<v>[,<v>...]
//                                                  or <attribute>!=<v>[,<v>...]
//   [continuations]     verb phrase
//
// Inflected forms are spelled out; there is no morphology engine. All eight
// sections must be present and nonempty. Person-noun attribute value "any"
// satisfies neither a constraint nor its negation.

struct PropVerb {
  std::string lemma;
  std::string present_sg;  // "is babbling"
  std::string present_pl;  // "are babbling"
};

struct IntransVerb {
  std::string lemma;
  std::string present_sg;
  std::string present_pl;
  std::string past_sg;  // "was frowning"
  std::string past_pl;  // "were frowning"
};

struct TransVerb {
  std::string lemma;
  std::string past;  // "intimidated"
};

struct Profession {
  std::string singular;
  std::string plural;
  const std::string& lemma() const { return singular; }
};

inline const std::vector<std::string> kPersonAttributes{"age_class", "gender_class", "role_class"};

struct PersonNoun {
  std::string noun;
  std::map<std::string, std::string> attributes;
};

enum class BiasType { age, gender, role, contradiction };

std::string to_string(BiasType b);
BiasType parse_bias_type(const std::string& s);

/// attribute in values (or not in values when negated).
struct AttributeConstraint {
  std::string attribute;
  std::set<std::string> values;
  bool negated = false;

  /// Noun satisfies the constraint.
  bool compatible(const PersonNoun& n) const;
  /// Noun definitely violates it ("any" is neither).
  bool incompatible(const PersonNoun& n) const;
};

struct RcItem {
  std::string text;  // "paid a mortgage" (rendered after "who")
  BiasType bias = BiasType::age;
  AttributeConstraint constraint;
};

struct LexiconCounts {
  std::size_t prop_verbs = 0;
  std::size_t intrans_verbs = 0;
  std::size_t trans_verbs = 0;
  std::size_t proper_nouns = 0;
  std::size_t profession_nouns = 0;
  std::size_t person_nouns = 0;
  std::size_t rc_items = 0;
  std::size_t continuations = 0;
};

struct Lexicon {
  std::vector<PropVerb> prop_verbs;
  std::vector<IntransVerb> intrans_verbs;
  std::vector<TransVerb> trans_verbs;
  std::vector<std::string> proper_nouns;
  std::vector<Profession> profession_nouns;
  std::vector<PersonNoun> person_nouns;
  std::vector<RcItem> rc_items;
  std::vector<std::string> continuations;

  LexiconCounts counts() const;
  /// Differences from the reference inventory (17 propositional, 65
  /// intransitive, 100 transitive verbs, 30 proper and 44 profession nouns).
  std::vector<std::string> inventory_warnings() const;

  const PersonNoun* find_person(const std::string& noun) const;
};

/// Throws LoadError("<origin>:<line>: ...") on any schema violation.
Lexicon parse_lexicon(const std::string& text, const std::string& origin = "<lexicon>");
Lexicon load_lexicon(const std::filesystem::path& path);

/// The lexicon shipped in data/lexicon/default.lex.
std::filesystem::path default_lexicon_path();

}  // namespace lingdim::stimuli

#endif  // LINGDIM_STIMULI_LEXICON_HPP
