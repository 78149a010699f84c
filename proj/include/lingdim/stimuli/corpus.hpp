#ifndef LINGDIM_STIMULI_CORPUS_HPP
#define LINGDIM_STIMULI_CORPUS_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lingdim/stimuli/lexicon.hpp"

namespace lingdim::stimuli {

enum class Dataset { coord_subord, branching, attachment };

std::string to_string(Dataset d);
Dataset parse_dataset(const std::string& s);

/// Condition names in sentence order: easy then hard for pairs,
/// ambiguous/low/high for triplets.
const std::vector<std::string>& condition_names(Dataset d);

enum class Number { none, singular, plural };

std::string to_string(Number n);
Number parse_number(const std::string& s);

/// One filled template slot. `form` is the surface string in the sentence.
struct Slot {
  std::string name;  // NP1, PROPVERB1, INTVERB, TRVERB, RC, ...
  std::string lemma;
  std::string form;
  Number number = Number::none;

  bool operator==(const Slot&) const = default;
};

struct StimulusPair {
  std::string id;
  Dataset contrast = Dataset::coord_subord;
  std::string easy_sentence;  // coordination / right branching
  std::string hard_sentence;  // subordination / center embedding
  std::vector<Slot> slots;
  int n_clauses = 0;  // coord_subord only

  const Slot& slot(const std::string& name) const;
  bool operator==(const StimulusPair&) const = default;
};

struct StimulusTriplet {
  std::string id;
  std::string ambiguous;
  std::string low_attach;
  std::string high_attach;
  std::string rc;
  std::string continuation;
  BiasType bias = BiasType::age;
  // NP1, NP2 of each sentence
  std::string ambiguous_np1, ambiguous_np2;
  std::string low_np1, low_np2;
  std::string high_np1, high_np2;

  bool operator==(const StimulusTriplet&) const = default;
};

/// Dataset-agnostic view used by the checker: raw sentences keyed by
/// condition plus whatever metadata the record carried.
struct CorpusItem {
  std::string id;
  std::map<std::string, std::string> sentences;
  nlohmann::json metadata = nlohmann::json::object();
};

std::vector<CorpusItem> to_items(const std::vector<StimulusPair>& pairs);
std::vector<CorpusItem> to_items(const std::vector<StimulusTriplet>& triplets);

// Corpus file: JSON Lines. The first line is {"corpus_header": {...}} with
// the dataset name and invocation metadata; each further line is one sentence
//   {"id", "condition", "sentence", "slots": {name: {lemma, form, number}},
//    "metadata": {"dataset", ...}}
// Records sharing an id form one pair or triplet.

struct Corpus {
  Dataset dataset = Dataset::coord_subord;
  nlohmann::json header = nlohmann::json::object();
  std::vector<StimulusPair> pairs;
  std::vector<StimulusTriplet> triplets;

  std::size_t n_items() const;
  std::size_t n_sentences() const;
  std::vector<CorpusItem> items() const;
};

std::string corpus_to_jsonl(const Corpus& corpus);
/// Throws ValidationError("<origin>:<line>: ...") on malformed records.
Corpus parse_corpus_jsonl(const std::string& text, const std::string& origin = "<corpus>");
Corpus read_corpus(const std::filesystem::path& path);

/// Writes <prefix>.jsonl, <prefix>.<condition>.txt (one sentence per line,
/// item order) and <prefix>.ids.txt. Returns the paths written.
std::vector<std::filesystem::path> write_corpus(const Corpus& corpus, const std::string& prefix, bool overwrite);

}  // namespace lingdim::stimuli

#endif  // LINGDIM_STIMULI_CORPUS_HPP
