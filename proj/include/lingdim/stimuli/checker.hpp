#ifndef LINGDIM_STIMULI_CHECKER_HPP
#define LINGDIM_STIMULI_CHECKER_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lingdim/stimuli/corpus.hpp"
#include "lingdim/stimuli/lexicon.hpp"

namespace lingdim::stimuli {

struct CheckResult {
  std::string name;
  std::string description;
  std::size_t n_checked = 0;
  std::vector<std::string> offending_ids;

  bool passed() const { return offending_ids.empty(); }
};

struct CheckReport {
  Dataset dataset = Dataset::coord_subord;
  std::size_t n_items = 0;
  std::vector<CheckResult> checks;

  bool ok() const;
  std::size_t n_failed_checks() const;
  /// Throws ParameterError for an unknown check name.
  const CheckResult& check(const std::string& name) const;
  /// At most `max_ids` offending ids are listed per check.
  nlohmann::json to_json(std::size_t max_ids = 20) const;
};

struct CheckOptions {
  /// When set, also verify that no person noun appears in more than this
  /// many attachment triplets.
  std::optional<int> noun_cap;
};

/// Re-derives every structural constraint of a corpus from its raw sentences
/// and the lexicon alone. Items whose sentences do not parse fail "parse" and
/// are skipped by the checks that need a parse. Never throws on bad input.
CheckReport check_constraints(const std::vector<CorpusItem>& items, Dataset dataset, const Lexicon& lex,
                              const CheckOptions& opts = {});
CheckReport check_constraints(const Corpus& corpus, const Lexicon& lex, const CheckOptions& opts = {});

}  // namespace lingdim::stimuli

#endif  // LINGDIM_STIMULI_CHECKER_HPP
