#ifndef LINGDIM_STIMULI_GENERATORS_HPP
#define LINGDIM_STIMULI_GENERATORS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lingdim/stimuli/corpus.hpp"
#include "lingdim/stimuli/lexicon.hpp"

namespace lingdim::stimuli {

/// Rejection sampling gives up after this many consecutive failed draws.
inline constexpr int kDefaultMaxAttempts = 100;

/// 4-clause pairs "NP1 PV1 CONJ NP2 PV2 CONJ NP3 PV3 CONJ NP4 IV", CONJ being
/// "and" (easy) or "that" (hard). Each NP is a proper noun or "the" plus a
/// profession, singular or plural with equal probability; verbs agree with
/// their subject. No noun or verb lemma repeats within a pair, and the tuples
/// (NP1, PV1, NP4, IV) and (NP1, PV1, NP2, PV2) are unique over the dataset.
/// Throws GenerationError with the achieved count if sampling saturates.
std::vector<StimulusPair> gen_coord_subord(const Lexicon& lex, std::size_t count, std::uint64_t seed,
                                           int max_attempts = kDefaultMaxAttempts);

/// Drops clause 3 (target 3) or clauses 2 and 3 (target 2). Slot names of the
/// kept clauses are preserved; the id gets a "-c3" / "-c2" suffix.
StimulusPair derive_shorter(const StimulusPair& pair4, int target);

/// Center "NP1 that NP2 TV IV" (hard) vs right "NP2 TV NP1 that IV" (easy).
/// NP1 is "the" plus a profession; NP2 a proper noun or "the" plus a
/// profession of another lemma; IV is past continuous agreeing with NP1.
/// Sentences are unique over the dataset.
std::vector<StimulusPair> gen_branching(const Lexicon& lex, std::size_t count, std::uint64_t seed,
                                        int max_attempts = kDefaultMaxAttempts);

struct AttachmentOptions {
  std::size_t count = 10880;
  std::uint64_t seed = 0;
  /// Per-noun cap = ceil(3 count / |person_nouns|) + slack; negative picks
  /// ceil(base / 4).
  int slack = -1;
  /// Replaces the computed cap when set.
  std::optional<int> noun_cap;
  int max_attempts = kDefaultMaxAttempts;

  int resolved_cap(std::size_t n_person_nouns) const;
};

/// Triplets "The NP1 of the NP2 who RC CONTINUATION". Each triplet draws three
/// distinct person nouns: A and Y satisfy the RC's constraint, X violates it.
///   ambiguous: A of Y    low: X of Y    high: Y of X
/// Each (RC, continuation) combination appears in at most one triplet, and a
/// noun appears in at most resolved_cap() triplets.
std::vector<StimulusTriplet> gen_attachment(const Lexicon& lex, const AttachmentOptions& opts);

/// Builds a coord/subord pair from NPk / PROPVERBk / INTVERB slots (clause
/// order as given). Used by the generator and for hand-written fixtures.
StimulusPair assemble_coord_subord(const std::string& id, std::vector<Slot> slots);

/// Builds a branching pair from NP1, NP2, TRVERB, INTVERB slots.
StimulusPair assemble_branching(const std::string& id, std::vector<Slot> slots);

/// Renders the attachment template, capitalizing the article.
std::string render_attachment(const std::string& np1, const std::string& np2, const std::string& rc,
                              const std::string& continuation);

std::string format_id(const std::string& prefix, std::size_t index);

}  // namespace lingdim::stimuli

#endif  // LINGDIM_STIMULI_GENERATORS_HPP
