#include <algorithm>
#include <memory>

#include "common.hpp"
#include "lingdim/io/files.hpp"
#include "lingdim/stimuli/checker.hpp"
#include "lingdim/stimuli/generators.hpp"

namespace lingdim::cli {

using namespace lingdim::stimuli;

namespace {

Dataset dataset_arg(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  return parse_dataset(s);
}

struct LoadedLexicon {
  Lexicon lex;
  std::string path;
  std::string checksum;
};

LoadedLexicon load(const std::string& path_arg) {
  LoadedLexicon out;
  out.path = path_arg.empty() ? default_lexicon_path().string() : path_arg;
  std::string text;
  try {
    text = io::read_file(out.path);
  } catch (const IoError& e) {
    throw LoadError(e.what());
  }
  out.lex = parse_lexicon(text, out.path);
  out.checksum = fnv1a64(text);
  for (const auto& w : out.lex.inventory_warnings()) {
    std::cerr << nlohmann::json{{"warning", w}, {"lexicon", out.path}}.dump() << "\n";
  }
  return out;
}

struct GenArgs {
  std::string dataset;
  std::string lexicon;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::string out;
  int clauses = 4;
  int slack = -1;
  int noun_cap = -1;
  int max_attempts = kDefaultMaxAttempts;
  bool force = false;
  bool no_check = false;
};

void run_gen(const GenArgs& a) {
  const Dataset dataset = dataset_arg(a.dataset);
  if (a.clauses != 4 && dataset != Dataset::coord_subord) {
    throw ParameterError("--clauses applies to coord-subord only");
  }
  const LoadedLexicon L = load(a.lexicon);

  nlohmann::json options{{"dataset", to_string(dataset)},
                         {"count", a.count},
                         {"seed", a.seed},
                         {"lexicon", L.path},
                         {"lexicon_fnv1a64", L.checksum},
                         {"max_attempts", a.max_attempts}};
  Corpus corpus;
  corpus.dataset = dataset;
  CheckOptions check_opts;
  switch (dataset) {
    case Dataset::coord_subord: {
      options["clauses"] = a.clauses;
      corpus.pairs = gen_coord_subord(L.lex, a.count, a.seed, a.max_attempts);
      if (a.clauses != 4) {
        for (auto& p : corpus.pairs) p = derive_shorter(p, a.clauses);
      }
      break;
    }
    case Dataset::branching:
      corpus.pairs = gen_branching(L.lex, a.count, a.seed, a.max_attempts);
      break;
    case Dataset::attachment: {
      AttachmentOptions o;
      o.count = a.count;
      o.seed = a.seed;
      o.slack = a.slack;
      if (a.noun_cap >= 0) o.noun_cap = a.noun_cap;
      o.max_attempts = a.max_attempts;
      const int cap = o.resolved_cap(L.lex.person_nouns.size());
      options["noun_cap"] = cap;
      check_opts.noun_cap = cap;
      corpus.triplets = gen_attachment(L.lex, o);
      break;
    }
  }
  corpus.header = invocation("gen", options);

  nlohmann::json summary{{"dataset", to_string(dataset)},
                         {"n_items", corpus.n_items()},
                         {"n_sentences", corpus.n_sentences()}};
  if (!a.no_check) {
    const CheckReport report = check_constraints(corpus, L.lex, check_opts);
    if (!report.ok()) {
      throw VerificationFailed("generated corpus failed " + std::to_string(report.n_failed_checks()) +
                                   " constraint checks; nothing written",
                               report.to_json());
    }
    summary["check"] = "passed";
  } else {
    summary["check"] = "skipped";
  }
  ensure_parent(a.out);
  const auto files = write_corpus(corpus, a.out, a.force);
  summary["files"] = nlohmann::json::array();
  for (const auto& f : files) summary["files"].push_back(f.string());
  print_json(summary);
}

struct CheckArgs {
  std::string corpus;
  std::string lexicon;
  int noun_cap = -1;
  std::string out;
  std::size_t max_ids = 20;
  bool force = false;
};

void run_check(const CheckArgs& a) {
  const LoadedLexicon L = load(a.lexicon);
  const Corpus corpus = read_corpus(a.corpus);
  CheckOptions opts;
  if (a.noun_cap >= 0) opts.noun_cap = a.noun_cap;
  const CheckReport report = check_constraints(corpus, L.lex, opts);
  nlohmann::json j = report.to_json(a.max_ids);
  j["invocation"] = invocation("check", {{"corpus", a.corpus},
                                         {"corpus_fnv1a64", fnv1a64(io::read_file(a.corpus))},
                                         {"lexicon", L.path},
                                         {"lexicon_fnv1a64", L.checksum}});
  if (!a.out.empty()) {
    ensure_parent(a.out);
    io::write_file_atomic(a.out, j.dump(2) + "\n", a.force);
  }
  if (!report.ok()) {
    throw VerificationFailed(std::to_string(report.n_failed_checks()) + " constraint checks failed", j);
  }
  print_json(j);
}

}  // namespace

void register_gen(CLI::App& app) {
  auto a = std::make_shared<GenArgs>();
  auto* cmd = app.add_subcommand("gen", "Generate a minimal-pair corpus");
  cmd->add_option("dataset", a->dataset, "coord-subord, branching or attachment")->required();
  cmd->add_option("--count", a->count, "Number of pairs or triplets")->required();
  cmd->add_option("--seed", a->seed, "Sampling seed")->capture_default_str();
  cmd->add_option("--out", a->out, "Output prefix (writes <prefix>.jsonl and plain-text exports)")->required();
  cmd->add_option("--lexicon", a->lexicon, "Lexicon file (default: shipped lexicon)");
  cmd->add_option("--clauses", a->clauses, "coord-subord: keep 4 clauses or derive 3 / 2")
      ->capture_default_str()
      ->check(CLI::IsMember({2, 3, 4}));
  cmd->add_option("--slack", a->slack, "attachment: extra uses per noun over ceil(3 count / nouns); -1 = auto");
  cmd->add_option("--noun-cap", a->noun_cap, "attachment: explicit per-noun usage cap");
  cmd->add_option("--max-attempts", a->max_attempts, "Rejection budget per item")->capture_default_str();
  cmd->add_flag("--force", a->force, "Replace existing output files");
  cmd->add_flag("--no-check", a->no_check, "Skip the constraint check before writing");
  cmd->callback([a] { run_gen(*a); });
}

void register_check(CLI::App& app) {
  auto a = std::make_shared<CheckArgs>();
  auto* cmd = app.add_subcommand("check", "Re-verify a corpus against the lexicon");
  cmd->add_option("corpus", a->corpus, "Corpus .jsonl file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--lexicon", a->lexicon, "Lexicon file (default: shipped lexicon)");
  cmd->add_option("--noun-cap", a->noun_cap, "attachment: also verify this per-noun usage cap");
  cmd->add_option("--max-ids", a->max_ids, "Offending ids listed per check")->capture_default_str();
  cmd->add_option("--out", a->out, "Also write the report to this JSON file");
  cmd->add_flag("--force", a->force, "Replace an existing report file");
  cmd->callback([a] { run_check(*a); });
}

}  // namespace lingdim::cli
