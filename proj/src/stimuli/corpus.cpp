#include "lingdim/stimuli/corpus.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "lingdim/error.hpp"
#include "lingdim/io/files.hpp"

namespace lingdim::stimuli {

using ojson = nlohmann::ordered_json;

std::string to_string(Dataset d) {
  switch (d) {
    case Dataset::coord_subord: return "coord_subord";
    case Dataset::branching: return "branching";
    case Dataset::attachment: return "attachment";
  }
  return "coord_subord";
}

Dataset parse_dataset(const std::string& s) {
  if (s == "coord_subord") return Dataset::coord_subord;
  if (s == "branching") return Dataset::branching;
  if (s == "attachment") return Dataset::attachment;
  throw ParameterError("unknown dataset '" + s + "' (expected coord_subord, branching or attachment)");
}

const std::vector<std::string>& condition_names(Dataset d) {
  static const std::vector<std::string> coord{"coordination", "subordination"};
  static const std::vector<std::string> branch{"right_branching", "center_embedding"};
  static const std::vector<std::string> attach{"ambiguous", "low", "high"};
  switch (d) {
    case Dataset::coord_subord: return coord;
    case Dataset::branching: return branch;
    case Dataset::attachment: return attach;
  }
  return coord;
}

std::string to_string(Number n) {
  switch (n) {
    case Number::none: return "none";
    case Number::singular: return "sg";
    case Number::plural: return "pl";
  }
  return "none";
}

Number parse_number(const std::string& s) {
  if (s == "none") return Number::none;
  if (s == "sg") return Number::singular;
  if (s == "pl") return Number::plural;
  throw ValidationError("unknown number marking '" + s + "'");
}

const Slot& StimulusPair::slot(const std::string& name) const {
  for (const auto& s : slots)
    if (s.name == name) return s;
  throw ParameterError("pair " + id + " has no slot " + name);
}

std::vector<CorpusItem> to_items(const std::vector<StimulusPair>& pairs) {
  std::vector<CorpusItem> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    const auto& names = condition_names(p.contrast);
    CorpusItem item{p.id, {{names[0], p.easy_sentence}, {names[1], p.hard_sentence}}, nlohmann::json::object()};
    item.metadata["dataset"] = to_string(p.contrast);
    if (p.contrast == Dataset::coord_subord) item.metadata["n_clauses"] = p.n_clauses;
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<CorpusItem> to_items(const std::vector<StimulusTriplet>& triplets) {
  std::vector<CorpusItem> out;
  out.reserve(triplets.size());
  for (const auto& t : triplets) {
    CorpusItem item{t.id,
                    {{"ambiguous", t.ambiguous}, {"low", t.low_attach}, {"high", t.high_attach}},
                    nlohmann::json::object()};
    item.metadata["dataset"] = "attachment";
    item.metadata["bias_type"] = to_string(t.bias);
    out.push_back(std::move(item));
  }
  return out;
}

std::size_t Corpus::n_items() const { return dataset == Dataset::attachment ? triplets.size() : pairs.size(); }

std::size_t Corpus::n_sentences() const { return n_items() * condition_names(dataset).size(); }

std::vector<CorpusItem> Corpus::items() const {
  return dataset == Dataset::attachment ? to_items(triplets) : to_items(pairs);
}

namespace {

ojson slot_json(const std::string& lemma, const std::string& form, Number n) {
  ojson j;
  j["lemma"] = lemma;
  j["form"] = form;
  j["number"] = to_string(n);
  return j;
}

ojson record(const std::string& id, const std::string& condition, const std::string& sentence, const ojson& slots,
             const ojson& metadata) {
  ojson j;
  j["id"] = id;
  j["condition"] = condition;
  j["sentence"] = sentence;
  j["slots"] = slots;
  j["metadata"] = metadata;
  return j;
}

ojson triplet_slots(const std::string& np1, const std::string& np2, const StimulusTriplet& t) {
  ojson s;
  s["NP1"] = slot_json(np1, np1, Number::singular);
  s["NP2"] = slot_json(np2, np2, Number::singular);
  s["RC"] = slot_json(t.rc, t.rc, Number::none);
  s["CONTINUATION"] = slot_json(t.continuation, t.continuation, Number::none);
  return s;
}

}  // namespace

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  ojson header;
  nlohmann::json h = corpus.header;
  h["dataset"] = to_string(corpus.dataset);
  header["corpus_header"] = ojson::parse(h.dump());
  out += header.dump() + "\n";

  if (corpus.dataset == Dataset::attachment) {
    for (const auto& t : corpus.triplets) {
      ojson meta;
      meta["dataset"] = "attachment";
      meta["bias_type"] = to_string(t.bias);
      out += record(t.id, "ambiguous", t.ambiguous, triplet_slots(t.ambiguous_np1, t.ambiguous_np2, t), meta).dump() +
             "\n";
      out += record(t.id, "low", t.low_attach, triplet_slots(t.low_np1, t.low_np2, t), meta).dump() + "\n";
      out += record(t.id, "high", t.high_attach, triplet_slots(t.high_np1, t.high_np2, t), meta).dump() + "\n";
    }
    return out;
  }
  for (const auto& p : corpus.pairs) {
    if (p.contrast != corpus.dataset) throw ValidationError("pair " + p.id + " does not belong to this corpus");
    ojson slots = ojson::object();
    for (const auto& s : p.slots) slots[s.name] = slot_json(s.lemma, s.form, s.number);
    ojson meta;
    meta["dataset"] = to_string(p.contrast);
    if (p.contrast == Dataset::coord_subord) meta["n_clauses"] = p.n_clauses;
    const auto& names = condition_names(p.contrast);
    out += record(p.id, names[0], p.easy_sentence, slots, meta).dump() + "\n";
    out += record(p.id, names[1], p.hard_sentence, slots, meta).dump() + "\n";
  }
  return out;
}

Corpus parse_corpus_jsonl(const std::string& text, const std::string& origin) {
  Corpus corpus;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;

  struct Group {
    std::map<std::string, ojson> by_condition;
    int first_line = 0;
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, Group> groups;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const ojson::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (!have_header) {
      if (!j.contains("corpus_header")) throw ValidationError(where + ": first line must be the corpus_header record");
      corpus.header = nlohmann::json::parse(j["corpus_header"].dump());
      try {
        corpus.dataset = parse_dataset(corpus.header.at("dataset").get<std::string>());
      } catch (const std::exception& e) {
        throw ValidationError(where + ": " + e.what());
      }
      have_header = true;
      continue;
    }
    try {
      const auto id = j.at("id").get<std::string>();
      const auto cond = j.at("condition").get<std::string>();
      j.at("sentence").get<std::string>();
      if (!j.at("slots").is_object()) throw ValidationError("slots must be an object");
      const auto& names = condition_names(corpus.dataset);
      if (std::find(names.begin(), names.end(), cond) == names.end()) {
        throw ValidationError("condition '" + cond + "' does not belong to dataset " + to_string(corpus.dataset));
      }
      auto [it, fresh] = groups.try_emplace(id);
      if (fresh) {
        order.push_back(id);
        it->second.first_line = line_no;
      }
      if (!it->second.by_condition.emplace(cond, std::move(j)).second) {
        throw ValidationError("duplicate record for " + id + " / " + cond);
      }
    } catch (const ojson::exception& e) {
      throw ValidationError(where + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (!have_header) throw ValidationError(origin + ": empty corpus (no corpus_header line)");

  const auto& names = condition_names(corpus.dataset);
  auto read_slots = [](const ojson& rec) {
    std::vector<Slot> slots;
    for (const auto& [name, s] : rec.at("slots").items()) {
      slots.push_back({name, s.at("lemma").get<std::string>(), s.at("form").get<std::string>(),
                       parse_number(s.at("number").get<std::string>())});
    }
    return slots;
  };

  for (const auto& id : order) {
    const Group& g = groups.at(id);
    const std::string where = origin + ":" + std::to_string(g.first_line);
    for (const auto& c : names) {
      if (!g.by_condition.count(c)) throw ValidationError(where + ": item " + id + " lacks condition " + c);
    }
    try {
      if (corpus.dataset == Dataset::attachment) {
        const ojson& amb = g.by_condition.at("ambiguous");
        const ojson& low = g.by_condition.at("low");
        const ojson& high = g.by_condition.at("high");
        StimulusTriplet t;
        t.id = id;
        t.ambiguous = amb.at("sentence").get<std::string>();
        t.low_attach = low.at("sentence").get<std::string>();
        t.high_attach = high.at("sentence").get<std::string>();
        t.rc = amb.at("slots").at("RC").at("lemma").get<std::string>();
        t.continuation = amb.at("slots").at("CONTINUATION").at("lemma").get<std::string>();
        t.bias = parse_bias_type(amb.at("metadata").at("bias_type").get<std::string>());
        t.ambiguous_np1 = amb.at("slots").at("NP1").at("lemma").get<std::string>();
        t.ambiguous_np2 = amb.at("slots").at("NP2").at("lemma").get<std::string>();
        t.low_np1 = low.at("slots").at("NP1").at("lemma").get<std::string>();
        t.low_np2 = low.at("slots").at("NP2").at("lemma").get<std::string>();
        t.high_np1 = high.at("slots").at("NP1").at("lemma").get<std::string>();
        t.high_np2 = high.at("slots").at("NP2").at("lemma").get<std::string>();
        corpus.triplets.push_back(std::move(t));
      } else {
        const ojson& easy = g.by_condition.at(names[0]);
        const ojson& hard = g.by_condition.at(names[1]);
        StimulusPair p;
        p.id = id;
        p.contrast = corpus.dataset;
        p.easy_sentence = easy.at("sentence").get<std::string>();
        p.hard_sentence = hard.at("sentence").get<std::string>();
        p.slots = read_slots(easy);
        if (read_slots(hard) != p.slots) throw ValidationError("item " + id + " has different slots per condition");
        if (p.contrast == Dataset::coord_subord) p.n_clauses = easy.at("metadata").at("n_clauses").get<int>();
        corpus.pairs.push_back(std::move(p));
      }
    } catch (const ojson::exception& e) {
      throw ValidationError(where + ": " + e.what());
    } catch (const Error& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path) {
  return parse_corpus_jsonl(io::read_file(path), path.string());
}

std::vector<std::filesystem::path> write_corpus(const Corpus& corpus, const std::string& prefix, bool overwrite) {
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  files.emplace_back(prefix + ".jsonl", corpus_to_jsonl(corpus));

  const auto& names = condition_names(corpus.dataset);
  std::vector<std::string> per_condition(names.size());
  std::string ids;
  for (const auto& item : corpus.items()) {
    for (std::size_t c = 0; c < names.size(); ++c) per_condition[c] += item.sentences.at(names[c]) + "\n";
    ids += item.id + "\n";
  }
  for (std::size_t c = 0; c < names.size(); ++c) files.emplace_back(prefix + "." + names[c] + ".txt", per_condition[c]);
  files.emplace_back(prefix + ".ids.txt", ids);

  if (!overwrite) {
    for (const auto& [path, _] : files) {
      if (std::filesystem::exists(path)) {
        throw IoError("refusing to overwrite existing file " + path.string() + " (use --force)");
      }
    }
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [path, content] : files) {
    io::write_file_atomic(path, content, overwrite);
    written.push_back(path);
  }
  return written;
}

}  // namespace lingdim::stimuli
