#include "lingdim/io/records.hpp"

#include <sstream>

#include <json.hpp>

#include "lingdim/io/files.hpp"

namespace lingdim::io {

using nlohmann::json;

namespace {

template <typename Fn>
void for_each_jsonl(const std::string& text, const std::string& origin, Fn&& fn) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    try {
      fn(json::parse(line), where);
    } catch (const json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    } catch (const Error& e) {
      if (std::string(e.what()).rfind(origin, 0) == 0) throw;
      throw ValidationError(where + ": " + e.what());
    }
  }
}

std::string optional_string(const json& j, const char* key) {
  return j.contains(key) && !j[key].is_null() ? j[key].get<std::string>() : std::string();
}

}  // namespace

std::vector<stats::SurprisalRecord> parse_surprisal_jsonl(const std::string& text, const std::string& origin,
                                                         SurprisalUnit default_unit) {
  std::vector<stats::SurprisalRecord> out;
  for_each_jsonl(text, origin, [&](const json& j, const std::string&) {
    stats::SurprisalRecord r;
    r.sentence_id = j.at("sentence_id").get<std::string>();
    r.condition = j.at("condition").get<std::string>();
    r.model = optional_string(j, "model");
    r.dataset = optional_string(j, "dataset");
    r.token_surprisals = j.at("token_surprisals").get<std::vector<double>>();
    SurprisalUnit unit = default_unit;
    if (j.contains("unit")) {
      const auto u = j["unit"].get<std::string>();
      if (u == "bits") {
        unit = SurprisalUnit::bits;
      } else if (u == "nats") {
        unit = SurprisalUnit::nats;
      } else {
        throw ValidationError("unknown surprisal unit '" + u + "'");
      }
    }
    if (unit == SurprisalUnit::bits) {
      for (double& v : r.token_surprisals) v *= stats::kNatsPerBit;
    }
    r.validate();
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<stats::SurprisalRecord> read_surprisal_jsonl(const std::filesystem::path& path,
                                                        SurprisalUnit default_unit) {
  return parse_surprisal_jsonl(read_file(path), path.string(), default_unit);
}

std::string surprisal_to_jsonl(const std::vector<stats::SurprisalRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    json j;
    j["sentence_id"] = r.sentence_id;
    j["condition"] = r.condition;
    if (!r.model.empty()) j["model"] = r.model;
    if (!r.dataset.empty()) j["dataset"] = r.dataset;
    j["unit"] = "nats";
    j["token_surprisals"] = r.token_surprisals;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<stats::AblationRecord> parse_predictions_jsonl(const std::string& text, const std::string& origin) {
  std::vector<stats::AblationRecord> out;
  for_each_jsonl(text, origin, [&](const json& j, const std::string&) {
    stats::AblationRecord r;
    r.sentence_id = j.at("sentence_id").get<std::string>();
    if (j.contains("ablated_layer") && !j["ablated_layer"].is_null()) {
      r.ablated_layer = j["ablated_layer"].get<int>();
    }
    const json& tok = j.at("predicted_token_id");
    if (!tok.is_number_integer()) throw ValidationError("predicted_token_id must be an integer");
    r.predicted_token_id = tok.get<std::int64_t>();
    if (r.predicted_token_id < 0) throw ValidationError("predicted_token_id must be nonnegative");
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<stats::AblationRecord> read_predictions_jsonl(const std::filesystem::path& path) {
  return parse_predictions_jsonl(read_file(path), path.string());
}

std::string predictions_to_jsonl(const std::vector<stats::AblationRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    json j;
    j["sentence_id"] = r.sentence_id;
    j["ablated_layer"] = r.ablated_layer ? json(*r.ablated_layer) : json(nullptr);
    j["predicted_token_id"] = r.predicted_token_id;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace lingdim::io
