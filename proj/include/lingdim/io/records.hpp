#ifndef LINGDIM_IO_RECORDS_HPP
#define LINGDIM_IO_RECORDS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "lingdim/stats/ablation.hpp"
#include "lingdim/stats/surprisal.hpp"

namespace lingdim::io {

// Surprisal dump, one JSON object per line:
//   {"sentence_id": str, "condition": str, "model": str?, "dataset": str?,
//    "unit": "nats" | "bits" (default nats), "token_surprisals": [number, ...]}
// Values in bits are converted to nats on ingest.
//
// Prediction dump, one JSON object per line:
//   {"sentence_id": str, "ablated_layer": int | null, "predicted_token_id": int}

enum class SurprisalUnit { nats, bits };

std::vector<stats::SurprisalRecord> parse_surprisal_jsonl(const std::string& text, const std::string& origin,
                                                         SurprisalUnit default_unit = SurprisalUnit::nats);
std::vector<stats::SurprisalRecord> read_surprisal_jsonl(const std::filesystem::path& path,
                                                        SurprisalUnit default_unit = SurprisalUnit::nats);
std::string surprisal_to_jsonl(const std::vector<stats::SurprisalRecord>& records);

std::vector<stats::AblationRecord> parse_predictions_jsonl(const std::string& text, const std::string& origin);
std::vector<stats::AblationRecord> read_predictions_jsonl(const std::filesystem::path& path);
std::string predictions_to_jsonl(const std::vector<stats::AblationRecord>& records);

}  // namespace lingdim::io

#endif  // LINGDIM_IO_RECORDS_HPP
