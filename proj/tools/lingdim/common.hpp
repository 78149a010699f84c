#ifndef LINGDIM_TOOLS_COMMON_HPP
#define LINGDIM_TOOLS_COMMON_HPP

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lingdim/error.hpp"
#include "lingdim/profile/partition.hpp"

namespace lingdim::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;

/// A run that completed but whose result failed verification (constraint
/// check, tolerance). Carries the report to print.
class VerificationFailed : public std::runtime_error {
 public:
  VerificationFailed(const std::string& what, nlohmann::json report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const nlohmann::json& report() const { return report_; }

 private:
  nlohmann::json report_;
};

/// Metadata embedded in every output. Output paths and --force are left out
/// so that reruns into another directory produce identical bytes.
inline nlohmann::json invocation(const std::string& subcommand, nlohmann::json options) {
  nlohmann::json j;
  j["tool"] = "lingdim";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["options"] = std::move(options);
  return j;
}

inline void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

/// FNV-1a, 64 bit. Identifies input files in the metadata.
inline std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline void ensure_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

struct PartitionArgs {
  int parts = 5;
  std::uint64_t seed = 0;
  std::string scheme = "random";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--partitions", parts, "Number of equal partitions")->capture_default_str()->check(
        CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Partition shuffle seed")->capture_default_str();
    cmd->add_option("--scheme", scheme, "random: seeded shuffle then blocks; contiguous: blocks in input order")
        ->capture_default_str()
        ->check(CLI::IsMember({"random", "contiguous"}));
  }

  PartitionPlan plan(Index n_items) const {
    return scheme == "contiguous" ? partition_contiguous(n_items, parts) : partition(n_items, parts, seed);
  }

  nlohmann::json to_json() const { return {{"partitions", parts}, {"seed", seed}, {"scheme", scheme}}; }
};

void register_gen(CLI::App& app);
void register_check(CLI::App& app);
void register_id_profile(CLI::App& app);
void register_imbalance(CLI::App& app);
void register_peaks(CLI::App& app);
void register_validate(CLI::App& app);
void register_synth(CLI::App& app);
void register_surprisal_stats(CLI::App& app);
void register_ablation_acc(CLI::App& app);

}  // namespace lingdim::cli

#endif  // LINGDIM_TOOLS_COMMON_HPP
