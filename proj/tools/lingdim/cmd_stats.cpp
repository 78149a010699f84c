#include <map>
#include <memory>

#include "common.hpp"
#include "lingdim/io/files.hpp"
#include "lingdim/io/records.hpp"
#include "lingdim/io/report.hpp"
#include "lingdim/stats/ablation.hpp"
#include "lingdim/stats/shapiro_wilk.hpp"
#include "lingdim/stats/surprisal.hpp"
#include "lingdim/stats/ttest.hpp"

namespace lingdim::cli {

namespace {

// ---- surprisal-stats ----------------------------------------------------------

struct SurprisalArgs {
  std::string input;
  std::string unit = "nats";
  double alpha_normality = 0.1;
  double alpha = 0.05;
  std::string variance = "welch";
  std::vector<std::string> contrasts;
  std::string out;
  bool force = false;
};

const std::vector<std::string> kDefaultContrasts = {
    "coordination:subordination", "right_branching:center_embedding", "low:ambiguous"};

std::pair<std::string, std::string> split_contrast(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size() || s.find(':', colon + 1) != std::string::npos) {
    throw ParameterError("contrast must look like easy:hard, got '" + s + "'");
  }
  return {s.substr(0, colon), s.substr(colon + 1)};
}

void run_surprisal_stats(const SurprisalArgs& a) {
  const auto unit = a.unit == "bits" ? io::SurprisalUnit::bits : io::SurprisalUnit::nats;
  const auto records = io::read_surprisal_jsonl(a.input, unit);
  const stats::VarianceModel model = a.variance == "pooled" ? stats::VarianceModel::pooled : stats::VarianceModel::welch;
  const bool explicit_contrasts = !a.contrasts.empty();
  const auto& contrasts = explicit_contrasts ? a.contrasts : kDefaultContrasts;

  std::map<std::pair<std::string, std::string>, std::vector<stats::SurprisalRecord>> groups;
  for (const auto& r : records) groups[{r.model, r.dataset}].push_back(r);

  nlohmann::json options{{"input", a.input},
                         {"input_fnv1a64", fnv1a64(io::read_file(a.input))},
                         {"unit", a.unit},
                         {"alpha_normality", a.alpha_normality},
                         {"alpha", a.alpha},
                         {"variance", a.variance},
                         {"contrasts", contrasts}};
  io::Table summary;
  summary.meta = invocation("surprisal-stats", options);
  summary.columns = {"model", "dataset", "condition", "n_sentences", "mean_nats", "se_nats", "shapiro_w",
                     "shapiro_p", "approximately_normal"};
  io::Table tests;
  tests.meta = summary.meta;
  tests.columns = {"model", "dataset", "easy", "hard", "variance", "t_stat", "dof", "p_one_sided",
                   "mean_easy", "mean_hard", "se_easy", "se_hard", "significant", "normality_ok"};

  for (const auto& [key, recs] : groups) {
    const auto by_condition = stats::surprisal_summary(recs);
    std::map<std::string, bool> normal;
    for (const auto& [cond, s] : by_condition) {
      nlohmann::json w = nullptr, p = nullptr;
      nlohmann::json ok = nullptr;
      if (s.n_sentences >= 3 && s.n_sentences <= 5000) {
        try {
          const auto sw = stats::shapiro_wilk(s.sentence_means);
          w = sw.w;
          p = sw.p;
          ok = sw.p >= a.alpha_normality;
        } catch (const DegenerateSampleError&) {
          ok = false;
        }
      }
      normal[cond] = ok.is_boolean() && ok.get<bool>();
      summary.rows.push_back({key.first, key.second, cond, s.n_sentences, s.mean, s.se, w, p, ok});
    }
    for (const auto& c : contrasts) {
      const auto [easy, hard] = split_contrast(c);
      const auto e = by_condition.find(easy);
      const auto h = by_condition.find(hard);
      if (e == by_condition.end() || h == by_condition.end()) {
        if (explicit_contrasts) {
          throw ValidationError("contrast " + c + ": condition missing for model '" + key.first + "', dataset '" +
                                key.second + "'");
        }
        continue;
      }
      const auto t = stats::t_test_one_sided(e->second.sentence_means, h->second.sentence_means,
                                             stats::Alternative::a_less_than_b, model);
      tests.rows.push_back({key.first, key.second, easy, hard, a.variance, t.t_stat, t.dof, t.p_one_sided,
                            t.mean_a, t.mean_b, t.se_a, t.se_b, t.p_one_sided < a.alpha,
                            normal[easy] && normal[hard]});
    }
  }
  if (tests.rows.empty() && !summary.rows.empty()) {
    std::cerr << nlohmann::json{{"warning", "no contrast matched the conditions present"}}.dump() << "\n";
  }
  ensure_parent(a.out);
  io::write_table(a.out + ".summary", summary, a.force);
  io::write_table(a.out + ".tests", tests, a.force);

  nlohmann::json printed = nlohmann::json::array();
  for (const auto& r : tests.rows) {
    nlohmann::json row;
    for (std::size_t c = 0; c < tests.columns.size(); ++c) row[tests.columns[c]] = r[c];
    printed.push_back(row);
  }
  print_json({{"tests", printed},
              {"files", {a.out + ".summary.csv", a.out + ".summary.json", a.out + ".tests.csv", a.out + ".tests.json"}}});
}

// ---- ablation-acc -------------------------------------------------------------

struct AblationArgs {
  std::string baseline;
  std::vector<std::string> ablated;
  PartitionArgs parts;
  std::string model = "model";
  std::string dataset = "dataset";
  std::string condition = "all";
  std::string out;
  bool force = false;
};

void run_ablation_acc(const AblationArgs& a) {
  const auto baseline = io::read_predictions_jsonl(a.baseline);
  std::vector<stats::AblationRecord> ablated;
  nlohmann::json inputs = nlohmann::json::array();
  inputs.push_back({{"baseline", a.baseline}, {"fnv1a64", fnv1a64(io::read_file(a.baseline))}});
  for (const auto& f : a.ablated) {
    auto part = io::read_predictions_jsonl(f);
    ablated.insert(ablated.end(), part.begin(), part.end());
    inputs.push_back({{"ablated", f}, {"fnv1a64", fnv1a64(io::read_file(f))}});
  }
  const PartitionPlan plan = a.parts.plan(static_cast<Index>(baseline.size()));
  LayerProfile prof = stats::ablation_profile(baseline, ablated, plan);
  prof.model = a.model;
  prof.dataset = a.dataset;
  prof.condition = a.condition;

  nlohmann::json options = a.parts.to_json();
  options["inputs"] = inputs;
  ensure_parent(a.out);
  io::write_table(a.out, io::profiles_to_table({prof}, invocation("ablation-acc", options)), a.force);

  nlohmann::json per_layer = nlohmann::json::array();
  for (const auto& l : stats::ablation_accuracy(baseline, ablated)) {
    per_layer.push_back({{"layer", l.layer}, {"n_sentences", l.n_sentences}, {"n_matching", l.n_matching},
                         {"accuracy", l.accuracy}});
  }
  print_json({{"accuracy", per_layer}, {"files", {a.out + ".csv", a.out + ".json"}}});
}

}  // namespace

void register_surprisal_stats(CLI::App& app) {
  auto a = std::make_shared<SurprisalArgs>();
  auto* cmd = app.add_subcommand("surprisal-stats", "Mean surprisal per condition, normality and one-sided t-tests");
  cmd->add_option("--input", a->input, "Surprisal JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--unit", a->unit, "Unit of records without a unit field")
      ->capture_default_str()
      ->check(CLI::IsMember({"nats", "bits"}));
  cmd->add_option("--alpha-normality", a->alpha_normality, "Shapiro-Wilk cutoff")->capture_default_str();
  cmd->add_option("--alpha", a->alpha, "t-test significance level")->capture_default_str();
  cmd->add_option("--variance", a->variance, "welch or pooled")
      ->capture_default_str()
      ->check(CLI::IsMember({"welch", "pooled"}));
  cmd->add_option("--contrast", a->contrasts,
                  "easy:hard pair tested for hard > easy (repeatable; default: the three shipped datasets)");
  cmd->add_option("--out", a->out, "Output prefix (<prefix>.summary.* and <prefix>.tests.*)")->required();
  cmd->add_flag("--force", a->force, "Replace existing output files");
  cmd->callback([a] { run_surprisal_stats(*a); });
}

void register_ablation_acc(CLI::App& app) {
  auto a = std::make_shared<AblationArgs>();
  auto* cmd = app.add_subcommand("ablation-acc", "Agreement of ablated next-token predictions with the intact model");
  cmd->add_option("--baseline", a->baseline, "Predictions of the intact model")->required()->check(CLI::ExistingFile);
  cmd->add_option("--ablated", a->ablated, "Predictions with one layer bypassed (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  a->parts.add_to(cmd);
  cmd->add_option("--model", a->model, "model tag for the table")->capture_default_str();
  cmd->add_option("--dataset", a->dataset, "dataset tag")->capture_default_str();
  cmd->add_option("--condition", a->condition, "condition tag")->capture_default_str();
  cmd->add_option("--out", a->out, "Output prefix")->required();
  cmd->add_flag("--force", a->force, "Replace existing output files");
  cmd->callback([a] { run_ablation_acc(*a); });
}

}  // namespace lingdim::cli
