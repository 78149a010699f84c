#include <chrono>
#include <cmath>
#include <memory>
#include <optional>

#include "common.hpp"
#include "lingdim/geometry/manifold.hpp"
#include "lingdim/geometry/twonn.hpp"
#include "lingdim/io/dump.hpp"
#include "lingdim/io/report.hpp"
#include "lingdim/profile/peak_span.hpp"
#include "lingdim/profile/profile.hpp"

namespace lingdim::cli {

namespace {

using Cells = std::map<io::CellKey, std::vector<LayerCloud<float>>>;

std::string describe(const io::CellKey& k) {
  return std::get<0>(k) + "/" + std::get<1>(k) + "/" + std::get<2>(k);
}

nlohmann::json written(const std::string& prefix) {
  return nlohmann::json::array({prefix + ".csv", prefix + ".json"});
}

// ---- id-profile ---------------------------------------------------------------

struct IdProfileArgs {
  std::string dumps;
  PartitionArgs parts;
  double discard = 0.1;
  std::string method = "mle";
  double dedupe_tol = 0.0;
  std::string out;
  bool force = false;
};

void run_id_profile(const IdProfileArgs& a) {
  TwoNNOptions opts;
  opts.method = parse_id_method(a.method);
  opts.discard_fraction = a.discard;
  const Cells cells = io::load_dump_set(a.dumps);

  std::vector<LayerProfile> profiles;
  nlohmann::json cell_info = nlohmann::json::array();
  for (const auto& [key, layers] : cells) {
    if (std::get<3>(key) >= 0) continue;  // ablated runs are not part of ID profiles
    const PartitionPlan plan = a.parts.plan(layers.front().cloud.n_points());
    LayerProfile p = id_profile(layers, plan, opts, a.dedupe_tol);
    std::tie(p.model, p.dataset, p.condition) = std::make_tuple(std::get<0>(key), std::get<1>(key), std::get<2>(key));
    cell_info.push_back({{"cell", describe(key)},
                         {"n_points", layers.front().cloud.n_points()},
                         {"n_layers", layers.size()},
                         {"dropped_by_partition", plan.dropped.size()},
                         {"se_defined", p.se_defined}});
    profiles.push_back(std::move(p));
  }
  if (profiles.empty()) throw ValidationError("no unablated dump cells under " + a.dumps);

  nlohmann::json options = a.parts.to_json();
  options.update({{"dumps", a.dumps},
                  {"method", to_string(opts.method)},
                  {"discard_fraction", a.discard},
                  {"dedupe_tol", a.dedupe_tol}});
  nlohmann::json meta = invocation("id-profile", options);
  meta["cells"] = cell_info;
  ensure_parent(a.out);
  io::write_table(a.out, io::profiles_to_table(profiles, meta), a.force);
  print_json({{"profiles", profiles.size()}, {"cells", cell_info}, {"files", written(a.out)}});
}

// ---- imbalance ----------------------------------------------------------------

struct ImbalanceArgs {
  std::string a_dir, b_dir;
  std::string a_condition, b_condition;
  PartitionArgs parts;
  double dedupe_tol = 0.0;
  std::string out;
  bool force = false;
};

std::pair<io::CellKey, std::vector<LayerCloud<float>>> select_cell(const std::string& dir,
                                                                    const std::string& condition) {
  Cells cells = io::load_dump_set(dir);
  std::vector<io::CellKey> matches;
  for (const auto& [key, layers] : cells) {
    if (std::get<3>(key) >= 0) continue;
    if (!condition.empty() && std::get<2>(key) != condition) continue;
    matches.push_back(key);
  }
  if (matches.size() != 1) {
    std::string found;
    for (const auto& k : matches) found += (found.empty() ? "" : ", ") + describe(k);
    throw ValidationError(dir + ": expected exactly one unablated dump cell" +
                          (condition.empty() ? std::string() : " with condition '" + condition + "'") + ", found " +
                          std::to_string(matches.size()) + (found.empty() ? "" : " (" + found + ")") +
                          "; narrow it with --a-condition / --b-condition");
  }
  return {matches.front(), std::move(cells.at(matches.front()))};
}

void run_imbalance(const ImbalanceArgs& a) {
  const auto [ka, la] = select_cell(a.a_dir, a.a_condition);
  const auto [kb, lb] = select_cell(a.b_dir, a.b_condition);
  const PartitionPlan plan = a.parts.plan(la.front().cloud.n_points());
  auto [ab, ba] = imbalance_profiles(la, lb, plan, a.dedupe_tol);

  auto joined = [](const std::string& x, const std::string& y) { return x == y ? x : x + "->" + y; };
  for (LayerProfile* p : {&ab, &ba}) {
    p->model = joined(std::get<0>(ka), std::get<0>(kb));
    p->dataset = joined(std::get<1>(ka), std::get<1>(kb));
    p->condition = std::get<2>(ka) + "->" + std::get<2>(kb);
  }
  nlohmann::json options = a.parts.to_json();
  options.update({{"a", a.a_dir}, {"b", a.b_dir}, {"a_cell", describe(ka)}, {"b_cell", describe(kb)},
                  {"dedupe_tol", a.dedupe_tol}});
  ensure_parent(a.out);
  io::write_table(a.out, io::profiles_to_table({ab, ba}, invocation("imbalance", options)), a.force);
  print_json({{"a_cell", describe(ka)}, {"b_cell", describe(kb)}, {"files", written(a.out)}});
}

// ---- peaks --------------------------------------------------------------------

struct PeaksArgs {
  std::string profile;
  std::string metric;
  std::optional<int> lo, hi;
  std::string out;
  bool force = false;
};

void run_peaks(const PeaksArgs& a) {
  const auto profiles = io::table_to_profiles(io::read_table(a.profile));
  io::Table t;
  t.columns = {"model",     "dataset",  "condition", "metric",   "peak_layer",
               "span_start", "span_end", "search_lo", "search_hi", "boundary_peak"};
  nlohmann::json options{{"profile", a.profile}, {"metric", a.metric}};
  if (a.lo) options["search_lo"] = *a.lo;
  if (a.hi) options["search_hi"] = *a.hi;
  t.meta = invocation("peaks", options);
  for (const auto& p : profiles) {
    if (!a.metric.empty() && p.metric_name != a.metric) continue;
    const PeakSpan s = peak_span(p, a.lo, a.hi);
    t.rows.push_back({p.model, p.dataset, p.condition, p.metric_name, s.peak_layer, s.span_start, s.span_end,
                      s.search_lo, s.search_hi, s.boundary_peak});
  }
  if (t.rows.empty()) throw ValidationError("no profiles" + (a.metric.empty() ? "" : " with metric " + a.metric));
  if (!a.out.empty()) {
    ensure_parent(a.out);
    io::write_table(a.out, t, a.force);
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json row;
    for (std::size_t c = 0; c < t.columns.size(); ++c) row[t.columns[c]] = r[c];
    rows.push_back(row);
  }
  print_json({{"peaks", rows}});
}

// ---- validate -----------------------------------------------------------------

struct ValidateArgs {
  std::vector<int> d{2};
  int D = 512;
  int N = 10000;
  std::vector<std::uint64_t> seeds{1};
  double noise = 0.0;
  double discard = 0.1;
  std::string method = "mle";
  std::optional<double> tolerance;
  std::string out;
  bool force = false;
};

void run_validate(const ValidateArgs& a) {
  TwoNNOptions opts;
  opts.method = parse_id_method(a.method);
  opts.discard_fraction = a.discard;

  io::Table t;
  t.columns = {"d", "D", "N", "seed", "noise", "method", "discard_fraction", "d_hat", "n_used", "rel_error"};
  nlohmann::json options{{"d", a.d},         {"D", a.D},        {"N", a.N},
                         {"seeds", a.seeds}, {"noise", a.noise}, {"method", to_string(opts.method)},
                         {"discard_fraction", a.discard}};
  if (a.tolerance) options["tolerance"] = *a.tolerance;
  t.meta = invocation("validate", options);

  nlohmann::json rows = nlohmann::json::array();
  bool all_within = true;
  for (int d : a.d) {
    for (std::uint64_t seed : a.seeds) {
      ManifoldSpec spec;
      spec.intrinsic_dim = d;
      spec.ambient_dim = a.D;
      spec.n_points = a.N;
      spec.noise_sigma = a.noise;
      spec.seed = seed;
      const auto cloud = sample_manifold<double>(spec);
      const auto t0 = std::chrono::steady_clock::now();
      const IdEstimate est = estimate_id(cloud, opts);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double rel = std::abs(est.d - d) / d;
      t.rows.push_back({d, a.D, a.N, seed, a.noise, to_string(opts.method), a.discard, est.d, est.n_used, rel});
      nlohmann::json row{{"d", d}, {"seed", seed}, {"d_hat", est.d}, {"rel_error", rel}, {"seconds", seconds}};
      if (a.tolerance) {
        row["within_tolerance"] = rel <= *a.tolerance;
        all_within = all_within && rel <= *a.tolerance;
      }
      rows.push_back(row);
    }
  }
  if (!a.out.empty()) {
    ensure_parent(a.out);
    io::write_table(a.out, t, a.force);
  }
  nlohmann::json report{{"rows", rows}};
  if (!all_within) throw VerificationFailed("estimate outside the relative tolerance", report);
  print_json(report);
}

// ---- synth --------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::vector<int> d{2};
  int D = 64;
  int N = 1000;
  std::uint64_t seed = 0;
  double noise = 0.0;
  int copies = 1;
  std::string model = "synthetic";
  std::string dataset = "hypercube";
  std::string condition = "base";
  bool force = false;
};

void run_synth(const SynthArgs& a) {
  if (a.copies < 1) throw ParameterError("--copies must be at least 1");
  std::filesystem::create_directories(a.out);
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t layer = 0; layer < a.d.size(); ++layer) {
    ManifoldSpec spec;
    spec.intrinsic_dim = a.d[layer];
    spec.ambient_dim = a.D;
    spec.n_points = a.N;
    spec.noise_sigma = a.noise;
    spec.seed = a.seed;
    const auto base = sample_manifold<float>(spec);

    io::TensorDump dump;
    dump.payload.resize(static_cast<Index>(a.N) * a.copies, a.D);
    for (int c = 0; c < a.copies; ++c) dump.payload.middleRows(static_cast<Index>(c) * a.N, a.N) = base.points;
    auto& h = dump.header;
    h.model_id = a.model;
    h.layer_index = static_cast<int>(layer);
    h.dataset_id = a.dataset;
    h.condition = a.condition;
    h.n_points = dump.payload.rows();
    h.ambient_dim = a.D;
    for (Index i = 0; i < h.n_points; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "item-%07ld", static_cast<long>(i));
      h.labels.emplace_back(buf);
    }
    h.metadata = invocation("synth", {{"intrinsic_dim", a.d[layer]},
                                      {"ambient_dim", a.D},
                                      {"n_points", a.N},
                                      {"copies", a.copies},
                                      {"noise", a.noise},
                                      {"seed", a.seed}});
    const auto path = std::filesystem::path(a.out) / io::dump_filename(h);
    io::write_dump(path, dump, a.force);
    files.push_back(path.string());
  }
  print_json({{"files", files}});
}

}  // namespace

void register_id_profile(CLI::App& app) {
  auto a = std::make_shared<IdProfileArgs>();
  auto* cmd = app.add_subcommand("id-profile", "TwoNN intrinsic-dimension profile over layers");
  cmd->add_option("--dumps", a->dumps, "Directory of .gmdp dumps")->required()->check(CLI::ExistingDirectory);
  a->parts.add_to(cmd);
  cmd->add_option("--discard", a->discard, "Fraction of largest ratios discarded")->capture_default_str();
  cmd->add_option("--method", a->method, "mle or linear_fit")->capture_default_str()->check(
      CLI::IsMember({"mle", "linear_fit"}));
  cmd->add_option("--dedupe-tol", a->dedupe_tol, "Distance at or below which points count as duplicates")
      ->capture_default_str();
  cmd->add_option("--out", a->out, "Output prefix (<prefix>.csv and <prefix>.json)")->required();
  cmd->add_flag("--force", a->force, "Replace existing output files");
  cmd->callback([a] { run_id_profile(*a); });
}

void register_imbalance(CLI::App& app) {
  auto a = std::make_shared<ImbalanceArgs>();
  auto* cmd = app.add_subcommand("imbalance", "Information imbalance profiles between two dump sets");
  cmd->add_option("--a", a->a_dir, "Dump directory for space A")->required()->check(CLI::ExistingDirectory);
  cmd->add_option("--b", a->b_dir, "Dump directory for space B")->required()->check(CLI::ExistingDirectory);
  cmd->add_option("--a-condition", a->a_condition, "Pick the A cell with this condition");
  cmd->add_option("--b-condition", a->b_condition, "Pick the B cell with this condition");
  a->parts.add_to(cmd);
  cmd->add_option("--dedupe-tol", a->dedupe_tol, "Joint duplicate tolerance")->capture_default_str();
  cmd->add_option("--out", a->out, "Output prefix")->required();
  cmd->add_flag("--force", a->force, "Replace existing output files");
  cmd->callback([a] { run_imbalance(*a); });
}

void register_peaks(CLI::App& app) {
  auto a = std::make_shared<PeaksArgs>();
  auto* cmd = app.add_subcommand("peaks", "Peak layer and inflection-bounded span of profiles");
  cmd->add_option("--profile", a->profile, "Profile table (.csv or .json)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--metric", a->metric, "Only profiles of this metric");
  cmd->add_option("--lo", a->lo, "First layer searched (default 1)");
  cmd->add_option("--hi", a->hi, "Last layer searched (default: last layer)");
  cmd->add_option("--out", a->out, "Also write a table to <prefix>.csv/.json");
  cmd->add_flag("--force", a->force, "Replace existing output files");
  cmd->callback([a] { run_peaks(*a); });
}

void register_validate(CLI::App& app) {
  auto a = std::make_shared<ValidateArgs>();
  auto* cmd = app.add_subcommand("validate", "TwoNN recovery on synthetic hypercube manifolds");
  cmd->add_option("--d", a->d, "Intrinsic dimension(s)")->capture_default_str();
  cmd->add_option("--D", a->D, "Ambient dimension")->capture_default_str();
  cmd->add_option("--N", a->N, "Points per cloud")->capture_default_str();
  cmd->add_option("--seeds", a->seeds, "Seeds")->capture_default_str()->delimiter(',');
  cmd->add_option("--noise", a->noise, "Isotropic Gaussian noise sigma")->capture_default_str();
  cmd->add_option("--discard", a->discard, "Discard fraction")->capture_default_str();
  cmd->add_option("--method", a->method, "mle or linear_fit")->capture_default_str()->check(
      CLI::IsMember({"mle", "linear_fit"}));
  cmd->add_option("--tolerance", a->tolerance, "Fail (exit 3) if |d_hat - d| / d exceeds this");
  cmd->add_option("--out", a->out, "Also write a table to <prefix>.csv/.json");
  cmd->add_flag("--force", a->force, "Replace existing output files");
  cmd->get_option("--d")->delimiter(',');
  cmd->callback([a] { run_validate(*a); });
}

void register_synth(CLI::App& app) {
  auto a = std::make_shared<SynthArgs>();
  auto* cmd = app.add_subcommand("synth", "Write synthetic hypercube dumps, one layer per --d entry");
  cmd->add_option("--out", a->out, "Output directory")->required();
  cmd->add_option("--d", a->d, "Intrinsic dimension per layer, e.g. 1,2,3")->delimiter(',')->capture_default_str();
  cmd->add_option("--D", a->D, "Ambient dimension")->capture_default_str();
  cmd->add_option("--N", a->N, "Points per copy")->capture_default_str();
  cmd->add_option("--seed", a->seed, "Seed, shared by all layers")->capture_default_str();
  cmd->add_option("--noise", a->noise, "Noise sigma")->capture_default_str();
  cmd->add_option("--copies", a->copies, "Stack this many identical copies of each cloud")->capture_default_str();
  cmd->add_option("--model", a->model, "model_id tag")->capture_default_str();
  cmd->add_option("--dataset", a->dataset, "dataset_id tag")->capture_default_str();
  cmd->add_option("--condition", a->condition, "condition tag")->capture_default_str();
  cmd->add_flag("--force", a->force, "Replace existing dumps");
  cmd->callback([a] { run_synth(*a); });
}

}  // namespace lingdim::cli
