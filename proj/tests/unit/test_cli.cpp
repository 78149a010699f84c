#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "lingdim/io/files.hpp"
#include "lingdim/io/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "lingdim_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const fs::path err_file = workdir() / "stderr.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" LINGDIM_CLI_PATH "' " + args + " 2> '" +
                          err_file.string() + "'";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = lingdim::io::read_file(err_file);
  return r;
}

json error_of(const Run& r) {
  const auto last = r.err.find_last_of('\n', r.err.size() - 2);
  return json::parse(last == std::string::npos ? r.err : r.err.substr(last + 1)).at("error");
}

std::string file(const std::string& rel) { return lingdim::io::read_file(workdir() / rel); }

}  // namespace

TEST_CASE("cli: version, usage errors") {
  auto r = run("--version");
  CHECK(r.code == 0);
  CHECK(r.out.find("0.1.0") != std::string::npos);

  r = run("");
  CHECK(r.code == 2);
  CHECK(error_of(r).at("kind") == "usage");

  r = run("gen coord-subord --seed 1");
  CHECK(r.code == 2);
  CHECK(error_of(r).at("subcommand") == "gen");

  r = run("gen poetry --count 3 --out x");
  CHECK(r.code == 1);
  CHECK(error_of(r).at("kind") == "parameter");
}

TEST_CASE("cli: gen is deterministic, refuses to overwrite, check verifies") {
  auto a = run("gen coord-subord --count 500 --seed 7 --out g1/cs");
  REQUIRE(a.code == 0);
  auto b = run("gen coord-subord --count 500 --seed 7 --out g2/cs");
  REQUIRE(b.code == 0);
  for (const char* suffix : {".jsonl", ".coordination.txt", ".subordination.txt", ".ids.txt"}) {
    CHECK(file(std::string("g1/cs") + suffix) == file(std::string("g2/cs") + suffix));
  }
  CHECK(json::parse(a.out).at("check") == "passed");

  auto again = run("gen coord-subord --count 500 --seed 7 --out g1/cs");
  CHECK(again.code == 1);
  CHECK(error_of(again).at("kind") == "io");
  CHECK(run("gen coord-subord --count 500 --seed 7 --out g1/cs --force").code == 0);

  auto c = run("check g1/cs.jsonl");
  CHECK(c.code == 0);
  CHECK(json::parse(c.out).at("ok") == true);

  // Corrupt one agreement and re-check.
  std::string text = file("g1/cs.jsonl");
  const auto pos = text.find(" is ", text.find("\"sentence\""));
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, " are ");
  lingdim::io::write_file_atomic(workdir() / "g1/bad.jsonl", text, true);
  auto bad = run("check g1/bad.jsonl");
  CHECK(bad.code == 3);
  CHECK(error_of(bad).at("kind") == "verification");
  CHECK(error_of(bad).at("report").at("ok") == false);

  CHECK(run("gen branching --count 200 --seed 1 --out g3/br").code == 0);
  CHECK(run("gen coord-subord --count 100 --seed 1 --clauses 2 --out g3/c2").code == 0);
  CHECK(file("g3/c2.ids.txt").rfind("coord-000001-c2\n", 0) == 0);
  auto att = run("gen attachment --count 300 --seed 2 --out g3/att");
  REQUIRE(att.code == 0);
  CHECK(json::parse(att.out).at("n_sentences") == 900);
  CHECK(run("check g3/att.jsonl --noun-cap 2").code == 3);
}

TEST_CASE("cli: synth, id-profile, peaks, imbalance") {
  REQUIRE(run("synth --out s1 --d 1,2,4,6,4,2,1 --D 16 --N 400 --seed 3 --copies 5").code == 0);
  auto p = run("id-profile --dumps s1 --scheme contiguous --partitions 5 --out s1prof/id");
  REQUIRE(p.code == 0);
  const auto t = lingdim::io::read_table(workdir() / "s1prof/id.csv");
  const auto profiles = lingdim::io::table_to_profiles(t);
  REQUIRE(profiles.size() == 1);
  for (double se : profiles[0].se) CHECK(se == 0.0);
  CHECK(lingdim::io::read_table(workdir() / "s1prof/id.json").rows == t.rows);

  auto pk = run("peaks --profile s1prof/id.json --metric twonn_id");
  REQUIRE(pk.code == 0);
  CHECK(json::parse(pk.out).at("peaks").at(0).at("peak_layer") == 3);

  // Random partitions of one repeated cloud: layers identical, so the profile is flat.
  REQUIRE(run("synth --out s2 --d 3,3,3,3,3 --D 8 --N 500 --seed 1").code == 0);
  REQUIRE(run("id-profile --dumps s2 --out s2prof/id").code == 0);
  const auto flat = lingdim::io::table_to_profiles(lingdim::io::read_table(workdir() / "s2prof/id.csv"))[0];
  for (std::size_t l = 1; l < flat.size(); ++l) {
    CHECK(flat.mean[l] == flat.mean[0]);
    CHECK(flat.se[l] == flat.se[0]);
  }
  CHECK(run("peaks --profile s2prof/id.csv --lo 3 --hi 2").code == 1);

  REQUIRE(run("synth --out s3 --d 3,3,3,3,3 --D 8 --N 500 --seed 9 --condition other").code == 0);
  auto im = run("imbalance --a s2 --b s3 --out im/x --partitions 2");
  REQUIRE(im.code == 0);
  const auto it = lingdim::io::read_table(workdir() / "im/x.csv");
  CHECK(it.rows.size() == 10);
  CHECK(it.rows[0][it.column("condition")] == "base->other");

  REQUIRE(run("synth --out s2 --d 3,3,3,3,3 --D 8 --N 500 --seed 1 --condition twin").code == 0);
  auto ambiguous = run("imbalance --a s2 --b s3 --out im/y");
  CHECK(ambiguous.code == 1);
  CHECK(error_of(ambiguous).at("kind") == "validation");
  CHECK(run("imbalance --a s2 --a-condition twin --b s3 --out im/y").code == 0);
}

TEST_CASE("cli: validate tolerance and dump faults") {
  auto ok = run("validate --d 2 --D 32 --N 2000 --seeds 1 --tolerance 0.1 --out val/v");
  CHECK(ok.code == 0);
  CHECK(lingdim::io::read_table(workdir() / "val/v.csv").rows.size() == 1);
  auto bad = run("validate --d 2 --D 32 --N 2000 --seeds 1 --tolerance 1e-9");
  CHECK(bad.code == 3);

  REQUIRE(run("synth --out broken --d 2,2 --D 4 --N 50").code == 0);
  for (const auto& e : fs::directory_iterator(workdir() / "broken")) {
    const auto bytes = lingdim::io::read_file(e.path());
    lingdim::io::write_file_atomic(e.path(), bytes.substr(0, bytes.size() - 3), true);
    break;
  }
  auto r = run("id-profile --dumps broken --out bp/x");
  CHECK(r.code == 1);
  CHECK(error_of(r).at("kind") == "truncated_payload");
  CHECK_FALSE(fs::exists(workdir() / "bp/x.csv"));
}

TEST_CASE("cli: surprisal-stats and ablation-acc") {
  {
    std::ofstream out(workdir() / "surp.jsonl");
    for (int i = 0; i < 60; ++i) {
      const double e = 2.0 + 0.01 * ((i * 37) % 50);
      out << json{{"sentence_id", "e" + std::to_string(i)}, {"condition", "coordination"}, {"model", "m"},
                  {"dataset", "coord_subord"}, {"token_surprisals", {e, e + 0.5}}}.dump()
          << "\n";
      out << json{{"sentence_id", "h" + std::to_string(i)}, {"condition", "subordination"}, {"model", "m"},
                  {"dataset", "coord_subord"}, {"token_surprisals", {e + 0.4, e + 0.9}}}.dump()
          << "\n";
    }
  }
  auto s = run("surprisal-stats --input surp.jsonl --out st/r");
  REQUIRE(s.code == 0);
  const auto tests = lingdim::io::read_table(workdir() / "st/r.tests.csv");
  REQUIRE(tests.rows.size() == 1);
  CHECK(tests.rows[0][tests.column("significant")] == true);
  CHECK(tests.rows[0][tests.column("variance")] == "welch");
  const auto summary = lingdim::io::read_table(workdir() / "st/r.summary.json");
  CHECK(summary.rows.size() == 2);
  CHECK(run("surprisal-stats --input surp.jsonl --contrast low:ambiguous --out st/q").code == 1);

  {
    std::ofstream base(workdir() / "base.jsonl"), abl(workdir() / "abl.jsonl");
    for (int i = 0; i < 20; ++i) {
      base << json{{"sentence_id", "s" + std::to_string(i)}, {"ablated_layer", nullptr}, {"predicted_token_id", i}}.dump()
           << "\n";
      for (int layer : {1, 2})
        abl << json{{"sentence_id", "s" + std::to_string(i)}, {"ablated_layer", layer},
                    {"predicted_token_id", layer == 1 || i % 4 ? i : 999}}.dump()
            << "\n";
    }
  }
  auto a = run("ablation-acc --baseline base.jsonl --ablated abl.jsonl --partitions 4 --out ab/acc");
  REQUIRE(a.code == 0);
  const auto acc = json::parse(a.out).at("accuracy");
  CHECK(acc.at(0).at("accuracy") == 1.0);
  CHECK(acc.at(1).at("accuracy") == 0.75);
  {
    std::ofstream stray(workdir() / "stray.jsonl");
    stray << R"({"sentence_id":"zz","ablated_layer":1,"predicted_token_id":1})" << "\n";
  }
  auto miss = run("ablation-acc --baseline base.jsonl --ablated stray.jsonl --out ab/miss");
  CHECK(miss.code == 1);
  CHECK(error_of(miss).at("kind") == "alignment");
}
