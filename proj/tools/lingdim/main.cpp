// lingdim: command-line front end.
//
// Every failure ends with a single JSON object on stderr,
//   {"error": {"kind": "...", "message": "...", "subcommand": "..."}}
// and a nonzero exit status (1 runtime error, 2 usage error, 3 result failed
// verification). Nothing is written when a run fails before its outputs are
// complete; outputs are renamed into place only once fully written.

#include <iostream>

#include "common.hpp"

namespace {

std::string active_subcommand(const CLI::App& app) {
  const auto subs = app.get_subcommands();
  return subs.empty() ? std::string() : subs.front()->get_name();
}

int fail(const std::string& kind, const std::string& message, const std::string& sub,
         const nlohmann::json& report = nullptr) {
  nlohmann::json err;
  err["error"]["kind"] = kind;
  err["error"]["message"] = message;
  err["error"]["subcommand"] = sub;
  if (!report.is_null()) err["error"]["report"] = report;
  std::cerr << err.dump() << "\n";
  return kind == "usage" ? lingdim::cli::kExitUsage
         : kind == "verification" ? lingdim::cli::kExitVerification
                                  : lingdim::cli::kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lingdim::cli;
  CLI::App app{"Intrinsic-dimension and information-imbalance analysis of layerwise LLM representations"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  register_gen(app);
  register_check(app);
  register_id_profile(app);
  register_imbalance(app);
  register_peaks(app);
  register_validate(app);
  register_synth(app);
  register_surprisal_stats(app);
  register_ablation_acc(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), active_subcommand(app));
  } catch (const VerificationFailed& e) {
    return fail("verification", e.what(), active_subcommand(app), e.report());
  } catch (const lingdim::Error& e) {
    return fail(e.kind(), e.what(), active_subcommand(app));
  } catch (const nlohmann::json::exception& e) {
    return fail("validation", e.what(), active_subcommand(app));
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io", e.what(), active_subcommand(app));
  } catch (const std::exception& e) {
    return fail("internal", e.what(), active_subcommand(app));
  }
  return kExitOk;
}
