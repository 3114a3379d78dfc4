#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "defeq/cli.hpp"

using namespace defeq;

int main(int argc, char** argv) {
  CLI::App app{
      "workbench for mergers, definitional equivalence and intertranslations "
      "of relational first-order theories"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env = std::getenv("DEFEQ_BOUND")) {
    try {
      int v = std::stoi(env);
      if (v < 1) throw std::out_of_range("bound");
      cfg.bound = static_cast<unsigned>(v);
      cfg.bound_explicit = true;
    } catch (const std::exception&) {
      std::cerr << "error: DEFEQ_BOUND must be a positive integer\n";
      return kExitInputError;
    }
  }

  auto* bound_opt =
      app.add_option("-k,--bound", cfg.bound, "maximum model size checked")
          ->check(CLI::PositiveNumber);
  app.add_flag("--json", cfg.json, "emit JSON instead of text");

  std::string t1f, t2f, d12f, d21f, tr12f, tr21f, certf, c23f;
  std::optional<std::string> chain_file;
  bool model_level = false;

  auto* parse_cmd = app.add_subcommand("parse", "parse a theory file and echo it");
  parse_cmd->add_option("theory", t1f, "theory file")->required();

  auto* models_cmd =
      app.add_subcommand("models", "list all models of a theory up to the bound");
  models_cmd->add_option("theory", t1f, "theory file")->required();

  auto* merge_cmd = app.add_subcommand(
      "check-merge", "verify a merger given both definition sets");
  merge_cmd->add_option("left", t1f, "left theory file")->required();
  merge_cmd->add_option("right", t2f, "right theory file")->required();
  merge_cmd->add_option("left-delta", d12f, "definitions over the left theory")
      ->required();
  merge_cmd->add_option("right-delta", d21f, "definitions over the right theory")
      ->required();

  auto* search_cmd = app.add_subcommand(
      "search-merge", "search for defining formulas that merge two theories");
  search_cmd->add_option("left", t1f, "left theory file")->required();
  search_cmd->add_option("right", t2f, "right theory file")->required();
  search_cmd->add_option("--depth", cfg.depth, "candidate formula depth");

  auto* defeq_cmd = app.add_subcommand(
      "check-defeq", "check definitional equivalence (via a chain, or by search)");
  defeq_cmd->add_option("left", t1f, "left theory file")->required();
  defeq_cmd->add_option("right", t2f, "right theory file")->required();
  defeq_cmd->add_option("--chain", chain_file, "chain manifest file");
  defeq_cmd->add_option("--depth", cfg.depth, "search depth when no chain is given");

  auto* itc_cmd = app.add_subcommand(
      "check-intertrans", "verify a pair of translations as an intertranslation");
  itc_cmd->add_option("left", t1f, "left theory file")->required();
  itc_cmd->add_option("right", t2f, "right theory file")->required();
  itc_cmd->add_option("forward", tr12f, "translation left -> right")->required();
  itc_cmd->add_option("backward", tr21f, "translation right -> left")->required();
  itc_cmd->add_flag("--model-level", model_level,
                    "also check the induced model correspondence");

  auto* mm_cmd = app.add_subcommand(
      "check-model-merge",
      "check that a merger induces inverse maps between the model classes");
  mm_cmd->add_option("left", t1f, "left theory file")->required();
  mm_cmd->add_option("right", t2f, "right theory file")->required();
  mm_cmd->add_option("left-delta", d12f, "definitions over the left theory")
      ->required();
  mm_cmd->add_option("right-delta", d21f, "definitions over the right theory")
      ->required();

  auto* rename_cmd = app.add_subcommand(
      "rename", "emit a fresh renaming of a theory plus its merger certificate");
  rename_cmd->add_option("theory", t1f, "theory file")->required();

  auto* compose_cmd = app.add_subcommand(
      "compose", "compose two mergers that share their middle theory");
  compose_cmd->add_option("first", certf, "merge certificate JSON")->required();
  compose_cmd->add_option("second", c23f, "merge certificate JSON")->required();

  auto* demo_cmd = app.add_subcommand(
      "demo-counterexample",
      "two contradictory theories that are definitionally equivalent but not mergeable");

  auto* verify_cmd =
      app.add_subcommand("verify", "recheck a stored certificate of any kind");
  verify_cmd->add_option("certificate", certf, "certificate JSON file")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }
  if (bound_opt->count() > 0) cfg.bound_explicit = true;

  try {
    if (parse_cmd->parsed()) return cli::cmd_parse(t1f, cfg, std::cout);
    if (models_cmd->parsed()) return cli::cmd_models(t1f, cfg, std::cout);
    if (merge_cmd->parsed())
      return cli::cmd_check_merge(t1f, t2f, d12f, d21f, cfg, std::cout);
    if (search_cmd->parsed())
      return cli::cmd_search_merge(t1f, t2f, cfg, std::cout);
    if (defeq_cmd->parsed())
      return cli::cmd_check_defeq(t1f, t2f, chain_file, cfg, std::cout);
    if (itc_cmd->parsed())
      return cli::cmd_check_intertrans(t1f, t2f, tr12f, tr21f, model_level, cfg,
                                       std::cout);
    if (mm_cmd->parsed())
      return cli::cmd_check_model_merge(t1f, t2f, d12f, d21f, cfg, std::cout);
    if (rename_cmd->parsed()) return cli::cmd_rename(t1f, cfg, std::cout);
    if (compose_cmd->parsed())
      return cli::cmd_compose(certf, c23f, cfg, std::cout);
    if (demo_cmd->parsed()) return cli::cmd_demo(cfg, std::cout);
    if (verify_cmd->parsed()) return cli::cmd_verify(certf, cfg, std::cout);
  } catch (const EnumerationLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
