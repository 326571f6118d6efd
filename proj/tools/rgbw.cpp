// Command-line runner for the generate / adversary / embed / pack / verify / bench experiments.
#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "rgbw/experiment.hpp"
#include "rgbw/io.hpp"

using namespace rgbw;

namespace {

struct Flags {
  std::map<std::string, std::string> values;
  std::string config;
};

void add_experiment_flags(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "key = value file, applied before flags");
  for (const auto& key : parameter_keys()) sub->add_option("--" + key, flags.values[key]);
  for (const std::string key : {"h", "h0", "adversary", "seeds", "out"}) sub->add_option("--" + key, flags.values[key]);
}

int run(const std::string& command, const std::string& check, CLI::App* sub, const Flags& flags) {
  try {
    ExperimentConfig cfg = default_config(command);
    cfg.check = check;
    if (!flags.config.empty()) apply_config_file(cfg, flags.config);
    for (const auto& [key, value] : flags.values)
      if (sub->count("--" + key)) set_value(cfg, key, value, "flag");
    RunOutput out = run_experiment(cfg);
    write_outputs(cfg, out);
    std::cout << out.csv;
    return out.status;
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilience experiments on dense random graphs"};
  app.require_subcommand(1);
  // "--h" names the H family, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  Flags gen, adv, emb, pack, bench, verify;
  std::string check;
  auto* g = app.add_subcommand("generate", "Sample G(n, p) per seed");
  add_experiment_flags(g, gen);
  auto* a = app.add_subcommand("adversary", "Apply an adversary to G(n, p)");
  add_experiment_flags(a, adv);
  auto* e = app.add_subcommand("embed", "Embed a spanning H into the adversarial host");
  add_experiment_flags(e, emb);
  auto* pk = app.add_subcommand("pack", "Almost-perfect H0-packing of the adversarial host");
  add_experiment_flags(pk, pack);
  auto* bn = app.add_subcommand("bench", "Time host construction and the partition engine");
  add_experiment_flags(bn, bench);
  auto* v = app.add_subcommand("verify", "Probabilistic checks: lemma61, chernoff, turan, spectral");
  v->add_option("check", check, "which check")->required()->check(CLI::IsMember({"lemma61", "chernoff", "turan", "spectral"}));
  add_experiment_flags(v, verify);

  int sr = 2, sdelta = 2;
  double sp = 0.5, sgamma = 0.1, sxi = 0.1;
  auto* sh = app.add_subcommand("sheet", "Print the proof-chain parameter sheet");
  sh->add_option("--r", sr);
  sh->add_option("--p", sp);
  sh->add_option("--gamma", sgamma);
  sh->add_option("--Delta", sdelta);
  sh->add_option("--xi", sxi);

  CLI11_PARSE(app, argc, argv);

  if (*g) return run("generate", "", g, gen);
  if (*a) return run("adversary", "", a, adv);
  if (*e) return run("embed", "", e, emb);
  if (*pk) return run("pack", "", pk, pack);
  if (*bn) return run("bench", "", bn, bench);
  if (*v) return run("verify", check, v, verify);
  try {
    for (const auto& entry : parameter_sheet(sr, sp, sgamma, sdelta, sxi))
      std::cout << entry.name << " = " << fmt(entry.value, 12) << "  [" << entry.rule << "]"
                << (entry.note.empty() ? "" : "  note: " + entry.note) << "\n";
  } catch (const Error& err) {
    std::cerr << "invalid config: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
