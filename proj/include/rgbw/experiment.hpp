#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rgbw/adversary.hpp"
#include "rgbw/graph.hpp"

namespace rgbw {

/// Invalid configuration; key() names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& detail)
      : Error(key + ": " + detail), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ExperimentConfig {
  std::string command;  // generate, adversary, embed, pack, verify, bench
  std::string check;    // verify only: lemma61, chernoff, turan, spectral
  std::map<std::string, double> params;
  std::map<std::string, std::string> source;  // "default", "file" or "flag" per key
  std::string h_family = "C4";
  std::string adversary = "none";
  std::vector<std::uint64_t> seeds{1};
  std::string out_dir = ".";
};

/// Numeric keys accepted by set_value, in sheet order.
const std::vector<std::string>& parameter_keys();

/// Defaults for a command; out_dir from RGBW_OUT when set.
ExperimentConfig default_config(const std::string& command);

/// Sets one key from text. Keys: every parameter key plus h, h0, adversary, seeds, out, check.
void set_value(ExperimentConfig& cfg, const std::string& key, const std::string& value, const std::string& source);

/// `key = value` lines; '#' starts a comment.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_config_text(ExperimentConfig& cfg, const std::string& text, const std::string& source = "file");

/// Range checks; throws ConfigError naming the key.
void validate(const ExperimentConfig& cfg);

/// "1..10", "3,5,8", "1..3,9".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

struct SheetEntry {
  std::string name;
  double value = 0.0;
  std::string rule;
  std::string note;
};

/// Proof-chain defaults; advisory, experiments may override every value.
std::vector<SheetEntry> parameter_sheet(int r, double p, double gamma, int Delta, double xi = 0.1);

/// FNV-1a of the canonical parameter dump (command, family, adversary, params).
std::uint64_t sheet_hash(const ExperimentConfig& cfg);

/// Named graphs: K<t>, C<t>, P<t>, K<a>,<b>,... (complete multipartite),
/// <base>-factor (n/h copies plus isolated rest), <base>-factor+path:<L>.
Graph named_graph(const std::string& family, Vertex n);

/// G(n, p) from `seed`, then the configured adversary.
AdversaryResult make_host(const ExperimentConfig& cfg, std::uint64_t seed, int r);

struct RunOutput {
  std::string csv;            // header plus one row per seed (per property for verify)
  std::string results_json;   // schema rgbw.results/1
  std::string metadata_json;  // schema rgbw.meta/1: timestamps, runtimes, provenance
  int status = 0;             // 1 when any seed hit a stage error
};

RunOutput run_experiment(const ExperimentConfig& cfg);

/// Writes <out>/<command>.csv, .json and .meta.json.
void write_outputs(const ExperimentConfig& cfg, const RunOutput& out);

}  // namespace rgbw
