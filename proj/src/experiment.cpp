#include "rgbw/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "rgbw/bandwidth.hpp"
#include "rgbw/embedder.hpp"
#include "rgbw/io.hpp"
#include "rgbw/packing.hpp"
#include "rgbw/probharness.hpp"
#include "rgbw/regularity.hpp"

namespace rgbw {

namespace {

const std::vector<std::pair<std::string, double>>& defaults() {
  static const std::vector<std::pair<std::string, double>> d = {
      {"n", 400},           {"p", 0.5},
      {"r", 0},             // 0: chromatic number of H
      {"gamma", 0.1},       {"Delta", 0},  // 0: read off H
      {"beta", 0},          // 0: bandwidth(H) / n
      {"xi", 0.1},          {"eps", 0.2},
      {"xi0", 0.05},        {"d", -1},  // < 0: gamma p / 90
      {"alpha", 0.1},       {"c", -1},  // < 0: (d/8)^Delta
      {"C", 1},             {"k", 0},   // 0: engine chooses
      {"floor", -1},        // prune floor factor; < 0: 1 - 1/r + gamma
      {"eps_bad", 0.3},     {"beta_xi_constant", 0.5},
      {"min_part_factor", 20}, {"min_indep", 64},
      {"strict", 1},        {"spanning", 1},
      {"b_cover", 0},       {"trials", 10000},
      {"lambda", 15},       {"regular_degree", 0},
      {"write_graphs", 0},  {"full_json", 0},
  };
  return d;
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "not a number: '" + text + "'");
  }
}

const std::vector<std::string> kCommands = {"generate", "adversary", "embed", "pack", "verify", "bench"};
const std::vector<std::string> kChecks = {"lemma61", "chernoff", "turan", "spectral"};
const std::vector<std::string> kAdversaries = {"none", "prune_to_floor", "triangle_blocker", "wipe"};

}  // namespace

const std::vector<std::string>& parameter_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, v] : defaults()) k.push_back(name);
    return k;
  }();
  return keys;
}

ExperimentConfig default_config(const std::string& command) {
  ExperimentConfig cfg;
  cfg.command = command;
  for (const auto& [name, v] : defaults()) {
    cfg.params[name] = v;
    cfg.source[name] = "default";
  }
  if (const char* env = std::getenv("RGBW_OUT"); env && *env) cfg.out_dir = env;
  if (command == "generate") cfg.params["write_graphs"] = 1;
  return cfg;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string part;
  auto num = [&](const std::string& s) -> std::uint64_t {
    std::string t = trim(s);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
      throw ConfigError("seeds", "bad seed '" + t + "'");
    return std::stoull(t);
  };
  while (std::getline(ss, part, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(num(part));
      continue;
    }
    std::uint64_t a = num(part.substr(0, dots)), b = num(part.substr(dots + 2));
    if (b < a) throw ConfigError("seeds", "empty range '" + trim(part) + "'");
    if (b - a > 1'000'000) throw ConfigError("seeds", "range too long");
    for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError("seeds", "no seeds");
  return out;
}

void set_value(ExperimentConfig& cfg, const std::string& key, const std::string& raw, const std::string& source) {
  const std::string value = trim(raw);
  if (key == "h" || key == "h0") {
    cfg.h_family = value;
  } else if (key == "adversary") {
    if (std::find(kAdversaries.begin(), kAdversaries.end(), value) == kAdversaries.end())
      throw ConfigError(key, "unknown adversary '" + value + "'");
    cfg.adversary = value;
  } else if (key == "seeds") {
    cfg.seeds = parse_seed_list(value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "check") {
    cfg.check = value;
  } else if (key == "command") {
    cfg.command = value;
  } else if (cfg.params.count(key)) {
    cfg.params[key] = parse_number(key, value);
  } else {
    throw ConfigError(key, "unknown key");
  }
  cfg.source[key] = source;
}

void apply_config_text(ExperimentConfig& cfg, const std::string& text, const std::string& source) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    set_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1), source);
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), "file");
}

void validate(const ExperimentConfig& cfg) {
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
    throw ConfigError("command", "unknown command '" + cfg.command + "'");
  if (cfg.command == "verify" && std::find(kChecks.begin(), kChecks.end(), cfg.check) == kChecks.end())
    throw ConfigError("check", "unknown check '" + cfg.check + "'");
  const auto& P = cfg.params;
  auto need = [&](const std::string& key, bool ok, const std::string& what) {
    if (!ok) throw ConfigError(key, what + " (got " + fmt(P.at(key)) + ")");
  };
  need("n", P.at("n") >= 1 && P.at("n") <= 2e6 && std::floor(P.at("n")) == P.at("n"), "integer in [1, 2e6]");
  need("p", P.at("p") > 0 && P.at("p") <= 1, "must lie in (0, 1]");
  need("gamma", P.at("gamma") > 0 && P.at("gamma") < 1, "must lie in (0, 1)");
  need("eps", P.at("eps") > 0 && P.at("eps") < 1, "must lie in (0, 1)");
  need("xi", P.at("xi") > 0 && P.at("xi") < 1, "must lie in (0, 1)");
  need("xi0", P.at("xi0") > 0 && P.at("xi0") < 1, "must lie in (0, 1)");
  need("alpha", P.at("alpha") > 0, "must be positive");
  need("C", P.at("C") > 0, "must be positive");
  need("r", P.at("r") >= 0 && std::floor(P.at("r")) == P.at("r"), "non-negative integer");
  need("k", P.at("k") >= 0 && std::floor(P.at("k")) == P.at("k"), "non-negative integer");
  need("Delta", P.at("Delta") >= 0, "non-negative");
  need("beta", P.at("beta") >= 0 && P.at("beta") < 1, "must lie in [0, 1)");
  need("trials", P.at("trials") >= 1, "at least 1");
  need("lambda", P.at("lambda") >= 0, "non-negative");
  need("eps_bad", P.at("eps_bad") > 0, "must be positive");
  if (cfg.command == "verify" && cfg.check == "chernoff")
    need("lambda", P.at("lambda") <= P.at("n") * P.at("p"), "must be at most n p");
  if (cfg.command == "verify" && cfg.check == "spectral" && P.at("regular_degree") > 0) {
    const double n = P.at("n"), d = P.at("regular_degree");
    need("regular_degree", d < n && std::fmod(n * d, 2.0) == 0.0, "needs d < n and n d even");
  }
  if (cfg.command == "embed" || cfg.command == "pack" || (cfg.command == "verify" && cfg.check == "turan")) {
    try {
      named_graph(cfg.h_family, static_cast<Vertex>(P.at("n")));
    } catch (const Error& e) {
      throw ConfigError("h", e.what());
    }
  }
}

std::vector<SheetEntry> parameter_sheet(int r, double p, double gamma, int Delta, double xi) {
  if (gamma <= 0.0) throw PreconditionError("parameter_sheet: gamma must be positive");
  if (r < 1) throw PreconditionError("parameter_sheet: r must be at least 1");
  if (p <= 0.0 || p > 1.0) throw PreconditionError("parameter_sheet: p must lie in (0, 1]");
  if (Delta < 1) throw PreconditionError("parameter_sheet: Delta must be at least 1");
  std::vector<SheetEntry> s;
  const double d = gamma * p / 90.0;
  s.push_back({"min_degree_factor", 1.0 - 1.0 / r + gamma, "delta(G') >= (1 - 1/r + gamma) n p", ""});
  s.push_back({"d", d, "d <= gamma p / 90", d < 0.01 ? "likely too small for desk scale; override recommended" : ""});
  const double c = std::pow(d / 8.0, Delta);
  s.push_back({"c", c, "c <= (d/8)^Delta", ""});
  const double eps = 0.5 * std::min(d * p / (6.0 * r * Delta), c);
  s.push_back({"eps", eps, "eps <= min{d p / (6 r Delta), (d/8)^Delta} / 2 (unspecified lemma terms omitted)", ""});
  s.push_back({"xi", xi, "xi: configured (its proof-chain bound involves unspecified constants)", ""});
  s.push_back({"beta_lemma", xi * xi / (3026.0 * r * r * r), "beta <= xi^2 / (3026 r^3)", ""});
  s.push_back({"beta_theorem", xi * xi / (6052.0 * r * r * r), "beta <= xi^2 / (6052 r^3)", ""});
  s.push_back({"b0_cap", 1.0 / (xi * xi / (6052.0 * r * r * r) * std::pow(Delta, 5)),
               "b0 <= 1 / (beta Delta^5) at the theorem beta", ""});
  return s;
}

std::uint64_t sheet_hash(const ExperimentConfig& cfg) {
  std::string dump = cfg.command + "|" + cfg.check + "|" + cfg.h_family + "|" + cfg.adversary;
  for (const auto& key : parameter_keys()) dump += "|" + key + "=" + fmt(cfg.params.at(key), 9);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

int parse_int(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw PreconditionError("named graph: bad " + what + " '" + text + "'");
  return std::stoi(text);
}

Graph base_graph(const std::string& name) {
  if (name.size() < 2) throw PreconditionError("named graph: unknown '" + name + "'");
  const char kind = name[0];
  const std::string rest = name.substr(1);
  if (kind == 'K' && rest.find(',') != std::string::npos) {
    std::vector<int> sizes;
    std::stringstream ss(rest);
    std::string part;
    while (std::getline(ss, part, ',')) sizes.push_back(parse_int(part, "part size"));
    return complete_multipartite(sizes);
  }
  const int t = parse_int(rest, "order");
  if (t < 1 || t > 64) throw PreconditionError("named graph: order out of range in '" + name + "'");
  if (kind == 'K') return complete_graph(t);
  if (kind == 'C' && t >= 3) return cycle_graph(t);
  if (kind == 'P') return path_graph(t);
  throw PreconditionError("named graph: unknown '" + name + "'");
}

}  // namespace

Graph named_graph(const std::string& family, Vertex n) {
  const auto factor = family.find("-factor");
  if (factor == std::string::npos) return base_graph(family);
  Graph base = base_graph(family.substr(0, factor));
  std::string tail = family.substr(factor + 7);
  Vertex path = 0;
  if (!tail.empty()) {
    if (tail.rfind("+path:", 0) != 0) throw PreconditionError("named graph: unknown suffix '" + tail + "'");
    path = parse_int(tail.substr(6), "path length");
  }
  if (path > n) throw PreconditionError("named graph: path longer than n");
  const Vertex rest = n - path;
  Graph g = disjoint_copies(base, rest / base.n());
  if (path > 0) g = disjoint_union(g, path_graph(path));
  if (g.n() < n) g = disjoint_union(g, Graph(n - g.n()));
  return g;
}

AdversaryResult make_host(const ExperimentConfig& cfg, std::uint64_t seed, int r) {
  const Vertex n = static_cast<Vertex>(cfg.params.at("n"));
  const double p = cfg.params.at("p");
  Graph g = generate_gnp(n, p, Seed{seed});
  const Seed adv{seed * 1000003ULL + 1};
  if (cfg.adversary == "prune_to_floor") {
    double factor = cfg.params.at("floor");
    if (factor < 0) factor = 1.0 - 1.0 / std::max(1, r) + cfg.params.at("gamma");
    return prune_to_floor(g, static_cast<int>(std::ceil(factor * n * p)), adv);
  }
  if (cfg.adversary == "triangle_blocker") return triangle_blocker(g, p, cfg.params.at("eps"), adv);
  if (cfg.adversary == "wipe") return wipe_neighborhood(g, 0);
  AdversaryResult res;
  res.report.realized_min_degree = g.min_degree();
  res.graph = std::move(g);
  return res;
}

namespace {

int chromatic_number(const Graph& h) {
  if (h.edge_count() == 0) return 1;
  for (int r = 2; r <= h.n(); ++r) {
    try {
      proper_coloring(h, r);
      return r;
    } catch (const Error&) {  // no coloring found with r colors
    }
  }
  return h.n();
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Csv {
  std::ostringstream out;
  explicit Csv(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }
};

std::string b(bool x) { return x ? "1" : "0"; }
template <typename T>
std::string s(T x) {
  return std::to_string(x);
}

EmbedParams embed_params(const ExperimentConfig& cfg, int r, bool strict) {
  const auto& P = cfg.params;
  EmbedParams e;
  e.r = r;
  e.gamma = P.at("gamma");
  e.p = P.at("p");
  e.eps = P.at("eps");
  e.xi0 = P.at("xi0");
  e.beta = P.at("beta");
  e.xi = P.at("xi");
  e.c = P.at("c");
  e.max_degree = static_cast<int>(P.at("Delta"));
  e.require_min_degree = strict;
  e.engine.k = static_cast<int>(P.at("k"));
  e.engine.d = P.at("d");
  e.engine.eps_bad = P.at("eps_bad");
  e.engine.require_min_degree = strict;
  e.plan.beta_xi_constant = P.at("beta_xi_constant");
  e.plan.min_part_factor = P.at("min_part_factor");
  e.plan.min_indep_per_column = static_cast<int>(P.at("min_indep"));
  return e;
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  validate(cfg);
  // The blocker output sits below the packing threshold by design; report instead of refusing.
  if (cfg.adversary == "triangle_blocker" && cfg.source["strict"] == "default") {
    cfg.params["strict"] = 0;
    cfg.source["strict"] = "default(adversary)";
  }
  const auto& P = cfg.params;
  const Vertex n = static_cast<Vertex>(P.at("n"));
  const double p = P.at("p");
  const bool strict = P.at("strict") != 0;
  const std::string sheet = hex(sheet_hash(cfg));

  RunOutput out;
  Json results{{"schema", "rgbw.results/1"}, {"command", cfg.command}, {"check", cfg.check}, {"sheet_hash", sheet}};
  Json params = Json::object();
  for (const auto& key : parameter_keys())
    params[key] = Json{{"value", P.at(key)}, {"source", cfg.source.at(key)}};
  results["params"] = params;
  results["h_family"] = cfg.h_family;
  results["adversary"] = cfg.adversary;
  Json meta{{"schema", "rgbw.meta/1"}, {"started_at", timestamp()}, {"command", cfg.command}};
  Json runtimes = Json::array();
  Json rows = Json::array();
  Json notes = Json::array();

  std::unique_ptr<Csv> csv;
  Graph hgraph;
  int r = static_cast<int>(P.at("r"));
  if (cfg.command == "embed" || cfg.command == "pack") {
    hgraph = named_graph(cfg.h_family, n);
    if (r == 0) r = chromatic_number(hgraph);
    const int delta = std::max(1, P.at("Delta") > 0 ? static_cast<int>(P.at("Delta")) : hgraph.max_degree());
    Json sh = Json::array();
    for (const auto& e : parameter_sheet(std::max(1, r), p, P.at("gamma"), delta, P.at("xi")))
      sh.push_back(Json{{"name", e.name}, {"value", e.value}, {"rule", e.rule}, {"note", e.note}});
    results["sheet"] = sh;
    if (cfg.command == "pack" && n % hgraph.n() != 0)
      notes.push_back("n is not a multiple of h; a perfect packing is impossible");
  }
  if (r == 0) r = 2;
  results["r"] = r;

  if (cfg.command == "generate") {
    csv = std::make_unique<Csv>(std::vector<std::string>{"seed", "sheet", "n", "p", "edges", "min_degree", "max_degree"});
  } else if (cfg.command == "adversary") {
    csv = std::make_unique<Csv>(std::vector<std::string>{"seed", "sheet", "n", "p", "adversary", "deleted", "min_degree",
                                                         "blocked"});
  } else if (cfg.command == "embed") {
    csv = std::make_unique<Csv>(std::vector<std::string>{"seed", "sheet", "n", "p", "r", "adversary", "h", "success",
                                                         "stage", "embedded", "bad_set", "resize_moves"});
  } else if (cfg.command == "pack") {
    csv = std::make_unique<Csv>(std::vector<std::string>{"seed", "sheet", "n", "p", "r", "adversary", "h0", "route",
                                                         "uncovered", "copies", "bad_set", "b_residual", "min_degree_ok",
                                                         "status"});
  } else if (cfg.command == "bench") {
    csv = std::make_unique<Csv>(std::vector<std::string>{"seed", "sheet", "n", "p", "r", "adversary", "k", "bad_set",
                                                         "realized_density", "status"});
  } else if (cfg.check == "lemma61") {
    csv = std::make_unique<Csv>(std::vector<std::string>{"seed", "sheet", "n", "p", "property", "trials", "failures",
                                                         "violations", "worst_deviation", "fitted_rate"});
  } else if (cfg.check == "chernoff") {
    csv = std::make_unique<Csv>(std::vector<std::string>{"seed", "sheet", "n", "p", "lambda", "trials", "hits",
                                                         "empirical", "bound", "exact", "exceeds_bound", "matches_exact"});
  } else if (cfg.check == "turan") {
    csv = std::make_unique<Csv>(std::vector<std::string>{"seed", "sheet", "n", "p", "gamma", "h", "chi", "threshold",
                                                         "edges_after", "found"});
  } else {
    csv = std::make_unique<Csv>(std::vector<std::string>{"seed", "sheet", "n", "regular", "lambda1", "lambda2",
                                                         "lambda_min", "lambda", "converged", "mixing_trials",
                                                         "mixing_failures", "worst_ratio"});
  }

  if (P.at("write_graphs") != 0) std::filesystem::create_directories(cfg.out_dir);

  const std::string header = csv->out.str();
  const std::size_t columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  for (std::uint64_t seed : cfg.seeds) {
    const auto t0 = Clock::now();
    Json row{{"seed", seed}};
    const std::string sd = s(seed);
    try {
    if (cfg.command == "generate" || cfg.command == "adversary") {
      AdversaryResult host = cfg.command == "generate" ? AdversaryResult{generate_gnp(n, p, Seed{seed}), {}}
                                                       : make_host(cfg, seed, r);
      const Graph& g = host.graph;
      if (cfg.command == "generate") {
        csv->row({sd, sheet, s(n), fmt(p), s(g.edge_count()), s(g.min_degree()), s(g.max_degree())});
      } else {
        csv->row({sd, sheet, s(n), fmt(p), cfg.adversary, s(host.report.deleted_edge_count),
                  s(host.report.realized_min_degree), s(host.report.blocked_set.size())});
        row["blocked"] = host.report.blocked_set;
      }
      row["edges"] = g.edge_count();
      if (P.at("write_graphs") != 0) {
        std::ofstream f(std::filesystem::path(cfg.out_dir) / (cfg.command + "_graph_" + sd + ".txt"));
        write_edge_list(f, g);
      }
    } else if (cfg.command == "embed") {
      AdversaryResult host = make_host(cfg, seed, r);
      EmbedParams ep = embed_params(cfg, r, strict);
      try {
        auto res = embed_spanning(host.graph, hgraph, ep, Seed{seed * 1000003ULL + 2});
        csv->row({sd, sheet, s(n), fmt(p), s(r), cfg.adversary, cfg.h_family, "1", "", s(res.embedding.embedded_count()),
                  s(res.partition.B.size()), s(res.resize_moves)});
        row["success"] = true;
        if (P.at("full_json") != 0) row["embedding"] = to_json(res.embedding);
      } catch (const StageError& e) {
        csv->row({sd, sheet, s(n), fmt(p), s(r), cfg.adversary, cfg.h_family, "0", e.stage(), "0", "", ""});
        row["success"] = false;
        row["error"] = e.what();
        out.status = 1;
      }
    } else if (cfg.command == "pack") {
      AdversaryResult host = make_host(cfg, seed, r);
      PackParams pp;
      pp.r = r;
      pp.gamma = P.at("gamma");
      pp.p = p;
      pp.eps = P.at("eps");
      pp.xi0 = P.at("xi0");
      pp.require_min_degree = strict;
      pp.b_cover_threshold = static_cast<int>(P.at("b_cover"));
      pp.spanning_route = P.at("spanning") != 0;
      pp.embed = embed_params(cfg, r, strict);
      pp.engine = pp.embed.engine;
      try {
        auto res = almost_perfect_pack(host.graph, hgraph, pp, Seed{seed * 1000003ULL + 2});
        csv->row({sd, sheet, s(n), fmt(p), s(r), cfg.adversary, cfg.h_family, res.report.route,
                  s(res.packing.uncovered.size()), s(res.packing.size()), s(res.report.bad_set),
                  s(res.report.b_residual), b(res.report.min_degree_ok), "ok"});
        row["uncovered"] = res.packing.uncovered;
        row["blocked"] = host.report.blocked_set;
        row["column_failures"] = res.report.column_failures;
        row["spanning_failure"] = res.report.spanning_failure;
        if (P.at("full_json") != 0) row["packing"] = to_json(res.packing);
      } catch (const Error& e) {
        csv->row({sd, sheet, s(n), fmt(p), s(r), cfg.adversary, cfg.h_family, "", "", "", "", "", "", "error"});
        row["error"] = e.what();
        out.status = 1;
      }
    } else if (cfg.command == "bench") {
      const auto tg = Clock::now();
      AdversaryResult host = make_host(cfg, seed, r);
      const double host_ms = ms_since(tg);
      EmbedParams ep = embed_params(cfg, r, strict);
      const auto te = Clock::now();
      try {
        auto eng = build_partition_engine(host.graph, r, ep.gamma, p, ep.eps, ep.xi0, Seed{seed * 1000003ULL + 2},
                                          ep.engine);
        csv->row({sd, sheet, s(n), fmt(p), s(r), cfg.adversary, s(eng.partition.k), s(eng.partition.B.size()),
                  fmt(eng.realized_density), "ok"});
      } catch (const Error& e) {
        csv->row({sd, sheet, s(n), fmt(p), s(r), cfg.adversary, "", "", "", "error"});
        row["error"] = e.what();
        out.status = 1;
      }
      runtimes.push_back(Json{{"seed", seed}, {"host_ms", host_ms}, {"engine_ms", ms_since(te)}});
    } else if (cfg.check == "lemma61") {
      Graph g = generate_gnp(n, p, Seed{seed});
      Lemma61Config lc;
      lc.p = p;
      lc.alpha = P.at("alpha");
      lc.C = P.at("C");
      for (const auto& rep : verify_lemma61(g, lc, Seed{seed * 1000003ULL + 3})) {
        csv->row({sd, sheet, s(n), fmt(p), rep.property, s(rep.trials), s(rep.failures), s(rep.violations),
                  fmt(rep.worst_deviation), fmt(rep.fitted_rate)});
        row[rep.property] = to_json(rep);
      }
    } else if (cfg.check == "chernoff") {
      auto rep = chernoff_tail_check(n, p, P.at("lambda"), static_cast<std::size_t>(P.at("trials")), Seed{seed});
      csv->row({sd, sheet, s(n), fmt(p), fmt(P.at("lambda")), s(rep.check.trials), s(rep.hits), fmt(rep.empirical, 9),
                fmt(rep.bound, 9), fmt(rep.exact_tail, 9), b(rep.exceeds_bound), b(rep.matches_exact)});
    } else if (cfg.check == "turan") {
      Graph g = generate_gnp(n, p, Seed{seed});
      auto rep = random_turan_check(g, named_graph(cfg.h_family, n), p, P.at("gamma"), Seed{seed * 1000003ULL + 1});
      csv->row({sd, sheet, s(n), fmt(p), fmt(P.at("gamma")), cfg.h_family, s(rep.chi), s(rep.threshold),
                s(rep.edges_after), b(rep.found)});
    } else {
      const int deg = static_cast<int>(P.at("regular_degree"));
      Graph g = deg > 0 ? random_regular(n, deg, Seed{seed}) : generate_gnp(n, p, Seed{seed});
      auto prof = second_eigenvalue(g);
      const bool exhaustive = n <= 12;
      auto mix = expander_mixing_check(g, prof.lambda, exhaustive ? MixingMode::Exhaustive : MixingMode::Sampled,
                                       static_cast<std::size_t>(P.at("trials")), Seed{seed * 1000003ULL + 4});
      csv->row({sd, sheet, s(n), b(prof.regular), fmt(prof.lambda1), fmt(prof.lambda2), fmt(prof.lambda_min),
                fmt(prof.lambda), b(prof.converged), s(mix.check.trials), s(mix.check.failures), fmt(mix.worst_ratio)});
      row["profile"] = to_json(prof);
    }
    } catch (const Error& e) {
      // Host construction or a check failed outright: keep the row, flag it.
      std::vector<std::string> cells(columns);
      cells[0] = sd;
      cells[1] = sheet;
      cells.back() = "error";
      csv->row(cells);
      row["error"] = e.what();
      out.status = 1;
    }
    rows.push_back(row);
    if (cfg.command != "bench") runtimes.push_back(Json{{"seed", seed}, {"runtime_ms", ms_since(t0)}});
  }
  results["rows"] = rows;
  results["notes"] = notes;
  meta["finished_at"] = timestamp();
  meta["runtimes"] = runtimes;
  meta["sheet_hash"] = sheet;
  out.csv = csv->out.str();
  out.results_json = results.dump(2) + "\n";
  out.metadata_json = meta.dump(2) + "\n";
  return out;
}

void write_outputs(const ExperimentConfig& cfg, const RunOutput& out) {
  std::filesystem::create_directories(cfg.out_dir);
  std::string stem = cfg.command == "verify" ? "verify_" + cfg.check : cfg.command;
  const auto dir = std::filesystem::path(cfg.out_dir);
  std::ofstream(dir / (stem + ".csv")) << out.csv;
  std::ofstream(dir / (stem + ".json")) << out.results_json;
  std::ofstream(dir / (stem + ".meta.json")) << out.metadata_json;
}

}  // namespace rgbw
