#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rgbw/experiment.hpp"
#include "rgbw/io.hpp"

using namespace rgbw;

TEST_CASE("seed lists") {
  CHECK(parse_seed_list("1..4") == std::vector<std::uint64_t>{1, 2, 3, 4});
  CHECK(parse_seed_list("3, 5,8") == std::vector<std::uint64_t>{3, 5, 8});
  CHECK(parse_seed_list("1..2,9") == std::vector<std::uint64_t>{1, 2, 9});
  CHECK_THROWS_AS(parse_seed_list("4..2"), ConfigError);
  CHECK_THROWS_AS(parse_seed_list("a"), ConfigError);
}

TEST_CASE("config text, provenance and key errors") {
  ExperimentConfig cfg = default_config("pack");
  apply_config_text(cfg, "# comment\nn = 1200\n p=0.6  # trailing\nh0 = C4\nseeds = 1..3\n");
  CHECK(cfg.params.at("n") == 1200);
  CHECK(cfg.params.at("p") == doctest::Approx(0.6));
  CHECK(cfg.source.at("n") == "file");
  CHECK(cfg.source.at("gamma") == "default");
  CHECK(cfg.h_family == "C4");
  CHECK(cfg.seeds.size() == 3);
  set_value(cfg, "gamma", "0.2", "flag");
  CHECK(cfg.source.at("gamma") == "flag");

  try {
    apply_config_text(cfg, "bogus = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "bogus");
  }
  try {
    set_value(cfg, "p", "half", "flag");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "p");
  }
  ExperimentConfig bad = default_config("pack");
  bad.params["gamma"] = 0;
  try {
    validate(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "gamma");
  }
  ExperimentConfig unknown = default_config("pack");
  unknown.h_family = "Q3";
  CHECK_THROWS_AS(validate(unknown), ConfigError);
  ExperimentConfig verify = default_config("verify");
  verify.check = "nope";
  CHECK_THROWS_AS(validate(verify), ConfigError);
}

TEST_CASE("parameter sheet") {
  auto sheet = parameter_sheet(2, 0.5, 0.1, 2);
  auto get = [&](const std::string& name) {
    for (const auto& e : sheet)
      if (e.name == name) return e;
    FAIL("missing " << name);
    return SheetEntry{};
  };
  CHECK(get("d").value == doctest::Approx(0.1 * 0.5 / 90));
  CHECK_FALSE(get("d").note.empty());
  CHECK(get("beta_lemma").rule == "beta <= xi^2 / (3026 r^3)");
  CHECK(get("beta_lemma").value == doctest::Approx(0.01 / (3026.0 * 8)));
  CHECK(get("c").value == doctest::Approx(std::pow(get("d").value / 8, 2)));
  CHECK_THROWS_AS(parameter_sheet(2, 0.5, 0.0, 2), PreconditionError);
}

TEST_CASE("named graphs") {
  CHECK(named_graph("K3", 10).edge_count() == 3);
  CHECK(named_graph("C4", 10).n() == 4);
  Graph k122 = named_graph("K1,2,2", 0);
  CHECK(k122.n() == 5);
  CHECK(k122.edge_count() == 8);
  Graph f = named_graph("C4-factor", 10);
  CHECK(f.n() == 10);
  CHECK(f.edge_count() == 8);
  Graph fp = named_graph("C4-factor+path:6", 14);
  CHECK(fp.n() == 14);
  CHECK(fp.edge_count() == 8 + 5);
  CHECK_THROWS(named_graph("X5", 10));
  CHECK_THROWS(named_graph("C4-factor+tree:3", 10));
}

TEST_CASE("edge list and JSON round trips") {
  Graph g = generate_gnp(30, 0.3, Seed{2});
  std::stringstream ss;
  write_edge_list(ss, g);
  Graph back = read_edge_list(ss);
  CHECK(back.edges() == g.edges());
  CHECK(graph_from_json(to_json(g)).edges() == g.edges());
  std::stringstream broken("3 2\n0 1\n1 7\n");
  CHECK_THROWS_AS(read_edge_list(broken), Error);

  Graph k6 = complete_graph(6);
  Packing p = make_packing(k6, complete_graph(3), {{0, 1, 2}});
  Packing q = packing_from_json(Json::parse(to_json(p).dump()));
  CHECK(q.copies == p.copies);
  CHECK(q.uncovered == p.uncovered);
  CHECK(q.h == 3);
}

TEST_CASE("runs are reproducible and rows carry seed and sheet hash") {
  ExperimentConfig cfg = default_config("pack");
  apply_config_text(cfg, "n = 600\np = 0.2\nh0 = K3\nadversary = triangle_blocker\neps = 0.3\nstrict = 0\nseeds = 1..2\n");
  RunOutput a = run_experiment(cfg);
  RunOutput b = run_experiment(cfg);
  CHECK(a.csv == b.csv);
  CHECK(a.results_json == b.results_json);
  const std::string hash = [&] {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(sheet_hash(cfg)));
    return std::string(buf);
  }();
  std::stringstream rows(a.csv);
  std::string line;
  std::getline(rows, line);
  CHECK(line.rfind("seed,sheet,", 0) == 0);
  int count = 0;
  while (std::getline(rows, line)) {
    CHECK(line.find("," + hash + ",") != std::string::npos);
    ++count;
  }
  CHECK(count == 2);
  CHECK(a.metadata_json.find("runtime_ms") != std::string::npos);
  CHECK(a.csv.find("runtime") == std::string::npos);

  ExperimentConfig other = cfg;
  other.params["gamma"] = 0.2;
  CHECK(sheet_hash(other) != sheet_hash(cfg));
}

TEST_CASE("stage errors give a non-zero status") {
  ExperimentConfig empty_blocker = default_config("adversary");
  apply_config_text(empty_blocker, "n = 100\np = 0.5\nadversary = triangle_blocker\nseeds = 1\n");
  RunOutput blocked = run_experiment(empty_blocker);
  CHECK(blocked.status == 1);
  CHECK(blocked.csv.find("error") != std::string::npos);

  ExperimentConfig cfg = default_config("embed");
  apply_config_text(cfg, "n = 120\np = 0.5\nh = K3-factor\nseeds = 1\nstrict = 1\n");
  RunOutput out = run_experiment(cfg);
  CHECK(out.status == 1);
  CHECK(out.csv.find(",0,") != std::string::npos);
}
