#include "rgbw/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace rgbw {

void write_edge_list(std::ostream& out, const Graph& g) {
  auto edges = g.edges();
  out << g.n() << ' ' << edges.size() << '\n';
  for (auto [a, b] : edges) out << a << ' ' << b << '\n';
}

Graph read_edge_list(std::istream& in) {
  long long n = -1, m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw Error("edge list: bad header");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long a, b;
    if (!(in >> a >> b)) throw Error("edge list: truncated at edge " + std::to_string(i));
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw Error("edge list: bad edge " + std::to_string(i));
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  return Graph::from_edges(static_cast<Vertex>(n), std::move(edges));
}

Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  return Json{{"n", g.n()}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<Vertex>(), e.at(1).get<Vertex>());
  return Graph::from_edges(j.at("n").get<Vertex>(), std::move(edges));
}

Json to_json(const Packing& p) {
  return Json{{"h", p.h},
              {"copy_count", p.copies.size()},
              {"uncovered_count", p.uncovered.size()},
              {"copies", p.copies},
              {"uncovered", p.uncovered}};
}

Packing packing_from_json(const Json& j) {
  Packing p;
  p.h = j.at("h").get<int>();
  p.copies = j.at("copies").get<std::vector<Copy>>();
  p.uncovered = j.at("uncovered").get<VertexSet>();
  return p;
}

Json to_json(const Embedding& e) {
  Json bad = Json::array();
  for (auto [b, w] : e.bad_assignment) bad.push_back({b, w});
  return Json{{"embedded", e.embedded_count()}, {"total", e.is_total()}, {"map", e.g},
              {"W_B", e.W_B},               {"Z", e.Z},                {"bad_assignment", bad}};
}

Json to_json(const CheckReport& r) {
  return Json{{"property", r.property},   {"trials", r.trials}, {"failures", r.failures},
              {"worst_deviation", r.worst_deviation}, {"violations", r.violations},
              {"fitted_rate", r.fitted_rate}, {"alpha", r.alpha}, {"C", r.C},
              {"eps", r.eps},             {"seed", r.seed}};
}

Json to_json(const SpectralProfile& s) {
  return Json{{"n", s.n},           {"d", s.d},           {"regular", s.regular},
              {"lambda1", s.lambda1}, {"lambda2", s.lambda2}, {"lambda_min", s.lambda_min},
              {"lambda", s.lambda}, {"iterations", s.iterations}, {"residual", s.residual},
              {"converged", s.converged}};
}

std::string fmt(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  std::string s = buf;
  if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) s = s.substr(s[0] == '-' ? 1 : 0);
  return s;
}

}  // namespace rgbw
