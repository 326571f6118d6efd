#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rgbw/embedder.hpp"
#include "rgbw/graph.hpp"
#include "rgbw/packing.hpp"
#include "rgbw/probharness.hpp"

namespace rgbw {

using Json = nlohmann::ordered_json;

/// Edge-list text: "n m" then one "u v" line per edge, u < v.
void write_edge_list(std::ostream& out, const Graph& g);
/// Throws Error on malformed input (bad header, vertex out of range, loops).
Graph read_edge_list(std::istream& in);

Json to_json(const Graph& g);
Graph graph_from_json(const Json& j);

/// Copies as H0-vertex -> host-vertex arrays, plus uncovered and counts.
Json to_json(const Packing& p);
Packing packing_from_json(const Json& j);

Json to_json(const Embedding& e);
Json to_json(const CheckReport& r);
Json to_json(const SpectralProfile& s);

/// Fixed-width decimal used in every CSV cell (no locale, no exponent drift).
std::string fmt(double x, int digits = 6);

}  // namespace rgbw
