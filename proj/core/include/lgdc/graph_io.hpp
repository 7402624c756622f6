#pragma once

#include "lgdc/graph.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace lgdc {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);
/// Parses a decimal produced by format_real (or any strtod-compatible text).
double parse_real(const std::string& text);

/// Graph record:
///   #graph <id> <n> <m>
///   <u> <v> <w>        (m lines, 0-based, u < v)
///   #labels l_0 ... l_{n-1}   (optional)
void write_graph(std::ostream& out, const Graph& g, const std::string& id);

/// Reads one graph record if the next non-empty line is a `#graph` header.
/// Returns false at end of stream or when another record type follows.
bool read_graph(std::istream& in, Graph& g, std::string& id);

/// Header `#dataset <family> <count> <seed> <key=value...>` then graph records.
struct DatasetFile {
  std::string family;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;
  std::vector<Graph> graphs;
};

void write_dataset(std::ostream& out, const DatasetFile& data);
DatasetFile read_dataset(std::istream& in);
void save_dataset(const std::string& path, const DatasetFile& data);
DatasetFile load_dataset(const std::string& path);

/// `graph G { u -- v; ... }`
std::string to_dot(const Graph& g);

}  // namespace lgdc
