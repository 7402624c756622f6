#include "lgdc/graph_io.hpp"

#include "lgdc/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace lgdc {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

int parse_int(const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw ParseError("expected integer, got '" + text + "'");
  return value;
}

bool next_nonempty(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("format_real: conversion failed");
  return std::string(buf, ptr);
}

double parse_real(const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw ParseError("expected real, got '" + text + "'");
  return value;
}

void write_graph(std::ostream& out, const Graph& g, const std::string& id) {
  const auto edges = g.edges();
  out << "#graph " << id << ' ' << g.num_nodes() << ' ' << edges.size() << '\n';
  for (const auto& e : edges) out << e.u << ' ' << e.v << ' ' << format_real(e.weight) << '\n';
  if (g.has_labels()) {
    out << "#labels";
    for (int l : g.labels()) out << ' ' << l;
    out << '\n';
  }
}

bool read_graph(std::istream& in, Graph& g, std::string& id) {
  const auto start = in.tellg();
  std::string line;
  if (!next_nonempty(in, line)) return false;
  auto header = split_ws(line);
  if (header.empty() || header[0] != "#graph") {
    in.clear();
    in.seekg(start);
    return false;
  }
  if (header.size() != 4) throw ParseError("malformed graph header: " + line);
  id = header[1];
  const int n = parse_int(header[2]);
  const int m = parse_int(header[3]);
  if (n < 0 || m < 0) throw ParseError("negative size in graph header: " + line);
  Graph out(n);
  for (int k = 0; k < m; ++k) {
    if (!next_nonempty(in, line)) throw ParseError("truncated graph record " + id);
    auto tok = split_ws(line);
    if (tok.size() != 3) throw ParseError("malformed edge line: " + line);
    const int u = parse_int(tok[0]);
    const int v = parse_int(tok[1]);
    if (!(0 <= u && u < v && v < n)) throw ParseError("edge endpoints must satisfy 0 <= u < v < n: " + line);
    out.set_edge(u, v, parse_real(tok[2]));
  }
  const auto after_edges = in.tellg();
  if (next_nonempty(in, line)) {
    auto tok = split_ws(line);
    if (!tok.empty() && tok[0] == "#labels") {
      if (static_cast<int>(tok.size()) != n + 1) throw ParseError("label count mismatch in graph " + id);
      std::vector<int> labels;
      for (std::size_t i = 1; i < tok.size(); ++i) labels.push_back(parse_int(tok[i]));
      out.set_labels(std::move(labels));
    } else {
      in.clear();
      in.seekg(after_edges);
    }
  } else {
    in.clear();
  }
  g = std::move(out);
  return true;
}

void write_dataset(std::ostream& out, const DatasetFile& data) {
  out << "#dataset " << data.family << ' ' << data.graphs.size() << ' ' << data.seed;
  for (const auto& [k, v] : data.params) out << ' ' << k << '=' << v;
  out << '\n';
  for (std::size_t i = 0; i < data.graphs.size(); ++i) write_graph(out, data.graphs[i], std::to_string(i));
}

DatasetFile read_dataset(std::istream& in) {
  std::string line;
  if (!next_nonempty(in, line)) throw ParseError("empty dataset file");
  auto tok = split_ws(line);
  if (tok.size() < 4 || tok[0] != "#dataset") throw ParseError("missing #dataset header");
  DatasetFile data;
  data.family = tok[1];
  const int count = parse_int(tok[2]);
  data.seed = std::stoull(tok[3]);
  for (std::size_t i = 4; i < tok.size(); ++i) {
    const auto eq = tok[i].find('=');
    if (eq == std::string::npos) throw ParseError("dataset parameter without '=': " + tok[i]);
    data.params[tok[i].substr(0, eq)] = tok[i].substr(eq + 1);
  }
  Graph g;
  std::string id;
  while (read_graph(in, g, id)) data.graphs.push_back(std::move(g));
  if (static_cast<int>(data.graphs.size()) != count) {
    throw ParseError("dataset declares " + std::to_string(count) + " graphs, found " +
                     std::to_string(data.graphs.size()));
  }
  return data;
}

void save_dataset(const std::string& path, const DatasetFile& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_dataset(out, data);
}

DatasetFile load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot open " + path);
  return read_dataset(in);
}

std::string to_dot(const Graph& g) {
  std::ostringstream out;
  out << "graph G {";
  for (int i = 0; i < g.num_nodes(); ++i) {
    if (g.degree(i) == 0) out << ' ' << i << ';';
  }
  for (const auto& e : g.edges()) out << ' ' << e.u << " -- " << e.v << ';';
  out << " }\n";
  return out.str();
}

}  // namespace lgdc
