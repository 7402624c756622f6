#include "lgdc/error.hpp"
#include "lgdc/network.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lgdc {

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int read_kv(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) throw ParseError("checkpoint header: expected " + key + "=<int>, got '" + token + "'");
  try {
    return std::stoi(token.substr(key.size() + 1));
  } catch (const std::exception&) {
    throw ParseError("checkpoint header: bad value in '" + token + "'");
  }
}

}  // namespace

std::string checkpoint_text(const Network& net) {
  const auto& s = net.shape();
  std::ostringstream out;
  out << "#ckpt lgdc " << kCheckpointVersion << " a=" << s.node_features << " b=" << s.edge_categories
      << " d=" << s.hidden << " L=" << s.layers << '\n';
  for (const auto& t : net.params().tensors()) {
    out << "param " << t.name << ' ' << t.rank;
    if (t.rank == 1) {
      out << ' ' << t.value.cols();
    } else {
      out << ' ' << t.value.rows() << ' ' << t.value.cols();
    }
    out << '\n';
    for (Eigen::Index i = 0; i < t.value.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.value.cols(); ++j) {
        if (j > 0) out << ' ';
        out << format17(t.value(i, j));
      }
      out << '\n';
    }
  }
  return out.str();
}

Network parse_checkpoint(const std::string& text) {
  std::istringstream in(text);
  std::string magic, tag, a, b, d, l;
  int version = 0;
  if (!(in >> magic >> tag >> version >> a >> b >> d >> l) || magic != "#ckpt" || tag != "lgdc") {
    throw ParseError("checkpoint: missing '#ckpt lgdc' header");
  }
  if (version != kCheckpointVersion) throw ParseError("checkpoint: unsupported version " + std::to_string(version));
  NetworkShape shape;
  shape.node_features = read_kv(a, "a");
  shape.edge_categories = read_kv(b, "b");
  shape.hidden = read_kv(d, "d");
  shape.layers = read_kv(l, "L");

  std::vector<Tensor> tensors;
  std::string word;
  while (in >> word) {
    if (word != "param") throw ParseError("checkpoint: expected 'param', got '" + word + "'");
    Tensor t;
    Eigen::Index rows = 1, cols = 0;
    if (!(in >> t.name >> t.rank)) throw ParseError("checkpoint: truncated tensor header");
    if (t.rank == 1) {
      in >> cols;
    } else if (t.rank == 2) {
      in >> rows >> cols;
    } else {
      throw ParseError("checkpoint: tensor '" + t.name + "' has unsupported rank");
    }
    if (!in || rows < 0 || cols < 0) throw ParseError("checkpoint: bad dimensions for '" + t.name + "'");
    t.value.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        std::string v;
        if (!(in >> v)) throw ParseError("checkpoint: truncated values for '" + t.name + "'");
        t.value(i, j) = std::strtod(v.c_str(), nullptr);
      }
    }
    tensors.push_back(std::move(t));
  }

  auto find = [&](const std::string& name) -> const Tensor* {
    for (const auto& t : tensors) {
      if (t.name == name) return &t;
    }
    return nullptr;
  };
  shape.time_conditioned = find("time_in") != nullptr;
  if (const Tensor* t = find("node_out")) shape.node_classes = static_cast<int>(t->value.cols());
  if (const Tensor* t = find("edge_out")) shape.edge_classes = static_cast<int>(t->value.cols());

  Network net(shape);
  auto& expected = net.params().tensors();
  if (expected.size() != tensors.size()) throw Error("checkpoint: tensor count does not match the header shape");
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const auto& got = tensors[k];
    if (got.name != expected[k].name || got.rank != expected[k].rank || got.value.rows() != expected[k].value.rows() ||
        got.value.cols() != expected[k].value.cols()) {
      throw Error("checkpoint: tensor '" + got.name + "' does not match the shape in the header");
    }
    if (!got.value.allFinite()) throw Error("checkpoint: tensor '" + got.name + "' has non-finite values");
    expected[k].value = got.value;
  }
  return net;
}

void save_checkpoint(const std::string& path, const Network& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  out << checkpoint_text(net);
  if (!out) throw Error("failed writing checkpoint '" + path + "'");
}

Network load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("checkpoint '" + path + "' not found; run `lgdc train` first");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

}  // namespace lgdc
