#include "lgdc/error.hpp"
#include "lgdc/network.hpp"

#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lgdc {
namespace {

using testing::randomize;

NetworkShape small_shape(bool time = true) {
  NetworkShape s;
  s.node_features = 3;
  s.edge_categories = 3;
  s.hidden = 6;
  s.layers = 2;
  s.node_classes = 3;
  s.edge_classes = 3;
  s.time_conditioned = time;
  return s;
}

NetworkInput random_input(int n, const NetworkShape& shape, Rng& rng) {
  NetworkInput in;
  in.node_x = Eigen::MatrixXd::Zero(n, shape.node_features);
  for (int i = 0; i < n; ++i) in.node_x(i, static_cast<int>(rng.below(shape.node_features))) = 1.0;
  in.edge_cat = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      in.edge_cat(i, j) = in.edge_cat(j, i) = static_cast<int>(rng.below(shape.edge_categories));
      in.pairs.emplace_back(i, j);
    }
  }
  in.steps = 10;
  in.t = rng.range(1, 10);
  return in;
}

TEST(Network, ParameterLayout) {
  const Network net(small_shape());
  const auto& t = net.params().tensors();
  EXPECT_EQ(t.front().name, "node_in");
  EXPECT_TRUE(net.params().contains("time_in"));
  EXPECT_TRUE(net.params().contains("layer1.upd_bias"));
  EXPECT_EQ(t.back().name, "edge_out_bias");
  EXPECT_EQ(net.params()["edge_hidden"].rows(), 3 * 6);
  EXPECT_FALSE(Network(small_shape(false)).params().contains("time_in"));
}

TEST(Network, ZeroHeadsGiveUniformOutputs) {
  Network net(small_shape());
  Rng rng(1);
  net.initialize(rng);
  const auto out = net.forward(random_input(5, net.shape(), rng));
  EXPECT_EQ(out.node_logits.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(out.edge_logits.rows(), 10);
  const Eigen::MatrixXd p = softmax_rows(out.edge_logits);
  EXPECT_NEAR(p(3, 1), 1.0 / 3.0, 1e-15);
}

TEST(Network, PermutationEquivariant) {
  Network net(small_shape());
  Rng rng(2);
  randomize(net.params(), rng);
  const int n = 6;
  const auto in = random_input(n, net.shape(), rng);
  const auto perm = testing::random_permutation(n, rng);
  NetworkInput pin = in;
  for (int i = 0; i < n; ++i) {
    pin.node_x.row(perm[i]) = in.node_x.row(i);
    for (int j = 0; j < n; ++j) pin.edge_cat(perm[i], perm[j]) = in.edge_cat(i, j);
  }
  pin.pairs.clear();
  for (const auto& [i, j] : in.pairs) pin.pairs.emplace_back(perm[j], perm[i]);
  const auto out = net.forward(in);
  const auto pout = net.forward(pin);
  for (int i = 0; i < n; ++i) {
    EXPECT_LT((out.node_logits.row(i) - pout.node_logits.row(perm[i])).cwiseAbs().maxCoeff(), 1e-12);
  }
  // Reversed pair orientation checks the symmetric edge head at the same time.
  EXPECT_LT((out.edge_logits - pout.edge_logits).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Network, SingleNodeAndNoPairs) {
  Network net(small_shape());
  Rng rng(3);
  randomize(net.params(), rng);
  const auto out = net.forward(random_input(1, net.shape(), rng));
  EXPECT_EQ(out.node_logits.rows(), 1);
  EXPECT_EQ(out.edge_logits.rows(), 0);
  EXPECT_TRUE(out.node_logits.allFinite());
}

TEST(Network, TimeFeaturesAreBounded) {
  const auto a = time_features(3, 10);
  EXPECT_EQ(a.size(), kTimeFeatures);
  EXPECT_LE(a.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_GT((a - time_features(4, 10)).norm(), 1e-3);
}

double softmax_ce(const NetworkOutput& out, const std::vector<int>& node_y, const std::vector<int>& edge_y,
                  NetworkOutput* upstream) {
  const Eigen::MatrixXd pn = softmax_rows(out.node_logits);
  const Eigen::MatrixXd pe = softmax_rows(out.edge_logits);
  double loss = 0.0;
  if (upstream != nullptr) {
    upstream->node_logits = pn;
    upstream->edge_logits = pe;
  }
  for (int i = 0; i < pn.rows(); ++i) {
    loss -= std::log(pn(i, node_y[i]));
    if (upstream != nullptr) upstream->node_logits(i, node_y[i]) -= 1.0;
  }
  for (int k = 0; k < pe.rows(); ++k) {
    loss -= 0.7 * std::log(pe(k, edge_y[k]));
    if (upstream != nullptr) {
      upstream->edge_logits.row(k) *= 0.7;
      upstream->edge_logits(k, edge_y[k]) -= 0.7;
    }
  }
  return loss;
}

TEST(Network, BackwardMatchesFiniteDifferences) {
  for (bool time : {true, false}) {
    Network net(small_shape(time));
    Rng rng(4);
    randomize(net.params(), rng);
    const auto in = random_input(5, net.shape(), rng);
    std::vector<int> ny;
    std::vector<int> ey;
    for (int i = 0; i < 5; ++i) ny.push_back(static_cast<int>(rng.below(3)));
    for (std::size_t k = 0; k < in.pairs.size(); ++k) ey.push_back(static_cast<int>(rng.below(3)));
    NetworkCache cache;
    const auto out = net.forward(in, &cache);
    NetworkOutput up;
    softmax_ce(out, ny, ey, &up);
    ParamStore grads = net.params().zeros_like();
    net.backward(in, cache, up, grads);
    const auto r = testing::check_gradients(net.params(), grads,
                                            [&] { return softmax_ce(net.forward(in), ny, ey, nullptr); });
    EXPECT_EQ(r.checked, static_cast<long>(net.params().scalar_count()));
    EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
  }
}

TEST(Network, BackwardAccumulates) {
  Network net(small_shape());
  Rng rng(5);
  randomize(net.params(), rng);
  const auto in = random_input(4, net.shape(), rng);
  NetworkCache cache;
  const auto out = net.forward(in, &cache);
  NetworkOutput up{Eigen::MatrixXd::Ones(out.node_logits.rows(), out.node_logits.cols()),
                   Eigen::MatrixXd::Ones(out.edge_logits.rows(), out.edge_logits.cols())};
  ParamStore once = net.params().zeros_like();
  net.backward(in, cache, up, once);
  ParamStore twice = net.params().zeros_like();
  net.backward(in, cache, up, twice);
  net.backward(in, cache, up, twice);
  twice.add_scaled(once, -2.0);
  for (const auto& t : twice.tensors()) EXPECT_LT(t.value.cwiseAbs().maxCoeff(), 1e-12) << t.name;
}

TEST(Network, ZeroUpstreamGivesZeroGradients) {
  Network net(small_shape());
  Rng rng(7);
  randomize(net.params(), rng);
  const auto in = random_input(4, net.shape(), rng);
  NetworkCache cache;
  const auto out = net.forward(in, &cache);
  NetworkOutput up{Eigen::MatrixXd::Zero(out.node_logits.rows(), out.node_logits.cols()),
                   Eigen::MatrixXd::Zero(out.edge_logits.rows(), out.edge_logits.cols())};
  ParamStore grads = net.params().zeros_like();
  net.backward(in, cache, up, grads);
  for (const auto& t : grads.tensors()) EXPECT_EQ(t.value.cwiseAbs().maxCoeff(), 0.0) << t.name;
}

TEST(Network, GradientsAreInvariantUnderInputPermutation) {
  Network net(small_shape());
  Rng rng(8);
  randomize(net.params(), rng);
  const int n = 5;
  const auto in = random_input(n, net.shape(), rng);
  std::vector<int> ny;
  for (int i = 0; i < n; ++i) ny.push_back(static_cast<int>(rng.below(3)));
  std::vector<int> ey;
  for (std::size_t k = 0; k < in.pairs.size(); ++k) ey.push_back(static_cast<int>(rng.below(3)));
  const auto perm = testing::random_permutation(n, rng);
  NetworkInput pin = in;
  std::vector<int> pny(n);
  for (int i = 0; i < n; ++i) {
    pin.node_x.row(perm[i]) = in.node_x.row(i);
    pny[perm[i]] = ny[i];
    for (int j = 0; j < n; ++j) pin.edge_cat(perm[i], perm[j]) = in.edge_cat(i, j);
  }
  pin.pairs.clear();
  for (const auto& [i, j] : in.pairs) pin.pairs.emplace_back(perm[i], perm[j]);
  auto grads_for = [&](const NetworkInput& x, const std::vector<int>& y) {
    NetworkCache cache;
    const auto out = net.forward(x, &cache);
    NetworkOutput up;
    softmax_ce(out, y, ey, &up);
    ParamStore g = net.params().zeros_like();
    net.backward(x, cache, up, g);
    return g;
  };
  ParamStore a = grads_for(in, ny);
  const ParamStore b = grads_for(pin, pny);
  a.add_scaled(b, -1.0);
  for (const auto& t : a.tensors()) EXPECT_LT(t.value.cwiseAbs().maxCoeff(), 1e-10) << t.name;
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  ParamStore p;
  p.add("w", 2, 2) << 1.0, 2.0, 3.0, 4.0;
  const Eigen::MatrixXd before = p["w"];
  Adam adam(p, AdamOptions{});
  for (int i = 0; i < 5; ++i) adam.step(p, p.zeros_like());
  EXPECT_EQ(p["w"], before);
}

TEST(Adam, ConvexQuadraticDecreasesAfterWarmup) {
  ParamStore p;
  p.add("w", 1, 4) << 2.0, -1.0, 0.5, 3.0;
  const Eigen::RowVector4d scale(1.0, 2.0, 0.5, 3.0);
  auto loss = [&] { return (p["w"].array().square() * scale.array()).sum(); };
  Adam adam(p, AdamOptions{1e-2});
  double last = loss();
  for (int it = 0; it < 500; ++it) {
    ParamStore g = p.zeros_like();
    g["w"] = 2.0 * p["w"].cwiseProduct(scale);
    adam.step(p, g);
    const double now = loss();
    if (it >= 10) EXPECT_LE(now, last) << "step " << it;
    last = now;
  }
  EXPECT_LT(last, 1.0);
}

TEST(Adam, MinimizesQuadraticAndSkipsNonFinite) {
  ParamStore p;
  p.add("w", 1, 3) << 1.0, -2.0, 3.0;
  Adam adam(p, AdamOptions{0.05});
  for (int it = 0; it < 2000; ++it) {
    ParamStore g = p.zeros_like();
    g["w"] = 2.0 * p["w"];
    ASSERT_TRUE(adam.step(p, g));
  }
  EXPECT_LT(p["w"].cwiseAbs().maxCoeff(), 1e-2);
  const Eigen::MatrixXd before = p["w"];
  ParamStore bad = p.zeros_like();
  bad["w"](0, 1) = std::nan("");
  EXPECT_FALSE(adam.step(p, bad));
  EXPECT_EQ(adam.skipped(), 1);
  EXPECT_EQ(adam.steps_taken(), 2000);
  EXPECT_EQ(p["w"], before);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  ParamStore p;
  p.add("w", 1, 2) << 0.0, 0.0;
  Adam adam(p, AdamOptions{0.1});
  ParamStore g = p.zeros_like();
  g["w"] << 5.0, -0.01;
  adam.step(p, g);
  EXPECT_NEAR(p["w"](0, 0), -0.1, 1e-6);
  EXPECT_NEAR(p["w"](0, 1), 0.1, 1e-4);
}

TEST(Checkpoint, RoundTripIsByteIdentical) {
  Network net(small_shape());
  Rng rng(6);
  randomize(net.params(), rng);
  const std::string text = checkpoint_text(net);
  EXPECT_EQ(text.rfind("#ckpt lgdc 1 a=3 b=3 d=6 L=2\n", 0), 0u);
  const Network back = parse_checkpoint(text);
  EXPECT_EQ(checkpoint_text(back), text);
  EXPECT_EQ(back.shape().node_classes, 3);
  EXPECT_TRUE(back.shape().time_conditioned);
  for (std::size_t k = 0; k < net.params().tensors().size(); ++k) {
    EXPECT_EQ(back.params().tensors()[k].value, net.params().tensors()[k].value);
  }
  const auto path = std::filesystem::temp_directory_path() / "lgdc_network_test.ckpt";
  save_checkpoint(path.string(), net);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), text);
  EXPECT_EQ(checkpoint_text(load_checkpoint(path.string())), text);
  std::filesystem::remove(path);
}

TEST(Checkpoint, RejectsCorruptInput) {
  Network net(small_shape(false));
  const std::string text = checkpoint_text(net);
  EXPECT_THROW(parse_checkpoint("#ckpt lgdc 2 a=3 b=3 d=6 L=2\n"), ParseError);
  EXPECT_THROW(parse_checkpoint(text.substr(0, text.size() / 2)), ParseError);
  EXPECT_THROW(load_checkpoint("/nonexistent/x.ckpt"), MissingArtifactError);
}

}  // namespace
}  // namespace lgdc
