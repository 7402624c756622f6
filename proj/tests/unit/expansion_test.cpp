#include "lgdc/coarsening.hpp"
#include "lgdc/datasets.hpp"
#include "lgdc/error.hpp"
#include "lgdc/expansion.hpp"

#include "support/gradcheck.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace lgdc {
namespace {

std::vector<ExpansionExample> examples(Family family, int count, int v_max, std::uint64_t seed = 3) {
  DatasetSpec spec = DatasetSpec::defaults(family);
  spec.count = count;
  spec.seed = seed;
  const auto graphs = generate_dataset(spec);
  CoarseningOptions opts;
  opts.v_max = v_max;
  std::vector<ExpansionExample> out;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    Rng rng = Rng(seed).split(i);
    out.push_back(to_example(coarsen_to_ratio(graphs[i], opts, rng)));
  }
  return out;
}

int fine_size(const ExpansionExample& ex) {
  int n = 0;
  for (int s : ex.v_star) n += s;
  return n;
}

Eigen::VectorXd fixed_noise(int n, Rng& rng) {
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u(i) = rng.uniform();
  return u;
}

TEST(Expansion, CandidateCategories) {
  Graph coarse(2);
  coarse.set_edge(0, 1, 2.0);
  EXPECT_EQ(candidate_category(Candidate{0, 1, 0, 0}, coarse, 4), 1);
  EXPECT_EQ(candidate_category(Candidate{0, 2, 0, 1}, coarse, 4), 3);
}

TEST(Expansion, SingleNodeSkeletonIsTriangle) {
  Graph coarse(1);
  const auto c = expand(coarse, std::vector<int>{3});
  ASSERT_EQ(c.size(), 3u);
  for (const auto& e : c.edges) EXPECT_TRUE(e.intra());
  const Graph k3 = refine(c, std::vector<std::uint8_t>{1, 1, 1});
  EXPECT_EQ(k3.num_edges(), 3);
  EXPECT_EQ(refine(c, std::vector<std::uint8_t>{0, 0, 0}).num_edges(), 0);
}

TEST(Expansion, InitialLossIsClosedForm) {
  Rng rng(1);
  const Expander model = make_expander(8, 4, 8, 2, rng);
  for (const auto& ex : examples(Family::community20, 4, 8)) {
    const Eigen::VectorXd noise = fixed_noise(fine_size(ex), rng);
    const auto loss = expander_loss(model, ex, noise, nullptr, nullptr);
    double positives = 0.0;
    for (auto b : ex.e_star) positives += b;
    const double total = static_cast<double>(ex.e_star.size());
    EXPECT_NEAR(loss.v_loss, std::log(8.0), 1e-12);
    EXPECT_NEAR(loss.positive_weight, total / (2.0 * positives), 1e-12);
    EXPECT_NEAR(loss.e_loss, std::log(2.0) * (0.5 + (total - positives) / total), 1e-12);
  }
}

TEST(Expansion, OversizedClusterIsRejected) {
  Rng rng(2);
  const Expander model = make_expander(4, 4, 8, 1, rng);
  ExpansionExample ex{Graph(1), {5}, std::vector<std::uint8_t>(10, 0)};
  EXPECT_THROW(expander_loss(model, ex, Eigen::VectorXd::Zero(5), nullptr, nullptr), Error);
}

TEST(Expansion, LossGradientsMatchFiniteDifferences) {
  Rng rng(3);
  Expander model = make_expander(4, 3, 6, 2, rng);
  testing::randomize(model.v_net.params(), rng);
  testing::randomize(model.e_net.params(), rng);
  ExpansionExample ex;
  ex.coarse = Graph(3);
  ex.coarse.set_edge(0, 1, 1.0);
  ex.coarse.set_edge(1, 2, 2.0);
  ex.coarse.set_labels({1, 2, 0});
  ex.v_star = {2, 3, 1};
  const auto cands = expand(ex.coarse, ex.v_star);
  for (std::size_t k = 0; k < cands.size(); ++k) ex.e_star.push_back(rng.bernoulli(0.4) ? 1 : 0);
  const Eigen::VectorXd noise = fixed_noise(6, rng);
  ParamStore vg = model.v_net.params().zeros_like();
  ParamStore eg = model.e_net.params().zeros_like();
  expander_loss(model, ex, noise, &vg, &eg);
  auto loss = [&] { return expander_loss(model, ex, noise, nullptr, nullptr).total(); };
  const auto rv = testing::check_gradients(model.v_net.params(), vg, loss);
  const auto re = testing::check_gradients(model.e_net.params(), eg, loss);
  EXPECT_LT(rv.max_rel_error, 1e-4) << rv.worst;
  EXPECT_LT(re.max_rel_error, 1e-4) << re.worst;
}

TEST(Expansion, SameClusterNodesAreInterchangeableWithoutNoise) {
  Rng rng(4);
  Expander model = make_expander(4, 3, 6, 2, rng);
  testing::randomize(model.e_net.params(), rng);
  Graph coarse(2);
  coarse.set_edge(0, 1, 1.0);
  const auto cands = expand(coarse, std::vector<int>{2, 1});
  const auto p = edge_probabilities(model, coarse, cands, Eigen::VectorXd::Zero(3));
  const auto idx = cands.index_matrix();
  // Nodes 0 and 1 form cluster 0; node 2 is cluster 1.
  EXPECT_NEAR(p(idx[0 * 3 + 2]), p(idx[1 * 3 + 2]), 1e-12);
  const auto q = edge_probabilities(model, coarse, cands, Eigen::Vector3d(0.1, 0.9, 0.5));
  EXPECT_GT(std::abs(q(idx[0 * 3 + 2]) - q(idx[1 * 3 + 2])), 1e-9);
}

TEST(Expansion, ZeroTemperatureIsDeterministic) {
  Rng rng(5);
  Expander model = make_expander(8, 4, 8, 2, rng);
  testing::randomize(model.v_net.params(), rng);
  const auto ex = examples(Family::community20, 1, 8)[0];
  Rng a(1);
  Rng b(2);
  EXPECT_EQ(predict_v(model, ex.coarse, a, 0.0), predict_v(model, ex.coarse, b, 0.0));
  Graph single(1);
  single.set_labels({2});
  const auto v = predict_v(model, single, a);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_GE(v[0], 1);
  EXPECT_LE(v[0], 8);
}

TEST(Expansion, DecodeNodeCountEqualsSumOfSizes) {
  Rng rng(6);
  Expander model = make_expander(8, 4, 8, 2, rng);
  testing::randomize(model.v_net.params(), rng);
  testing::randomize(model.e_net.params(), rng);
  for (const auto& ex : examples(Family::community20, 5, 8)) {
    const auto r = decode(model, ex.coarse, rng);
    int n = 0;
    for (int s : r.v) n += s;
    EXPECT_EQ(r.graph.num_nodes(), n);
    EXPECT_EQ(r.candidates, expand(ex.coarse, r.v).size());
  }
}

TEST(Expansion, TrainingReducesLossOnTrees) {
  const auto data = examples(Family::tree, 20, 8);
  Rng rng(7);
  Expander model = make_expander(8, 4, 16, 2, rng);
  ExpanderTrainOptions opts;
  opts.iterations = 200;
  opts.batch = 4;
  opts.lr = 3e-3;
  const auto curve = train_expander(model, data, opts);
  double early = 0.0;
  double late = 0.0;
  for (int i = 0; i < 20; ++i) {
    early += curve[i];
    late += curve[180 + i];
  }
  EXPECT_LT(late, 0.9 * early);
  EXPECT_GT(model.positive_weight, 1.0);
  EXPECT_NEAR(model.edges_per_node, 63.0 / 64.0, 1e-12);
}

TEST(Expansion, OverfitsFivePairs) {
  const auto data = examples(Family::community20, 5, 8, 11);
  Rng rng(8);
  Expander model = make_expander(8, 4, 32, 3, rng);
  std::vector<Eigen::VectorXd> noise;
  double weight = 0.0;
  for (const auto& ex : data) {
    noise.push_back(fixed_noise(fine_size(ex), rng));
    weight += expander_loss(model, ex, noise.back(), nullptr, nullptr).positive_weight;
  }
  model.positive_weight = weight / static_cast<double>(data.size());
  Adam v_adam(model.v_net.params(), AdamOptions{3e-3});
  Adam e_adam(model.e_net.params(), AdamOptions{3e-3});
  double loss = 0.0;
  for (int it = 0; it < 400; ++it) {
    ParamStore vg = model.v_net.params().zeros_like();
    ParamStore eg = model.e_net.params().zeros_like();
    loss = 0.0;
    for (std::size_t k = 0; k < data.size(); ++k) loss += expander_loss(model, data[k], noise[k], &vg, &eg).total();
    v_adam.step(model.v_net.params(), vg);
    e_adam.step(model.e_net.params(), eg);
  }
  EXPECT_LT(loss / 5.0, 0.05);
  std::size_t wrong = 0;
  std::size_t total = 0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto cands = expand(data[k].coarse, data[k].v_star);
    const auto mask = predict_e(model, data[k].coarse, cands, rng, 1.0, &noise[k]);
    for (std::size_t i = 0; i < mask.size(); ++i) wrong += mask[i] != data[k].e_star[i] ? 1 : 0;
    total += mask.size();
    EXPECT_EQ(predict_v(model, data[k].coarse, rng, 0.0), data[k].v_star);
  }
  EXPECT_LT(static_cast<double>(wrong) / static_cast<double>(total), 0.02) << wrong << " of " << total;
}

TEST(Expansion, TeacherForcedDecodeIsExact) {
  DatasetSpec spec = DatasetSpec::defaults(Family::planar);
  spec.count = 5;
  for (std::size_t i = 0; i < 5; ++i) {
    const Graph g = generate_graph(spec, i);
    Rng rng(i);
    const auto r = coarsen_to_ratio(g, CoarseningOptions{}, rng);
    EXPECT_EQ(refine(expand(r.coarse, r.v_star), r.e_star), g.permuted(r.position));
  }
}

}  // namespace
}  // namespace lgdc
