#include "lgdc/pipeline.hpp"

#include "lgdc/algorithms.hpp"
#include "lgdc/candidates.hpp"
#include "lgdc/denoiser.hpp"
#include "lgdc/error.hpp"
#include "lgdc/flops.hpp"
#include "lgdc/graph_io.hpp"
#include "lgdc/parallel.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lgdc {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kCoarsenTrainStream = 1;
constexpr std::uint64_t kCoarsenTestStream = 2;
constexpr std::uint64_t kDenoiserInitStream = 10;
constexpr std::uint64_t kExpanderInitStream = 11;
constexpr std::uint64_t kDiffusionTrainStream = 12;
constexpr std::uint64_t kExpanderTrainStream = 13;
constexpr std::uint64_t kSampleStream = 20;

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

int to_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("expected integer, got '" + s + "'");
  return v;
}

std::vector<std::string> expect_record(std::istream& in, const std::string& tag) {
  std::string line;
  if (!next_line(in, line)) throw ParseError("pair file truncated before " + tag);
  auto tok = split_ws(line);
  if (tok.empty() || tok[0] != tag) throw ParseError("pair file: expected " + tag + ", got '" + line + "'");
  return tok;
}

Graph expect_graph(std::istream& in, const std::string& what) {
  Graph g;
  std::string id;
  if (!read_graph(in, g, id)) throw ParseError("pair file: expected the " + what + " graph");
  return g;
}

std::string join_reals(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v(i));
  return out;
}

Eigen::VectorXd parse_reals(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) vals.push_back(parse_real(item));
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::vector<Graph> coarse_graphs(const std::vector<PairRecord>& pairs, int a, int b) {
  std::vector<Graph> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(decode_latent(encode_latent(p.result.coarse, a, b)));
  return out;
}

}  // namespace

void write_pairs(std::ostream& out, const std::vector<PairRecord>& pairs,
                 const std::map<std::string, std::string>& header) {
  out << "#coarsening " << pairs.size();
  for (const auto& [k, v] : header) out << ' ' << k << '=' << v;
  out << '\n';
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& r = pairs[i].result;
    out << "#pair " << i << '\n';
    write_graph(out, pairs[i].fine, "fine-" + std::to_string(i));
    out << "#assignment";
    for (int a : r.proj.assignment) out << ' ' << a;
    out << '\n';
    write_graph(out, r.coarse, "coarse-" + std::to_string(i));
    out << "#vstar";
    for (int v : r.v_star) out << ' ' << v;
    out << '\n';
    out << "#estar " << r.e_star.size();
    for (std::size_t k = 0; k < r.e_star.size(); ++k) {
      if (r.e_star[k]) out << ' ' << k;
    }
    out << '\n';
    out << "#epsilon " << format_real(r.epsilon) << '\n';
  }
}

std::vector<PairRecord> read_pairs(std::istream& in, std::map<std::string, std::string>* header, int v_max) {
  auto head = expect_record(in, "#coarsening");
  if (head.size() < 2) throw ParseError("pair file: malformed header");
  const int count = to_int(head[1]);
  if (header != nullptr) {
    header->clear();
    for (std::size_t i = 2; i < head.size(); ++i) {
      const auto eq = head[i].find('=');
      if (eq == std::string::npos) throw ParseError("pair file: header parameter without '='");
      (*header)[head[i].substr(0, eq)] = head[i].substr(eq + 1);
    }
  }
  std::vector<PairRecord> out;
  for (int i = 0; i < count; ++i) {
    expect_record(in, "#pair");
    PairRecord rec;
    rec.fine = expect_graph(in, "fine");
    auto assign = expect_record(in, "#assignment");
    rec.result.coarse = expect_graph(in, "coarse");
    rec.result.proj.num_coarse = rec.result.coarse.num_nodes();
    for (std::size_t k = 1; k < assign.size(); ++k) rec.result.proj.assignment.push_back(to_int(assign[k]));
    if (rec.result.proj.num_fine() != rec.fine.num_nodes()) throw ParseError("pair file: assignment length mismatch");
    rec.result.proj.validate();
    auto vstar = expect_record(in, "#vstar");
    for (std::size_t k = 1; k < vstar.size(); ++k) rec.result.v_star.push_back(to_int(vstar[k]));
    if (rec.result.v_star != rec.result.proj.cluster_sizes()) throw ParseError("pair file: v_star disagrees with assignment");
    for (int s : rec.result.v_star) {
      if (s > v_max) throw ParseError("pair file: cluster size exceeds v_max");
    }
    auto estar = expect_record(in, "#estar");
    if (estar.size() < 2) throw ParseError("pair file: malformed #estar");
    rec.result.e_star.assign(static_cast<std::size_t>(to_int(estar[1])), 0);
    for (std::size_t k = 2; k < estar.size(); ++k) {
      const int idx = to_int(estar[k]);
      if (idx < 0 || static_cast<std::size_t>(idx) >= rec.result.e_star.size()) throw ParseError("pair file: e_star index out of range");
      rec.result.e_star[static_cast<std::size_t>(idx)] = 1;
    }
    auto eps = expect_record(in, "#epsilon");
    if (eps.size() != 2) throw ParseError("pair file: malformed #epsilon");
    rec.result.epsilon = parse_real(eps[1]);
    rec.result.position = expansion_positions(rec.result.proj);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<PairRecord> coarsen_dataset(const std::vector<Graph>& graphs, const CoarseningOptions& options,
                                        std::uint64_t seed, std::uint64_t stream) {
  std::vector<PairRecord> out(graphs.size());
  const Rng base = Rng(seed).split(stream);
  parallel_for(graphs.size(), [&](std::size_t i) {
    Rng rng = base.split(i);
    out[i].fine = graphs[i];
    out[i].result = coarsen_to_ratio(graphs[i], options, rng);
  });
  return out;
}

void write_meta(std::ostream& out, const ModelMeta& meta) {
  out << "#meta lgdc 1\n";
  out << "config_hash=" << meta.config_hash << '\n';
  out << "seed=" << meta.seed << '\n';
  out << "a=" << meta.a << '\n';
  out << "b=" << meta.b << '\n';
  out << "steps=" << meta.steps << '\n';
  out << "noise_kind=" << to_string(meta.noise_kind) << '\n';
  out << "m_x=" << join_reals(meta.m_x) << '\n';
  out << "m_e=" << join_reals(meta.m_e) << '\n';
  out << "latent_sizes=";
  for (std::size_t i = 0; i < meta.latent_sizes.size(); ++i) out << (i ? "," : "") << meta.latent_sizes[i];
  out << '\n';
  out << "positive_weight=" << format_real(meta.positive_weight) << '\n';
  out << "edges_per_node=" << format_real(meta.edges_per_node) << '\n';
  out << "final_diffusion_loss=" << format_real(meta.final_diffusion_loss) << '\n';
  out << "final_expander_loss=" << format_real(meta.final_expander_loss) << '\n';
}

ModelMeta read_meta(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line.rfind("#meta lgdc", 0) != 0) throw ParseError("model.meta: missing header");
  std::map<std::string, std::string> kv;
  while (next_line(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("model.meta: expected key=value, got '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("model.meta: missing key '" + key + "'");
    return it->second;
  };
  ModelMeta m;
  m.config_hash = get("config_hash");
  m.seed = std::stoull(get("seed"));
  m.a = to_int(get("a"));
  m.b = to_int(get("b"));
  m.steps = to_int(get("steps"));
  m.noise_kind = parse_noise_kind(get("noise_kind"));
  m.m_x = parse_reals(get("m_x"));
  m.m_e = parse_reals(get("m_e"));
  std::stringstream ss(get("latent_sizes"));
  for (std::string item; std::getline(ss, item, ',');) m.latent_sizes.push_back(to_int(item));
  m.positive_weight = parse_real(get("positive_weight"));
  m.edges_per_node = parse_real(get("edges_per_node"));
  m.final_diffusion_loss = parse_real(get("final_diffusion_loss"));
  m.final_expander_loss = parse_real(get("final_expander_loss"));
  return m;
}

ValidityPredicate family_validity(Family family) {
  switch (family) {
    case Family::tree: return [](const Graph& g) { return is_tree(g); };
    case Family::planar: return [](const Graph& g) { return is_connected(g) && is_planar(g); };
    case Family::community20: return nullptr;
  }
  return nullptr;
}

Pipeline::Pipeline(RunConfig config, fs::path out) : config_(std::move(config)), out_(std::move(out)) {
  config_.validate();
}

const std::vector<std::string>& Pipeline::commands() {
  static const std::vector<std::string> names = {"gen-data", "coarsen", "train", "sample", "eval", "flops", "export-dot"};
  return names;
}

std::map<std::string, std::string> Pipeline::provenance() const {
  return {{"config_hash", config_.hash()}, {"seed", std::to_string(config_.seed)}};
}

DatasetFile Pipeline::load_required(const std::string& name, const std::string& producer) const {
  const fs::path p = path(name);
  if (!fs::exists(p)) throw MissingArtifactError("missing " + p.string() + "; run `lgdc " + producer + "` first");
  return load_dataset(p.string());
}

std::vector<PairRecord> Pipeline::load_pairs(const std::string& name) const {
  const fs::path p = path(name);
  std::ifstream in(p, std::ios::binary);
  if (!in) throw MissingArtifactError("missing " + p.string() + "; run `lgdc coarsen` first");
  return read_pairs(in, nullptr, config_.v_max);
}

void Pipeline::gen_data() {
  fs::create_directories(out_);
  const DatasetSpec spec = config_.dataset_spec();
  auto graphs = generate_dataset(spec);
  const auto split = graphs.begin() + config_.train_count;
  auto params = spec.header_params();
  params.merge(provenance());
  DatasetFile train{to_string(config_.family), config_.seed, params, {graphs.begin(), split}};
  DatasetFile test{to_string(config_.family), config_.seed, params, {split, graphs.end()}};
  train.params["split"] = "train";
  test.params["split"] = "test";
  save_dataset(path("train.graphs").string(), train);
  save_dataset(path("test.graphs").string(), test);
  spdlog::info("gen-data: {} train and {} test {} graphs in {}", train.graphs.size(), test.graphs.size(),
               to_string(config_.family), out_.string());
}

void Pipeline::coarsen() {
  const auto train = load_required("train.graphs", "gen-data");
  const auto test = load_required("test.graphs", "gen-data");
  const CoarseningOptions options = config_.coarsening_options();
  auto header = provenance();
  header["target_ratio"] = format_real(options.target_ratio);
  header["v_max"] = std::to_string(options.v_max);
  header["k_eig"] = std::to_string(options.k_eig);
  header["normalized_epsilon"] = options.normalized_projection ? "true" : "false";

  std::ostringstream report;
  report << "# epsilon certification, config_hash=" << config_.hash() << " seed=" << config_.seed << '\n';
  const std::pair<const char*, std::pair<const DatasetFile*, std::uint64_t>> splits[] = {
      {"train", {&train, kCoarsenTrainStream}}, {"test", {&test, kCoarsenTestStream}}};
  for (const auto& [name, src] : splits) {
    const auto pairs = coarsen_dataset(src.first->graphs, options, config_.seed, src.second);
    std::ofstream out(path(std::string("coarse_") + name + ".pairs"), std::ios::binary);
    auto h = header;
    h["split"] = name;
    write_pairs(out, pairs, h);

    double eps_sum = 0.0, eps_max = 0.0, ratio_sum = 0.0;
    int attempts = 0;
    for (const auto& p : pairs) {
      eps_sum += p.result.epsilon;
      eps_max = std::max(eps_max, p.result.epsilon);
      ratio_sum += static_cast<double>(p.result.proj.num_coarse) / p.fine.num_nodes();
      attempts += p.result.attempts;
    }
    const double count = static_cast<double>(pairs.size());
    report << name << ".graphs=" << pairs.size() << '\n'
           << name << ".epsilon_mean=" << format_real(eps_sum / count) << '\n'
           << name << ".epsilon_max=" << format_real(eps_max) << '\n'
           << name << ".ratio_mean=" << format_real(ratio_sum / count) << '\n'
           << name << ".attempts=" << attempts << '\n';
    spdlog::info("coarsen {}: {} graphs, mean n_c/n {:.3f}, epsilon mean {:.3f} max {:.3f}", name, pairs.size(),
                 ratio_sum / count, eps_sum / count, eps_max);
  }
  write_text(path("coarsen_report.txt"), report.str());
}

void Pipeline::train() {
  const auto pairs = load_pairs("coarse_train.pairs");
  const int a = config_.v_max;
  const int b = config_.edge_buckets;
  std::vector<LatentState> states;
  std::vector<ExpansionExample> examples;
  ModelMeta meta;
  for (const auto& p : pairs) {
    states.push_back(encode_latent(p.result.coarse, a, b));
    examples.push_back(to_example(p.result));
    meta.latent_sizes.push_back(p.result.coarse.num_nodes());
  }
  meta.config_hash = config_.hash();
  meta.seed = config_.seed;
  meta.a = a;
  meta.b = b;
  meta.steps = config_.steps;
  meta.noise_kind = config_.noise_kind;
  meta.m_x = node_marginal(states, a);
  meta.m_e = edge_marginal(states, b);
  const NoiseProcess np = build_noise(config_.steps, config_.noise_kind, meta.m_x, meta.m_e);

  std::ostringstream log;
  log << "# loss curves, config_hash=" << meta.config_hash << " seed=" << meta.seed << '\n';
  auto logger = [&](const char* stage, int total) {
    return [&log, stage, total](int it, double loss) {
      if (it % 50 == 0 || it + 1 == total) {
        log << stage << ' ' << it << ' ' << format_real(loss) << '\n';
        if (it % 500 == 0 || it + 1 == total) spdlog::info("train {} iteration {}/{}: loss {:.4f}", stage, it + 1, total, loss);
      }
    };
  };

  Rng init(config_.seed);
  Rng denoiser_rng = init.split(kDenoiserInitStream);
  Network denoiser(denoiser_shape(a, b, config_.hidden, config_.layers));
  denoiser.initialize(denoiser_rng);
  TrainOptions topt;
  topt.iterations = config_.train_iterations;
  topt.batch = config_.batch;
  topt.lr = config_.lr;
  topt.lambda_e = config_.lambda_e;
  topt.seed = Rng(config_.seed).split(kDiffusionTrainStream).next();
  const auto curve = train_diffusion(denoiser, states, np, topt, logger("diffusion", topt.iterations));
  meta.final_diffusion_loss = curve.empty() ? 0.0 : curve.back();

  Rng expander_rng = init.split(kExpanderInitStream);
  Expander expander = make_expander(config_.v_max, b, config_.hidden, config_.layers, expander_rng);
  ExpanderTrainOptions eopt;
  eopt.iterations = config_.expander_iterations;
  eopt.batch = config_.batch;
  eopt.lr = config_.lr;
  eopt.seed = Rng(config_.seed).split(kExpanderTrainStream).next();
  const auto ecurve = train_expander(expander, examples, eopt, logger("expander", eopt.iterations));
  meta.final_expander_loss = ecurve.empty() ? 0.0 : ecurve.back();
  meta.positive_weight = expander.positive_weight;
  meta.edges_per_node = expander.edges_per_node;

  save_checkpoint(path("denoiser.ckpt").string(), denoiser);
  save_checkpoint(path("expander_v.ckpt").string(), expander.v_net);
  save_checkpoint(path("expander_e.ckpt").string(), expander.e_net);
  std::ofstream meta_out(path("model.meta"), std::ios::binary);
  write_meta(meta_out, meta);
  write_text(path("train_log.txt"), log.str());
}

void Pipeline::sample(bool teacher_force) {
  if (teacher_force) {
    const auto pairs = load_pairs("coarse_test.pairs");
    DatasetFile out{to_string(config_.family), config_.seed, provenance(), {}};
    out.params["source"] = "teacher-forced";
    int exact = 0;
    for (const auto& p : pairs) {
      const CandidateSet cands = expand(p.result.coarse, p.result.v_star);
      Graph g = refine(cands, p.result.e_star);
      if (g == p.fine.permuted(p.result.position)) ++exact;
      out.graphs.push_back(std::move(g));
    }
    save_dataset(path("reconstructed.graphs").string(), out);
    spdlog::info("sample --teacher-force: {}/{} exact reconstructions", exact, pairs.size());
    if (exact != static_cast<int>(pairs.size())) throw Error("teacher-forced reconstruction is not exact");
    return;
  }

  const fs::path meta_path = path("model.meta");
  std::ifstream meta_in(meta_path, std::ios::binary);
  if (!meta_in) throw MissingArtifactError("missing " + meta_path.string() + "; run `lgdc train` first");
  const ModelMeta meta = read_meta(meta_in);
  const Network denoiser = load_checkpoint(path("denoiser.ckpt").string());
  Expander expander;
  expander.v_net = load_checkpoint(path("expander_v.ckpt").string());
  expander.e_net = load_checkpoint(path("expander_e.ckpt").string());
  expander.v_max = config_.v_max;
  expander.buckets = meta.b;
  expander.positive_weight = meta.positive_weight;
  expander.edges_per_node = meta.edges_per_node;
  if (meta.latent_sizes.empty()) throw Error("model.meta lists no latent sizes");

  const NoiseProcess np = build_noise(meta.steps, meta.noise_kind, meta.m_x, meta.m_e);
  const NetworkPredictor predictor(denoiser, meta.steps);
  const auto count = static_cast<std::size_t>(config_.sample_count);
  std::vector<Graph> latent(count), decoded(count);
  std::vector<char> dense(count, 0);
  const Rng base = Rng(config_.seed).split(kSampleStream);
  parallel_for(count, [&](std::size_t k) {
    Rng rng = base.split(k);
    const int n_c = meta.latent_sizes[static_cast<std::size_t>(rng.below(meta.latent_sizes.size()))];
    latent[k] = decode_latent(sample_latent(n_c, np, predictor, rng));
    auto result = decode(expander, latent[k], rng, config_.temperature);
    decoded[k] = std::move(result.graph);
    dense[k] = result.dense_warning ? 1 : 0;
  });
  auto params = provenance();
  params["model_config_hash"] = meta.config_hash;
  save_dataset(path("latent.graphs").string(), {"latent", config_.seed, params, latent});
  save_dataset(path("samples.graphs").string(), {to_string(config_.family), config_.seed, params, decoded});
  spdlog::info("sample: {} latent graphs decoded ({} density warnings)", count,
               std::count(dense.begin(), dense.end(), 1));
}

void Pipeline::eval() {
  const auto samples = load_required("samples.graphs", "sample");
  const auto latent = load_required("latent.graphs", "sample");
  const auto train = load_required("train.graphs", "gen-data");
  const auto test = load_required("test.graphs", "gen-data");
  const auto coarse_train = load_pairs("coarse_train.pairs");
  const auto coarse_test = load_pairs("coarse_test.pairs");
  const int a = config_.v_max;
  const int b = config_.edge_buckets;

  auto [diffusion, expansion] =
      table4_protocol(latent.graphs, samples.graphs, coarse_graphs(coarse_test, a, b), test.graphs,
                      coarse_graphs(coarse_train, a, b), train.graphs, family_validity(config_.family));

  std::ostringstream text;
  text << "# config_hash=" << config_.hash() << " seed=" << config_.seed << " family=" << to_string(config_.family)
       << " samples=" << samples.graphs.size() << '\n';
  text << "# ratios: MMD(samples, test) / MMD(train, test); averages include every metric with a positive reference\n";
  text << format_reports_text({diffusion, expansion});
  if (config_.family == Family::community20) {
    text << "# published Community-20 expansion reference: degree 0.037, clustering 0.027, orbit 0.007\n";
  } else if (config_.family == Family::tree) {
    text << "# published Tree reference: V.U.N. 86.0, A.Ratio 1.70\n";
  } else {
    text << "# published Planar reference: V.U.N. 82.5, A.Ratio 3.06\n";
  }
  write_text(path("report.txt"), text.str());
  std::string kv = "config_hash=" + config_.hash() + "\nseed=" + std::to_string(config_.seed) + "\n";
  kv += format_reports_kv({diffusion, expansion});
  write_text(path("report.kv"), kv);
  spdlog::info("eval: report written to {}", path("report.txt").string());
}

void Pipeline::flops() {
  fs::create_directories(out_);
  const std::int64_t n = config_.n_max;
  const auto n_c = static_cast<std::int64_t>(std::max(1.0, std::ceil(config_.target_ratio * static_cast<double>(n) - 1e-9)));
  const auto rows = flops_table(n, n_c, config_.steps);
  const std::string text = format_flops_table(rows, n, n_c, config_.steps);
  write_text(path("flops.txt"), text);
  spdlog::info("flops:\n{}", text);
}

void Pipeline::export_dot() {
  const bool have_samples = fs::exists(path("samples.graphs"));
  const auto data = have_samples ? load_required("samples.graphs", "sample") : load_required("train.graphs", "gen-data");
  const fs::path dir = path("dot");
  fs::create_directories(dir);
  const std::string prefix = have_samples ? "sample-" : "train-";
  for (std::size_t i = 0; i < data.graphs.size(); ++i) {
    write_text(dir / (prefix + std::to_string(i) + ".dot"), to_dot(data.graphs[i]));
  }
  spdlog::info("export-dot: {} files in {}", data.graphs.size(), dir.string());
}

void Pipeline::run(const std::string& command, bool teacher_force) {
  if (command == "gen-data") return gen_data();
  if (command == "coarsen") return coarsen();
  if (command == "train") return train();
  if (command == "sample") return sample(teacher_force);
  if (command == "eval") return eval();
  if (command == "flops") return flops();
  if (command == "export-dot") return export_dot();
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace lgdc
