#include "lgdc/config.hpp"

#include "lgdc/error.hpp"
#include "lgdc/graph_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace lgdc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    return parse_real(value);
  } catch (const Error&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"train_count", [](RunConfig& c, const auto& k, const auto& v) { c.train_count = parse_integer<int>(k, v); }},
      {"test_count", [](RunConfig& c, const auto& k, const auto& v) { c.test_count = parse_integer<int>(k, v); }},
      {"n_min", [](RunConfig& c, const auto& k, const auto& v) { c.n_min = parse_integer<int>(k, v); }},
      {"n_max", [](RunConfig& c, const auto& k, const auto& v) { c.n_max = parse_integer<int>(k, v); }},
      {"seed", [](RunConfig& c, const auto& k, const auto& v) { c.seed = parse_integer<std::uint64_t>(k, v); }},
      {"sbm_communities", [](RunConfig& c, const auto& k, const auto& v) { c.sbm.communities = parse_integer<int>(k, v); }},
      {"sbm_p_in", [](RunConfig& c, const auto& k, const auto& v) { c.sbm.p_in = parse_double(k, v); }},
      {"sbm_p_out", [](RunConfig& c, const auto& k, const auto& v) { c.sbm.p_out = parse_double(k, v); }},
      {"target_ratio", [](RunConfig& c, const auto& k, const auto& v) { c.target_ratio = parse_double(k, v); }},
      {"v_max", [](RunConfig& c, const auto& k, const auto& v) { c.v_max = parse_integer<int>(k, v); }},
      {"k_eig", [](RunConfig& c, const auto& k, const auto& v) { c.k_eig = parse_integer<int>(k, v); }},
      {"rec_iterations", [](RunConfig& c, const auto& k, const auto& v) { c.rec_iterations = parse_integer<long>(k, v); }},
      {"coarsen_attempts", [](RunConfig& c, const auto& k, const auto& v) { c.coarsen_attempts = parse_integer<int>(k, v); }},
      {"latent_m", [](RunConfig& c, const auto& k, const auto& v) { c.latent_m = parse_integer<int>(k, v); }},
      {"normalized_epsilon", [](RunConfig& c, const auto& k, const auto& v) { c.normalized_epsilon = parse_bool(k, v); }},
      {"steps", [](RunConfig& c, const auto& k, const auto& v) { c.steps = parse_integer<int>(k, v); }},
      {"noise_kind",
       [](RunConfig& c, const auto&, const auto& v) {
         try {
           c.noise_kind = parse_noise_kind(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       }},
      {"lambda_e", [](RunConfig& c, const auto& k, const auto& v) { c.lambda_e = parse_double(k, v); }},
      {"edge_buckets", [](RunConfig& c, const auto& k, const auto& v) { c.edge_buckets = parse_integer<int>(k, v); }},
      {"hidden", [](RunConfig& c, const auto& k, const auto& v) { c.hidden = parse_integer<int>(k, v); }},
      {"layers", [](RunConfig& c, const auto& k, const auto& v) { c.layers = parse_integer<int>(k, v); }},
      {"train_iterations", [](RunConfig& c, const auto& k, const auto& v) { c.train_iterations = parse_integer<int>(k, v); }},
      {"expander_iterations",
       [](RunConfig& c, const auto& k, const auto& v) { c.expander_iterations = parse_integer<int>(k, v); }},
      {"batch", [](RunConfig& c, const auto& k, const auto& v) { c.batch = parse_integer<int>(k, v); }},
      {"lr", [](RunConfig& c, const auto& k, const auto& v) { c.lr = parse_double(k, v); }},
      {"sample_count", [](RunConfig& c, const auto& k, const auto& v) { c.sample_count = parse_integer<int>(k, v); }},
      {"temperature", [](RunConfig& c, const auto& k, const auto& v) { c.temperature = parse_double(k, v); }},
  };
  return table;
}

}  // namespace

RunConfig RunConfig::defaults(Family family) {
  RunConfig c;
  const DatasetSpec spec = DatasetSpec::defaults(family);
  c.family = family;
  c.n_min = spec.n_min;
  c.n_max = spec.n_max;
  c.sbm = spec.sbm;
  c.train_count = family == Family::community20 ? 100 : 128;
  c.test_count = 40;
  return c;
}

DatasetSpec RunConfig::dataset_spec() const {
  DatasetSpec spec = DatasetSpec::defaults(family);
  spec.count = train_count + test_count;
  spec.n_min = n_min;
  spec.n_max = n_max;
  spec.seed = seed;
  spec.sbm = sbm;
  return spec;
}

CoarseningOptions RunConfig::coarsening_options() const {
  CoarseningOptions o;
  o.target_ratio = target_ratio;
  o.v_max = v_max;
  o.k_eig = k_eig;
  o.max_attempts = coarsen_attempts;
  o.iteration_limit = rec_iterations;
  o.normalized_projection = normalized_epsilon;
  return o;
}

std::map<std::string, std::string> RunConfig::entries() const {
  std::map<std::string, std::string> e;
  e["family"] = to_string(family);
  e["train_count"] = std::to_string(train_count);
  e["test_count"] = std::to_string(test_count);
  e["n_min"] = std::to_string(n_min);
  e["n_max"] = std::to_string(n_max);
  e["sbm_communities"] = std::to_string(sbm.communities);
  e["sbm_p_in"] = format_real(sbm.p_in);
  e["sbm_p_out"] = format_real(sbm.p_out);
  e["target_ratio"] = format_real(target_ratio);
  e["v_max"] = std::to_string(v_max);
  e["k_eig"] = std::to_string(k_eig);
  e["rec_iterations"] = std::to_string(rec_iterations);
  e["coarsen_attempts"] = std::to_string(coarsen_attempts);
  e["latent_m"] = std::to_string(latent_m);
  e["normalized_epsilon"] = normalized_epsilon ? "true" : "false";
  e["steps"] = std::to_string(steps);
  e["noise_kind"] = to_string(noise_kind);
  e["lambda_e"] = format_real(lambda_e);
  e["edge_buckets"] = std::to_string(edge_buckets);
  e["hidden"] = std::to_string(hidden);
  e["layers"] = std::to_string(layers);
  e["train_iterations"] = std::to_string(train_iterations);
  e["expander_iterations"] = std::to_string(expander_iterations);
  e["batch"] = std::to_string(batch);
  e["lr"] = format_real(lr);
  e["sample_count"] = std::to_string(sample_count);
  e["temperature"] = format_real(temperature);
  return e;
}

std::string RunConfig::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_text())));
  return buf;
}

void RunConfig::validate() const {
  require(train_count >= 1 && test_count >= 1, "train_count and test_count must be at least 1");
  require(n_min >= 1 && n_min <= n_max, "need 1 <= n_min <= n_max");
  require(n_max <= 256, "n_max must be at most 256");
  if (family == Family::planar) require(n_min >= 3, "planar graphs need n_min >= 3");
  require(sbm.communities >= 1, "sbm_communities must be at least 1");
  require(sbm.p_in >= 0.0 && sbm.p_in <= 1.0 && sbm.p_out >= 0.0 && sbm.p_out <= 1.0,
          "sbm probabilities must lie in [0, 1]");
  require(target_ratio > 0.0 && target_ratio <= 1.0, "target_ratio must lie in (0, 1]");
  require(v_max >= 1 && v_max <= 64, "v_max must lie in [1, 64]");
  require(k_eig >= 1, "k_eig must be at least 1");
  require(rec_iterations >= 0, "rec_iterations must be nonnegative (0 means 10 n)");
  require(coarsen_attempts >= 1, "coarsen_attempts must be at least 1");
  require(latent_m >= 0, "latent_m must be nonnegative");
  require(steps >= 1 && steps <= 100000, "steps must lie in [1, 100000]");
  require(lambda_e >= 0.0, "lambda_e must be nonnegative");
  require(edge_buckets >= 2 && edge_buckets <= 16, "edge_buckets must lie in [2, 16]");
  require(hidden >= 1 && hidden <= 1024, "hidden must lie in [1, 1024]");
  require(layers >= 0 && layers <= 32, "layers must lie in [0, 32]");
  require(train_iterations >= 0 && expander_iterations >= 0, "iteration counts must be nonnegative");
  require(batch >= 1, "batch must be at least 1");
  require(lr > 0.0, "lr must be positive");
  require(sample_count >= 1, "sample_count must be at least 1");
  require(temperature >= 0.0, "temperature must be nonnegative");
}

RunConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  Family family = Family::community20;
  for (const auto& [k, v] : pairs) {
    if (k == "family") {
      try {
        family = parse_family(v);
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
  }
  RunConfig cfg = RunConfig::defaults(family);
  const auto& table = setters();
  for (const auto& [k, v] : pairs) {
    if (k == "family") continue;
    auto it = table.find(k);
    if (it == table.end()) throw ConfigError("unknown config key '" + k + "'");
    it->second(cfg, k, v);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace lgdc
