#include "spikerec/io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "spikerec/errors.hpp"

namespace spikerec::io {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw IoError("complex values must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_vector_to_json(const std::vector<Complex>& v) {
  json arr = json::array();
  for (const Complex& z : v) arr.push_back(complex_to_json(z));
  return arr;
}

std::vector<Complex> complex_vector_from_json(const json& j) {
  std::vector<Complex> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(complex_from_json(e));
  return v;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed record: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(std::string("record field '") + key + "': " + e.what());
  }
}

// json exceptions escaping through any reader become IoError; object-level
// validation errors (DomainError and friends) pass through untouched.
template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed record: ") + e.what());
  }
}

json signal_json(const SpikeSignal& signal) {
  json j;
  j["lambda"] = signal.lambda();
  j["supports"] = signal.supports();
  j["coeffs"] = complex_vector_to_json(signal.coeffs());
  return j;
}

SpikeSignal signal_from(const json& j) {
  return SpikeSignal(field<std::vector<double>>(j, "supports"),
                     complex_vector_from_json(j.at("coeffs")),
                     field<double>(j, "lambda"));
}

json graph_json(const RegularGraph& graph) {
  json j;
  j["vertices"] = graph.vertex_count();
  j["degree"] = graph.degree();
  json edges = json::array();
  for (const auto& [a, b] : graph.edges()) edges.push_back(json::array({a, b}));
  j["edges"] = std::move(edges);
  return j;
}

RegularGraph graph_from(const json& j) {
  std::vector<RegularGraph::Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw IoError("graph edges must be [j, k] pairs");
    }
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return RegularGraph(field<std::size_t>(j, "vertices"), field<std::size_t>(j, "degree"),
                      std::move(edges));
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["s"] = c.s;
  j["lambda"] = c.lambda;
  j["omega"] = c.omega;
  j["d"] = c.d;
  j["seed"] = c.seed;
  j["tau_rel"] = c.tau_rel;
  j["n_override"] = c.n_override;
  j["noise_sigma"] = c.noise_sigma;
  j["noise_seed"] = c.noise_seed;
  return j;
}

ExperimentConfig config_from(const json& j) {
  ExperimentConfig defaults;
  ExperimentConfig c;
  c.s = field<std::size_t>(j, "s");
  c.lambda = j.value("lambda", defaults.lambda);
  c.omega = j.value("omega", defaults.omega);
  c.d = j.value("d", defaults.d);
  c.seed = j.value("seed", defaults.seed);
  c.tau_rel = j.value("tau_rel", defaults.tau_rel);
  c.n_override = j.value("n_override", defaults.n_override);
  c.noise_sigma = j.value("noise_sigma", defaults.noise_sigma);
  c.noise_seed = j.value("noise_seed", defaults.noise_seed);
  return c;
}

json embedding_json(const VertexEmbedding& e) {
  json j;
  j["domain"] = e.domain == EmbeddingDomain::time ? "time" : "frequency";
  j["points"] = e.points;
  return j;
}

VertexEmbedding embedding_from(const json& j) {
  VertexEmbedding e;
  const std::string domain = field<std::string>(j, "domain");
  if (domain == "time") {
    e.domain = EmbeddingDomain::time;
  } else if (domain == "frequency") {
    e.domain = EmbeddingDomain::frequency;
  } else {
    throw IoError("embedding domain must be 'time' or 'frequency'");
  }
  e.points = field<std::vector<double>>(j, "points");
  return e;
}

json data_json(const MagnitudeData& d) {
  json j;
  j["m0"] = d.m0;
  json edges = json::array();
  for (const auto& [a, b] : d.edge_order) edges.push_back(json::array({a, b}));
  j["edges"] = std::move(edges);
  j["m1"] = d.m1;
  j["m2"] = d.m2;
  return j;
}

MagnitudeData data_from(const json& j) {
  MagnitudeData d;
  d.m0 = field<std::vector<double>>(j, "m0");
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw IoError("data edges must be [j, k] pairs");
    }
    d.edge_order.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  d.m1 = field<std::vector<double>>(j, "m1");
  d.m2 = field<std::vector<double>>(j, "m2");
  if (d.m1.size() != d.edge_order.size() || d.m2.size() != d.edge_order.size()) {
    throw IoError("edge intensity arrays disagree with the edge list");
  }
  return d;
}

json sizes_json(const DerivedSizes& s) {
  json j;
  j["min_n"] = s.min_n;
  j["n"] = s.n;
  j["m"] = s.m;
  j["graph_size"] = s.graph_size;
  j["overridden"] = s.overridden;
  return j;
}

json diagnostics_json(const RecoveryDiagnostics& d) {
  json j;
  j["component_size"] = d.component_size;
  j["component_fraction"] = d.component_fraction;
  j["resample_residual"] = d.resample_residual;
  j["resample_condition"] = d.resample_condition;
  j["annihilator_residual"] = d.annihilator_residual;
  j["fit_residual"] = d.fit_residual;
  j["decimation"] = d.decimation;
  j["model_order"] = d.model_order;
  j["refine_iterations"] = d.refine_iterations;
  return j;
}

RecoveryDiagnostics diagnostics_from(const json& j) {
  RecoveryDiagnostics d;
  d.component_size = j.value("component_size", std::size_t{0});
  d.component_fraction = j.value("component_fraction", 0.0);
  d.resample_residual = j.value("resample_residual", 0.0);
  d.resample_condition = j.value("resample_condition", 0.0);
  d.annihilator_residual = j.value("annihilator_residual", 0.0);
  d.fit_residual = j.value("fit_residual", 0.0);
  d.decimation = j.value("decimation", std::size_t{1});
  d.model_order = j.value("model_order", std::size_t{0});
  d.refine_iterations = j.value("refine_iterations", std::size_t{0});
  return d;
}

}  // namespace

std::string to_json(const SpikeSignal& signal) { return signal_json(signal).dump(); }

std::string to_json(const RegularGraph& graph) { return graph_json(graph).dump(); }

std::string to_json(const ExperimentConfig& config) { return config_json(config).dump(); }

std::string to_json(const MeasurementSetup& setup, const ExperimentConfig& config) {
  json j;
  j["config"] = config_json(config);
  j["sizes"] = sizes_json(setup.sizes);
  j["graph"] = graph_json(setup.graph);
  j["embedding"] = embedding_json(setup.embedding);
  j["data"] = data_json(setup.data);
  return j.dump();
}

std::string to_json(const RecoveryOutput& output) {
  json j;
  j["signal"] = signal_json(output.signal);
  j["diagnostics"] = diagnostics_json(output.diagnostics);
  return j.dump();
}

SpikeSignal signal_from_json(const std::string& text) {
  return guarded([&] { return signal_from(parse(text)); });
}

RegularGraph graph_from_json(const std::string& text) {
  return guarded([&] { return graph_from(parse(text)); });
}

ExperimentConfig config_from_json(const std::string& text) {
  return guarded([&] { return config_from(parse(text)); });
}

MeasurementBundle measurement_from_json(const std::string& text) {
  return guarded([&]() -> MeasurementBundle {
    const json j = parse(text);
    ExperimentConfig config = config_from(j.at("config"));
    const DerivedSizes sizes = derive_sizes(config);
    if (j.contains("sizes") && field<std::size_t>(j.at("sizes"), "n") != sizes.n) {
      throw IoError("stored sizes disagree with the stored config");
    }
    return {config, MeasurementSetup{graph_from(j.at("graph")),
                                     embedding_from(j.at("embedding")),
                                     data_from(j.at("data")), sizes}};
  });
}

RecoveryOutput recovery_from_json(const std::string& text) {
  return guarded([&]() -> RecoveryOutput {
    const json j = parse(text);
    return {signal_from(j.at("signal")), diagnostics_from(j.at("diagnostics"))};
  });
}

SpikeSignal any_signal_from_json(const std::string& text) {
  return guarded([&] {
    const json j = parse(text);
    if (j.contains("signal")) {
      return signal_from(j.at("signal"));
    }
    return signal_from(j);
  });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path + " for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw IoError("failed while reading " + path);
  }
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
  if (!out.good()) {
    throw IoError("failed while writing " + path);
  }
}

}  // namespace spikerec::io
