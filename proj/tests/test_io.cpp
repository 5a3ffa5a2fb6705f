#include <cstdio>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "spikerec/errors.hpp"
#include "spikerec/io.hpp"
#include "spikerec/pipeline.hpp"
#include "spikerec/rng.hpp"
#include "spikerec/spikes.hpp"

using namespace spikerec;

TEST_CASE("signal round trip preserves every double exactly") {
  const SpikeSignal mu = random_signal(4, 1.0, 0.1, 0.5, 2.0, 17);
  const SpikeSignal back = io::signal_from_json(io::to_json(mu));
  CHECK(back.supports() == mu.supports());
  CHECK(back.coeffs() == mu.coeffs());
  CHECK(back.lambda() == mu.lambda());

  const SpikeSignal zero(0.75);
  const SpikeSignal zback = io::signal_from_json(io::to_json(zero));
  CHECK(zback.is_zero());
  CHECK(zback.lambda() == 0.75);
}

TEST_CASE("double encoding round trips through a second pass") {
  const SpikeSignal mu = random_signal(3, 1.0, 0.2, 0.5, 2.0, 23);
  const std::string once = io::to_json(mu);
  const std::string twice = io::to_json(io::signal_from_json(once));
  CHECK(once == twice);
}

TEST_CASE("graph round trip") {
  const RegularGraph g = random_regular(12, 3, 9);
  const RegularGraph back = io::graph_from_json(io::to_json(g));
  CHECK(back.vertex_count() == g.vertex_count());
  CHECK(back.degree() == g.degree());
  CHECK(back.edges() == g.edges());
}

TEST_CASE("config round trip keeps defaults and overrides") {
  ExperimentConfig c;
  c.s = 3;
  c.lambda = 0.9;
  c.omega = 0.3;
  c.d = 4;
  c.seed = 12345;
  c.n_override = 101;
  c.noise_sigma = 0.25;
  c.noise_seed = 7;
  const ExperimentConfig back = io::config_from_json(io::to_json(c));
  CHECK(back.s == c.s);
  CHECK(back.lambda == c.lambda);
  CHECK(back.omega == c.omega);
  CHECK(back.d == c.d);
  CHECK(back.seed == c.seed);
  CHECK(back.tau_rel == c.tau_rel);
  CHECK(back.n_override == c.n_override);
  CHECK(back.noise_sigma == c.noise_sigma);
  CHECK(back.noise_seed == c.noise_seed);

  // Omitted optional fields fall back to defaults; s is mandatory.
  const ExperimentConfig sparse = io::config_from_json(R"({"s": 2})");
  CHECK(sparse.s == 2);
  CHECK(sparse.lambda == 1.0);
  CHECK(sparse.omega == 0.25);
  CHECK(sparse.d == 3);
  CHECK_THROWS_AS(io::config_from_json(R"({"lambda": 1.0})"), IoError);
}

TEST_CASE("measurement bundle round trip") {
  const SpikeSignal mu = random_signal(2, 1.0, 0.3, 0.5, 2.0, 31);
  ExperimentConfig config;
  config.s = 2;
  config.n_override = 11;
  config.seed = 3;
  const MeasurementSetup setup = synthesize_measurement(mu, config);

  const std::string text = io::to_json(setup, config);
  const io::MeasurementBundle back = io::measurement_from_json(text);
  CHECK(back.config.s == config.s);
  CHECK(back.config.seed == config.seed);
  CHECK(back.setup.graph.edges() == setup.graph.edges());
  CHECK(back.setup.embedding.points == setup.embedding.points);
  CHECK(back.setup.embedding.domain == setup.embedding.domain);
  CHECK(back.setup.data.m0 == setup.data.m0);
  CHECK(back.setup.data.m1 == setup.data.m1);
  CHECK(back.setup.data.m2 == setup.data.m2);
  CHECK(back.setup.data.edge_order == setup.data.edge_order);
  CHECK(back.setup.sizes.n == setup.sizes.n);
  CHECK(back.setup.sizes.graph_size == setup.sizes.graph_size);

  // A stored grid order that disagrees with the config is data corruption.
  nlohmann::json j = nlohmann::json::parse(text);
  j["sizes"]["n"] = 13;
  CHECK_THROWS_AS(io::measurement_from_json(j.dump()), IoError);
}

TEST_CASE("recovery output round trip") {
  RecoveryOutput out{SpikeSignal({0.25}, {Complex(1.5, -0.5)}, 1.0), {}};
  out.diagnostics.component_size = 100;
  out.diagnostics.component_fraction = 0.98;
  out.diagnostics.resample_residual = 1e-14;
  out.diagnostics.resample_condition = 1.0;
  out.diagnostics.annihilator_residual = 2e-13;
  out.diagnostics.fit_residual = 3e-15;
  out.diagnostics.decimation = 6;
  out.diagnostics.model_order = 1;
  out.diagnostics.refine_iterations = 6;

  const RecoveryOutput back = io::recovery_from_json(io::to_json(out));
  CHECK(back.signal.supports() == out.signal.supports());
  CHECK(back.signal.coeffs() == out.signal.coeffs());
  CHECK(back.diagnostics.component_size == 100);
  CHECK(back.diagnostics.component_fraction == 0.98);
  CHECK(back.diagnostics.resample_residual == 1e-14);
  CHECK(back.diagnostics.resample_condition == 1.0);
  CHECK(back.diagnostics.annihilator_residual == 2e-13);
  CHECK(back.diagnostics.fit_residual == 3e-15);
  CHECK(back.diagnostics.decimation == 6);
  CHECK(back.diagnostics.model_order == 1);
  CHECK(back.diagnostics.refine_iterations == 6);
}

TEST_CASE("any_signal_from_json accepts bare signals and recovery records") {
  const SpikeSignal mu({0.4}, {Complex(2, 0)}, 1.0);
  const SpikeSignal bare = io::any_signal_from_json(io::to_json(mu));
  CHECK(bare.supports() == mu.supports());

  const RecoveryOutput out{mu, {}};
  const SpikeSignal nested = io::any_signal_from_json(io::to_json(out));
  CHECK(nested.supports() == mu.supports());
  CHECK(nested.coeffs() == mu.coeffs());
}

TEST_CASE("malformed documents raise IoError, not library-specific exceptions") {
  CHECK_THROWS_AS(io::signal_from_json("{"), IoError);
  CHECK_THROWS_AS(io::signal_from_json(R"({"lambda": 1.0})"), IoError);
  CHECK_THROWS_AS(io::signal_from_json(R"({"lambda": 1.0, "supports": "x", "coeffs": []})"),
                  IoError);
  CHECK_THROWS_AS(io::graph_from_json(R"({"vertices": 4})"), IoError);
  CHECK_THROWS_AS(io::measurement_from_json("[]"), IoError);
  CHECK_THROWS_AS(io::recovery_from_json("null"), IoError);

  // Structurally valid JSON with semantically bad content surfaces the
  // library's own domain validation.
  CHECK_THROWS_AS(
      io::signal_from_json(R"({"lambda": 1.0, "supports": [2.0], "coeffs": [[1, 0]]})"),
      DomainError);
}

TEST_CASE("file round trip and missing-file failure") {
  const std::string path = "io_test_roundtrip.json";
  const SpikeSignal mu = random_signal(2, 1.0, 0.2, 0.5, 2.0, 41);
  io::write_file(path, io::to_json(mu));
  const SpikeSignal back = io::signal_from_json(io::read_file(path));
  CHECK(back.supports() == mu.supports());
  CHECK(back.coeffs() == mu.coeffs());
  std::remove(path.c_str());

  CHECK_THROWS_AS(io::read_file("definitely_not_here_9321.json"), IoError);
}
