#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <doctest.h>

#include "spikerec/errors.hpp"
#include "spikerec/expander.hpp"
#include "spikerec/pipeline.hpp"
#include "spikerec/propagate.hpp"
#include "spikerec/rng.hpp"

using namespace spikerec;

namespace {

ExperimentConfig small_config(std::size_t s, std::uint64_t seed,
                              std::size_t n_override = 101) {
  ExperimentConfig config;
  config.s = s;
  config.lambda = 1.0;
  config.omega = 0.25;
  config.d = 3;
  config.seed = seed;
  config.n_override = n_override;
  return config;
}

}  // namespace

TEST_CASE("sizing bound frozen values") {
  CHECK(min_vertex_count(2, 1.0, 0.25, 3) == 816);
  CHECK(min_vertex_count(3, 1.0, 0.25, 3) == 1075);
  CHECK(min_vertex_count(4, 1.0, 0.25, 4) == 567);

  CHECK_THROWS_AS(min_vertex_count(1, 10.0, 0.2, 3), DomainError);  // s <= lambda*omega
  CHECK_THROWS_AS(min_vertex_count(2, 1.0, 0.25, 2), DomainError);  // degree too small
  CHECK_THROWS_AS(min_vertex_count(2, -1.0, 0.25, 3), DomainError);
}

TEST_CASE("next prime at or above") {
  CHECK(next_usable_prime(816) == 821);
  CHECK(next_usable_prime(1075) == 1087);
  CHECK(next_usable_prime(567) == 569);
  CHECK(next_usable_prime(2) == 2);
  CHECK(next_usable_prime(14) == 17);
  CHECK(next_usable_prime(13) == 13);
  CHECK(next_usable_prime(0) == 2);
  CHECK(next_usable_prime(1) == 2);
}

TEST_CASE("derived sizes resolve the parity of the graph order") {
  const DerivedSizes a = derive_sizes(small_config(2, 0, 0));
  CHECK(a.min_n == 816);
  CHECK(a.n == 821);
  CHECK(a.m == 410);
  CHECK(a.graph_size == 822);  // odd degree needs an even vertex count
  CHECK_FALSE(a.overridden);

  ExperimentConfig c3 = small_config(3, 0, 0);
  const DerivedSizes b = derive_sizes(c3);
  CHECK(b.min_n == 1075);
  CHECK(b.n == 1087);
  CHECK(b.m == 543);
  CHECK(b.graph_size == 1088);

  ExperimentConfig c4 = small_config(4, 0, 0);
  c4.d = 4;
  const DerivedSizes c = derive_sizes(c4);
  CHECK(c.min_n == 567);
  CHECK(c.n == 569);
  CHECK(c.m == 284);
  CHECK(c.graph_size == 569);  // even degree keeps the grid order

  const DerivedSizes o = derive_sizes(small_config(2, 0, 101));
  CHECK(o.n == 101);
  CHECK(o.m == 50);
  CHECK(o.graph_size == 102);
  CHECK(o.overridden);

  CHECK_THROWS_AS(derive_sizes(small_config(2, 0, 100)), DomainError);  // composite
  ExperimentConfig wide = small_config(2, 0, 101);
  wide.omega = 0.6;
  CHECK_THROWS_AS(derive_sizes(wide), DomainError);  // lambda*omega >= 1/2
}

TEST_CASE("decimation stride frozen values") {
  CHECK(decimation_stride(410, 2, 0.25 / 410.0, 1.0) == 51);
  CHECK(decimation_stride(543, 3, 0.25 / 543.0, 1.0) == 67);
  CHECK(decimation_stride(284, 4, 0.25 / 284.0, 1.0) == 28);
  // Never below one, even when the angle budget is already exceeded.
  CHECK(decimation_stride(8, 2, 0.2, 1.0) == 1);
}

TEST_CASE("measurement synthesis invariants at a small grid order") {
  const SpikeSignal mu = random_signal(2, 1.0, 1.0 / 3.0, 0.5, 2.0, 71);
  const ExperimentConfig config = small_config(2, 5);
  const MeasurementSetup setup = synthesize_measurement(mu, config);

  CHECK(setup.sizes.n == 101);
  CHECK(setup.graph.vertex_count() == 102);
  CHECK(setup.embedding.domain == EmbeddingDomain::time);
  REQUIRE(setup.embedding.points.size() == 102);
  // Vertex 102-1 aliases grid residue 0: its sample point is exactly 2*lambda.
  CHECK(setup.embedding.points[101] == 2.0);
  CHECK(setup.data.total_count() == 4 * 102);  // (d+1) per vertex
  CHECK(setup.data.sanity_check());

  const MeasurementSetup again = synthesize_measurement(mu, config);
  CHECK(setup.data.m0 == again.data.m0);
  CHECK(setup.data.m1 == again.data.m1);
  CHECK(setup.data.m2 == again.data.m2);
  CHECK(setup.graph.edges() == again.graph.edges());
}

TEST_CASE("zero signal measures to all-zero data and recovers to zero") {
  const SpikeSignal zero(1.0);
  const ExperimentConfig config = small_config(2, 9, 11);
  const MeasurementSetup setup = synthesize_measurement(zero, config);
  for (double v : setup.data.m0) CHECK(v == 0.0);
  for (double v : setup.data.m1) CHECK(v == 0.0);
  for (double v : setup.data.m2) CHECK(v == 0.0);

  const RecoveryOutput out =
      end_to_end_recover(setup.graph, setup.embedding, setup.data, config);
  CHECK(out.signal.is_zero());
  CHECK(out.diagnostics.component_size == 0);
}

TEST_CASE("signal size above the declared sparsity is rejected") {
  const SpikeSignal mu = random_signal(3, 1.0, 0.2, 0.5, 2.0, 3);
  CHECK_THROWS_AS(synthesize_measurement(mu, small_config(2, 1)), DomainError);

  const SpikeSignal wrong_window({0.1}, {Complex(1, 0)}, 2.0);
  CHECK_THROWS_AS(synthesize_measurement(wrong_window, small_config(2, 1)), DomainError);
}

TEST_CASE("round trip at a small grid order recovers the class") {
  const SpikeSignal mu = random_signal(3, 1.0, 0.25, 0.5, 2.0, 404);
  const ExperimentConfig config = small_config(3, 12);
  const MeasurementSetup setup = synthesize_measurement(mu, config);
  const RecoveryOutput out =
      end_to_end_recover(setup.graph, setup.embedding, setup.data, config);

  const RecoveryReport report = verify_recovery(mu, out.signal);
  CHECK(report.matched);
  CHECK(report.class_distance <= 1e-6);
  CHECK(out.diagnostics.model_order == 3);
  CHECK(out.diagnostics.component_size * 3 > setup.graph.vertex_count() * 2);
  CHECK(out.diagnostics.refine_iterations == 6);
  CHECK(out.diagnostics.fit_residual < 1e-8);
}

TEST_CASE("a quarter-turn input rotation leaves the data and output bit-identical") {
  const SpikeSignal mu = random_signal(2, 1.0, 0.3, 0.5, 2.0, 81);
  const ExperimentConfig config = small_config(2, 6);
  const MeasurementSetup setup = synthesize_measurement(mu, config);
  const MeasurementSetup rotated =
      synthesize_measurement(mu.rotated(Complex(0, 1)), config, setup.graph);

  CHECK(setup.data.m0 == rotated.data.m0);
  CHECK(setup.data.m1 == rotated.data.m1);
  CHECK(setup.data.m2 == rotated.data.m2);

  const RecoveryOutput a =
      end_to_end_recover(setup.graph, setup.embedding, setup.data, config);
  const RecoveryOutput b =
      end_to_end_recover(rotated.graph, rotated.embedding, rotated.data, config);
  CHECK(a.signal.supports() == b.signal.supports());
  CHECK(a.signal.coeffs() == b.signal.coeffs());
}

TEST_CASE("a generic input rotation yields the same representative") {
  const SpikeSignal mu = random_signal(2, 1.0, 0.3, 0.5, 2.0, 82);
  const ExperimentConfig config = small_config(2, 7);
  const MeasurementSetup setup = synthesize_measurement(mu, config);
  const Complex u = std::polar(1.0, 2.1);
  const MeasurementSetup rotated =
      synthesize_measurement(mu.rotated(u), config, setup.graph);

  const RecoveryOutput a =
      end_to_end_recover(setup.graph, setup.embedding, setup.data, config);
  const RecoveryOutput b =
      end_to_end_recover(rotated.graph, rotated.embedding, rotated.data, config);
  REQUIRE(a.signal.size() == b.signal.size());
  double gap = 0.0;
  for (std::size_t j = 0; j < a.signal.size(); ++j) {
    gap += std::abs(a.signal.supports()[j] - b.signal.supports()[j]);
    gap += std::abs(a.signal.coeffs()[j] - b.signal.coeffs()[j]);
  }
  CHECK(gap < 1e-6);
}

TEST_CASE("corrupting one intensity is either caught or visibly wrong") {
  const SpikeSignal mu = random_signal(2, 1.0, 0.3, 0.5, 2.0, 83);
  const ExperimentConfig config = small_config(2, 8);
  MeasurementSetup setup = synthesize_measurement(mu, config);
  setup.data.m1[0] *= 1.1;

  bool caught = false;
  bool wrong = false;
  try {
    const RecoveryOutput out =
        end_to_end_recover(setup.graph, setup.embedding, setup.data, config);
    wrong = !verify_recovery(mu, out.signal).matched;
  } catch (const InconsistencyError&) {
    caught = true;
  }
  CHECK((caught || wrong));
}

TEST_CASE("stage labels prefix propagated errors") {
  const SpikeSignal mu = random_signal(2, 1.0, 0.3, 0.5, 2.0, 84);
  const ExperimentConfig config = small_config(2, 10);
  MeasurementSetup setup = synthesize_measurement(mu, config);
  // Halving one vertex intensity breaks realizability beyond any tolerance.
  setup.data.m0[3] *= 0.5;
  try {
    end_to_end_recover(setup.graph, setup.embedding, setup.data, config);
    FAIL("expected an inconsistency");
  } catch (const InconsistencyError& e) {
    CHECK(std::string(e.what()).find("phase propagation:") == 0);
  }
}

TEST_CASE("a component below the sample count cannot drive the inversion") {
  const ExperimentConfig config = small_config(2, 11, 11);  // n = 11, m = 5
  const DerivedSizes sizes = derive_sizes(config);
  const RegularGraph g = ramanujan_graph(sizes.graph_size, config.d, config.seed);

  // Nonzero values on a single connected triple: realizable data whose usable
  // component holds fewer than m distinct grid residues.
  std::vector<Complex> values(sizes.graph_size, Complex(0, 0));
  const auto edge = g.edges().front();
  values[edge.first] = Complex(1, 0);
  values[edge.second] = Complex(0.5, 0.5);
  for (std::size_t w : g.adjacency()[edge.second]) {
    if (w != edge.first) {
      values[w] = Complex(0.3, -0.2);
      break;
    }
  }

  const VertexEmbedding embedding =
      time_embedding(sizes.graph_size, config.lambda, sizes.n);
  const MagnitudeData data = measure(values, g);
  CHECK_THROWS_AS(end_to_end_recover(g, embedding, data, config),
                  ComponentTooSmallError);
}

TEST_CASE("grid observations deduplicate the wrap-around alias") {
  PhaseAssignment p;
  p.component = {0, 5, 11};  // vertex 11 aliases residue 0 when n = 11
  p.values = {Complex(1, 0), Complex(0, 1), Complex(0.9, 0.1)};
  p.anchor = 0;
  const GridObservations obs = component_grid_observations(p, 11);
  REQUIRE(obs.indices.size() == 2);
  CHECK(obs.indices == std::vector<std::size_t>{0, 5});
  CHECK(obs.values[0] == Complex(1, 0));  // original grid point outranks the alias
  CHECK(obs.values[1] == Complex(0, 1));
}

TEST_CASE("verify_recovery quotient behavior") {
  const SpikeSignal mu({0.2, 0.7}, {Complex(1, 1), Complex(-2, 0)}, 1.0);
  CHECK(verify_recovery(mu, mu.rotated(Complex(0, 1))).matched);

  const SpikeSignal moved({0.2, 0.7 + 2e-6}, {Complex(1, 1), Complex(-2, 0)}, 1.0);
  CHECK_FALSE(verify_recovery(mu, moved, 1e-6).matched);
}

TEST_CASE("embedding and graph must match the derived sizes") {
  const SpikeSignal mu = random_signal(2, 1.0, 0.3, 0.5, 2.0, 85);
  const ExperimentConfig config = small_config(2, 13);
  const MeasurementSetup setup = synthesize_measurement(mu, config);

  ExperimentConfig other = config;
  other.n_override = 103;
  CHECK_THROWS_AS(end_to_end_recover(setup.graph, setup.embedding, setup.data, other),
                  DomainError);

  VertexEmbedding wrong = setup.embedding;
  wrong.domain = EmbeddingDomain::frequency;
  CHECK_THROWS_AS(end_to_end_recover(setup.graph, wrong, setup.data, config),
                  DomainError);
}
