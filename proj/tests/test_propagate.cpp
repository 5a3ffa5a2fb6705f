#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "spikerec/errors.hpp"
#include "spikerec/measurement.hpp"
#include "spikerec/propagate.hpp"
#include "spikerec/rng.hpp"

using namespace spikerec;

namespace {

RegularGraph cycle4() { return RegularGraph(4, 2, {{0, 1}, {0, 3}, {1, 2}, {2, 3}}); }

RegularGraph cycle6() {
  return RegularGraph(6, 2, {{0, 1}, {0, 5}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
}

// Intensities an edge (j, k) would produce from values (aj, ak).
void edge_intensities(Complex aj, Complex ak, double& m1, double& m2) {
  m1 = std::norm(aj - ak);
  m2 = std::norm(aj - Complex(0, 1) * ak);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

TEST_CASE("relative_product hand oracle") {
  // a = 1+2i, b = 3-i: m0 = (5, 10), |a-b|^2 = 13, |a-ib|^2 = 1,
  // a * conj(b) = 1 + 7i.
  const Complex r = relative_product(5.0, 10.0, 13.0, 1.0);
  CHECK(r.real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.imag() == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("relative_product recovers a*conj(b) for random pairs") {
  Rng rng(31);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Complex a(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Complex b(rng.uniform(-2, 2), rng.uniform(-2, 2));
    double m1 = 0, m2 = 0;
    edge_intensities(a, b, m1, m2);
    const Complex r = relative_product(std::norm(a), std::norm(b), m1, m2);
    worst = std::max(worst, std::abs(r - a * std::conj(b)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("relative_product rejects negative intensities") {
  CHECK_THROWS_AS(relative_product(-1.0, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(relative_product(1.0, 1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("induced_subgraph drops vanishing vertices and their edges") {
  const RegularGraph g = cycle4();
  const std::vector<double> m0{1.0, 0.0, 1.0, 1.0};
  const InducedSubgraph sub = induced_subgraph(g, m0, 1e-6);
  CHECK(sub.vertices == std::vector<std::size_t>{0, 2, 3});
  CHECK(sub.edges == std::vector<RegularGraph::Edge>{{0, 3}, {2, 3}});
}

TEST_CASE("phase propagation reproduces values on a full cycle") {
  const std::vector<Complex> a{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const PhaseAssignment p = propagate_phases(cycle4(), measure(a, cycle4()));
  REQUIRE(p.component == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(p.anchor == 0);
  // a[0] = 1 is already real nonnegative, so the anchored representative is a.
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(p.values[i] - a[i]) < 1e-12);
  }
}

TEST_CASE("anchored representative differs from a rotated input only upstream") {
  const std::vector<Complex> a{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<Complex> rotated;
  const Complex u = std::polar(1.0, 0.9);
  for (const Complex& z : a) rotated.push_back(u * z);

  const PhaseAssignment p = propagate_phases(cycle4(), measure(rotated, cycle4()));
  // Anchoring cancels the global factor: same representative as the
  // unrotated input.
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(p.values[i] - a[i]) < 1e-10);
  }
  CHECK(p.values[p.anchor].imag() == 0.0);
  CHECK(p.values[p.anchor].real() >= 0.0);
}

TEST_CASE("a zero vertex splits off and the rest propagates") {
  const std::vector<Complex> a{{1, 0}, {0, 0}, {1, 0}, {0, 1}};
  const PhaseAssignment p = propagate_phases(cycle4(), measure(a, cycle4()));
  REQUIRE(p.component == std::vector<std::size_t>{0, 2, 3});
  CHECK(p.anchor == 0);
  CHECK(std::abs(p.values[0] - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(p.values[1] - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(p.values[2] - Complex(0, 1)) < 1e-12);
}

TEST_CASE("equal-size components tie-break toward the smallest vertex") {
  const std::vector<Complex> a{{1, 0}, {0, 0}, {1, 0}, {0.5, 0}, {0, 0}, {0, 1}};
  const PhaseAssignment p = propagate_phases(cycle6(), measure(a, cycle6()));
  // Zeros at 1 and 4 leave {0,5} and {2,3}; both have two vertices.
  CHECK(p.component == std::vector<std::size_t>{0, 5});
  CHECK(p.anchor == 0);
}

TEST_CASE("all-zero data yields the empty assignment") {
  const std::vector<Complex> a{{0, 0}, {0, 0}, {0, 0}, {0, 0}};
  const PhaseAssignment p = propagate_phases(cycle4(), measure(a, cycle4()));
  CHECK(p.empty());
}

TEST_CASE("corrupted difference intensity is caught by the consistency check") {
  const std::vector<Complex> a{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  MagnitudeData data = measure(a, cycle4());
  data.m1[2] *= 1.5;
  CHECK_THROWS_AS(propagate_phases(cycle4(), data), InconsistencyError);
}

TEST_CASE("edge list and data shapes must agree") {
  const std::vector<Complex> a{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  MagnitudeData data = measure(a, cycle4());
  data.m1.pop_back();
  CHECK_THROWS_AS(propagate_phases(cycle4(), data), DomainError);
}

TEST_CASE("near-zero vertices fall below the relative threshold") {
  const std::vector<Complex> a{{1, 0}, {1e-12, 0}, {-1, 0}, {0, -1}};
  const PhaseAssignment p = propagate_phases(cycle4(), measure(a, cycle4()), 1e-8);
  CHECK(p.component == std::vector<std::size_t>{0, 2, 3});
}

TEST_CASE("single spike from four intensities on one edge") {
  const double omega = 0.4;
  const double lambda = 1.0;
  const RegularGraph pair(2, 1, {{0, 1}});
  VertexEmbedding emb;
  emb.domain = EmbeddingDomain::frequency;
  emb.points = {omega / 2.0, omega};

  Rng rng(77);
  double worst_t = 0.0, worst_c = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double t = rng.uniform(0.0, lambda);
    const Complex c = rng.uniform(0.5, 2.0) * rng.unit_phase();
    std::vector<Complex> values;
    for (double p : emb.points) {
      values.push_back(c * std::polar(1.0, -kTwoPi * p * t));
    }
    const SpikeSignal rec = recover_single_spike(measure(values, pair), emb, lambda);
    REQUIRE(rec.size() == 1);
    worst_t = std::max(worst_t, std::abs(rec.supports()[0] - t));
    worst_c = std::max(worst_c, std::abs(std::abs(rec.coeffs()[0]) - std::abs(c)));
  }
  CHECK(worst_t < 1e-10);
  CHECK(worst_c < 1e-12);
}

TEST_CASE("single-spike edge cases") {
  const RegularGraph pair(2, 1, {{0, 1}});
  VertexEmbedding emb;
  emb.domain = EmbeddingDomain::frequency;
  emb.points = {0.2, 0.4};

  // Both magnitudes zero: the zero measure.
  const std::vector<Complex> zeros{{0, 0}, {0, 0}};
  CHECK(recover_single_spike(measure(zeros, pair), emb, 1.0).is_zero());

  // Exactly one zero cannot come from a single spike.
  const std::vector<Complex> onezero{{1, 0}, {0, 0}};
  CHECK_THROWS_AS(recover_single_spike(measure(onezero, pair), emb, 1.0),
                  InconsistencyError);

  // A single spike has equal moduli at both sample points.
  const std::vector<Complex> unequal{{1, 0}, {2, 0}};
  CHECK_THROWS_AS(recover_single_spike(measure(unequal, pair), emb, 1.0),
                  InconsistencyError);

  // The band-length product must stay under 1/2 for uniqueness.
  VertexEmbedding wide = emb;
  wide.points = {0.3, 0.6};
  const std::vector<Complex> fine{{1, 0}, {1, 0}};
  CHECK_THROWS_AS(recover_single_spike(measure(fine, pair), wide, 1.0), DomainError);
}
