#include "spikerec/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spikerec/errors.hpp"
#include "spikerec/rng.hpp"

namespace spikerec {

bool MagnitudeData::sanity_check() const {
  if (m1.size() != edge_order.size() || m2.size() != edge_order.size()) {
    return false;
  }
  for (double x : m0) {
    if (!(x >= 0.0)) return false;
  }
  for (std::size_t e = 0; e < edge_order.size(); ++e) {
    const auto& [j, k] = edge_order[e];
    if (j >= m0.size() || k >= m0.size()) return false;
    if (!(m1[e] >= 0.0) || !(m2[e] >= 0.0)) return false;
    const double cap = 2.0 * (m0[j] + m0[k]) + 4.0 * std::sqrt(m0[j] * m0[k]);
    const double slack = 1e-9 * (1.0 + cap);
    if (m1[e] + m2[e] > cap + slack) return false;
  }
  return true;
}

VertexEmbedding frequency_embedding(std::size_t n, double omega) {
  if (n == 0 || !(omega > 0.0)) {
    throw DomainError("frequency embedding needs n >= 1 and omega > 0");
  }
  VertexEmbedding emb;
  emb.domain = EmbeddingDomain::frequency;
  emb.points.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    emb.points[k] = static_cast<double>(k + 1) * omega / static_cast<double>(n);
  }
  return emb;
}

VertexEmbedding time_embedding(std::size_t n, double lambda, std::size_t modulus) {
  if (n == 0 || !(lambda > 0.0)) {
    throw DomainError("time embedding needs n >= 1 and lambda > 0");
  }
  if (modulus == 0) modulus = n;
  if (n > modulus + 1) {
    throw DomainError("time embedding supports at most one wrap-around point");
  }
  VertexEmbedding emb;
  emb.domain = EmbeddingDomain::time;
  emb.points.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    emb.points[k] = 2.0 * lambda * static_cast<double>(k) / static_cast<double>(modulus);
  }
  return emb;
}

MagnitudeData measure(const std::vector<Complex>& values, const RegularGraph& g) {
  if (values.size() != g.vertex_count()) {
    throw DomainError("value vector length does not match the vertex count");
  }
  MagnitudeData data;
  data.m0.resize(values.size());
  for (std::size_t v = 0; v < values.size(); ++v) {
    data.m0[v] = std::norm(values[v]);
  }
  data.edge_order = g.edges();
  data.m1.resize(data.edge_order.size());
  data.m2.resize(data.edge_order.size());
  const Complex imag_unit{0.0, 1.0};
  for (std::size_t e = 0; e < data.edge_order.size(); ++e) {
    const auto& [j, k] = data.edge_order[e];
    data.m1[e] = std::norm(values[j] - values[k]);
    data.m2[e] = std::norm(values[j] - imag_unit * values[k]);
  }
  return data;
}

MagnitudeData add_intensity_noise(const MagnitudeData& data, double sigma,
                                  std::uint64_t seed) {
  if (sigma < 0.0) {
    throw DomainError("noise level must be nonnegative");
  }
  MagnitudeData noisy = data;
  if (sigma == 0.0) return noisy;
  Rng rng(seed);
  auto perturb = [&](std::vector<double>& xs) {
    for (double& x : xs) x = std::max(0.0, x + sigma * rng.gaussian());
  };
  perturb(noisy.m0);
  perturb(noisy.m1);
  perturb(noisy.m2);
  return noisy;
}

Complex mu_tilde_eval(const std::vector<Complex>& freq_samples, double lambda, double t) {
  if (freq_samples.empty()) {
    throw DomainError("interpolant needs at least one frequency sample");
  }
  if (!(lambda > 0.0)) {
    throw DomainError("interpolant needs lambda > 0");
  }
  // Extended-precision accumulation: the partial sums can exceed the result by
  // orders of magnitude, so double-width intermediates would leak absolute
  // rounding error into small values.
  const long double base = std::numbers::pi_v<long double> *
                           static_cast<long double>(t) / static_cast<long double>(lambda);
  long double re = 0.0L, im = 0.0L;
  for (std::size_t k = 0; k < freq_samples.size(); ++k) {
    const long double phase = base * static_cast<long double>(k + 1);
    const long double cs = std::cos(phase), sn = std::sin(phase);
    const long double fr = freq_samples[k].real(), fi = freq_samples[k].imag();
    re += fr * cs - fi * sn;
    im += fr * sn + fi * cs;
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace spikerec
