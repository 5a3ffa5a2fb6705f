#pragma once

#include <cstdint>
#include <vector>

#include "spikerec/expander.hpp"
#include "spikerec/spikes.hpp"

namespace spikerec {

enum class EmbeddingDomain { frequency, time };

/// Assignment of a real sample location to each vertex. Frequency embeddings
/// live in [-omega, omega]; time embeddings live in [0, 2*lambda].
struct VertexEmbedding {
  std::vector<double> points;
  EmbeddingDomain domain = EmbeddingDomain::frequency;
};

/// Intensity data over a graph: per-vertex squared moduli and, per canonical
/// edge (j < k), the two difference intensities.
///
///   m0[v]    = |a_v|^2
///   m1[e]    = |a_j - a_k|^2
///   m2[e]    = |a_j - i a_k|^2
struct MagnitudeData {
  std::vector<double> m0;
  std::vector<RegularGraph::Edge> edge_order;
  std::vector<double> m1;
  std::vector<double> m2;

  std::size_t total_count() const { return m0.size() + m1.size() + m2.size(); }

  /// Loose per-edge realizability bound
  ///   m1 + m2 <= 2 (m0_j + m0_k) + 4 sqrt(m0_j m0_k);
  /// exact consistency is the phase propagation step's job.
  bool sanity_check() const;
};

/// Equispaced frequency samples (k+1) * omega / n, k = 0..n-1.
VertexEmbedding frequency_embedding(std::size_t n, double omega);

/// Equispaced time samples 2 * lambda * k / modulus, k = 0..n-1. The default
/// modulus 0 means modulus = n; passing modulus = n - 1 appends the wrap-around
/// point 2*lambda, which aliases k = 0 of the periodic interpolant.
VertexEmbedding time_embedding(std::size_t n, double lambda, std::size_t modulus = 0);

/// Forward intensity measurement of a complex vertex-value vector over g.
MagnitudeData measure(const std::vector<Complex>& values, const RegularGraph& g);

/// Additive Gaussian noise (std deviation sigma) on every stored intensity,
/// clamped at zero to keep the data nonnegative. Deterministic per seed.
MagnitudeData add_intensity_noise(const MagnitudeData& data, double sigma,
                                  std::uint64_t seed);

/// Periodic interpolant built from the frequency samples mu_hat(k*omega/m),
/// k = 1..m (freq_samples[k-1]):
///
///   mu_tilde(t) = sum_{k=1}^m freq_samples[k-1] exp(i pi t k / lambda)
///
/// 2*lambda-periodic in t.
Complex mu_tilde_eval(const std::vector<Complex>& freq_samples, double lambda, double t);

}  // namespace spikerec
