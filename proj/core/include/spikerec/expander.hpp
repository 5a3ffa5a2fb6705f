#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace spikerec {

/// Simple connected d-regular graph on vertices 0..n-1. Edges are stored as
/// canonical pairs (j, k) with j < k. The constructor validates simplicity,
/// regularity, and connectivity.
class RegularGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  RegularGraph(std::size_t n, std::size_t d, std::vector<Edge> edges);

  std::size_t vertex_count() const { return n_; }
  std::size_t degree() const { return d_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<std::size_t>>& adjacency() const { return adjacency_; }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Full spectrum of the normalized Laplacian I - A/d, ascending.
struct SpectralReport {
  std::vector<double> eigenvalues;
  double lambda1 = 0.0;   ///< smallest nonzero eigenvalue (spectral gap)
  bool ramanujan = false; ///< lambda1 >= 1 - 2 sqrt(d-1)/d (false when d < 3)
};

/// Spectral gap threshold 1 - 2 sqrt(d-1)/d for degree d >= 3.
double ramanujan_bound(std::size_t d);

/// Dense symmetric eigensolve of the normalized Laplacian. Requires n >= 2.
SpectralReport normalized_laplacian_spectrum(const RegularGraph& g);

/// True iff the spectral gap clears the degree-d threshold (tolerance 1e-9).
/// Throws DomainError for d < 3, where the threshold is not meaningful.
bool is_ramanujan(const RegularGraph& g);

/// Exact expansion constant h = min over nonempty W, |W| <= n/2, of
/// (edges leaving W) / |W|, by exhaustive subset scan. Infinity for n <= 1.
/// Throws DomainError for n > 20.
double expansion_constant_exact(const RegularGraph& g);

/// Verifies lambda1 <= (2/d) h within 1e-9 on graphs small enough for the
/// exhaustive expansion constant.
bool cheeger_check(const RegularGraph& g);

/// Random simple connected d-regular graph by configuration-model pairing
/// with rejection. Deterministic per seed. Requires n*d even and n > d.
RegularGraph random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                            std::size_t max_attempts = 5000);

/// Random d-regular graph that certifiably clears the spectral gap threshold,
/// by rejection sampling over random_regular candidates. Each candidate uses
/// an independent seed derived from `seed`.
RegularGraph ramanujan_graph(std::size_t n, std::size_t d, std::uint64_t seed,
                             std::size_t max_attempts = 64);

/// Largest connected component of the graph induced on the vertices outside
/// `removed`, returned as a sorted index set. Ties go to the component
/// containing the smallest vertex index.
std::vector<std::size_t> largest_component_after_removal(
    const RegularGraph& g, const std::vector<std::size_t>& removed);

}  // namespace spikerec
