#include "spikerec/expander.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "spikerec/errors.hpp"
#include "spikerec/rng.hpp"

namespace spikerec {

namespace {

// Connected-component labels over an adjacency list restricted to `alive`.
std::vector<int> component_labels(const std::vector<std::vector<std::size_t>>& adjacency,
                                  const std::vector<bool>& alive) {
  const std::size_t n = adjacency.size();
  std::vector<int> label(n, -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (!alive[start] || label[start] >= 0) continue;
    label[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : adjacency[v]) {
        if (alive[w] && label[w] < 0) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

bool all_one_component(const std::vector<std::vector<std::size_t>>& adjacency) {
  std::vector<bool> alive(adjacency.size(), true);
  const auto label = component_labels(adjacency, alive);
  return std::all_of(label.begin(), label.end(), [](int c) { return c == 0; });
}

}  // namespace

RegularGraph::RegularGraph(std::size_t n, std::size_t d, std::vector<Edge> edges)
    : n_(n), d_(d), edges_(std::move(edges)) {
  if (n_ == 0) {
    throw DomainError("graph needs at least one vertex");
  }
  if (edges_.size() * 2 != n_ * d_) {
    throw DomainError("edge count does not match a d-regular graph");
  }
  adjacency_.assign(n_, {});
  std::set<Edge> seen;
  for (auto& [j, k] : edges_) {
    if (j > k) std::swap(j, k);
    if (j == k) {
      throw DomainError("graph has a self-loop");
    }
    if (k >= n_) {
      throw DomainError("edge endpoint out of range");
    }
    if (!seen.insert({j, k}).second) {
      throw DomainError("graph has a repeated edge");
    }
    adjacency_[j].push_back(k);
    adjacency_[k].push_back(j);
  }
  for (const auto& nbrs : adjacency_) {
    if (nbrs.size() != d_) {
      throw DomainError("graph is not d-regular");
    }
  }
  if (!all_one_component(adjacency_)) {
    throw DomainError("graph is not connected");
  }
  std::sort(edges_.begin(), edges_.end());
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

double ramanujan_bound(std::size_t d) {
  if (d < 3) {
    throw DomainError("spectral gap threshold is defined for degree >= 3");
  }
  const double dd = static_cast<double>(d);
  return 1.0 - 2.0 * std::sqrt(dd - 1.0) / dd;
}

SpectralReport normalized_laplacian_spectrum(const RegularGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n < 2 || g.degree() == 0) {
    throw DomainError("spectrum needs a graph with at least one edge");
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
  const double inv_d = 1.0 / static_cast<double>(g.degree());
  for (const auto& [j, k] : g.edges()) {
    L(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = -inv_d;
    L(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = -inv_d;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolve of the normalized Laplacian failed");
  }
  SpectralReport report;
  report.eigenvalues.assign(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + n);
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end());
  report.lambda1 = report.eigenvalues[1];
  report.ramanujan =
      g.degree() >= 3 && report.lambda1 >= ramanujan_bound(g.degree()) - 1e-9;
  return report;
}

bool is_ramanujan(const RegularGraph& g) {
  if (g.degree() < 3) {
    throw DomainError("spectral gap certificate requires degree >= 3");
  }
  return normalized_laplacian_spectrum(g).ramanujan;
}

double expansion_constant_exact(const RegularGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n <= 1) {
    return std::numeric_limits<double>::infinity();
  }
  if (n > 20) {
    throw DomainError("exhaustive expansion constant is limited to 20 vertices");
  }
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int size = std::popcount(mask);
    if (static_cast<std::size_t>(size) * 2 > n) continue;
    std::size_t crossing = 0;
    for (const auto& [j, k] : g.edges()) {
      const bool in_j = (mask >> j) & 1u;
      const bool in_k = (mask >> k) & 1u;
      if (in_j != in_k) ++crossing;
    }
    best = std::min(best, static_cast<double>(crossing) / static_cast<double>(size));
  }
  return best;
}

bool cheeger_check(const RegularGraph& g) {
  const double h = expansion_constant_exact(g);
  const double lambda1 = normalized_laplacian_spectrum(g).lambda1;
  return lambda1 <= (2.0 / static_cast<double>(g.degree())) * h + 1e-9;
}

RegularGraph random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                            std::size_t max_attempts) {
  if ((n * d) % 2 != 0) {
    throw DomainError("no d-regular graph exists: n*d is odd");
  }
  if (n <= d) {
    throw DomainError("a simple d-regular graph needs more than d vertices");
  }
  if (d == 0) {
    throw DomainError("regular graph sampling needs degree >= 1");
  }
  Rng rng(seed);
  std::vector<std::size_t> stubs(n * d);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t r = 0; r < d; ++r) stubs[v * d + r] = v;
  }
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t i = stubs.size() - 1; i > 0; --i) {
      const std::size_t j = rng.uniform_index(i + 1);
      std::swap(stubs[i], stubs[j]);
    }
    std::set<RegularGraph::Edge> edge_set;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      std::size_t a = stubs[i], b = stubs[i + 1];
      if (a == b) {
        ok = false;
        break;
      }
      if (a > b) std::swap(a, b);
      if (!edge_set.insert({a, b}).second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    try {
      return RegularGraph(n, d, {edge_set.begin(), edge_set.end()});
    } catch (const DomainError&) {
      // disconnected pairing; resample
    }
  }
  throw GenerationError("regular graph sampling exhausted its attempts");
}

RegularGraph ramanujan_graph(std::size_t n, std::size_t d, std::uint64_t seed,
                             std::size_t max_attempts) {
  if (d < 3) {
    throw DomainError("spectral gap certificate requires degree >= 3");
  }
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    RegularGraph g = random_regular(n, d, derive_seed(seed, attempt));
    if (is_ramanujan(g)) {
      return g;
    }
  }
  throw GenerationError("no candidate graph passed the spectral gap certificate");
}

std::vector<std::size_t> largest_component_after_removal(
    const RegularGraph& g, const std::vector<std::size_t>& removed) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> alive(n, true);
  for (std::size_t v : removed) {
    if (v >= n) {
      throw DomainError("removed vertex index out of range");
    }
    alive[v] = false;
  }
  const auto label = component_labels(g.adjacency(), alive);
  int count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (alive[v]) count = std::max(count, label[v] + 1);
  }
  std::vector<std::size_t> size(static_cast<std::size_t>(count), 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (alive[v]) ++size[static_cast<std::size_t>(label[v])];
  }
  // Labels are assigned in ascending order of smallest contained vertex, so
  // the first maximal component realizes the tie-break.
  int best = -1;
  std::size_t best_size = 0;
  for (int c = 0; c < count; ++c) {
    if (size[static_cast<std::size_t>(c)] > best_size) {
      best = c;
      best_size = size[static_cast<std::size_t>(c)];
    }
  }
  std::vector<std::size_t> component;
  component.reserve(best_size);
  for (std::size_t v = 0; v < n; ++v) {
    if (alive[v] && label[v] == best) component.push_back(v);
  }
  return component;
}

}  // namespace spikerec
