#include "spikerec/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "spikerec/errors.hpp"

namespace spikerec {

namespace {

void check_shape(const RegularGraph& g, const MagnitudeData& data) {
  if (data.m0.size() != g.vertex_count() || data.edge_order != g.edges() ||
      data.m1.size() != data.edge_order.size() ||
      data.m2.size() != data.edge_order.size()) {
    throw DomainError("intensity data does not match the graph layout");
  }
}

}  // namespace

Complex relative_product(double m0_j, double m0_k, double m1_jk, double m2_jk) {
  if (m0_j < 0.0 || m0_k < 0.0 || m1_jk < 0.0 || m2_jk < 0.0) {
    throw DomainError("intensities must be nonnegative");
  }
  return {(m0_j + m0_k - m1_jk) / 2.0, (m0_j + m0_k - m2_jk) / 2.0};
}

InducedSubgraph induced_subgraph(std::size_t n,
                                 const std::vector<RegularGraph::Edge>& edges,
                                 const std::vector<double>& m0, double threshold) {
  if (m0.size() != n) {
    throw DomainError("intensity vector length does not match the vertex count");
  }
  const double floor = threshold * threshold;
  InducedSubgraph sub;
  std::vector<bool> in(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    if (m0[v] > floor) {
      in[v] = true;
      sub.vertices.push_back(v);
    }
  }
  for (const auto& [j, k] : edges) {
    if (j >= n || k >= n) {
      throw DomainError("edge endpoint out of range");
    }
    if (in[j] && in[k]) sub.edges.emplace_back(j, k);
  }
  return sub;
}

InducedSubgraph induced_subgraph(const RegularGraph& g, const std::vector<double>& m0,
                                 double threshold) {
  return induced_subgraph(g.vertex_count(), g.edges(), m0, threshold);
}

PhaseAssignment propagate_phases(const RegularGraph& g, const MagnitudeData& data,
                                 double tau_rel) {
  check_shape(g, data);
  if (!(tau_rel >= 0.0)) {
    throw DomainError("vanishing threshold must be nonnegative");
  }
  const std::size_t n = g.vertex_count();
  double max_m0 = 0.0;
  for (double x : data.m0) max_m0 = std::max(max_m0, x);
  PhaseAssignment out;
  if (max_m0 <= 0.0) {
    return out;  // the zero measure
  }

  const double threshold = tau_rel * std::sqrt(max_m0);
  const InducedSubgraph sub = induced_subgraph(g, data.m0, threshold);
  if (sub.vertices.empty()) {
    return out;
  }

  // Adjacency of the induced subgraph, each arc tagged with its edge index
  // into the data arrays.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> nbr(n);
  std::vector<bool> in(n, false);
  for (std::size_t v : sub.vertices) in[v] = true;
  for (std::size_t e = 0; e < data.edge_order.size(); ++e) {
    const auto& [j, k] = data.edge_order[e];
    if (in[j] && in[k]) {
      nbr[j].emplace_back(k, e);
      nbr[k].emplace_back(j, e);
    }
  }

  // Largest connected component; scanning seeds in ascending order makes the
  // first maximal component the smallest-index tie-break winner.
  std::vector<int> label(n, -1);
  std::vector<std::size_t> comp_of_best;
  {
    int next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t seed : sub.vertices) {
      if (label[seed] >= 0) continue;
      std::vector<std::size_t> comp;
      label[seed] = next;
      stack.push_back(seed);
      while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (const auto& [w, e] : nbr[v]) {
          if (label[w] < 0) {
            label[w] = next;
            stack.push_back(w);
          }
        }
      }
      if (comp.size() > comp_of_best.size()) comp_of_best = std::move(comp);
      ++next;
    }
  }
  std::sort(comp_of_best.begin(), comp_of_best.end());

  // Breadth-first phase propagation from the anchor. The anchor takes the
  // real nonnegative representative sqrt(m0); each traversal step divides the
  // rank-one off-diagonal entry by the conjugate of the settled endpoint.
  std::vector<Complex> value(n, Complex{0.0, 0.0});
  std::vector<bool> assigned(n, false);
  const std::size_t anchor = comp_of_best.front();
  value[anchor] = Complex{std::sqrt(data.m0[anchor]), 0.0};
  assigned[anchor] = true;
  std::queue<std::size_t> frontier;
  frontier.push(anchor);
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (const auto& [w, e] : nbr[v]) {
      if (assigned[w]) continue;
      const auto& [j, k] = data.edge_order[e];
      Complex r = relative_product(data.m0[j], data.m0[k], data.m1[e], data.m2[e]);
      if (w == j) {
        value[w] = r / std::conj(value[v]);
      } else {
        value[w] = std::conj(r) / std::conj(value[v]);
      }
      assigned[w] = true;
      frontier.push(w);
    }
  }

  // Re-measure the assignment on the component and require it to reproduce
  // the input; failures mean the intensities are not realizable by any
  // signal (or exceed the drift budget).
  double comp_max_m0 = 0.0;
  for (std::size_t v : comp_of_best) comp_max_m0 = std::max(comp_max_m0, data.m0[v]);
  const double tol = 1e-6 * comp_max_m0;
  for (std::size_t v : comp_of_best) {
    if (std::abs(std::norm(value[v]) - data.m0[v]) > tol) {
      throw InconsistencyError("intensities are not realizable: vertex modulus mismatch");
    }
  }
  const Complex imag_unit{0.0, 1.0};
  for (std::size_t e = 0; e < data.edge_order.size(); ++e) {
    const auto& [j, k] = data.edge_order[e];
    if (!assigned[j] || !assigned[k]) continue;
    if (std::abs(std::norm(value[j] - value[k]) - data.m1[e]) > tol ||
        std::abs(std::norm(value[j] - imag_unit * value[k]) - data.m2[e]) > tol) {
      throw InconsistencyError("intensities are not realizable: edge constraint mismatch");
    }
  }

  out.component = std::move(comp_of_best);
  out.values.reserve(out.component.size());
  for (std::size_t v : out.component) out.values.push_back(value[v]);
  out.anchor = anchor;
  return out;
}

SpikeSignal recover_single_spike(const MagnitudeData& data,
                                 const VertexEmbedding& embedding, double lambda) {
  if (embedding.points.size() != 2 || data.m0.size() != 2 || data.m1.size() != 1 ||
      data.m2.size() != 1) {
    throw DomainError("single-spike recovery works on two vertices and one edge");
  }
  if (!(lambda > 0.0)) {
    throw DomainError("single-spike recovery needs lambda > 0");
  }
  const double v0 = embedding.points[0];
  const double v1 = embedding.points[1];
  const double omega = std::max(std::abs(v0), std::abs(v1));
  if (!(omega * lambda < 0.5)) {
    throw DomainError("support is only identifiable when omega * lambda < 1/2");
  }
  if (v0 == v1) {
    throw DomainError("sample points must be distinct");
  }

  const bool zero0 = data.m0[0] <= 0.0;
  const bool zero1 = data.m0[1] <= 0.0;
  if (zero0 && zero1) {
    return SpikeSignal(lambda);
  }
  if (zero0 != zero1) {
    throw InconsistencyError("one vanishing intensity cannot come from a single spike");
  }
  const double scale = std::max(data.m0[0], data.m0[1]);
  if (std::abs(data.m0[0] - data.m0[1]) > 1e-6 * scale) {
    throw InconsistencyError("unequal moduli cannot come from a single spike");
  }

  const Complex r = relative_product(data.m0[0], data.m0[1], data.m1[0], data.m2[0]);
  const Complex q = r / data.m0[0];
  if (std::abs(std::abs(q) - 1.0) > 1e-6) {
    throw InconsistencyError("edge quotient is not unimodular");
  }

  // q = exp(-2 pi i t (v0 - v1)); pick the representative of -arg(q)/(2 pi)
  // landing in the sign-appropriate unit interval.
  const double x = -std::arg(q) / (2.0 * std::numbers::pi);
  const double dv = v0 - v1;
  double y = x;
  if (dv > 0.0 && y < 0.0) y += 1.0;
  if (dv < 0.0 && y > 0.0) y -= 1.0;
  double t = y / dv;
  if (t < -1e-9 || t > lambda * (1.0 + 1e-9)) {
    throw InconsistencyError("recovered support falls outside [0, lambda]");
  }
  t = std::clamp(t, 0.0, lambda);
  return SpikeSignal({t}, {Complex{std::sqrt(data.m0[0]), 0.0}}, lambda);
}

}  // namespace spikerec
