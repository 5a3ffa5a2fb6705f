#pragma once

#include <vector>

#include "spikerec/measurement.hpp"

namespace spikerec {

/// Complex values assigned on one connected component of the induced
/// subgraph, normalized so that values[anchor] is real and nonnegative.
/// The global phase of the underlying signal is unrecoverable; anchoring
/// picks the class representative.
struct PhaseAssignment {
  std::vector<std::size_t> component;  ///< sorted vertex index set K
  std::vector<Complex> values;         ///< values[i] belongs to component[i]
  std::size_t anchor = 0;              ///< vertex whose value is real nonnegative

  bool empty() const { return component.empty(); }
};

/// Vertices whose intensity clears the threshold, plus the edges among them.
struct InducedSubgraph {
  std::vector<std::size_t> vertices;
  std::vector<RegularGraph::Edge> edges;
};

/// Off-diagonal entry of the rank-one matrix determined by the four
/// intensities of an edge: returns r with
///   Re(r) = (m0_j + m0_k - m1) / 2,  Im(r) = (m0_j + m0_k - m2) / 2.
/// For data measured from true values a_j, a_k this is a_j * conj(a_k).
Complex relative_product(double m0_j, double m0_k, double m1_jk, double m2_jk);

/// Subgraph induced on {v : m0[v] > threshold^2} of an arbitrary edge list.
InducedSubgraph induced_subgraph(std::size_t n,
                                 const std::vector<RegularGraph::Edge>& edges,
                                 const std::vector<double>& m0, double threshold);

InducedSubgraph induced_subgraph(const RegularGraph& g, const std::vector<double>& m0,
                                 double threshold);

/// Assigns complex values on the largest component of the induced subgraph by
/// breadth-first phase propagation from the smallest-index vertex, whose value
/// is anchored at sqrt(m0) >= 0.
///
/// A vertex counts as vanishing when m0[v] <= (tau_rel * max_w sqrt(m0[w]))^2.
/// Empty induced subgraph yields an empty assignment (the zero measure).
/// Re-measured intensities on the component must reproduce the input within
/// 1e-6 relative, else the data are unrealizable and InconsistencyError is
/// thrown.
PhaseAssignment propagate_phases(const RegularGraph& g, const MagnitudeData& data,
                                 double tau_rel = 1e-8);

/// Closed-form recovery of a (at most) single spike from the four intensities
/// of a two-vertex, one-edge graph. Requires omega * lambda < 1/2 where
/// omega = max |embedding point|; the support is then unique in [0, lambda].
SpikeSignal recover_single_spike(const MagnitudeData& data,
                                 const VertexEmbedding& embedding, double lambda);

}  // namespace spikerec
