#pragma once

#include <cstdint>
#include <vector>

#include "spikerec/expander.hpp"
#include "spikerec/measurement.hpp"
#include "spikerec/spikes.hpp"

namespace spikerec {

/// Everything a seeded experiment needs: model order, band limits, graph
/// degree, and the optional knobs. `n_override` forces the grid order (must
/// still be prime); zero means derive it from the sizing bound.
struct ExperimentConfig {
  std::size_t s = 2;        ///< maximum number of spikes
  double lambda = 1.0;      ///< supports live in [0, lambda]
  double omega = 0.25;      ///< frequency samples live in (0, omega]
  std::size_t d = 3;        ///< graph degree
  std::uint64_t seed = 0;   ///< master seed for graph generation
  double tau_rel = 1e-8;    ///< vanishing-vertex threshold, relative
  std::size_t n_override = 0;
  double noise_sigma = 0.0; ///< optional additive intensity noise
  std::uint64_t noise_seed = 0;
};

/// Grid and graph sizes derived from a config. `min_n` is the sizing bound
/// before rounding up to a prime; `graph_size` differs from `n` only when the
/// degree is odd (no d-regular graph exists on an odd number of vertices, so
/// one wrap-around vertex aliasing grid point 0 is appended).
struct DerivedSizes {
  std::size_t min_n = 0;
  std::size_t n = 0;          ///< prime grid order
  std::size_t m = 0;          ///< (n - 1) / 2 recoverable frequency samples
  std::size_t graph_size = 0; ///< vertices carrying intensity data
  bool overridden = false;    ///< n came from n_override
};

/// Smallest vertex count for which the recovery guarantee holds:
/// the least integer strictly above 6d (1 + 6/ln(s/(lambda*omega))) s / (d - 2 sqrt(d-1)).
/// Requires s > lambda*omega and d >= 3.
std::size_t min_vertex_count(std::size_t s, double lambda, double omega, std::size_t d);

/// Smallest prime >= value (value >= 2).
std::size_t next_usable_prime(std::size_t value);

/// Validates the config and computes grid order, sample count, and graph size.
DerivedSizes derive_sizes(const ExperimentConfig& config);

/// A complete synthetic measurement: the graph, where its vertices sample the
/// periodic interpolant, and the measured intensities.
struct MeasurementSetup {
  RegularGraph graph;
  VertexEmbedding embedding;
  MagnitudeData data;
  DerivedSizes sizes;
};

/// Builds the measurement a physical device would produce: samples the
/// Fourier transform at (k+1) omega / m, evaluates the periodic interpolant
/// on the time grid 2 lambda v / n through exact roots of unity, and measures
/// the intensities over a certified-gap random regular graph (deterministic
/// per config.seed). Gaussian intensity noise is added when noise_sigma > 0.
MeasurementSetup synthesize_measurement(const SpikeSignal& signal,
                                        const ExperimentConfig& config);

/// Same, but measuring over a caller-supplied graph (size and degree must
/// match the derived sizes).
MeasurementSetup synthesize_measurement(const SpikeSignal& signal,
                                        const ExperimentConfig& config,
                                        const RegularGraph& graph);

/// A phase assignment reduced onto grid residues mod n: first representative
/// of each residue wins (ascending component order, so an original grid point
/// beats its wrap-around alias), sorted by residue. These are the inputs to
/// the resampling inversion.
struct GridObservations {
  std::vector<std::size_t> indices;
  std::vector<Complex> values;
};

struct PhaseAssignment;
GridObservations component_grid_observations(const PhaseAssignment& assignment,
                                             std::size_t n);

/// Stride used to decimate the recovered frequency samples before root
/// finding: as large as possible while keeping stride * h * lambda <= 0.45
/// and at least max(2s + 2, 8) samples, never below 1.
std::size_t decimation_stride(std::size_t m, std::size_t s, double h, double lambda);

/// Observable conditions behind the recovery guarantee, reported per run.
struct RecoveryDiagnostics {
  std::size_t component_size = 0;  ///< usable vertices after phase propagation
  double component_fraction = 0.0; ///< component_size / graph_size
  double resample_residual = 0.0;
  double resample_condition = 0.0;
  double annihilator_residual = 0.0;
  double fit_residual = 0.0;       ///< weighted RMS intensity misfit at exit
  std::size_t decimation = 1;      ///< stride used for the root-finding stage
  std::size_t model_order = 0;     ///< spikes actually solved for (<= config.s)
  std::size_t refine_iterations = 0;
};

struct RecoveryOutput {
  SpikeSignal signal;
  RecoveryDiagnostics diagnostics;
};

/// Full inverse chain: phase propagation on the largest usable component,
/// inversion of the oversampling map from that component's grid points,
/// annihilating-polynomial root extraction on a decimated subsequence, then a
/// Gauss-Newton polish of supports and coefficients directly against the
/// measured intensities. Returns one representative of the unimodular
/// equivalence class (anchored by the propagation step).
///
/// Errors from any stage are rethrown with the stage name prefixed; a usable
/// component smaller than m distinct grid points raises
/// ComponentTooSmallError.
RecoveryOutput end_to_end_recover(const RegularGraph& graph,
                                  const VertexEmbedding& embedding,
                                  const MagnitudeData& data,
                                  const ExperimentConfig& config);

/// Compares recovered against original up to a global unimodular factor.
RecoveryReport verify_recovery(const SpikeSignal& original, const SpikeSignal& recovered,
                               double tol = 1e-6);

}  // namespace spikerec
