#include "spikerec/pipeline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "spikerec/errors.hpp"
#include "spikerec/prony.hpp"
#include "spikerec/propagate.hpp"
#include "spikerec/resample.hpp"

namespace spikerec {

namespace {

using ComplexLD = std::complex<long double>;
constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

// exp(2 pi i k / n), k = 0..n-1. Every grid phase in this file is some entry
// of this table selected by an exact integer product mod n, so the only
// rounding in a synthesized value is the one table entry and the sum itself.
std::vector<ComplexLD> unit_root_table(std::size_t n) {
  std::vector<ComplexLD> tbl(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long double angle =
        kTwoPiL * static_cast<long double>(k) / static_cast<long double>(n);
    tbl[k] = {std::cos(angle), std::sin(angle)};
  }
  return tbl;
}

// Reruns a stage, prefixing its name onto any error so a failed run names the
// stage that gave up without losing the concrete error type.
template <typename Fn>
auto stage(const char* label, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw DomainError(std::string(label) + ": " + e.what());
  } catch (const GenerationError& e) {
    throw GenerationError(std::string(label) + ": " + e.what());
  } catch (const InconsistencyError& e) {
    throw InconsistencyError(std::string(label) + ": " + e.what());
  } catch (const RankDeficiencyError& e) {
    throw RankDeficiencyError(std::string(label) + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(label) + ": " + e.what());
  } catch (const ComponentTooSmallError& e) {
    throw ComponentTooSmallError(std::string(label) + ": " + e.what());
  }
}

struct RefineState {
  std::vector<double> t;
  std::vector<Complex> c;
  double rms = 0.0;
  Complex anchor_value{0.0, 0.0};  ///< model amplitude at the anchor vertex
};

// Gauss-Newton polish of supports and coefficients directly against the
// measured intensities (per-vertex |a|^2 plus the per-edge rank-one
// off-diagonals). Fitting the raw data instead of the propagated values keeps
// the phase-propagation rounding out of the final estimate entirely. The
// global-phase direction lies in the Jacobian's null space; the SVD solve
// with a relative cutoff returns the minimum-norm step, which simply does not
// move along it.
RefineState refine_against_intensities(std::vector<double> t, std::vector<Complex> c,
                                       const RegularGraph& graph,
                                       const MagnitudeData& data, std::size_t n,
                                       double h, std::size_t m, double lambda,
                                       const std::vector<ComplexLD>& tbl,
                                       std::size_t iterations, std::size_t anchor) {
  const std::size_t s = t.size();
  const std::size_t vcount = graph.vertex_count();
  const std::size_t ecount = data.edge_order.size();
  const std::size_t rows = vcount + 2 * ecount;
  const std::size_t cols = 3 * s;

  double mx = 0.0;
  for (double v : data.m0) mx = std::max(mx, v);
  if (s == 0 || mx <= 0.0) return {std::move(t), std::move(c), 0.0};

  std::vector<double> w0(vcount), wr(ecount);
  for (std::size_t v = 0; v < vcount; ++v) {
    w0[v] = 1.0 / std::max(data.m0[v], 1e-4 * mx);
  }
  std::vector<Complex> rdata(ecount);
  for (std::size_t e = 0; e < ecount; ++e) {
    const auto& [vj, vk] = data.edge_order[e];
    wr[e] = 1.0 / std::max(data.m0[vj] + data.m0[vk], 1e-12 * mx);
    rdata[e] = relative_product(data.m0[vj], data.m0[vk], data.m1[e], data.m2[e]);
  }

  std::vector<std::size_t> residue(vcount);
  for (std::size_t v = 0; v < vcount; ++v) residue[v] = v % n;

  const long double hl = static_cast<long double>(h);
  std::vector<ComplexLD> node(m * s);     // exp(-2 pi i (k+1) h t_j)
  std::vector<ComplexLD> g(vcount * s);   // sum_k table * node
  std::vector<ComplexLD> dg(vcount * s);  // d g / d t_j
  std::vector<ComplexLD> a(vcount);

  auto build_model = [&](bool with_derivatives) {
    for (std::size_t k = 0; k < m; ++k) {
      const long double freq = -kTwoPiL * static_cast<long double>(k + 1) * hl;
      for (std::size_t j = 0; j < s; ++j) {
        const long double angle = freq * static_cast<long double>(t[j]);
        node[k * s + j] = {std::cos(angle), std::sin(angle)};
      }
    }
    const ComplexLD dfactor{0.0L, -kTwoPiL * hl};
    for (std::size_t v = 0; v < vcount; ++v) {
      for (std::size_t j = 0; j < s; ++j) {
        ComplexLD gv{0.0L, 0.0L};
        ComplexLD dgv{0.0L, 0.0L};
        std::size_t idx = 0;
        for (std::size_t k = 0; k < m; ++k) {
          idx += residue[v];
          if (idx >= n) idx -= n;
          const ComplexLD w = tbl[idx] * node[k * s + j];
          gv += w;
          if (with_derivatives) dgv += static_cast<long double>(k + 1) * w;
        }
        g[v * s + j] = gv;
        if (with_derivatives) dg[v * s + j] = dfactor * dgv;
      }
      ComplexLD acc{0.0L, 0.0L};
      for (std::size_t j = 0; j < s; ++j) {
        acc += ComplexLD(c[j].real(), c[j].imag()) * g[v * s + j];
      }
      a[v] = acc;
    }
  };

  auto fill_residual = [&](Eigen::VectorXd& r) {
    for (std::size_t v = 0; v < vcount; ++v) {
      const long double mag2 = a[v].real() * a[v].real() + a[v].imag() * a[v].imag();
      r(static_cast<Eigen::Index>(v)) =
          static_cast<double>(mag2 - static_cast<long double>(data.m0[v])) * w0[v];
    }
    for (std::size_t e = 0; e < ecount; ++e) {
      const auto& [vj, vk] = data.edge_order[e];
      const ComplexLD rm = a[vj] * std::conj(a[vk]);
      r(static_cast<Eigen::Index>(vcount + 2 * e)) =
          static_cast<double>(rm.real() - static_cast<long double>(rdata[e].real())) *
          wr[e];
      r(static_cast<Eigen::Index>(vcount + 2 * e + 1)) =
          static_cast<double>(rm.imag() - static_cast<long double>(rdata[e].imag())) *
          wr[e];
    }
  };

  Eigen::MatrixXd jac(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  Eigen::VectorXd res(static_cast<Eigen::Index>(rows));

  auto cast = [](const ComplexLD& z) {
    return Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  };

  for (std::size_t iter = 0; iter < iterations; ++iter) {
    build_model(true);
    fill_residual(res);

    for (std::size_t v = 0; v < vcount; ++v) {
      const Eigen::Index row = static_cast<Eigen::Index>(v);
      const Complex av = cast(a[v]);
      for (std::size_t j = 0; j < s; ++j) {
        const Complex gj = cast(g[v * s + j]);
        const Complex da_t = c[j] * cast(dg[v * s + j]);
        jac(row, static_cast<Eigen::Index>(j)) =
            2.0 * (std::conj(av) * da_t).real() * w0[v];
        jac(row, static_cast<Eigen::Index>(s + 2 * j)) =
            2.0 * (std::conj(av) * gj).real() * w0[v];
        jac(row, static_cast<Eigen::Index>(s + 2 * j + 1)) =
            2.0 * (std::conj(av) * (Complex(0.0, 1.0) * gj)).real() * w0[v];
      }
    }
    for (std::size_t e = 0; e < ecount; ++e) {
      const auto& [vj, vk] = data.edge_order[e];
      const Eigen::Index row_re = static_cast<Eigen::Index>(vcount + 2 * e);
      const Eigen::Index row_im = row_re + 1;
      const Complex aj = cast(a[vj]);
      const Complex ak = cast(a[vk]);
      for (std::size_t j = 0; j < s; ++j) {
        const Complex gj_j = cast(g[vj * s + j]);
        const Complex gj_k = cast(g[vk * s + j]);
        const Complex da_j_t = c[j] * cast(dg[vj * s + j]);
        const Complex da_k_t = c[j] * cast(dg[vk * s + j]);
        const Complex dr_t = da_j_t * std::conj(ak) + aj * std::conj(da_k_t);
        const Complex dr_re = gj_j * std::conj(ak) + aj * std::conj(gj_k);
        const Complex dr_im = Complex(0.0, 1.0) * gj_j * std::conj(ak) +
                              aj * std::conj(Complex(0.0, 1.0) * gj_k);
        jac(row_re, static_cast<Eigen::Index>(j)) = dr_t.real() * wr[e];
        jac(row_im, static_cast<Eigen::Index>(j)) = dr_t.imag() * wr[e];
        jac(row_re, static_cast<Eigen::Index>(s + 2 * j)) = dr_re.real() * wr[e];
        jac(row_im, static_cast<Eigen::Index>(s + 2 * j)) = dr_re.imag() * wr[e];
        jac(row_re, static_cast<Eigen::Index>(s + 2 * j + 1)) = dr_im.real() * wr[e];
        jac(row_im, static_cast<Eigen::Index>(s + 2 * j + 1)) = dr_im.imag() * wr[e];
      }
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    const Eigen::VectorXd step = svd.solve(-res);

    for (std::size_t j = 0; j < s; ++j) {
      t[j] += step(static_cast<Eigen::Index>(j));
      c[j] += Complex(step(static_cast<Eigen::Index>(s + 2 * j)),
                      step(static_cast<Eigen::Index>(s + 2 * j + 1)));
    }
    std::vector<std::size_t> order(s);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return t[x] < t[y]; });
    std::vector<double> ts(s);
    std::vector<Complex> cs(s);
    for (std::size_t j = 0; j < s; ++j) {
      ts[j] = t[order[j]];
      cs[j] = c[order[j]];
    }
    t = std::move(ts);
    c = std::move(cs);
  }

  for (double& tj : t) tj = std::clamp(tj, 0.0, lambda);
  build_model(false);
  fill_residual(res);
  const double rms = std::sqrt(res.squaredNorm() / static_cast<double>(rows));
  const Complex anchor_value = anchor < vcount ? cast(a[anchor]) : Complex(0.0, 0.0);
  return {std::move(t), std::move(c), rms, anchor_value};
}

}  // namespace

GridObservations component_grid_observations(const PhaseAssignment& assignment,
                                             std::size_t n) {
  if (n == 0) {
    throw DomainError("grid order must be positive");
  }
  std::vector<std::pair<std::size_t, Complex>> points;
  points.reserve(assignment.component.size());
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < assignment.component.size(); ++i) {
    const std::size_t r = assignment.component[i] % n;
    if (!seen[r]) {
      seen[r] = 1;
      points.emplace_back(r, assignment.values[i]);
    }
  }
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  GridObservations obs;
  obs.indices.resize(points.size());
  obs.values.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    obs.indices[i] = points[i].first;
    obs.values[i] = points[i].second;
  }
  return obs;
}

std::size_t decimation_stride(std::size_t m, std::size_t s, double h, double lambda) {
  if (m == 0 || !(h > 0.0) || !(lambda > 0.0)) {
    throw DomainError("decimation needs positive sample count, step, and lambda");
  }
  const double by_angle = 0.45 / (h * lambda);
  const std::size_t floor_by_angle =
      by_angle >= 1.0 ? static_cast<std::size_t>(by_angle) : 0;
  const std::size_t floor_by_count = m / std::max<std::size_t>(2 * s + 2, 8);
  return std::max<std::size_t>(1, std::min(floor_by_angle, floor_by_count));
}

std::size_t min_vertex_count(std::size_t s, double lambda, double omega, std::size_t d) {
  if (!(lambda > 0.0) || !(omega > 0.0)) {
    throw DomainError("lambda and omega must be positive");
  }
  if (d < 3) {
    throw DomainError("sizing bound needs degree >= 3");
  }
  if (!(static_cast<double>(s) > lambda * omega)) {
    throw DomainError("sizing bound needs s > lambda * omega");
  }
  const double dd = static_cast<double>(d);
  const double ratio = static_cast<double>(s) / (lambda * omega);
  const double bound = 6.0 * dd * (1.0 + 6.0 / std::log(ratio)) *
                       static_cast<double>(s) / (dd - 2.0 * std::sqrt(dd - 1.0));
  if (!(bound < 1e15)) {
    throw DomainError("sizing bound overflows; s is too close to lambda * omega");
  }
  return static_cast<std::size_t>(std::floor(bound)) + 1;
}

std::size_t next_usable_prime(std::size_t value) {
  std::uint64_t p = std::max<std::uint64_t>(value, 2);
  while (!is_prime(p)) ++p;
  return static_cast<std::size_t>(p);
}

DerivedSizes derive_sizes(const ExperimentConfig& config) {
  if (!(config.lambda > 0.0) || !(config.omega > 0.0)) {
    throw DomainError("lambda and omega must be positive");
  }
  if (!(config.omega * config.lambda < 0.5)) {
    throw DomainError("need omega * lambda < 1/2");
  }
  if (config.d < 3) {
    throw DomainError("need degree >= 3");
  }
  DerivedSizes sizes;
  sizes.min_n = min_vertex_count(config.s, config.lambda, config.omega, config.d);
  if (config.n_override != 0) {
    if (!is_prime(config.n_override)) {
      throw DomainError("overridden grid order must be prime");
    }
    if (config.n_override < 3) {
      throw DomainError("grid order must be at least 3");
    }
    sizes.n = config.n_override;
    sizes.overridden = true;
  } else {
    sizes.n = next_usable_prime(sizes.min_n);
  }
  sizes.m = (sizes.n - 1) / 2;
  // A d-regular graph needs an even n*d; odd degree on the odd prime grid gets
  // one extra vertex aliasing grid point 0 (the interpolant is periodic, so
  // the aliased sample is exact, and the duplicate is dropped on inversion).
  sizes.graph_size = (config.d % 2 == 1) ? sizes.n + 1 : sizes.n;
  if (sizes.graph_size <= config.d) {
    throw DomainError("grid order too small for the requested degree");
  }
  return sizes;
}

MeasurementSetup synthesize_measurement(const SpikeSignal& signal,
                                        const ExperimentConfig& config,
                                        const RegularGraph& graph) {
  const DerivedSizes sizes = derive_sizes(config);
  if (signal.lambda() != config.lambda) {
    throw DomainError("signal and config disagree on lambda");
  }
  if (signal.size() > config.s) {
    throw DomainError("signal has more spikes than the configured model order");
  }
  if (graph.vertex_count() != sizes.graph_size || graph.degree() != config.d) {
    throw DomainError("supplied graph does not match the derived sizes");
  }

  const std::size_t n = sizes.n;
  const std::size_t m = sizes.m;
  const double h = config.omega / static_cast<double>(m);

  std::vector<Complex> fs(m);
  for (std::size_t k = 0; k < m; ++k) {
    fs[k] = fourier_eval(signal, h * static_cast<double>(k + 1));
  }

  const auto tbl = unit_root_table(n);
  std::vector<Complex> values(sizes.graph_size);
  for (std::size_t v = 0; v < sizes.graph_size; ++v) {
    const std::size_t r = v % n;
    ComplexLD acc{0.0L, 0.0L};
    std::size_t idx = 0;
    for (std::size_t k = 0; k < m; ++k) {
      idx += r;
      if (idx >= n) idx -= n;
      acc += ComplexLD(fs[k].real(), fs[k].imag()) * tbl[idx];
    }
    values[v] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }

  MeasurementSetup setup{graph, time_embedding(sizes.graph_size, config.lambda, n),
                         measure(values, graph), sizes};
  if (config.noise_sigma > 0.0) {
    setup.data = add_intensity_noise(setup.data, config.noise_sigma, config.noise_seed);
  }
  return setup;
}

MeasurementSetup synthesize_measurement(const SpikeSignal& signal,
                                        const ExperimentConfig& config) {
  const DerivedSizes sizes = derive_sizes(config);
  RegularGraph graph = stage("graph generation", [&] {
    return ramanujan_graph(sizes.graph_size, config.d, config.seed);
  });
  return synthesize_measurement(signal, config, graph);
}

RecoveryOutput end_to_end_recover(const RegularGraph& graph,
                                  const VertexEmbedding& embedding,
                                  const MagnitudeData& data,
                                  const ExperimentConfig& config) {
  const DerivedSizes sizes = derive_sizes(config);
  if (graph.vertex_count() != sizes.graph_size || graph.degree() != config.d) {
    throw DomainError("graph does not match the derived sizes");
  }
  if (embedding.domain != EmbeddingDomain::time ||
      embedding.points.size() != sizes.graph_size) {
    throw DomainError("embedding does not match the derived sizes");
  }

  const std::size_t n = sizes.n;
  const std::size_t m = sizes.m;
  const double h = config.omega / static_cast<double>(m);

  RecoveryDiagnostics diag;

  const PhaseAssignment assignment = stage("phase propagation", [&] {
    return propagate_phases(graph, data, config.tau_rel);
  });
  diag.component_size = assignment.component.size();
  diag.component_fraction = static_cast<double>(diag.component_size) /
                            static_cast<double>(graph.vertex_count());
  if (assignment.empty()) {
    return {SpikeSignal(config.lambda), diag};
  }

  const GridObservations obs = component_grid_observations(assignment, n);
  if (obs.indices.size() < m) {
    throw ComponentTooSmallError(
        "usable component covers " + std::to_string(obs.indices.size()) +
        " grid points; inversion needs at least " + std::to_string(m));
  }
  const ResampleSolution resampled = stage("resampling inversion", [&] {
    return invert_resampling(obs.indices, obs.values, n, m);
  });
  diag.resample_residual = resampled.residual;
  diag.resample_condition = resampled.condition;

  // Root finding runs on a decimated subsequence: a larger effective step
  // spreads the nodes around the unit circle, which conditions the
  // annihilating polynomial far better than neighboring samples do.
  const std::size_t stride = decimation_stride(m, config.s, h, config.lambda);
  diag.decimation = stride;

  UniformSamples decimated;
  decimated.step = static_cast<double>(stride) * h;
  decimated.values.resize(m / stride);
  for (std::size_t j = 0; j < decimated.values.size(); ++j) {
    decimated.values[j] = resampled.samples[stride * (j + 1) - 1];
  }

  std::size_t order = config.s;
  LinearFit annihilator;
  try {
    annihilator = stage("annihilating polynomial", [&] {
      return annihilating_polynomial(decimated, order);
    });
  } catch (const RankDeficiencyError&) {
    // Fewer distinct spikes than the configured order: shrink to the numeric
    // rank and retry.
    const std::size_t cap = std::min(order, decimated.size() / 2);
    order = stage("model order estimate",
                  [&] { return estimate_model_order(decimated, cap, 1e-10); });
    if (order == 0) {
      return {SpikeSignal(config.lambda), diag};
    }
    annihilator = stage("annihilating polynomial", [&] {
      return annihilating_polynomial(decimated, order);
    });
  }
  diag.model_order = order;
  diag.annihilator_residual = annihilator.residual;

  const std::vector<Complex> roots = stage(
      "root extraction", [&] { return polynomial_roots(annihilator.coeffs); });

  // Supports at the ends of [0, lambda] sit on the edge of the admissible
  // arc, where rounding could push them out. Rotating every root toward the
  // middle of the arc buys the same safety margin on both sides; the shift is
  // subtracted again afterwards.
  const double tilt = std::max(0.0, 0.45 * (0.5 / decimated.step - config.lambda));
  const long double tilt_angle = -kTwoPiL * static_cast<long double>(decimated.step) *
                                 static_cast<long double>(tilt);
  const Complex twist{static_cast<double>(std::cos(tilt_angle)),
                      static_cast<double>(std::sin(tilt_angle))};
  std::vector<Complex> tilted(roots.size());
  for (std::size_t j = 0; j < roots.size(); ++j) tilted[j] = roots[j] * twist;

  std::vector<double> supports = stage("support inversion", [&] {
    return roots_to_supports(tilted, decimated.step, config.lambda + 2.0 * tilt);
  });
  for (double& tj : supports) tj = std::clamp(tj - tilt, 0.0, config.lambda);
  std::sort(supports.begin(), supports.end());

  UniformSamples full;
  full.step = h;
  full.values = resampled.samples;
  const LinearFit coeff_fit = stage(
      "coefficient fit", [&] { return coefficients_from_supports(full, supports); });

  const auto tbl = unit_root_table(n);
  RefineState refined =
      refine_against_intensities(supports, coeff_fit.coeffs, graph, data, n, h, m,
                                 config.lambda, tbl, 6, assignment.anchor);
  diag.fit_residual = refined.rms;
  diag.refine_iterations = 6;

  // The polish fits intensities, which cannot see a global phase, so it keeps
  // whatever phase the estimate drifted to. Restore the propagation anchor:
  // rotate the model so its amplitude at the anchor vertex is real
  // nonnegative, which pins the returned class representative.
  const double anchor_mag = std::abs(refined.anchor_value);
  if (anchor_mag > 0.0) {
    const Complex unwind = std::conj(refined.anchor_value) / anchor_mag;
    for (Complex& cj : refined.c) cj *= unwind;
  }

  SpikeSignal recovered = stage("assembly", [&] {
    return SpikeSignal(std::move(refined.t), std::move(refined.c), config.lambda);
  });
  return {std::move(recovered), diag};
}

RecoveryReport verify_recovery(const SpikeSignal& original, const SpikeSignal& recovered,
                               double tol) {
  return class_distance(original, recovered, tol);
}

}  // namespace spikerec
