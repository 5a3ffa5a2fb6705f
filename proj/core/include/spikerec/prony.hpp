#pragma once

#include <functional>
#include <vector>

#include "spikerec/spikes.hpp"

namespace spikerec {

/// Equispaced Fourier samples: values[k] = mu_hat((k+1) * step), k = 0..N-1.
/// Unambiguous support inversion additionally needs step * lambda < 1/2;
/// that is checked where it matters (roots_to_supports), not here.
struct UniformSamples {
  double step = 0.0;
  std::vector<Complex> values;

  std::size_t size() const { return values.size(); }
};

/// Full output of the support/coefficient extraction.
struct PronyResult {
  std::vector<Complex> monic_poly;  ///< q_0..q_{s-1}; q_s = 1 implicit
  std::vector<Complex> roots;       ///< ascending principal argument
  std::vector<double> supports;     ///< ascending, in [0, lambda]
  std::vector<Complex> coeffs;      ///< aligned with supports
  double residual = 0.0;            ///< relative residual of the coefficient fit
};

/// Diagonal modulation (M_z f)(k) = z^k f(k), k = 1..n.
/// Requires |z| = 1 within 1e-9.
std::vector<Complex> apply_modulation(Complex z, const std::vector<Complex>& f);

/// Cyclic shift (S f)(k) = f(k-1) with wrap-around (S f)(1) = f(n).
std::vector<Complex> apply_cyclic_shift(const std::vector<Complex>& f);

/// Adjoint (= inverse) of the cyclic shift: (S* f)(k) = f(k+1), wrap at the top.
std::vector<Complex> apply_cyclic_shift_adjoint(const std::vector<Complex>& f);

/// Shift-conjugated polynomial of an arbitrary operator:
///
///   Psi_q(T) f = sum_{l=0}^{s} q_l (S^l)* T (S^l f),   q_s = 1,
///
/// where monic_tail holds q_0..q_{s-1} and `op` applies T.
std::vector<Complex> apply_shifted_polynomial(
    const std::vector<Complex>& monic_tail,
    const std::function<std::vector<Complex>(const std::vector<Complex>&)>& op,
    const std::vector<Complex>& f);

/// Least-squares fit of a linear system together with its relative residual.
struct LinearFit {
  std::vector<Complex> coeffs;
  double residual = 0.0;
};

/// Monic annihilating polynomial of degree s from the Hankel recurrence
///
///   sum_{l=0}^{s} q_l h_{k+l} = 0,   q_s = 1,
///
/// solved in least squares over every available row. Requires N >= 2s.
/// Throws RankDeficiencyError when the Hankel block has numerical rank < s
/// (fewer than s genuine spikes, or collided roots).
LinearFit annihilating_polynomial(const UniformSamples& samples, std::size_t s);

/// Roots of the monic polynomial with low-order coefficients `monic_tail`
/// (degree = monic_tail.size()), by companion-matrix eigensolve with one
/// Newton polish per root. Sorted by ascending principal argument.
/// Throws NumericalError when the eigensolve fails or a polished root still
/// misses |q(root)| <= 1e-8 * (1 + max |q_l|).
std::vector<Complex> polynomial_roots(const std::vector<Complex>& monic_tail);

/// Inverts z_j = exp(-2 pi i t_j h): t_j = -arg(z_j) / (2 pi h), sorted
/// ascending. Only the argument of each root is used; the modulus merely has
/// to sit within 0.05 of the unit circle (NumericalError otherwise), since
/// noise in the annihilator moves roots radially long before the angles
/// degrade. Requires h * lambda < 1/2. Supports must land in [0, lambda]
/// within 1e-9 (clamped) or InconsistencyError is thrown.
std::vector<double> roots_to_supports(const std::vector<Complex>& roots, double step,
                                      double lambda);

/// Coefficients from known supports: least-squares solve of the N x s system
///   sum_j c_j exp(-2 pi i t_j (k+1) step) = values[k]
/// over all rows. Throws RankDeficiencyError on collided supports.
LinearFit coefficients_from_supports(const UniformSamples& samples,
                                     const std::vector<double>& supports);

/// Full extraction: annihilating polynomial, roots, supports, coefficients.
PronyResult prony_extract(const UniformSamples& samples, std::size_t s, double lambda);

/// Forward sampling helper: values[k] = mu_hat((k+1) * step), k = 0..count-1.
UniformSamples sample_fourier(const SpikeSignal& signal, double step, std::size_t count);

/// Numerical rank of the Hankel block with max_order columns: the number of
/// spikes the samples can support. Diagnostic only; never overrides a
/// caller-declared sparsity. Requires N >= 2 * max_order.
std::size_t estimate_model_order(const UniformSamples& samples, std::size_t max_order,
                                 double rel_tol = 1e-10);

}  // namespace spikerec
