#include "spikerec/prony.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "spikerec/errors.hpp"

namespace spikerec {

namespace {

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

Complex unit_ld(long double angle) {
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

// Horner evaluation of the monic polynomial x^s + q_{s-1} x^{s-1} + ... + q_0.
Complex eval_monic(const std::vector<Complex>& tail, Complex x) {
  Complex acc{1.0, 0.0};
  for (std::size_t l = tail.size(); l-- > 0;) {
    acc = acc * x + tail[l];
  }
  return acc;
}

Complex eval_monic_derivative(const std::vector<Complex>& tail, Complex x) {
  const std::size_t s = tail.size();
  Complex acc = static_cast<double>(s) * Complex{1.0, 0.0};
  for (std::size_t l = s; l-- > 1;) {
    acc = acc * x + static_cast<double>(l) * tail[l];
  }
  return acc;
}

}  // namespace

std::vector<Complex> apply_modulation(Complex z, const std::vector<Complex>& f) {
  if (std::abs(std::abs(z) - 1.0) > 1e-9) {
    throw DomainError("modulation symbol must be unimodular");
  }
  std::vector<Complex> out(f.size());
  // Powers built cumulatively in extended precision; the drift over n steps
  // stays far below double rounding.
  std::complex<long double> zl(z.real(), z.imag());
  std::complex<long double> power{1.0L, 0.0L};
  for (std::size_t k = 0; k < f.size(); ++k) {
    power *= zl;
    const Complex zk{static_cast<double>(power.real()), static_cast<double>(power.imag())};
    out[k] = zk * f[k];
  }
  return out;
}

std::vector<Complex> apply_cyclic_shift(const std::vector<Complex>& f) {
  if (f.empty()) {
    throw DomainError("cyclic shift needs at least one entry");
  }
  std::vector<Complex> out(f.size());
  out[0] = f.back();
  std::copy(f.begin(), f.end() - 1, out.begin() + 1);
  return out;
}

std::vector<Complex> apply_cyclic_shift_adjoint(const std::vector<Complex>& f) {
  if (f.empty()) {
    throw DomainError("cyclic shift needs at least one entry");
  }
  std::vector<Complex> out(f.size());
  std::copy(f.begin() + 1, f.end(), out.begin());
  out.back() = f.front();
  return out;
}

std::vector<Complex> apply_shifted_polynomial(
    const std::vector<Complex>& monic_tail,
    const std::function<std::vector<Complex>(const std::vector<Complex>&)>& op,
    const std::vector<Complex>& f) {
  if (!op) {
    throw DomainError("shifted polynomial needs an operator");
  }
  const std::size_t s = monic_tail.size();
  std::vector<Complex> acc(f.size(), Complex{0.0, 0.0});
  std::vector<Complex> shifted = f;
  for (std::size_t l = 0; l <= s; ++l) {
    const Complex weight = (l == s) ? Complex{1.0, 0.0} : monic_tail[l];
    if (weight != Complex{0.0, 0.0}) {
      std::vector<Complex> term = op(shifted);
      if (term.size() != f.size()) {
        throw DomainError("operator changed the sequence length");
      }
      for (std::size_t back = 0; back < l; ++back) {
        term = apply_cyclic_shift_adjoint(term);
      }
      for (std::size_t k = 0; k < f.size(); ++k) {
        acc[k] += weight * term[k];
      }
    }
    if (l < s) shifted = apply_cyclic_shift(shifted);
  }
  return acc;
}

LinearFit annihilating_polynomial(const UniformSamples& samples, std::size_t s) {
  if (s == 0) {
    throw DomainError("annihilating polynomial needs degree >= 1");
  }
  const std::size_t n = samples.size();
  if (n < 2 * s) {
    throw DomainError("annihilating polynomial needs at least 2s samples");
  }
  const std::size_t rows = n - s;
  Eigen::MatrixXcd hankel(rows, s);
  Eigen::VectorXcd rhs(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t l = 0; l < s; ++l) {
      hankel(r, l) = samples.values[r + l];
    }
    rhs(r) = -samples.values[r + s];
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(hankel,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  // The cut sits near machine precision on purpose. Exactly collided roots
  // drop a singular value to roundoff level, while a tight but genuine node
  // constellation merely gets small (1e-11-ish) and still deserves the
  // min-norm solve; rejecting those would turn hard-but-solvable instances
  // into failures.
  if (sigma(0) <= 0.0 || sigma(sigma.size() - 1) < 1e-13 * sigma(0)) {
    throw RankDeficiencyError(
        "Hankel block is rank deficient: fewer than the requested number of "
        "spikes, or collided roots");
  }
  const Eigen::VectorXcd q = svd.solve(rhs);

  LinearFit fit;
  fit.coeffs.assign(q.data(), q.data() + q.size());
  const double rhs_norm = rhs.norm();
  fit.residual = rhs_norm > 0.0 ? (hankel * q - rhs).norm() / rhs_norm : 0.0;
  return fit;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& monic_tail) {
  const std::size_t s = monic_tail.size();
  if (s == 0) {
    throw DomainError("root finding needs degree >= 1");
  }
  std::vector<Complex> roots;
  if (s == 1) {
    roots.push_back(-monic_tail[0]);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(s, s);
    for (std::size_t r = 1; r < s; ++r) {
      companion(r, r - 1) = Complex{1.0, 0.0};
    }
    for (std::size_t r = 0; r < s; ++r) {
      companion(r, s - 1) = -monic_tail[r];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("companion eigensolve did not converge");
    }
    const auto& vals = solver.eigenvalues();
    roots.assign(vals.data(), vals.data() + vals.size());
  }

  double max_coeff = 1.0;
  for (const Complex& q : monic_tail) max_coeff = std::max(max_coeff, std::abs(q));
  for (Complex& z : roots) {
    const Complex dq = eval_monic_derivative(monic_tail, z);
    if (dq != Complex{0.0, 0.0}) {
      z -= eval_monic(monic_tail, z) / dq;
    }
    if (std::abs(eval_monic(monic_tail, z)) > 1e-8 * (1.0 + max_coeff)) {
      throw NumericalError("polished root does not satisfy the polynomial");
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](const Complex& a, const Complex& b) { return std::arg(a) < std::arg(b); });
  return roots;
}

std::vector<double> roots_to_supports(const std::vector<Complex>& roots, double step,
                                      double lambda) {
  if (!(step > 0.0) || !(lambda > 0.0)) {
    throw DomainError("support inversion needs positive step and lambda");
  }
  if (!(step * lambda < 0.5)) {
    throw DomainError("support inversion needs step * lambda < 1/2");
  }
  std::vector<double> supports;
  supports.reserve(roots.size());
  for (const Complex& z : roots) {
    if (std::abs(std::abs(z) - 1.0) > 0.05) {
      throw NumericalError("root lies off the unit circle");
    }
    double t = -std::arg(z) / (2.0 * std::numbers::pi * step);
    if (t < -1e-9 || t > lambda + 1e-9) {
      throw InconsistencyError("recovered support falls outside [0, lambda]");
    }
    supports.push_back(std::clamp(t, 0.0, lambda));
  }
  std::sort(supports.begin(), supports.end());
  return supports;
}

LinearFit coefficients_from_supports(const UniformSamples& samples,
                                     const std::vector<double>& supports) {
  const std::size_t n = samples.size();
  const std::size_t s = supports.size();
  if (s == 0) {
    throw DomainError("coefficient solve needs at least one support");
  }
  if (n < s) {
    throw DomainError("coefficient solve needs at least as many samples as supports");
  }
  if (!(samples.step > 0.0)) {
    throw DomainError("coefficient solve needs a positive sample step");
  }

  Eigen::MatrixXcd vandermonde(n, s);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < s; ++j) {
      const long double angle = -kTwoPiL * static_cast<long double>(supports[j]) *
                                static_cast<long double>(samples.step) *
                                static_cast<long double>(k + 1);
      vandermonde(k, j) = unit_ld(angle);
    }
  }
  Eigen::VectorXcd rhs(n);
  for (std::size_t k = 0; k < n; ++k) rhs(k) = samples.values[k];

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(vandermonde,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  if (sigma(0) <= 0.0 || sigma(sigma.size() - 1) < 1e-10 * sigma(0)) {
    throw RankDeficiencyError("coefficient system is rank deficient: collided supports");
  }
  const Eigen::VectorXcd c = svd.solve(rhs);

  LinearFit fit;
  fit.coeffs.assign(c.data(), c.data() + c.size());
  const double rhs_norm = rhs.norm();
  fit.residual = rhs_norm > 0.0 ? (vandermonde * c - rhs).norm() / rhs_norm : 0.0;
  return fit;
}

PronyResult prony_extract(const UniformSamples& samples, std::size_t s, double lambda) {
  PronyResult result;
  LinearFit annihilator = annihilating_polynomial(samples, s);
  result.monic_poly = annihilator.coeffs;
  result.roots = polynomial_roots(result.monic_poly);
  result.supports = roots_to_supports(result.roots, samples.step, lambda);
  LinearFit coeff_fit = coefficients_from_supports(samples, result.supports);
  result.coeffs = std::move(coeff_fit.coeffs);
  result.residual = coeff_fit.residual;
  return result;
}

UniformSamples sample_fourier(const SpikeSignal& signal, double step, std::size_t count) {
  if (!(step > 0.0)) {
    throw DomainError("sampling needs a positive step");
  }
  UniformSamples samples;
  samples.step = step;
  samples.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    samples.values[k] = fourier_eval(signal, step * static_cast<double>(k + 1));
  }
  return samples;
}

std::size_t estimate_model_order(const UniformSamples& samples, std::size_t max_order,
                                 double rel_tol) {
  if (max_order == 0) {
    throw DomainError("model order estimate needs max_order >= 1");
  }
  const std::size_t n = samples.size();
  if (n < 2 * max_order) {
    throw DomainError("model order estimate needs at least 2 * max_order samples");
  }
  const std::size_t rows = n - max_order + 1;
  Eigen::MatrixXcd hankel(rows, max_order);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t l = 0; l < max_order; ++l) {
      hankel(r, l) = samples.values[r + l];
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(hankel);
  const auto& sigma = svd.singularValues();
  if (sigma(0) <= 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) >= rel_tol * sigma(0)) ++rank;
  }
  return rank;
}

}  // namespace spikerec
