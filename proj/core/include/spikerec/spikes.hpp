#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace spikerec {

using Complex = std::complex<double>;

/// Finite sum of weighted point masses on [0, lambda]:
///
///   mu = sum_j coeffs[j] * delta(supports[j])
///
/// The constructor validates that supports are strictly increasing and lie in
/// [0, lambda], drops terms whose coefficient is exactly zero, and rejects
/// mismatched array lengths. An empty signal is the zero measure.
class SpikeSignal {
 public:
  SpikeSignal(std::vector<double> supports, std::vector<Complex> coeffs, double lambda);

  /// Zero measure on [0, lambda].
  explicit SpikeSignal(double lambda) : lambda_(lambda) {}

  const std::vector<double>& supports() const { return supports_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  double lambda() const { return lambda_; }
  std::size_t size() const { return supports_.size(); }
  bool is_zero() const { return supports_.empty(); }

  /// Same signal with every coefficient multiplied by a unimodular factor.
  SpikeSignal rotated(Complex phase) const;

 private:
  std::vector<double> supports_;
  std::vector<Complex> coeffs_;
  double lambda_ = 0.0;
};

/// Fourier transform at a single frequency:
///   mu_hat(omega) = sum_j c_j exp(-2 pi i omega t_j).
Complex fourier_eval(const SpikeSignal& signal, double omega);

/// Upper bound on the number of zeros of mu_hat on any interval of length
/// 2*omega, for a signal of at most `terms` spikes supported in [0, lambda]:
///
///   (1 + 6 / ln(terms / (lambda * omega))) * terms
///
/// Requires terms > lambda * omega; throws DomainError otherwise.
double zero_count_bound(std::size_t terms, double lambda, double omega);

/// Count zeros of |mu_hat| on the real interval [-omega, omega] by dense grid
/// scan plus local refinement. `grid` is the number of scan points (>= 1000
/// enforced). Intended as a diagnostic against zero_count_bound, not a
/// certified zero counter.
std::size_t count_real_zeros(const SpikeSignal& signal, double omega, std::size_t grid = 4096);

/// Outcome of comparing a recovered signal to ground truth, up to one global
/// unimodular factor.
struct RecoveryReport {
  double class_distance = 0.0;  ///< sum of support gaps + phase-aligned coefficient gaps
  bool matched = false;         ///< class_distance within the requested tolerance
  Complex aligned_phase{1.0, 0.0};  ///< the optimal unimodular factor applied to `b`
};

/// Distance between the unimodular-factor equivalence classes of two signals.
///
/// Supports are matched greedily in sorted order when within `support_tol`;
/// the optimal global phase is fit over matched pairs; unmatched spikes
/// contribute their coefficient magnitude. `matched` is true when the total
/// distance is at most `support_tol`.
RecoveryReport class_distance(const SpikeSignal& a, const SpikeSignal& b,
                              double support_tol = 1e-6);

/// Random signal with `terms` spikes in [0, lambda], pairwise separation at
/// least `min_sep`, coefficient magnitudes uniform in [mag_lo, mag_hi] with
/// uniform phases. Deterministic in `seed`.
SpikeSignal random_signal(std::size_t terms, double lambda, double min_sep, double mag_lo,
                          double mag_hi, std::uint64_t seed);

}  // namespace spikerec
