#include "spikerec/spikes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spikerec/errors.hpp"
#include "spikerec/rng.hpp"

namespace spikerec {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SpikeSignal::SpikeSignal(std::vector<double> supports, std::vector<Complex> coeffs,
                         double lambda)
    : lambda_(lambda) {
  if (!(lambda > 0.0)) {
    throw DomainError("spike signal requires a positive support window length");
  }
  if (supports.size() != coeffs.size()) {
    throw DomainError("spike signal requires matching support and coefficient counts");
  }
  supports_.reserve(supports.size());
  coeffs_.reserve(coeffs.size());
  double prev = -1.0;
  for (std::size_t j = 0; j < supports.size(); ++j) {
    const double t = supports[j];
    if (!std::isfinite(t) || t < 0.0 || t > lambda) {
      throw DomainError("spike support outside [0, lambda]");
    }
    if (j > 0 && !(t > prev)) {
      throw DomainError("spike supports must be strictly increasing");
    }
    prev = t;
    if (coeffs[j] == Complex{0.0, 0.0}) {
      continue;  // zero-weight spikes are not part of the measure
    }
    supports_.push_back(t);
    coeffs_.push_back(coeffs[j]);
  }
}

SpikeSignal SpikeSignal::rotated(Complex phase) const {
  SpikeSignal out(lambda_);
  out.supports_ = supports_;
  out.coeffs_.reserve(coeffs_.size());
  for (const Complex& c : coeffs_) out.coeffs_.push_back(phase * c);
  return out;
}

Complex fourier_eval(const SpikeSignal& signal, double omega) {
  // Accumulated in extended precision so that the returned double carries a
  // single rounding, not one per spike.
  long double re = 0.0L, im = 0.0L;
  const auto& t = signal.supports();
  const auto& c = signal.coeffs();
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const long double phase = -two_pi * static_cast<long double>(omega) *
                              static_cast<long double>(t[j]);
    const long double cs = std::cos(phase), sn = std::sin(phase);
    const long double cr = c[j].real(), ci = c[j].imag();
    re += cr * cs - ci * sn;
    im += cr * sn + ci * cs;
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

double zero_count_bound(std::size_t terms, double lambda, double omega) {
  if (terms == 0) {
    throw DomainError("zero count bound needs at least one spike");
  }
  if (!(lambda > 0.0) || !(omega > 0.0)) {
    throw DomainError("zero count bound needs positive window and bandwidth");
  }
  const double s = static_cast<double>(terms);
  if (!(s > lambda * omega)) {
    throw DomainError("zero count bound requires terms > lambda * omega");
  }
  return (1.0 + 6.0 / std::log(s / (lambda * omega))) * s;
}

std::size_t count_real_zeros(const SpikeSignal& signal, double omega, std::size_t grid) {
  if (!(omega > 0.0)) {
    throw DomainError("zero counting needs a positive bandwidth");
  }
  if (signal.is_zero()) {
    throw DomainError("zero counting is undefined for the zero measure");
  }
  const std::size_t points = std::max<std::size_t>(grid, 1000);
  std::vector<double> mag(points + 1);
  double peak = 0.0;
  const double step = 2.0 * omega / static_cast<double>(points);
  for (std::size_t k = 0; k <= points; ++k) {
    mag[k] = std::abs(fourier_eval(signal, -omega + step * static_cast<double>(k)));
    peak = std::max(peak, mag[k]);
  }
  const double zero_tol = 1e-10 * peak;

  // Refine every local minimum of |mu_hat| by golden-section search and count
  // the ones that reach (numerical) zero.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  std::size_t zeros = 0;
  for (std::size_t k = 1; k < points; ++k) {
    if (mag[k] > mag[k - 1] || mag[k] > mag[k + 1]) continue;
    if (k > 1 && mag[k] == mag[k - 1]) continue;  // plateau counted once
    double a = -omega + step * static_cast<double>(k - 1);
    double b = -omega + step * static_cast<double>(k + 1);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = std::abs(fourier_eval(signal, x1));
    double f2 = std::abs(fourier_eval(signal, x2));
    for (int iter = 0; iter < 80 && (b - a) > 1e-14 * omega; ++iter) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = std::abs(fourier_eval(signal, x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = std::abs(fourier_eval(signal, x2));
      }
    }
    if (std::min(f1, f2) <= zero_tol) ++zeros;
  }
  return zeros;
}

RecoveryReport class_distance(const SpikeSignal& a, const SpikeSignal& b,
                              double support_tol) {
  if (!(support_tol > 0.0)) {
    throw DomainError("class distance needs a positive support tolerance");
  }
  const auto& ta = a.supports();
  const auto& tb = b.supports();
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();

  // Greedy matching over the two sorted support lists.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<bool> used_a(ta.size(), false), used_b(tb.size(), false);
  std::size_t i = 0, j = 0;
  while (i < ta.size() && j < tb.size()) {
    const double gap = ta[i] - tb[j];
    if (std::abs(gap) <= support_tol) {
      pairs.emplace_back(i, j);
      used_a[i] = used_b[j] = true;
      ++i;
      ++j;
    } else if (gap < 0.0) {
      ++i;
    } else {
      ++j;
    }
  }

  RecoveryReport report;
  Complex overlap{0.0, 0.0};
  for (const auto& [ia, ib] : pairs) overlap += ca[ia] * std::conj(cb[ib]);
  if (std::abs(overlap) > 0.0) {
    report.aligned_phase = overlap / std::abs(overlap);
  }

  double dist = 0.0;
  for (const auto& [ia, ib] : pairs) {
    dist += std::abs(ta[ia] - tb[ib]);
    dist += std::abs(ca[ia] - report.aligned_phase * cb[ib]);
  }
  for (std::size_t k = 0; k < ta.size(); ++k) {
    if (!used_a[k]) dist += std::abs(ca[k]);
  }
  for (std::size_t k = 0; k < tb.size(); ++k) {
    if (!used_b[k]) dist += std::abs(cb[k]);
  }
  report.class_distance = dist;
  report.matched = dist <= support_tol;
  return report;
}

SpikeSignal random_signal(std::size_t terms, double lambda, double min_sep, double mag_lo,
                          double mag_hi, std::uint64_t seed) {
  if (!(lambda > 0.0)) {
    throw DomainError("random signal requires a positive support window length");
  }
  if (terms == 0) return SpikeSignal(lambda);
  if (min_sep < 0.0 || !(mag_lo > 0.0) || mag_hi < mag_lo) {
    throw DomainError("random signal parameters out of range");
  }
  const double slack = lambda - min_sep * static_cast<double>(terms - 1);
  if (!(slack >= 0.0)) {
    throw DomainError("support window too short for the requested separation");
  }

  Rng rng(seed);
  std::vector<double> offsets(terms);
  for (double& x : offsets) x = rng.uniform(0.0, slack);
  std::sort(offsets.begin(), offsets.end());
  std::vector<double> supports(terms);
  for (std::size_t k = 0; k < terms; ++k) {
    supports[k] = offsets[k] + min_sep * static_cast<double>(k);
  }
  // Sorted uniforms can coincide when min_sep is 0; nudge into strict order.
  for (std::size_t k = 1; k < terms; ++k) {
    if (!(supports[k] > supports[k - 1])) {
      supports[k] = std::nextafter(supports[k - 1], lambda + 1.0);
    }
  }
  if (supports.back() > lambda) {
    throw GenerationError("could not place strictly increasing supports in the window");
  }

  std::vector<Complex> coeffs(terms);
  for (Complex& c : coeffs) c = rng.uniform(mag_lo, mag_hi) * rng.unit_phase();
  return SpikeSignal(std::move(supports), std::move(coeffs), lambda);
}

}  // namespace spikerec
