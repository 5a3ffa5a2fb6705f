#pragma once

#include <cstdint>
#include <vector>

#include "spikerec/spikes.hpp"

namespace spikerec {

/// Trial-division primality test.
bool is_prime(std::uint64_t n);

/// Partial discrete Fourier transform matrix over Z_n:
///   matrix[j][k] = exp(2 pi i * observed[j] * source[k] / n)
/// (row-major, |observed| rows by |source| columns).
struct PartialDFTSystem {
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> source;
  std::vector<std::uint64_t> observed;
  std::vector<Complex> entries;

  std::size_t rows() const { return observed.size(); }
  std::size_t cols() const { return source.size(); }
  const Complex& at(std::size_t j, std::size_t k) const {
    return entries[j * source.size() + k];
  }

  /// Determinant of a square system.
  Complex determinant() const;
};

PartialDFTSystem partial_dft_matrix(std::uint64_t n,
                                    const std::vector<std::uint64_t>& source,
                                    const std::vector<std::uint64_t>& observed);

/// Result of inverting the oversampling map.
struct ResampleSolution {
  std::vector<Complex> samples;  ///< the m recovered frequency samples
  double residual = 0.0;         ///< relative least-squares residual
  double condition = 0.0;        ///< condition estimate of the system matrix
};

/// Recovers the m frequency samples (source indices 1..m) from values of the
/// periodic interpolant observed at grid residues `grid_indices` (subset of
/// {0..n-1}), where n = 2m+1 is prime. Least-squares over all observations;
/// the solution is refined with extended-precision residuals so that
/// consistent data reproduce the samples to near machine precision.
///
/// Throws DomainError when n is composite or n != 2m+1 (the inversion
/// guarantee needs a prime modulus) or when fewer than m observations are
/// given; InconsistencyError when the relative residual exceeds residual_tol.
ResampleSolution invert_resampling(const std::vector<std::size_t>& grid_indices,
                                   const std::vector<Complex>& observed,
                                   std::uint64_t n, std::size_t m,
                                   double residual_tol = 1e-8);

}  // namespace spikerec
