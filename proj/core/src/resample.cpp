#include "spikerec/resample.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "spikerec/errors.hpp"

namespace spikerec {

namespace {

using ComplexLD = std::complex<long double>;
constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

ComplexLD unit_ld(long double turns) {
  // exp(2 pi i * turns), argument reduced before evaluation
  const long double frac = turns - std::floor(turns);
  return {std::cos(kTwoPiL * frac), std::sin(kTwoPiL * frac)};
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t p = 3; p * p <= n; p += 2) {
    if (n % p == 0) return false;
  }
  return true;
}

Complex PartialDFTSystem::determinant() const {
  if (rows() != cols()) {
    throw DomainError("determinant needs a square system");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows());
  Eigen::MatrixXcd A(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      A(j, k) = at(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    }
  }
  return A.determinant();
}

PartialDFTSystem partial_dft_matrix(std::uint64_t n,
                                    const std::vector<std::uint64_t>& source,
                                    const std::vector<std::uint64_t>& observed) {
  if (n == 0) {
    throw DomainError("modulus must be positive");
  }
  for (std::uint64_t k : source) {
    if (k >= n) throw DomainError("source index outside the residue range");
  }
  for (std::uint64_t j : observed) {
    if (j >= n) throw DomainError("observation index outside the residue range");
  }
  PartialDFTSystem sys;
  sys.modulus = n;
  sys.source = source;
  sys.observed = observed;
  std::sort(sys.source.begin(), sys.source.end());
  std::sort(sys.observed.begin(), sys.observed.end());
  sys.entries.resize(sys.rows() * sys.cols());
  for (std::size_t j = 0; j < sys.rows(); ++j) {
    for (std::size_t k = 0; k < sys.cols(); ++k) {
      const std::uint64_t prod = (sys.observed[j] % n) * (sys.source[k] % n) % n;
      const ComplexLD e =
          unit_ld(static_cast<long double>(prod) / static_cast<long double>(n));
      sys.entries[j * sys.cols() + k] =
          Complex(static_cast<double>(e.real()), static_cast<double>(e.imag()));
    }
  }
  return sys;
}

ResampleSolution invert_resampling(const std::vector<std::size_t>& grid_indices,
                                   const std::vector<Complex>& observed,
                                   std::uint64_t n, std::size_t m,
                                   double residual_tol) {
  if (m == 0) {
    throw DomainError("at least one frequency sample is required");
  }
  if (n != 2 * m + 1) {
    throw DomainError("grid order must equal twice the sample count plus one");
  }
  if (!is_prime(n)) {
    throw DomainError("inversion requires a prime grid order; " + std::to_string(n) +
                      " is composite");
  }
  if (grid_indices.size() != observed.size()) {
    throw DomainError("observation count does not match the index count");
  }
  std::set<std::size_t> seen;
  for (std::size_t j : grid_indices) {
    if (j >= n) {
      throw DomainError("grid index outside the residue range");
    }
    if (!seen.insert(j).second) {
      throw DomainError("grid indices must be distinct");
    }
  }
  if (grid_indices.size() < m) {
    throw DomainError("underdetermined: fewer observations than frequency samples");
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(grid_indices.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(m);
  Eigen::VectorXcd b(rows);
  for (Eigen::Index j = 0; j < rows; ++j) b(j) = observed[static_cast<std::size_t>(j)];

  // b - A x in extended precision, with the matrix entries regenerated from
  // exact integer products: this removes the error injected by the wide
  // dynamic range of the observations, leaving the samples accurate to their
  // own rounding.
  auto residual_vector = [&](const Eigen::VectorXcd& x) {
    Eigen::VectorXcd r(rows);
    for (Eigen::Index j = 0; j < rows; ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      ComplexLD acc(observed[sj].real(), observed[sj].imag());
      const std::uint64_t gj = static_cast<std::uint64_t>(grid_indices[sj]);
      for (Eigen::Index k = 0; k < cols; ++k) {
        const std::uint64_t prod = gj * (static_cast<std::uint64_t>(k) + 1) % n;
        const ComplexLD xk(x(k).real(), x(k).imag());
        acc -= unit_ld(static_cast<long double>(prod) / static_cast<long double>(n)) *
               xk;
      }
      r(j) = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    return r;
  };

  ResampleSolution sol;
  Eigen::VectorXcd x(cols);

  if (grid_indices.size() == n) {
    // Complete grid. The columns exp(2 pi i j (k+1) / n), j = 0..n-1, are
    // exactly orthogonal with squared norm n, so the least-squares solution
    // is a plain inner product and the condition number is exactly one.
    auto normal_solve = [&](const Eigen::VectorXcd& rhs) {
      Eigen::VectorXcd y(cols);
      for (Eigen::Index k = 0; k < cols; ++k) {
        ComplexLD acc{0.0L, 0.0L};
        for (Eigen::Index j = 0; j < rows; ++j) {
          const std::uint64_t gj =
              static_cast<std::uint64_t>(grid_indices[static_cast<std::size_t>(j)]);
          const std::uint64_t prod = gj * (static_cast<std::uint64_t>(k) + 1) % n;
          const ComplexLD e =
              unit_ld(static_cast<long double>(prod) / static_cast<long double>(n));
          acc += std::conj(e) * ComplexLD(rhs(j).real(), rhs(j).imag());
        }
        acc /= static_cast<long double>(n);
        y(k) = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
      }
      return y;
    };
    x = normal_solve(b);
    x += normal_solve(residual_vector(x));
    sol.condition = 1.0;
  } else {
    Eigen::MatrixXcd A(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j) {
      for (Eigen::Index k = 0; k < cols; ++k) {
        const std::uint64_t prod =
            (static_cast<std::uint64_t>(grid_indices[static_cast<std::size_t>(j)]) %
             n) *
            (static_cast<std::uint64_t>(k) + 1) % n;
        const ComplexLD e =
            unit_ld(static_cast<long double>(prod) / static_cast<long double>(n));
        A(j, k) = Complex(static_cast<double>(e.real()), static_cast<double>(e.imag()));
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    if (qr.rank() < cols) {
      throw RankDeficiencyError("resampling system is rank deficient");
    }
    x = qr.solve(b);
    for (int pass = 0; pass < 2; ++pass) {
      x += qr.solve(residual_vector(x));
    }
    const auto& R = qr.matrixR();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < cols; ++k) {
      const double d = std::abs(R(k, k));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    sol.condition = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
  }

  sol.samples.resize(m);
  for (std::size_t k = 0; k < m; ++k) sol.samples[k] = x(static_cast<Eigen::Index>(k));

  const double bnorm = b.norm();
  sol.residual = residual_vector(x).norm() / (bnorm > 0.0 ? bnorm : 1.0);

  if (sol.residual > residual_tol) {
    throw InconsistencyError("observations are inconsistent with any sample vector");
  }
  return sol;
}

}  // namespace spikerec
