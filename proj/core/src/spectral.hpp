#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace monocycle::detail {

using cvec = std::vector<std::complex<double>>;

/// Half spectrum (N/2 + 1 bins) of a real sequence.
cvec rfft(const std::vector<double>& x);
/// Inverse of rfft for a sequence of length n (scaled by 1/n).
std::vector<double> irfft(const cvec& spec, std::size_t n);

/// Circulant eigenvalue of the central first difference at bin k.
std::complex<double> d1_symbol(std::size_t k, std::size_t n, double h);
/// Circulant eigenvalue of the second difference at bin k.
double d2_symbol(std::size_t k, std::size_t n, double h);

/// c0 + c1*mu1 + c2*mu2 for coefficients in ascending powers of s.
std::complex<double> poly_symbol(const std::vector<double>& coeffs, std::size_t k, std::size_t n,
                                 double h);

}  // namespace monocycle::detail
