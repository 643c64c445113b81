#include "spectral.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

namespace monocycle::detail {

namespace {

// Plans are cached per thread so concurrent callers never share FFT state.
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}

}  // namespace

cvec rfft(const std::vector<double>& x) {
  cvec out;
  engine().fwd(out, x);
  return out;
}

std::vector<double> irfft(const cvec& spec, std::size_t n) {
  std::vector<double> out;
  engine().inv(out, spec, static_cast<Eigen::Index>(n));
  return out;
}

std::complex<double> d1_symbol(std::size_t k, std::size_t n, double h) {
  const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {0.0, std::sin(th) / h};
}

double d2_symbol(std::size_t k, std::size_t n, double h) {
  const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return (2.0 * std::cos(th) - 2.0) / (h * h);
}

std::complex<double> poly_symbol(const std::vector<double>& coeffs, std::size_t k, std::size_t n,
                                 double h) {
  std::complex<double> v = 0.0;
  if (!coeffs.empty()) v += coeffs[0];
  if (coeffs.size() > 1) v += coeffs[1] * d1_symbol(k, n, h);
  if (coeffs.size() > 2) v += coeffs[2] * d2_symbol(k, n, h);
  return v;
}

}  // namespace monocycle::detail
