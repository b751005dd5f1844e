#ifndef WAVELAB_FFT_INTERNAL_HPP
#define WAVELAB_FFT_INTERNAL_HPP

#include <complex>

#include "wavelab/grid.hpp"

namespace wavelab::fft {

/// Forward transform: out[k] = (1/n^d) sum_j in[j] e^{-i xi_k . x_j}.
/// Plans are cached per grid behind a mutex; in/out may alias.
void forward(const GridSpec& g, const std::complex<double>* in, std::complex<double>* out);

/// Inverse transform: out[j] = sum_k in[k] e^{+i xi_k . x_j}.
void inverse(const GridSpec& g, const std::complex<double>* in, std::complex<double>* out);

}  // namespace wavelab::fft

#endif
