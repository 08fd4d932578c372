#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pricescale::detail {

/// Forward DFT of real input, X_k = sum_t x_t exp(-2 pi i k t / N), k = 0..N/2.
std::vector<std::complex<double>> real_dft(std::span<const double> x);

/// Forward complex DFT with the same sign convention.
std::vector<std::complex<double>> complex_dft(std::span<const std::complex<double>> x);

}  // namespace pricescale::detail
