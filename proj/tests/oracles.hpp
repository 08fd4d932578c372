#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library: direct formulas, long double accumulation, std
// distributions instead of the library's RNG.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// Direct double-sum fluctuation: integrate, split into floor(N/n) boxes from
/// the head, fit y = a + b k per box with raw indices via normal equations.
inline double naive_fluctuation(const std::vector<double>& x, std::size_t n) {
    const std::size_t N = x.size();
    long double mean = 0.0L;
    for (double v : x) mean += v;
    mean /= static_cast<long double>(N);
    std::vector<long double> y(N);
    long double acc = 0.0L;
    for (std::size_t k = 0; k < N; ++k) {
        acc += static_cast<long double>(x[k]) - mean;
        y[k] = acc;
    }
    const std::size_t M = N / n;
    long double total = 0.0L;
    for (std::size_t m = 0; m < M; ++m) {
        long double s1 = 0, sk = 0, skk = 0, sy = 0, sky = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const long double k = static_cast<long double>(m * n + j + 1);
            const long double v = y[m * n + j];
            s1 += 1;
            sk += k;
            skk += k * k;
            sy += v;
            sky += k * v;
        }
        const long double det = s1 * skk - sk * sk;
        const long double b = (s1 * sky - sk * sy) / det;
        const long double a = (sy - b * sk) / s1;
        for (std::size_t j = 0; j < n; ++j) {
            const long double k = static_cast<long double>(m * n + j + 1);
            const long double r = y[m * n + j] - (a + b * k);
            total += r * r;
        }
    }
    return static_cast<double>(std::sqrt(total / static_cast<long double>(M * n)));
}

/// Ordinary least squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    long double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return static_cast<double>(sxy / sxx);
}

/// |X_k|^2 by direct summation, k = 0..N/2.
inline std::vector<double> naive_power(const std::vector<double>& x) {
    const std::size_t N = x.size();
    std::vector<double> out(N / 2 + 1);
    for (std::size_t k = 0; k <= N / 2; ++k) {
        long double re = 0, im = 0;
        for (std::size_t t = 0; t < N; ++t) {
            const long double ang = -2.0L * std::numbers::pi_v<long double> *
                                    static_cast<long double>(k * t % N) / static_cast<long double>(N);
            re += x[t] * std::cos(ang);
            im += x[t] * std::sin(ang);
        }
        out[k] = static_cast<double>(re * re + im * im);
    }
    return out;
}

inline double variance(const std::vector<double>& x) {
    long double m = 0;
    for (double v : x) m += v;
    m /= x.size();
    long double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return static_cast<double>(s / x.size());
}

/// Lag-k sample autocorrelation.
inline double autocorrelation(const std::vector<double>& x, std::size_t lag) {
    const std::size_t N = x.size();
    long double m = 0;
    for (double v : x) m += v;
    m /= N;
    long double num = 0, den = 0;
    for (std::size_t t = 0; t < N; ++t) den += (x[t] - m) * (x[t] - m);
    for (std::size_t t = 0; t + lag < N; ++t) num += (x[t] - m) * (x[t + lag] - m);
    return static_cast<double>(num / den);
}

/// Inverse-CDF Pareto sampler: survival (x / x_min)^-gamma.
inline std::vector<double> pareto_samples(double gamma, double x_min, std::size_t count,
                                          std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(count);
    for (auto& x : out) x = x_min * std::pow(1.0 - u(eng), -1.0 / gamma);
    return out;
}

/// Continuous density with tail index gamma_lo on [x_min, knee) and gamma_hi above.
inline std::vector<double> piecewise_pareto_samples(double gamma_lo, double gamma_hi, double x_min,
                                                    double knee, std::size_t count,
                                                    std::uint64_t seed) {
    const double mass_lo = (std::pow(x_min, -gamma_lo) - std::pow(knee, -gamma_lo)) / gamma_lo;
    const double mass_hi = std::pow(knee, -gamma_lo) / gamma_hi;
    const double p_lo = mass_lo / (mass_lo + mass_hi);
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(count);
    for (auto& x : out) {
        const double v = u(eng);
        if (u(eng) < p_lo) {
            // truncated Pareto on [x_min, knee)
            const double a = std::pow(x_min, -gamma_lo);
            const double b = std::pow(knee, -gamma_lo);
            x = std::pow(a - v * (a - b), -1.0 / gamma_lo);
        } else {
            x = knee * std::pow(1.0 - v, -1.0 / gamma_hi);
        }
    }
    return out;
}

}  // namespace oracle
