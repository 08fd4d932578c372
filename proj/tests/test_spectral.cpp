#include <doctest.h>

#include "oracles.hpp"
#include "pricescale/dfa.hpp"
#include "pricescale/error.hpp"
#include "pricescale/spectral.hpp"
#include "pricescale/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

using namespace pricescale;

namespace {

std::vector<double> white(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> z(0.0, sigma);
    std::vector<double> v(n);
    for (auto& x : v) x = z(eng);
    return v;
}

std::vector<double> sinusoid(std::size_t n, double period, double amplitude, double phase = 0.3) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
        v[t] = amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + phase);
    }
    return v;
}

std::vector<double> fbm_values(double hurst, std::size_t n, std::uint64_t seed) {
    synth::GeneratorSpec spec;
    spec.params = synth::Fbm{hurst, 1.0, 0.0};
    spec.length = n;
    spec.seed = seed;
    const auto s = synth::gen(spec);
    return {s.values().begin(), s.values().end()};
}

double total_power(const spectral::Spectrum& s) {
    return std::accumulate(s.power.begin(), s.power.end(), 0.0) / s.record_length;
}

spectral::BetaEstimate fit_all(const spectral::Spectrum& s) {
    return spectral::spectral_exponent(s, spectral::full_range(s), std::vector<double>{});
}

double significance(const spectral::Spectrum& s, double period) {
    const std::vector<double> p{period};
    return spectral::detect_cycles(s, p).entries.at(0).significance;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("frequency grid and truncation") {
    const auto s = spectral::periodogram(white(1000, 1));
    CHECK(s.samples_used == 512);
    CHECK(s.samples_dropped == 488);
    CHECK(s.record_length == 512.0);
    CHECK(s.frequencies.front() == doctest::Approx(1.0 / 512));
    CHECK(s.frequencies.back() == 0.5);
    CHECK(std::adjacent_find(s.frequencies.begin(), s.frequencies.end(), std::greater_equal<>()) ==
          s.frequencies.end());
    for (double p : s.power) CHECK(p >= 0.0);
}

TEST_CASE("matches direct summation") {
    auto v = white(256, 8);
    for (auto& x : v) x += 40.0;
    const auto s = spectral::periodogram(v);
    std::vector<double> centered(v);
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    for (auto& x : centered) x -= m;
    const auto ref = oracle::naive_power(centered);
    for (std::size_t k = 1; k <= 128; ++k) {
        const double expect = (k == 128 ? 1.0 : 2.0) * ref[k] / 256.0;
        CHECK(s.power[k - 1] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("Parseval: total power equals the variance") {
    for (std::uint64_t seed : {1, 2, 3}) {
        for (std::size_t n : {64, 1000, 4096}) {
            auto v = white(n, seed, 3.0);
            for (std::size_t t = 0; t < n; ++t) v[t] += 0.01 * t;
            const auto s = spectral::periodogram(v);
            const std::vector<double> used(v.begin(), v.begin() + s.samples_used);
            CHECK(std::abs(total_power(s) - oracle::variance(used)) <= 1e-6 * oracle::variance(used));
        }
    }
}

TEST_CASE("pure sinusoid concentrates its power at 1/24") {
    // 4096 / 24 is not a whole number of cycles; the taper keeps leakage inside the window
    const auto s = spectral::periodogram(sinusoid(1 << 12, 24.0, 2.0), 1.0, spectral::Window::Hann);
    const auto peak = std::max_element(s.power.begin(), s.power.end()) - s.power.begin();
    CHECK(s.frequencies[peak] == doctest::Approx(1.0 / 24).epsilon(0.01));
    // peak window of +-2% around 1/24 holds nearly all power
    double near = 0.0, total = 0.0;
    for (std::size_t i = 0; i < s.power.size(); ++i) {
        total += s.power[i];
        if (std::abs(s.frequencies[i] - 1.0 / 24) <= 0.02 / 24) near += s.power[i];
    }
    CHECK(near / total >= 0.99);
}

TEST_CASE("sinusoid on an exact frequency bin") {
    const auto s = spectral::periodogram(sinusoid(1 << 12, 32.0, 2.0));
    const double total = std::accumulate(s.power.begin(), s.power.end(), 0.0);
    CHECK(s.power[4096 / 32 - 1] / total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("constant series gives a zero spectrum") {
    const auto s = spectral::periodogram(std::vector<double>(128, 42.0));
    for (double p : s.power) CHECK(p == doctest::Approx(0.0));
}

TEST_CASE("white noise is flat") {
    const auto b = fit_all(spectral::periodogram(white(1 << 14, 4)));
    CHECK(std::abs(b.beta) < 0.1);
}

TEST_CASE("exact power law f^-2") {
    spectral::Spectrum s;
    s.record_length = 8192;
    for (int k = 1; k <= 4096; ++k) {
        const double f = k / 8192.0;
        s.frequencies.push_back(f);
        s.power.push_back(3.0 * std::pow(f, -2.0));
    }
    const auto b = fit_all(s);
    // averaging S within a log bin biases the slope by a few 1e-4
    CHECK(b.beta == doctest::Approx(2.0).epsilon(2e-3 / 2.0));
    CHECK(b.beta_err < 2e-3);
    CHECK(b.alpha_theor == (b.beta + 1.0) / 2.0);
    CHECK(b.alpha_theor_err == b.beta_err / 2.0);
    CHECK(b.bins_used >= 10);
}

TEST_CASE("excluded periods remove cycle peaks from the fit") {
    spectral::Spectrum s;
    s.record_length = 8192;
    for (int k = 1; k <= 4096; ++k) {
        const double f = k / 8192.0;
        double p = std::pow(f, -1.5);
        for (int h = 1; h <= 4; ++h) {
            if (std::abs(f - h / 24.0) <= 0.01 / 24.0) p *= 1e4;
        }
        s.frequencies.push_back(f);
        s.power.push_back(p);
    }
    const std::vector<double> exclude{24.0};
    const auto clean = spectral::spectral_exponent(s, spectral::full_range(s), exclude);
    const auto dirty = fit_all(s);
    CHECK(clean.beta == doctest::Approx(1.5).epsilon(0.01));
    CHECK(std::abs(dirty.beta - 1.5) > 0.05);
}

TEST_CASE("brownian path gives beta near 2") {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        sum += fit_all(spectral::periodogram(fbm_values(0.5, 1 << 14, seed))).beta;
    }
    const double beta = sum / 10;
    CHECK(std::abs(beta - 2.0) <= 0.15);
    CHECK(std::abs((beta + 1) / 2 - 1.5) <= 0.075);
}

TEST_CASE("beta and DFA alpha agree on fbm (Hann taper)") {
    for (double H : {0.2, 0.5, 0.8}) {
        double beta = 0.0, alpha = 0.0;
        const int seeds = 5;
        for (int seed = 1; seed <= seeds; ++seed) {
            const auto v = fbm_values(H, 1 << 15, seed);
            beta += fit_all(spectral::periodogram(v, 1.0, spectral::Window::Hann)).beta;
            const auto c = dfa::fluctuation_function(dfa::integrate_profile(v), dfa::default_scales(v.size()));
            alpha += dfa::summary_exponents(dfa::local_exponents(c)).alpha_mean;
        }
        beta /= seeds;
        alpha /= seeds;
        INFO("H = " << H << ", beta = " << beta << ", alpha = " << alpha);
        CHECK(std::abs(beta - (2.0 * alpha - 1.0)) <= 0.2);
    }
}

TEST_CASE("cycle detection") {
    SUBCASE("strong daily cycle with weak noise") {
        auto v = sinusoid(1 << 14, 24.0, 1.0);
        const auto noise = white(v.size(), 5, 0.1);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += noise[i];
        const auto s = spectral::periodogram(v);
        CHECK(significance(s, 24.0) >= 100.0);
        CHECK(significance(s, 168.0) < 10.0);
    }
    SUBCASE("white noise never reaches 10") {
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto s = spectral::periodogram(white(1 << 12, seed));
            worst = std::max({worst, significance(s, 24.0), significance(s, 168.0)});
        }
        CHECK(worst < 10.0);
    }
    SUBCASE("daily plus weekly cycle") {
        auto v = sinusoid(1 << 14, 24.0, 1.0);
        const auto w = sinusoid(v.size(), 168.0, 1.0, 1.1);
        const auto noise = white(v.size(), 6, 0.5);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i] + noise[i];
        const auto s = spectral::periodogram(v);
        CHECK(significance(s, 24.0) >= 10.0);
        CHECK(significance(s, 168.0) >= 10.0);
    }
    SUBCASE("entries follow the candidate list") {
        const auto s = spectral::periodogram(white(1024, 1));
        const std::vector<double> periods{168.0, 12.0, 24.0};
        const auto r = spectral::detect_cycles(s, periods);
        REQUIRE(r.entries.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(r.entries[i].period_hours == periods[i]);
            CHECK(r.entries[i].significance >= 0.0);
        }
    }
}

TEST_CASE("amplitude scaling") {
    auto v = fbm_values(0.4, 1 << 13, 3);
    const auto s1 = spectral::periodogram(v);
    for (auto& x : v) x *= 4.0;
    const auto s4 = spectral::periodogram(v);
    for (std::size_t i = 0; i < s1.power.size(); ++i) {
        CHECK(s4.power[i] == doctest::Approx(16.0 * s1.power[i]).epsilon(1e-9));
    }
    CHECK(fit_all(s4).beta == doctest::Approx(fit_all(s1).beta).epsilon(1e-9));
    CHECK(significance(s4, 24.0) == doctest::Approx(significance(s1, 24.0)).epsilon(1e-9));
}

TEST_CASE("identical input gives identical spectra") {
    const auto v = white(4096, 2);
    CHECK(spectral::periodogram(v).power == spectral::periodogram(v).power);
}

TEST_CASE("hann taper keeps total power close to the variance") {
    const auto v = white(1 << 14, 12, 2.0);
    const auto s = spectral::periodogram(v, 1.0, spectral::Window::Hann);
    CHECK(s.window == spectral::Window::Hann);
    CHECK(total_power(s) == doctest::Approx(oracle::variance(v)).epsilon(0.05));
    CHECK(spectral::parse_window("hann") == spectral::Window::Hann);
    CHECK(spectral::parse_window(spectral::to_string(spectral::Window::Rectangular)) ==
          spectral::Window::Rectangular);
}

TEST_CASE("error conditions") {
    const auto code = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::NumericalFailure;
    };
    CHECK(code([] { spectral::periodogram(white(63, 1)); }) == Errc::SeriesTooShort);
    const auto s = spectral::periodogram(white(256, 1));
    CHECK(code([&] { significance(s, 2.0); }) == Errc::CandidateOutOfRange);
    CHECK(code([&] { significance(s, 128.0); }) == Errc::CandidateOutOfRange);
    CHECK(code([&] {
              spectral::spectral_exponent(s, {0.4, 0.5}, std::vector<double>{});
          }) == Errc::InsufficientBins);
    CHECK(code([&] {
              spectral::spectral_exponent(s, {0.1, 0.9}, std::vector<double>{});
          }) == Errc::InvalidArgument);
    CHECK(code([&] {
              spectral::spectral_exponent(s, {0.041, 0.043}, std::vector<double>{24.0});
          }) == Errc::EmptyFitRange);
    CHECK(code([] { spectral::parse_window("kaiser"); }) == Errc::InvalidArgument);
}

}  // TEST_SUITE
