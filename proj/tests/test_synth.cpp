#include <doctest.h>

#include "oracles.hpp"
#include "pricescale/error.hpp"
#include "pricescale/synth.hpp"

#include <cmath>
#include <numeric>

using namespace pricescale;

namespace {

synth::GeneratorSpec spec_of(synth::Params p, std::size_t n, std::uint64_t seed = 1) {
    synth::GeneratorSpec s;
    s.params = std::move(p);
    s.length = n;
    s.seed = seed;
    return s;
}

std::vector<double> values(const PriceSeries& s) {
    return {s.values().begin(), s.values().end()};
}

std::vector<double> diffs(const std::vector<double>& v) {
    std::vector<double> d(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) d[i] = v[i + 1] - v[i];
    return d;
}

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::NumericalFailure;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("random walk is the running sum of its noise") {
    const auto noise = values(synth::gen(spec_of(synth::WhiteNoise{0.0, 1.0}, 64, 9)));
    const auto walk = values(synth::gen(spec_of(synth::RandomWalk{10.0, 1.0}, 64, 9)));
    double acc = 10.0;
    for (std::size_t i = 0; i < 64; ++i) {
        acc += noise[i];
        CHECK(walk[i] == doctest::Approx(acc).epsilon(1e-14));
    }
}

TEST_CASE("same spec gives the same series") {
    const std::vector<synth::Params> kinds{
        synth::WhiteNoise{}, synth::RandomWalk{}, synth::Fbm{0.7, 1.0, 0.0}, synth::OrnsteinUhlenbeck{},
        synth::MeanRevertingJumpDiffusion{}, synth::SpikeTrain{}, synth::SinusoidMix{{{24, 1, 0}}, 0, 0.5}};
    for (const auto& p : kinds) {
        CAPTURE(synth::kind_name(p));
        const auto a = synth::gen(spec_of(p, 500, 42));
        const auto b = synth::gen(spec_of(p, 500, 42));
        CHECK(a == b);
        CHECK(a.size() == 500);
        CHECK_FALSE(a == synth::gen(spec_of(p, 500, 43)));
    }
}

TEST_CASE("first draws of the documented stream") {
    // (next() >> 11) * 2^-53 on the reference engine
    std::mt19937_64 eng(5);
    synth::Rng rng(5);
    for (int i = 0; i < 4; ++i) {
        const double expect = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        CHECK(rng.uniform() == expect);
    }
    std::mt19937_64 eng2(6);
    synth::Rng rng2(6);
    const double u1 = static_cast<double>(eng2() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(eng2() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    CHECK(rng2.normal() == doctest::Approx(r * std::cos(2.0 * std::numbers::pi * u2)).epsilon(1e-14));
    CHECK(rng2.normal() == doctest::Approx(r * std::sin(2.0 * std::numbers::pi * u2)).epsilon(1e-14));
}

TEST_CASE("fbm with H = 0.5 has uncorrelated steps") {
    const auto v = values(synth::gen(spec_of(synth::Fbm{0.5, 1.0, 0.0}, 1 << 14, 3)));
    CHECK(std::abs(oracle::autocorrelation(diffs(v), 1)) < 0.05);
}

TEST_CASE("ou moments") {
    const auto v = values(synth::gen(spec_of(synth::OrnsteinUhlenbeck{50.0, 0.1, 5.0}, 1 << 14, 4)));
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    CHECK(std::abs(mean - 50.0) <= 2.0);
    CHECK(oracle::autocorrelation(diffs(v), 1) < 0.0);
}

TEST_CASE("fgn autocovariance") {
    CHECK(synth::fgn_autocovariance(0.5, 0) == 1.0);
    CHECK(synth::fgn_autocovariance(0.5, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(synth::fgn_autocovariance(0.8, 1) == doctest::Approx(0.5 * (std::pow(2.0, 1.6) - 2.0)));
    CHECK(synth::fgn_autocovariance(0.8, 1) == doctest::Approx(0.5157).epsilon(1e-3));
    CHECK(synth::fgn_autocovariance(0.3, 1) < 0.0);
    for (double h : {0.1, 0.3, 0.7, 0.95}) CHECK(synth::fgn_autocovariance(h, 0) == 1.0);
}

TEST_CASE("fgn sample covariance matches the model") {
    const std::size_t n = 1 << 16;
    for (double h : {0.25, 0.75}) {
        synth::Rng rng(11);
        const auto g = synth::fgn(h, n, rng);
        for (std::size_t k = 0; k <= 10; ++k) {
            double c = 0.0;
            for (std::size_t t = 0; t + k < n; ++t) c += g[t] * g[t + k];
            c /= static_cast<double>(n - k);
            INFO("H = " << h << ", lag " << k);
            CHECK(std::abs(c - synth::fgn_autocovariance(h, k)) <= 0.03);
        }
    }
}

TEST_CASE("spikes revert fully on the next step") {
    synth::SpikeTrain p;
    const auto v = values(synth::gen(spec_of(p, 5000, 8)));
    std::size_t spikes = 0;
    for (std::size_t t = 0; t < v.size(); ++t) {
        if (v[t] == p.baseline) continue;
        ++spikes;
        REQUIRE(t > 0);
        REQUIRE(t + 1 < v.size());
        CHECK(v[t - 1] == p.baseline);
        CHECK(v[t + 1] == p.baseline);
        CHECK(v[t] - p.baseline >= p.height * (1 - p.jitter));
        CHECK(v[t] - p.baseline <= p.height * (1 + p.jitter));
    }
    CHECK(spikes > 50);
}

TEST_CASE("mrjd without jumps is the ou path") {
    synth::OrnsteinUhlenbeck ou{40.0, 0.2, 3.0};
    const auto a = synth::gen(spec_of(ou, 2000, 21));
    const auto b = synth::gen(spec_of(synth::MeanRevertingJumpDiffusion{ou, 0.0, 10.0}, 2000, 21));
    CHECK(a == b);
    // jumps only ever push prices up
    const auto c = values(synth::gen(spec_of(synth::MeanRevertingJumpDiffusion{ou, 0.05, 30.0}, 2000, 21)));
    const auto base = values(a);
    double up = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) up += c[i] - base[i];
    CHECK(up > 0.0);
}

TEST_CASE("sinusoid mix without noise") {
    synth::SinusoidMix p{{{24.0, 2.0, 0.5}, {168.0, 1.0, 0.0}}, 30.0, 0.0};
    const auto v = values(synth::gen(spec_of(p, 200)));
    for (std::size_t t = 0; t < v.size(); ++t) {
        const double expect = 30.0 + 2.0 * std::sin(2 * std::numbers::pi * t / 24.0 + 0.5) +
                              std::sin(2 * std::numbers::pi * t / 168.0);
        CHECK(v[t] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("invalid specs") {
    CHECK(code_of([] { synth::gen(spec_of(synth::Fbm{1.2, 1.0, 0.0}, 128)); }) == Errc::InvalidSpec);
    CHECK(code_of([] { synth::gen(spec_of(synth::Fbm{0.0, 1.0, 0.0}, 128)); }) == Errc::InvalidSpec);
    CHECK(code_of([] { synth::gen(spec_of(synth::WhiteNoise{}, 63)); }) == Errc::InvalidSpec);
    CHECK(code_of([] { synth::gen(spec_of(synth::OrnsteinUhlenbeck{50, 0.0, 1.0}, 128)); }) ==
          Errc::InvalidSpec);
    CHECK(code_of([] {
              synth::gen(spec_of(synth::MeanRevertingJumpDiffusion{{}, -0.1, 1.0}, 128));
          }) == Errc::InvalidSpec);
    CHECK(code_of([] { synth::gen(spec_of(synth::SpikeTrain{50, 10, 1.5, 0.1}, 128)); }) ==
          Errc::InvalidSpec);
    CHECK(code_of([] { synth::gen(spec_of(synth::SinusoidMix{{}, 0, 0}, 128)); }) == Errc::InvalidSpec);
    CHECK(kind_of(Errc::InvalidSpec) == ErrorKind::Usage);
}

TEST_CASE("parameters from key=value pairs") {
    const auto p = synth::make_params("fbm", {{"hurst", "0.8"}, {"sigma", "0.5"}});
    REQUIRE(std::holds_alternative<synth::Fbm>(p));
    CHECK(std::get<synth::Fbm>(p).hurst == 0.8);
    CHECK(std::get<synth::Fbm>(p).sigma == 0.5);
    CHECK(synth::kind_name(p) == "fbm");

    const auto m = synth::make_params("sinusoid-mix", {{"periods", "24,168"}, {"amplitudes", "3,1"}});
    const auto& mix = std::get<synth::SinusoidMix>(m);
    REQUIRE(mix.components.size() == 2);
    CHECK(mix.components[1].period == 168.0);
    CHECK(mix.components[0].amplitude == 3.0);

    const auto j = synth::make_params("mrjd", {{"mu", "60"}, {"jump_intensity", "0"}});
    CHECK(std::get<synth::MeanRevertingJumpDiffusion>(j).ou.mu == 60.0);

    CHECK(code_of([] { synth::make_params("fbm", {{"hurts", "0.8"}}); }) == Errc::InvalidSpec);
    CHECK(code_of([] { synth::make_params("fbm", {{"hurst", "abc"}}); }) == Errc::InvalidSpec);
    CHECK(code_of([] { synth::make_params("levy", {}); }) == Errc::InvalidSpec);
    for (auto kind : {"white-noise", "random-walk", "fbm", "ou", "mrjd", "spike-train", "sinusoid-mix"}) {
        CHECK(synth::kind_name(synth::make_params(kind, {})) == kind);
    }
}

TEST_CASE("variate means") {
    synth::Rng rng(99);
    const int n = 200000;
    double e = 0.0, p_small = 0.0, p_large = 0.0;
    for (int i = 0; i < n; ++i) {
        e += rng.exponential(3.0);
        p_small += static_cast<double>(rng.poisson(0.5));
        p_large += static_cast<double>(rng.poisson(80.0));
    }
    CHECK(e / n == doctest::Approx(3.0).epsilon(0.02));
    CHECK(p_small / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(p_large / n == doctest::Approx(80.0).epsilon(0.01));
    CHECK(synth::splitmix64(1) != synth::splitmix64(2));
}

}  // TEST_SUITE
