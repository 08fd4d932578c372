#pragma once

#include "pricescale/series.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pricescale::synth {

// Random numbers
// --------------
// Every generator draws from std::mt19937_64 seeded with the spec seed. A
// uniform variate is (next() >> 11) * 2^-53, a standard normal comes from the
// Box-Muller transform of two uniforms (both outputs are used, cosine branch
// first), and an exponential variate is -log(1 - u). Jump processes draw from a
// second mt19937_64 stream seeded with splitmix64(seed) so that switching jumps
// off leaves the diffusion path untouched. The engine is fully specified by the
// C++ standard, which makes the streams identical across platforms.

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // [0, 1)
    double normal();
    double exponential(double scale);
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

struct WhiteNoise {
    double mean = 0.0;
    double sigma = 1.0;
};

struct RandomWalk {
    double start = 0.0;
    double sigma = 1.0;
};

/// Fractional Brownian motion: start + sigma * cumulative sum of unit fGn.
struct Fbm {
    double hurst = 0.5;
    double sigma = 1.0;
    double start = 0.0;
};

/// Euler scheme with dt = 1 hour; the path starts at mu unless x0 is given.
struct OrnsteinUhlenbeck {
    double mu = 50.0;
    double theta = 0.1;
    double sigma = 5.0;
    double x0 = std::numeric_limits<double>::quiet_NaN();
};

/// Ornstein-Uhlenbeck plus compound-Poisson upward jumps with exponential sizes.
struct MeanRevertingJumpDiffusion {
    OrnsteinUhlenbeck ou;
    double jump_intensity = 0.01;  // expected jumps per hour
    double jump_scale = 50.0;      // mean jump size
};

/// Baseline with isolated one-hour spikes that fully revert on the next step.
/// Spike heights are height * U(1 - jitter, 1 + jitter); a spike is placed
/// with probability `rate` at any hour whose predecessor is not a spike.
struct SpikeTrain {
    double baseline = 50.0;
    double height = 100.0;
    double rate = 0.02;
    double jitter = 0.5;
};

struct Sinusoid {
    double period = 24.0;
    double amplitude = 1.0;
    double phase = 0.0;  // radians
};

struct SinusoidMix {
    std::vector<Sinusoid> components{Sinusoid{}};
    double offset = 0.0;
    double noise_sigma = 0.0;
};

using Params = std::variant<WhiteNoise, RandomWalk, Fbm, OrnsteinUhlenbeck,
                            MeanRevertingJumpDiffusion, SpikeTrain, SinusoidMix>;

struct GeneratorSpec {
    Params params;
    std::uint64_t seed = 1;
    std::size_t length = 1024;
    std::string market_id = "synthetic";
    Timestamp start_time = Timestamp{std::chrono::sys_days{std::chrono::year{2001} /
                                                           std::chrono::January / 1}};
};

std::string_view kind_name(const Params& params) noexcept;

/// Throws InvalidSpec on violated invariants.
void validate(const GeneratorSpec& spec);

PriceSeries gen(const GeneratorSpec& spec);

/// Builds parameters for `kind` from key=value overrides on top of the defaults.
/// Sinusoid components are given as `periods`, `amplitudes`, `phases` lists.
Params make_params(std::string_view kind, const std::map<std::string, std::string>& values);

/// Autocovariance of unit-variance fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, std::size_t lag);

/// Exact fGn sample of length n by circulant embedding (Davies-Harte).
std::vector<double> fgn(double hurst, std::size_t n, Rng& rng);

}  // namespace pricescale::synth
