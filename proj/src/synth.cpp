#include "pricescale/synth.hpp"

#include "fft.hpp"
#include "pricescale/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace pricescale::synth {

namespace {

constexpr const char* kModule = "synth";

Error invalid(const std::string& msg) { return Error(Errc::InvalidSpec, kModule, msg); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------------------
// Rng

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

double Rng::exponential(double scale) { return -scale * std::log(1.0 - uniform()); }

std::uint64_t Rng::poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean > 30.0) {
        const double x = std::round(mean + std::sqrt(mean) * normal());
        return x > 0.0 ? static_cast<std::uint64_t>(x) : 0;
    }
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = uniform();
    while (p > limit) {
        ++k;
        p *= uniform();
    }
    return k;
}

// ---------------------------------------------------------------------------
// fGn

double fgn_autocovariance(double hurst, std::size_t lag) {
    const double k = static_cast<double>(lag);
    const double h2 = 2.0 * hurst;
    const auto pw = [h2](double v) { return v == 0.0 ? 0.0 : std::pow(std::abs(v), h2); };
    return 0.5 * (pw(k + 1.0) - 2.0 * pw(k) + pw(k - 1.0));
}

std::vector<double> fgn(double hurst, std::size_t n, Rng& rng) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw invalid("Hurst index must lie in (0, 1)");
    if (n == 0) return {};

    // Circulant row of length m = 2n built from lags 0..n.
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(hurst, k);
    for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];
    const auto spectrum = detail::complex_dft(row);

    std::vector<double> lambda(m);
    double peak = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        lambda[k] = spectrum[k].real();
        peak = std::max(peak, std::abs(lambda[k]));
    }
    for (double& l : lambda) {
        if (l < 0.0) {
            if (l < -1e-9 * peak) {
                throw Error(Errc::NumericalFailure, kModule, "circulant embedding is not non-negative");
            }
            l = 0.0;
        }
    }

    // Draw order: k = 0, k = n, then (re, im) for k = 1..n-1.
    const double dm = static_cast<double>(m);
    std::vector<std::complex<double>> a(m);
    a[0] = std::sqrt(lambda[0] / dm) * rng.normal();
    a[n] = std::sqrt(lambda[n] / dm) * rng.normal();
    for (std::size_t k = 1; k < n; ++k) {
        const double s = std::sqrt(lambda[k] / (2.0 * dm));
        const double re = rng.normal();
        const double im = rng.normal();
        a[k] = {s * re, s * im};
        a[m - k] = std::conj(a[k]);
    }
    const auto x = detail::complex_dft(a);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = x[j].real();
    return out;
}

// ---------------------------------------------------------------------------
// Specs

std::string_view kind_name(const Params& params) noexcept {
    return std::visit(overloaded{
                          [](const WhiteNoise&) { return std::string_view("white-noise"); },
                          [](const RandomWalk&) { return std::string_view("random-walk"); },
                          [](const Fbm&) { return std::string_view("fbm"); },
                          [](const OrnsteinUhlenbeck&) { return std::string_view("ou"); },
                          [](const MeanRevertingJumpDiffusion&) { return std::string_view("mrjd"); },
                          [](const SpikeTrain&) { return std::string_view("spike-train"); },
                          [](const SinusoidMix&) { return std::string_view("sinusoid-mix"); },
                      },
                      params);
}

namespace {

void validate_ou(const OrnsteinUhlenbeck& p) {
    if (!(p.theta > 0.0)) throw invalid("ou reversion rate theta must be > 0");
    if (!(p.sigma >= 0.0)) throw invalid("ou volatility sigma must be >= 0");
    if (!std::isfinite(p.mu)) throw invalid("ou mean level must be finite");
}

}  // namespace

void validate(const GeneratorSpec& spec) {
    if (spec.length < 64) {
        throw invalid("length must be at least 64, got " + std::to_string(spec.length));
    }
    std::visit(overloaded{
                   [](const WhiteNoise& p) {
                       if (!(p.sigma >= 0.0)) throw invalid("sigma must be >= 0");
                   },
                   [](const RandomWalk& p) {
                       if (!(p.sigma >= 0.0)) throw invalid("sigma must be >= 0");
                   },
                   [](const Fbm& p) {
                       if (!(p.hurst > 0.0 && p.hurst < 1.0)) {
                           throw invalid("fbm Hurst index must lie in (0, 1), got " +
                                         std::to_string(p.hurst));
                       }
                       if (!(p.sigma >= 0.0)) throw invalid("sigma must be >= 0");
                   },
                   [](const OrnsteinUhlenbeck& p) { validate_ou(p); },
                   [](const MeanRevertingJumpDiffusion& p) {
                       validate_ou(p.ou);
                       if (!(p.jump_intensity >= 0.0)) throw invalid("jump intensity must be >= 0");
                       if (!(p.jump_scale > 0.0)) throw invalid("jump scale must be > 0");
                   },
                   [](const SpikeTrain& p) {
                       if (!(p.rate >= 0.0 && p.rate <= 1.0)) throw invalid("spike rate must lie in [0, 1]");
                       if (!(p.jitter >= 0.0 && p.jitter <= 1.0)) throw invalid("jitter must lie in [0, 1]");
                       if (!std::isfinite(p.height) || !std::isfinite(p.baseline)) {
                           throw invalid("spike height and baseline must be finite");
                       }
                   },
                   [](const SinusoidMix& p) {
                       if (p.components.empty()) throw invalid("sinusoid-mix needs at least one component");
                       for (const auto& c : p.components) {
                           if (!(c.period > 0.0)) throw invalid("sinusoid periods must be > 0");
                       }
                       if (!(p.noise_sigma >= 0.0)) throw invalid("noise sigma must be >= 0");
                   },
               },
               spec.params);
}

PriceSeries gen(const GeneratorSpec& spec) {
    validate(spec);
    const std::size_t N = spec.length;
    Rng rng(spec.seed);
    std::vector<double> x(N);

    const auto run_ou = [&](const OrnsteinUhlenbeck& p, Rng* jumps, double intensity, double scale) {
        x[0] = std::isnan(p.x0) ? p.mu : p.x0;
        for (std::size_t t = 1; t < N; ++t) {
            double v = x[t - 1] + p.theta * (p.mu - x[t - 1]) + p.sigma * rng.normal();
            if (jumps) {
                const auto count = jumps->poisson(intensity);
                for (std::uint64_t j = 0; j < count; ++j) v += jumps->exponential(scale);
            }
            x[t] = v;
        }
    };

    std::visit(overloaded{
                   [&](const WhiteNoise& p) {
                       for (auto& v : x) v = p.mean + p.sigma * rng.normal();
                   },
                   [&](const RandomWalk& p) {
                       double acc = 0.0;
                       for (auto& v : x) {
                           acc += p.sigma * rng.normal();
                           v = p.start + acc;
                       }
                   },
                   [&](const Fbm& p) {
                       const auto g = fgn(p.hurst, N, rng);
                       double acc = 0.0;
                       for (std::size_t t = 0; t < N; ++t) {
                           acc += g[t];
                           x[t] = p.start + p.sigma * acc;
                       }
                   },
                   [&](const OrnsteinUhlenbeck& p) { run_ou(p, nullptr, 0.0, 1.0); },
                   [&](const MeanRevertingJumpDiffusion& p) {
                       if (p.jump_intensity == 0.0) {
                           run_ou(p.ou, nullptr, 0.0, 1.0);
                           return;
                       }
                       Rng jumps(splitmix64(spec.seed));
                       run_ou(p.ou, &jumps, p.jump_intensity, p.jump_scale);
                   },
                   [&](const SpikeTrain& p) {
                       bool previous_spike = false;
                       for (std::size_t t = 0; t < N; ++t) {
                           x[t] = p.baseline;
                           const double u = rng.uniform();
                           if (t > 0 && t + 1 < N && !previous_spike && u < p.rate) {
                               const double scale = 1.0 - p.jitter + 2.0 * p.jitter * rng.uniform();
                               x[t] += p.height * scale;
                               previous_spike = true;
                           } else {
                               previous_spike = false;
                           }
                       }
                   },
                   [&](const SinusoidMix& p) {
                       for (std::size_t t = 0; t < N; ++t) {
                           double v = p.offset;
                           for (const auto& c : p.components) {
                               v += c.amplitude * std::sin(2.0 * std::numbers::pi *
                                                               static_cast<double>(t) / c.period +
                                                           c.phase);
                           }
                           if (p.noise_sigma > 0.0) v += p.noise_sigma * rng.normal();
                           x[t] = v;
                       }
                   },
               },
               spec.params);

    return PriceSeries(spec.market_id, spec.start_time, std::move(x), 1);
}

// ---------------------------------------------------------------------------
// key=value construction

namespace {

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw invalid("parameter '" + key + "' is not a number: '" + text + "'");
    }
    return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    return out;
}

class ParamReader {
public:
    explicit ParamReader(const std::map<std::string, std::string>& values) : values_(values) {}

    void read(const std::string& key, double& target) {
        if (auto it = values_.find(key); it != values_.end()) {
            target = to_double(key, it->second);
            used_.push_back(key);
        }
    }
    void read_list(const std::string& key, std::vector<double>& target) {
        if (auto it = values_.find(key); it != values_.end()) {
            target = to_list(key, it->second);
            used_.push_back(key);
        }
    }
    void finish(std::string_view kind) const {
        for (const auto& [k, v] : values_) {
            if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
                throw invalid("unknown parameter '" + k + "' for kind " + std::string(kind));
            }
        }
    }

private:
    const std::map<std::string, std::string>& values_;
    std::vector<std::string> used_;
};

void read_ou(ParamReader& r, OrnsteinUhlenbeck& p) {
    r.read("mu", p.mu);
    r.read("theta", p.theta);
    r.read("sigma", p.sigma);
    r.read("x0", p.x0);
}

}  // namespace

Params make_params(std::string_view kind, const std::map<std::string, std::string>& values) {
    ParamReader r(values);
    Params out;
    if (kind == "white-noise") {
        WhiteNoise p;
        r.read("mean", p.mean);
        r.read("sigma", p.sigma);
        out = p;
    } else if (kind == "random-walk") {
        RandomWalk p;
        r.read("start", p.start);
        r.read("sigma", p.sigma);
        out = p;
    } else if (kind == "fbm") {
        Fbm p;
        r.read("hurst", p.hurst);
        r.read("sigma", p.sigma);
        r.read("start", p.start);
        out = p;
    } else if (kind == "ou") {
        OrnsteinUhlenbeck p;
        read_ou(r, p);
        out = p;
    } else if (kind == "mrjd") {
        MeanRevertingJumpDiffusion p;
        read_ou(r, p.ou);
        r.read("jump_intensity", p.jump_intensity);
        r.read("jump_scale", p.jump_scale);
        out = p;
    } else if (kind == "spike-train") {
        SpikeTrain p;
        r.read("baseline", p.baseline);
        r.read("height", p.height);
        r.read("rate", p.rate);
        r.read("jitter", p.jitter);
        out = p;
    } else if (kind == "sinusoid-mix") {
        SinusoidMix p;
        std::vector<double> periods{24.0}, amplitudes, phases;
        r.read_list("periods", periods);
        r.read_list("amplitudes", amplitudes);
        r.read_list("phases", phases);
        r.read("offset", p.offset);
        r.read("noise", p.noise_sigma);
        if ((!amplitudes.empty() && amplitudes.size() != periods.size()) ||
            (!phases.empty() && phases.size() != periods.size())) {
            throw invalid("periods, amplitudes and phases must have equal length");
        }
        p.components.clear();
        for (std::size_t i = 0; i < periods.size(); ++i) {
            p.components.push_back({periods[i], amplitudes.empty() ? 1.0 : amplitudes[i],
                                    phases.empty() ? 0.0 : phases[i]});
        }
        out = p;
    } else {
        throw invalid("unknown generator kind '" + std::string(kind) + "'");
    }
    r.finish(kind);
    return out;
}

}  // namespace pricescale::synth
