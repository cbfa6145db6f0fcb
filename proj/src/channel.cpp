#include "jamscope/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "jamscope/rng.hpp"

namespace jamscope::channel {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

ComplexSeries fade(const ComplexSeries& x, const Fading& fading, SeededRng& rng) {
    return std::visit(
        [&](const auto& f) -> ComplexSeries {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, GaussianChannel>) {
                return x;
            } else if constexpr (std::is_same_v<T, RayleighBlockChannel>) {
                if (!(f.sigma > 0.0))
                    throw std::invalid_argument("channel: Rayleigh sigma must be > 0");
                const double mag = rng.rayleigh(f.sigma);
                const double phase = rng.uniform(0.0, kTwoPi);
                const cplx gain = std::polar(mag, phase);
                return {x.samples * gain, x.sample_rate_hz};
            } else {
                if (f.tap_delays.size() != f.tap_gains.size() || f.tap_delays.empty())
                    throw std::invalid_argument("channel: tap delays/gains mismatch");
                ArrayXcd out = ArrayXcd::Zero(x.samples.size());
                for (std::size_t i = 0; i < f.tap_delays.size(); ++i) {
                    const int d = f.tap_delays[i];
                    if (d < 0 || d >= x.samples.size())
                        throw std::invalid_argument("channel: tap delay outside the frame");
                    out.tail(x.samples.size() - d) +=
                        f.tap_gains[i] * x.samples.head(x.samples.size() - d);
                }
                return {out, x.sample_rate_hz};
            }
        },
        fading);
}

} // namespace

ChannelOutput apply_channel_detailed(const ComplexSeries& x, const ChannelModel& model,
                                     std::uint64_t rng_seed) {
    validate(x);
    // fading and noise draw from independent sub-streams, so corpora that
    // differ only in the fading model see the same noise realization and
    // channel ablations compare sample by sample
    SeededRng fade_rng(fnv1a64_append(fnv1a64("chan-fade"), rng_seed));
    SeededRng noise_rng(fnv1a64_append(fnv1a64("chan-noise"), rng_seed));

    ChannelOutput out;
    out.faded = fade(x, model.fading, fade_rng);

    const double p_faded = measure_power(out.faded);
    const double noise_power = p_faded * db_to_linear(-model.snr_db);
    const double per_component_std = std::sqrt(noise_power / 2.0);

    ArrayXcd noise(x.samples.size());
    for (Eigen::Index n = 0; n < noise.size(); ++n)
        noise[n] =
            cplx(noise_rng.normal(0.0, per_component_std), noise_rng.normal(0.0, per_component_std));

    out.noise = {noise, x.sample_rate_hz};
    out.received = {out.faded.samples + noise, x.sample_rate_hz};
    return out;
}

ComplexSeries apply_channel(const ComplexSeries& x, const ChannelModel& model,
                            std::uint64_t rng_seed) {
    return apply_channel_detailed(x, model, rng_seed).received;
}

std::string to_tag(const Fading& fading) {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, GaussianChannel>)
                return "gaussian";
            else if constexpr (std::is_same_v<T, RayleighBlockChannel>)
                return "rayleigh";
            else
                return "freq-selective";
        },
        fading);
}

Fading fading_from_tag(const std::string& tag) {
    if (tag == "gaussian") return GaussianChannel{};
    if (tag == "rayleigh") return RayleighBlockChannel{};
    if (tag == "freq-selective") return FreqSelectiveChannel{};
    throw std::invalid_argument("unknown channel tag: " + tag);
}

} // namespace jamscope::channel
