#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "jamscope/series.hpp"

namespace jamscope::channel {

using jamscope::ComplexSeries;

struct GaussianChannel {};

struct RayleighBlockChannel {
    double sigma = 0.5; // Rayleigh scale of the block gain magnitude
};

struct FreqSelectiveChannel {
    std::vector<int> tap_delays{0, 50};
    std::vector<double> tap_gains{0.7071067811865476, 0.7071067811865476};
};

using Fading = std::variant<GaussianChannel, RayleighBlockChannel, FreqSelectiveChannel>;

struct ChannelModel {
    Fading fading = GaussianChannel{};
    double snr_db = 10.0;
};

struct ChannelOutput {
    ComplexSeries faded;    // after fading/filtering, before noise
    ComplexSeries noise;    // the additive noise realization
    ComplexSeries received; // faded + noise
};

// Noise power is set against the post-fading signal power, so snr_db is the
// SNR actually seen by the receiver for every fading type.
ChannelOutput apply_channel_detailed(const ComplexSeries& x, const ChannelModel& model,
                                     std::uint64_t rng_seed);
ComplexSeries apply_channel(const ComplexSeries& x, const ChannelModel& model,
                            std::uint64_t rng_seed);

std::string to_tag(const Fading& fading);
Fading fading_from_tag(const std::string& tag);

} // namespace jamscope::channel
