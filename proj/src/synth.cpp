#include "jamscope/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jamscope::synth {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

void check_freq(double f_hz, double sample_rate_hz, const char* what) {
    if (!(f_hz > 0.0) || f_hz >= sample_rate_hz / 2.0)
        throw std::invalid_argument(std::string(what) +
                                    ": frequency must lie in (0, sample_rate/2)");
}

} // namespace

const char* to_tag(SignalClass c) {
    switch (c) {
        case SignalClass::Bpsk: return "bpsk";
        case SignalClass::CombSpectrum: return "comb-spectrum";
        case SignalClass::Fh: return "fh";
        case SignalClass::MultiTone: return "multi-tone";
        case SignalClass::NoiseFm: return "noise-fm";
        case SignalClass::Pulse: return "pulse";
        case SignalClass::SingleTone: return "single-tone";
        case SignalClass::Sweeping: return "sweeping";
        case SignalClass::Tracking: return "tracking";
        case SignalClass::NovelPowerLawFm: return "novel-power-law";
        case SignalClass::NovelParabolicFm: return "novel-parabolic";
    }
    throw std::logic_error("to_tag: unknown class");
}

SignalClass class_from_tag(const std::string& tag) {
    for (int i = 0; i <= static_cast<int>(SignalClass::NovelParabolicFm); ++i) {
        const auto c = static_cast<SignalClass>(i);
        if (tag == to_tag(c)) return c;
    }
    throw std::invalid_argument("unknown signal class tag: " + tag);
}

std::vector<SignalClass> closed_set_classes() {
    std::vector<SignalClass> out;
    for (int i = 0; i < kNumClosedSetClasses; ++i)
        out.push_back(static_cast<SignalClass>(i));
    return out;
}

bool is_novel(SignalClass c) {
    return c == SignalClass::NovelPowerLawFm || c == SignalClass::NovelParabolicFm;
}

bool is_abnormal(SignalClass c) {
    return c != SignalClass::Fh && c != SignalClass::Bpsk;
}

// ---- generators ----

ComplexSeries gen_fh(const FHSpec& spec) {
    if (spec.samples_per_hop < 1)
        throw std::invalid_argument("gen_fh: samples_per_hop must be >= 1");
    if (!(spec.sample_rate_hz > 0.0))
        throw std::invalid_argument("gen_fh: sample rate must be positive");
    for (double f : spec.hop_freqs_hz) check_freq(f, spec.sample_rate_hz, "gen_fh");

    const int n_total = 6 * spec.samples_per_hop;
    const double ts = 1.0 / spec.sample_rate_hz;
    ArrayXcd out(n_total);
    for (int n = 0; n < n_total; ++n) {
        const int hop = n / spec.samples_per_hop;
        out[n] = std::cos(kTwoPi * spec.hop_freqs_hz[hop] * ts * n + spec.hop_phases[hop]);
    }
    return {out, spec.sample_rate_hz};
}

ComplexSeries gen_bpsk(const BPSKSpec& spec, std::uint64_t rng_seed) {
    if (spec.n_samples < 1)
        throw std::invalid_argument("gen_bpsk: n_samples must be >= 1");
    if (!(spec.symbol_rate_baud > 0.0))
        throw std::invalid_argument("gen_bpsk: symbol rate must be positive");
    if (spec.bit_prob_zero < 0.0 || spec.bit_prob_zero > 1.0)
        throw std::invalid_argument("gen_bpsk: bit probability outside [0,1]");
    check_freq(spec.carrier_freq_hz, spec.sample_rate_hz, "gen_bpsk");

    const int sps = std::max(1, static_cast<int>(std::lround(spec.sample_rate_hz /
                                                             spec.symbol_rate_baud)));
    const int n_symbols = (spec.n_samples + sps - 1) / sps;

    SeededRng rng(rng_seed);
    // rectangular symbol shaping; '0' -> +1 (phase 0), '1' -> -1 (phase pi)
    Eigen::ArrayXd symbols(n_symbols);
    for (int i = 0; i < n_symbols; ++i)
        symbols[i] = (rng.uniform() < spec.bit_prob_zero) ? 1.0 : -1.0;

    const double ts = 1.0 / spec.sample_rate_hz;
    ArrayXcd out(spec.n_samples);
    for (int n = 0; n < spec.n_samples; ++n)
        out[n] = symbols[n / sps] * std::cos(kTwoPi * spec.carrier_freq_hz * ts * n);
    return {out, spec.sample_rate_hz};
}

namespace {

ComplexSeries gen_tracking(const TrackingSpec& spec, int n_samples, double sample_rate_hz) {
    const FHSpec& base = spec.base;
    if (n_samples != 6 * base.samples_per_hop)
        throw std::invalid_argument("gen_jammer: tracking frame must be 6 * samples_per_hop");
    if (spec.delay_samples < 0 || spec.delay_samples >= base.samples_per_hop)
        throw std::invalid_argument("gen_jammer: tracking delay outside [0, samples_per_hop)");
    for (double f : base.hop_freqs_hz) check_freq(f, sample_rate_hz, "gen_jammer tracking");
    for (double a : spec.amplitudes)
        if (!(a > 0.0)) throw std::invalid_argument("gen_jammer: tracking amplitude must be > 0");

    const double ts = 1.0 / sample_rate_hz;
    ArrayXcd out = ArrayXcd::Zero(n_samples);
    for (int hop = 0; hop < 6; ++hop) {
        const int start = hop * base.samples_per_hop + spec.delay_samples;
        const int stop = (hop + 1) * base.samples_per_hop;
        for (int n = start; n < stop; ++n)
            out[n] = spec.amplitudes[hop] *
                     std::cos(kTwoPi * base.hop_freqs_hz[hop] * ts * n + base.hop_phases[hop]);
    }
    return {out, sample_rate_hz};
}

ComplexSeries gen_sweep(const SweepSpec& spec, int n_samples, double sample_rate_hz) {
    if (!(spec.amplitude > 0.0))
        throw std::invalid_argument("gen_jammer: sweep amplitude must be > 0");
    const double ts = 1.0 / sample_rate_hz;
    const double duration = n_samples * ts;
    const double nyquist = sample_rate_hz / 2.0;
    const double f_end = spec.start_freq_hz + spec.chirp_rate_hz_per_s * duration;
    if (spec.start_freq_hz < 0.0 || spec.start_freq_hz >= nyquist || f_end < 0.0 ||
        f_end > nyquist)
        throw std::invalid_argument("gen_jammer: sweep leaves (0, sample_rate/2)");

    ArrayXcd out(n_samples);
    for (int n = 0; n < n_samples; ++n) {
        const double t = n * ts;
        out[n] = spec.amplitude * std::cos(kTwoPi * spec.start_freq_hz * t +
                                           kPi * spec.chirp_rate_hz_per_s * t * t + spec.phase);
    }
    return {out, sample_rate_hz};
}

ComplexSeries gen_noise_fm(const NoiseFmSpec& spec, int n_samples, double sample_rate_hz,
                           SeededRng& rng) {
    if (!(spec.amplitude > 0.0) || !(spec.noise_variance > 0.0) || !(spec.fm_coeff > 0.0))
        throw std::invalid_argument("gen_jammer: noise-FM parameters must be positive");
    check_freq(spec.center_freq_hz, sample_rate_hz, "gen_jammer noise-FM");

    const double ts = 1.0 / sample_rate_hz;
    // Wiener phase: integrated white noise, increments N(0, sigma^2 * Ts)
    const double inc_std = std::sqrt(spec.noise_variance * ts);
    ArrayXcd out(n_samples);
    double wiener = 0.0;
    for (int n = 0; n < n_samples; ++n) {
        out[n] = spec.amplitude *
                 std::cos(kTwoPi * spec.center_freq_hz * ts * n + kTwoPi * spec.fm_coeff * wiener);
        wiener += rng.normal(0.0, inc_std);
    }
    return {out, sample_rate_hz};
}

ComplexSeries gen_pulse(const PulseSpec& spec, int n_samples, double sample_rate_hz,
                        SeededRng& rng) {
    if (!(spec.amplitude > 0.0))
        throw std::invalid_argument("gen_jammer: pulse amplitude must be > 0");
    if (spec.pulse_width < 1 || spec.period < spec.pulse_width || spec.n_pulses < 1)
        throw std::invalid_argument("gen_jammer: pulse width/period/count inconsistent");
    if (spec.n_pulses * spec.period > n_samples)
        throw std::invalid_argument("gen_jammer: pulse train does not fit the frame");

    ArrayXcd out = ArrayXcd::Zero(n_samples);
    for (int i = 0; i < spec.n_pulses; ++i) {
        // time position random within each period
        const int jitter = static_cast<int>(rng.integer(spec.period - spec.pulse_width + 1));
        const int onset = i * spec.period + jitter;
        for (int n = onset; n < onset + spec.pulse_width && n < n_samples; ++n)
            out[n] = spec.amplitude;
    }
    return {out, sample_rate_hz};
}

ComplexSeries gen_single_tone(const SingleToneSpec& spec, int n_samples, double sample_rate_hz) {
    if (!(spec.power > 0.0))
        throw std::invalid_argument("gen_jammer: single-tone power must be > 0");
    check_freq(spec.freq_hz, sample_rate_hz, "gen_jammer single-tone");
    const double amp = std::sqrt(2.0 * spec.power);
    const double ts = 1.0 / sample_rate_hz;
    ArrayXcd out(n_samples);
    for (int n = 0; n < n_samples; ++n)
        out[n] = amp * std::cos(kTwoPi * spec.freq_hz * ts * n + spec.phase);
    return {out, sample_rate_hz};
}

ComplexSeries gen_multi_tone(const MultiToneSpec& spec, int n_samples, double sample_rate_hz) {
    if (!(spec.total_power > 0.0))
        throw std::invalid_argument("gen_jammer: multi-tone power must be > 0");
    const std::size_t n_tones = spec.tone_freqs_hz.size();
    if (n_tones == 0 || spec.phases.size() != n_tones)
        throw std::invalid_argument("gen_jammer: multi-tone needs matching freqs and phases");
    for (double f : spec.tone_freqs_hz) check_freq(f, sample_rate_hz, "gen_jammer multi-tone");

    const double amp = std::sqrt(2.0 * spec.total_power / static_cast<double>(n_tones));
    const double ts = 1.0 / sample_rate_hz;
    ArrayXcd out = ArrayXcd::Zero(n_samples);
    for (std::size_t i = 0; i < n_tones; ++i)
        for (int n = 0; n < n_samples; ++n)
            out[n] += amp * std::cos(kTwoPi * spec.tone_freqs_hz[i] * ts * n + spec.phases[i]);
    return {out, sample_rate_hz};
}

ComplexSeries gen_comb(const CombSpec& spec, int n_samples, double sample_rate_hz) {
    const std::size_t n_teeth = spec.tooth_centers_hz.size();
    if (n_teeth == 0 || spec.tooth_powers.size() != n_teeth)
        throw std::invalid_argument("gen_jammer: comb needs matching centers and powers");
    if (!(spec.half_bandwidth_hz > 0.0) || spec.fm_index < 0.0 || !(spec.fm_rate > 0.0))
        throw std::invalid_argument("gen_jammer: comb bandwidth/modulation parameters invalid");
    const double nyquist = sample_rate_hz / 2.0;
    for (std::size_t i = 0; i < n_teeth; ++i) {
        if (!(spec.tooth_powers[i] > 0.0))
            throw std::invalid_argument("gen_jammer: comb tooth power must be > 0");
        if (spec.tooth_centers_hz[i] - spec.half_bandwidth_hz <= 0.0 ||
            spec.tooth_centers_hz[i] + spec.half_bandwidth_hz >= nyquist)
            throw std::invalid_argument("gen_jammer: comb tooth band exceeds (0, sample_rate/2)");
    }

    // Each tooth is sinusoidally frequency-modulated with instantaneous
    // deviation alpha * delta_f * sin(beta*pi*t), so the tooth stays inside
    // its declared band [f_k - delta_f, f_k + delta_f] for alpha <= 1.
    const double ts = 1.0 / sample_rate_hz;
    const double mod_gain = (spec.fm_rate > 0.0)
                                ? 2.0 * spec.fm_index * spec.half_bandwidth_hz / spec.fm_rate
                                : 0.0;
    ArrayXcd out = ArrayXcd::Zero(n_samples);
    for (std::size_t i = 0; i < n_teeth; ++i) {
        const double amp = std::sqrt(2.0 * spec.tooth_powers[i]);
        for (int n = 0; n < n_samples; ++n) {
            const double t = n * ts;
            const double phase = kTwoPi * spec.tooth_centers_hz[i] * t +
                                 mod_gain * (1.0 - std::cos(spec.fm_rate * kPi * t));
            out[n] += amp * std::cos(phase);
        }
    }
    return {out, sample_rate_hz};
}

} // namespace

ComplexSeries gen_jammer(const JammerSpec& spec, int n_samples, double sample_rate_hz,
                         std::uint64_t rng_seed) {
    if (n_samples < 1) throw std::invalid_argument("gen_jammer: n_samples must be >= 1");
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("gen_jammer: sample rate must be positive");

    SeededRng rng(rng_seed);
    return std::visit(
        [&](const auto& s) -> ComplexSeries {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TrackingSpec>)
                return gen_tracking(s, n_samples, sample_rate_hz);
            else if constexpr (std::is_same_v<T, SweepSpec>)
                return gen_sweep(s, n_samples, sample_rate_hz);
            else if constexpr (std::is_same_v<T, NoiseFmSpec>)
                return gen_noise_fm(s, n_samples, sample_rate_hz, rng);
            else if constexpr (std::is_same_v<T, PulseSpec>)
                return gen_pulse(s, n_samples, sample_rate_hz, rng);
            else if constexpr (std::is_same_v<T, SingleToneSpec>)
                return gen_single_tone(s, n_samples, sample_rate_hz);
            else if constexpr (std::is_same_v<T, MultiToneSpec>)
                return gen_multi_tone(s, n_samples, sample_rate_hz);
            else
                return gen_comb(s, n_samples, sample_rate_hz);
        },
        spec);
}

ComplexSeries gen_novel(const NovelFmSpec& spec, std::uint64_t /*rng_seed*/) {
    if (spec.n_samples < 1) throw std::invalid_argument("gen_novel: n_samples must be >= 1");
    if (!(spec.sample_rate_hz > 0.0))
        throw std::invalid_argument("gen_novel: sample rate must be positive");
    if (!(spec.amplitude > 0.0))
        throw std::invalid_argument("gen_novel: amplitude must be > 0");

    const double nyquist = spec.sample_rate_hz / 2.0;
    const double ts = 1.0 / spec.sample_rate_hz;
    const double duration = spec.n_samples * ts;

    // instantaneous frequency law as a function of t
    auto inst_freq = [&](double t) -> double {
        if (const auto* p = std::get_if<PowerLawFm>(&spec.law)) {
            if (p->exponent < 0.15 || p->exponent > 0.5)
                throw std::invalid_argument("gen_novel: power-law exponent outside [0.15, 0.5]");
            return 0.9 * nyquist * std::pow(t / duration, p->exponent);
        }
        const auto& q = std::get<ParabolicFm>(spec.law);
        for (double c : q.control_ordinates)
            if (c < 0.1 || c > 0.45)
                throw std::invalid_argument("gen_novel: parabola ordinate outside [0.1, 0.45]");
        // quadratic through (0, c0), (1/2, c1), (1, c2) in normalized time
        const double tau = t / duration;
        const double c0 = q.control_ordinates[0];
        const double c1 = q.control_ordinates[1];
        const double c2 = q.control_ordinates[2];
        const double frac = c0 * 2.0 * (tau - 0.5) * (tau - 1.0) - c1 * 4.0 * tau * (tau - 1.0) +
                            c2 * 2.0 * tau * (tau - 0.5);
        return nyquist * frac;
    };

    // phase is the cumulative sum of the instantaneous frequency
    ArrayXcd out(spec.n_samples);
    double phase = 0.0;
    for (int n = 0; n < spec.n_samples; ++n) {
        out[n] = spec.amplitude * std::cos(phase);
        phase += kTwoPi * inst_freq((n + 1) * ts) * ts;
    }
    return {out, spec.sample_rate_hz};
}

ComplexSeries mix_at_jsr(const ComplexSeries& signal, const ComplexSeries& jammer,
                         double jsr_db) {
    validate(signal);
    validate(jammer);
    if (signal.samples.size() != jammer.samples.size())
        throw std::invalid_argument("mix_at_jsr: length mismatch");
    if (signal.sample_rate_hz != jammer.sample_rate_hz)
        throw std::invalid_argument("mix_at_jsr: sample-rate mismatch");

    const double p_signal = measure_power(signal);
    const double p_jammer = measure_power(jammer);
    if (p_signal <= 0.0 || p_jammer <= 0.0)
        throw std::invalid_argument("mix_at_jsr: zero-power input, ratio undefined");

    const double scale = std::sqrt(p_signal * db_to_linear(jsr_db) / p_jammer);
    return {signal.samples + scale * jammer.samples, signal.sample_rate_hz};
}

// ---- randomized draws ----
// The draw order inside each function is fixed; it is part of the
// reproducibility contract (manifests store only the seed).

namespace {

double draw_band_freq(SeededRng& rng, double sample_rate_hz) {
    return rng.uniform(kBandLowFrac * sample_rate_hz, kBandHighFrac * sample_rate_hz);
}

} // namespace

FHSpec draw_fh_spec(SeededRng& rng, double sample_rate_hz, int samples_per_hop) {
    FHSpec spec;
    spec.sample_rate_hz = sample_rate_hz;
    spec.samples_per_hop = samples_per_hop;
    for (auto& f : spec.hop_freqs_hz) f = draw_band_freq(rng, sample_rate_hz);
    for (auto& th : spec.hop_phases) th = rng.uniform(0.0, kTwoPi);
    return spec;
}

BPSKSpec draw_bpsk_spec(SeededRng& rng, double sample_rate_hz, int n_samples) {
    BPSKSpec spec;
    spec.sample_rate_hz = sample_rate_hz;
    spec.n_samples = n_samples;
    // 24 samples per symbol puts the main lobe between a tone ridge and a
    // noise-FM band in width; the carrier band keeps the published lower
    // bound, clamped to the realizable slice below Nyquist
    spec.symbol_rate_baud = sample_rate_hz / 24.0;
    spec.carrier_freq_hz = rng.uniform(0.25, kBandHighFrac) * sample_rate_hz;
    spec.bit_prob_zero = 0.5;
    return spec;
}

TrackingSpec draw_tracking_spec(SeededRng& rng, FHSpec base) {
    TrackingSpec s;
    s.base = std::move(base);
    for (auto& a : s.amplitudes) a = rng.uniform(0.5, 1.5);
    // the tracker needs a detect-and-tune interval, so it misses a sizable
    // leading slice of every dwell
    s.delay_samples = static_cast<int>(std::lround(0.20 * s.base.samples_per_hop)) +
                      static_cast<int>(rng.integer(
                          static_cast<std::uint64_t>(0.60 * s.base.samples_per_hop) + 1));
    return s;
}

JammerSpec draw_jammer_spec(SignalClass jam_class, SeededRng& rng, double sample_rate_hz,
                            int n_samples) {
    switch (jam_class) {
        case SignalClass::Tracking:
            return draw_tracking_spec(rng, draw_fh_spec(rng, sample_rate_hz, n_samples / 6));
        case SignalClass::Sweeping: {
            SweepSpec s;
            const double duration = n_samples / sample_rate_hz;
            s.start_freq_hz = rng.uniform(kBandLowFrac, 0.25) * sample_rate_hz;
            const double f_end =
                rng.uniform(s.start_freq_hz / sample_rate_hz + 0.1, kBandHighFrac) *
                sample_rate_hz;
            s.chirp_rate_hz_per_s = (f_end - s.start_freq_hz) / duration;
            s.phase = rng.uniform(0.0, kTwoPi);
            s.amplitude = 1.0;
            return s;
        }
        case SignalClass::NoiseFm: {
            NoiseFmSpec s;
            // centered below the victim band: a barrage that sits on top of the
            // host lobe just reads as a fatter lobe
            s.center_freq_hz = rng.uniform(0.08, 0.20) * sample_rate_hz;
            s.fm_coeff = rng.uniform(50.0, 90.0);
            s.noise_variance = 1.0;
            s.amplitude = 1.0;
            return s;
        }
        case SignalClass::Pulse:
            return PulseSpec{};
        case SignalClass::SingleTone: {
            SingleToneSpec s;
            s.power = 1.0;
            // parked below the victim band for the same reason as noise FM
            s.freq_hz = rng.uniform(kBandLowFrac, 0.22) * sample_rate_hz;
            s.phase = rng.uniform(0.0, kTwoPi);
            return s;
        }
        case SignalClass::MultiTone: {
            MultiToneSpec s;
            s.total_power = 1.0;
            s.tone_freqs_hz.resize(7);
            s.phases.resize(7);
            for (auto& f : s.tone_freqs_hz) f = draw_band_freq(rng, sample_rate_hz);
            for (auto& ph : s.phases) ph = rng.uniform(0.0, kTwoPi);
            return s;
        }
        case SignalClass::CombSpectrum: {
            CombSpec s;
            const int n_teeth = 3 + static_cast<int>(rng.integer(3));
            const double base = rng.uniform(0.10, 0.18) * sample_rate_hz;
            const double spacing = rng.uniform(0.025, 0.05) * sample_rate_hz;
            for (int i = 0; i < n_teeth; ++i) {
                s.tooth_centers_hz.push_back(base + i * spacing);
                s.tooth_powers.push_back(1.0);
            }
            s.half_bandwidth_hz = rng.uniform(0.005, 0.0125) * sample_rate_hz;
            s.fm_index = rng.uniform(0.0, 0.5);
            s.fm_rate = rng.uniform(180.0, 220.0);
            return s;
        }
        default:
            throw std::invalid_argument("draw_jammer_spec: not a jamming class");
    }
}

NovelFmSpec draw_novel_spec(SignalClass novel_class, SeededRng& rng, double sample_rate_hz,
                            int n_samples) {
    NovelFmSpec spec;
    spec.sample_rate_hz = sample_rate_hz;
    spec.n_samples = n_samples;
    spec.amplitude = 1.0;
    if (novel_class == SignalClass::NovelPowerLawFm) {
        spec.law = PowerLawFm{rng.uniform(0.15, 0.5)};
    } else if (novel_class == SignalClass::NovelParabolicFm) {
        // a near-flat parabola is just a tone; push the midpoint well off the
        // endpoint chord so the drawn law is always a clear arch
        ParabolicFm p;
        p.control_ordinates[0] = rng.uniform(0.1, 0.45);
        p.control_ordinates[2] = rng.uniform(0.1, 0.45);
        const double mid = 0.5 * (p.control_ordinates[0] + p.control_ordinates[2]);
        const double up = 0.45 - mid, down = mid - 0.1;
        const double room = std::max(up, down);
        const double bend = std::max(0.15, rng.uniform(0.6, 1.0) * room);
        p.control_ordinates[1] = up >= down ? mid + bend : mid - bend;
        spec.law = p;
    } else {
        throw std::invalid_argument("draw_novel_spec: not a novel class");
    }
    return spec;
}

// ---- digests ----

std::uint64_t digest(const FHSpec& s) {
    std::uint64_t d = fnv1a64("fh");
    for (double f : s.hop_freqs_hz) d = fnv1a64_append(d, f);
    for (double th : s.hop_phases) d = fnv1a64_append(d, th);
    d = fnv1a64_append(d, static_cast<std::uint64_t>(s.samples_per_hop));
    return fnv1a64_append(d, s.sample_rate_hz);
}

std::uint64_t digest(const BPSKSpec& s) {
    std::uint64_t d = fnv1a64("bpsk");
    d = fnv1a64_append(d, s.symbol_rate_baud);
    d = fnv1a64_append(d, s.carrier_freq_hz);
    d = fnv1a64_append(d, s.bit_prob_zero);
    d = fnv1a64_append(d, static_cast<std::uint64_t>(s.n_samples));
    return fnv1a64_append(d, s.sample_rate_hz);
}

std::uint64_t digest(const JammerSpec& spec) {
    std::uint64_t d = fnv1a64("jammer");
    d = fnv1a64_append(d, static_cast<std::uint64_t>(spec.index()));
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TrackingSpec>) {
                for (double a : s.amplitudes) d = fnv1a64_append(d, a);
                d = fnv1a64_append(d, static_cast<std::uint64_t>(s.delay_samples));
                d = fnv1a64_append(d, digest(s.base));
            } else if constexpr (std::is_same_v<T, SweepSpec>) {
                d = fnv1a64_append(d, s.amplitude);
                d = fnv1a64_append(d, s.start_freq_hz);
                d = fnv1a64_append(d, s.chirp_rate_hz_per_s);
                d = fnv1a64_append(d, s.phase);
            } else if constexpr (std::is_same_v<T, NoiseFmSpec>) {
                d = fnv1a64_append(d, s.amplitude);
                d = fnv1a64_append(d, s.center_freq_hz);
                d = fnv1a64_append(d, s.fm_coeff);
                d = fnv1a64_append(d, s.noise_variance);
            } else if constexpr (std::is_same_v<T, PulseSpec>) {
                d = fnv1a64_append(d, s.amplitude);
                d = fnv1a64_append(d, static_cast<std::uint64_t>(s.pulse_width));
                d = fnv1a64_append(d, static_cast<std::uint64_t>(s.period));
                d = fnv1a64_append(d, static_cast<std::uint64_t>(s.n_pulses));
            } else if constexpr (std::is_same_v<T, SingleToneSpec>) {
                d = fnv1a64_append(d, s.power);
                d = fnv1a64_append(d, s.freq_hz);
                d = fnv1a64_append(d, s.phase);
            } else if constexpr (std::is_same_v<T, MultiToneSpec>) {
                d = fnv1a64_append(d, s.total_power);
                for (double f : s.tone_freqs_hz) d = fnv1a64_append(d, f);
                for (double ph : s.phases) d = fnv1a64_append(d, ph);
            } else {
                for (double p : s.tooth_powers) d = fnv1a64_append(d, p);
                for (double f : s.tooth_centers_hz) d = fnv1a64_append(d, f);
                d = fnv1a64_append(d, s.half_bandwidth_hz);
                d = fnv1a64_append(d, s.fm_index);
                d = fnv1a64_append(d, s.fm_rate);
            }
        },
        spec);
    return d;
}

std::uint64_t digest(const NovelFmSpec& spec) {
    std::uint64_t d = fnv1a64("novel");
    d = fnv1a64_append(d, static_cast<std::uint64_t>(spec.law.index()));
    if (const auto* p = std::get_if<PowerLawFm>(&spec.law)) {
        d = fnv1a64_append(d, p->exponent);
    } else {
        for (double c : std::get<ParabolicFm>(spec.law).control_ordinates)
            d = fnv1a64_append(d, c);
    }
    d = fnv1a64_append(d, spec.amplitude);
    d = fnv1a64_append(d, spec.sample_rate_hz);
    return fnv1a64_append(d, static_cast<std::uint64_t>(spec.n_samples));
}

} // namespace jamscope::synth
