#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "jamscope/rng.hpp"
#include "jamscope/series.hpp"

namespace jamscope::synth {

// Closed-set classes in fixed alphabetical tag order (this order is the
// classifier's class index space). The two novel FM classes exist only as
// open-set test inputs and are never training labels.
enum class SignalClass : int {
    Bpsk = 0,
    CombSpectrum,
    Fh,
    MultiTone,
    NoiseFm,
    Pulse,
    SingleTone,
    Sweeping,
    Tracking,
    NovelPowerLawFm,
    NovelParabolicFm,
};

inline constexpr int kNumClosedSetClasses = 9;

const char* to_tag(SignalClass c);
SignalClass class_from_tag(const std::string& tag);
std::vector<SignalClass> closed_set_classes();
bool is_novel(SignalClass c);
// true for the seven jammed mixtures and the two novel classes (anything
// synthesized as normal signal + interferer at a JSR)
bool is_abnormal(SignalClass c);

// ---- per-class synthesis parameter sets ----

struct FHSpec {
    std::array<double, 6> hop_freqs_hz;  // f_1..f_6
    std::array<double, 6> hop_phases;    // theta_1..theta_6, radians
    int samples_per_hop = 100;           // N; frame length is 6*N
    double sample_rate_hz = 2.0e6;
};

struct BPSKSpec {
    double symbol_rate_baud = 0.0;
    double carrier_freq_hz = 0.0;
    double bit_prob_zero = 0.5; // P(symbol '0'); '0' -> phase 0, '1' -> phase pi
    int n_samples = 600;
    double sample_rate_hz = 2.0e6;
};

// jamming replays the FH hop plan, each hop onset late by the tracking delay
struct TrackingSpec {
    std::array<double, 6> amplitudes; // A_1..A_6
    int delay_samples = 0;            // m, 0 <= m < samples_per_hop
    FHSpec base;
};

struct SweepSpec {
    double amplitude = 1.0;
    double start_freq_hz = 0.0;     // f_0
    double chirp_rate_hz_per_s = 0; // k; instantaneous frequency f_0 + k*t
    double phase = 0.0;
};

struct NoiseFmSpec {
    double amplitude = 1.0;     // U_j
    double center_freq_hz = 0;  // f_j
    double fm_coeff = 0.0;      // K_FM
    double noise_variance = 1.0;
};

struct PulseSpec {
    double amplitude = 1.0;
    int pulse_width = 20;   // samples
    int period = 120;       // T_r, samples
    int n_pulses = 4;       // k
};

struct SingleToneSpec {
    double power = 1.0; // P_j; amplitude sqrt(2*P_j)
    double freq_hz = 0.0;
    double phase = 0.0;
};

struct MultiToneSpec {
    double total_power = 1.0;            // P_j split equally across tones
    std::vector<double> tone_freqs_hz;   // f_{j,i}
    std::vector<double> phases;          // per-tone initial phase
};

struct CombSpec {
    std::vector<double> tooth_powers;     // P_k
    std::vector<double> tooth_centers_hz; // f_k
    double half_bandwidth_hz = 0.0;       // delta_f; tooth band [f_k - df, f_k + df]
    double fm_index = 0.0;                // alpha in [0, 0.5]
    double fm_rate = 200.0;               // beta, rad/s
};

using JammerSpec = std::variant<TrackingSpec, SweepSpec, NoiseFmSpec, PulseSpec,
                                SingleToneSpec, MultiToneSpec, CombSpec>;

struct PowerLawFm {
    double exponent = 0.3; // in [0.15, 0.5]
};

struct ParabolicFm {
    std::array<double, 3> control_ordinates{}; // fractions of Nyquist in [0.1, 0.45]
};

struct NovelFmSpec {
    std::variant<PowerLawFm, ParabolicFm> law;
    double amplitude = 1.0;
    double sample_rate_hz = 2.0e6;
    int n_samples = 600;
};

// ---- generators ----
// All outputs are real-valued waveforms stored in ComplexSeries (imaginary
// part zero); the analytic signal is formed later in tfa. Each generator is
// a pure function of (spec, seed).

ComplexSeries gen_fh(const FHSpec& spec);
ComplexSeries gen_bpsk(const BPSKSpec& spec, std::uint64_t rng_seed);
ComplexSeries gen_jammer(const JammerSpec& spec, int n_samples, double sample_rate_hz,
                         std::uint64_t rng_seed);
ComplexSeries gen_novel(const NovelFmSpec& spec, std::uint64_t rng_seed);

// Rescales the jammer so the measured power ratio hits jsr_db exactly, then
// returns signal + jammer.
ComplexSeries mix_at_jsr(const ComplexSeries& signal, const ComplexSeries& jammer,
                         double jsr_db);

// ---- randomized parameter draws ----
// Frequencies are drawn uniformly from (0.05, 0.45) * sample_rate: the
// published per-class bands extend past Nyquist for sampled real signals, so
// every class draws from this clamped band instead (recorded in dataset
// manifests via the spec digest).

inline constexpr double kBandLowFrac = 0.05;
inline constexpr double kBandHighFrac = 0.45;

FHSpec draw_fh_spec(SeededRng& rng, double sample_rate_hz, int samples_per_hop = 100);
BPSKSpec draw_bpsk_spec(SeededRng& rng, double sample_rate_hz, int n_samples);
// Tracking draws against a given hop pattern so the jammer can share the
// victim's base when the two are mixed.
TrackingSpec draw_tracking_spec(SeededRng& rng, FHSpec base);
JammerSpec draw_jammer_spec(SignalClass jam_class, SeededRng& rng, double sample_rate_hz,
                            int n_samples);
NovelFmSpec draw_novel_spec(SignalClass novel_class, SeededRng& rng, double sample_rate_hz,
                            int n_samples);

// stable hash of every numeric field of a spec, for manifest digests
std::uint64_t digest(const FHSpec& s);
std::uint64_t digest(const BPSKSpec& s);
std::uint64_t digest(const JammerSpec& s);
std::uint64_t digest(const NovelFmSpec& s);

} // namespace jamscope::synth
