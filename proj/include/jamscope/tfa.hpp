#pragma once

#include <Eigen/Dense>
#include <filesystem>

#include "jamscope/image.hpp"
#include "jamscope/series.hpp"

namespace jamscope::tfa {

// Time x frequency energy surface on a linear scale. Rows are time instants
// (one per input sample), columns are frequency bins covering [0, fs/2).
//
// Normalization: values are scaled by 2*Ts so that for the unsmoothed
// distribution the frequency sum of any time slice recovers the sample
// energy: sum_k values(n,k) * bin_width = |x(n)|^2.
struct TFGrid {
    Eigen::MatrixXd values;      // T x F
    Eigen::VectorXd time_axis_s; // T
    Eigen::VectorXd freq_axis_hz; // F

    Eigen::Index n_time() const { return values.rows(); }
    Eigen::Index n_freq() const { return values.cols(); }
    double bin_width_hz() const { return freq_axis_hz.size() > 1 ? freq_axis_hz[1] - freq_axis_hz[0] : 0.0; }
};

// Smoothing windows for the smoothed pseudo distribution. Both tapers are
// real, symmetric, odd-length, peak-normalized to 1. The time window is a
// length-1 Dirac when no time smoothing is wanted; the lag window is
// all-ones for no lag smoothing. When applied, the time window is
// renormalized to unit sum (it acts as a weighted average along time) while
// the lag window is applied as stored (peak 1, so the zero-lag term and the
// slice-energy identity are untouched).
struct WindowSpec {
    Eigen::VectorXd time_window; // g
    Eigen::VectorXd lag_window;  // h

    static Eigen::VectorXd dirac() { return Eigen::VectorXd::Ones(1); }
    static Eigen::VectorXd all_ones(int len) { return Eigen::VectorXd::Ones(len); }
    static Eigen::VectorXd hamming(int len);

    // Hamming 33 / Hamming 129: time smoothing shorter than one FH hop
    // (100 samples) so hop edges survive, lag smoothing wide enough to
    // suppress two-component cross-terms.
    static WindowSpec defaults() { return {hamming(33), hamming(129)}; }
};

// Discrete analytic signal: DFT, zero the negative-frequency bins, double
// the positive ones (DC and Nyquist kept once), inverse DFT. For real input
// the real part of the result equals the input exactly and the imaginary
// part is the discrete Hilbert transform. Complex input (e.g. after channels
// that add complex noise) runs through the same filter, so its positive
// band comes out doubled; the scale washes out in image normalization.
ComplexSeries analytic_signal(const ComplexSeries& x);

// Wigner-Ville: per time index n form the instantaneous autocorrelation
// x(n+m) conj(x(n-m)) over lags |m| <= (n_freq_bins-1)/2 (indices outside
// the frame read as zero) and DFT over the lag. Input should be analytic to
// avoid aliasing between positive and negative bands.
TFGrid wvd(const ComplexSeries& x, int n_freq_bins);

// Pseudo WVD: lag window only (frequency-direction smoothing).
TFGrid pwvd(const ComplexSeries& x, const Eigen::VectorXd& lag_window, int n_freq_bins);

// Smoothed pseudo WVD: lag window h plus time-smoothing window g applied to
// the instantaneous autocorrelation before the lag DFT. With g = Dirac and
// h = all-ones of the WVD lag span this reduces to wvd() exactly.
TFGrid spwvd(const ComplexSeries& x, const WindowSpec& w, int n_freq_bins);

// Magnitude -> dB with a floor 60 dB below the peak -> min-max normalize to
// [0,1] -> area-average resample -> 8-bit quantization. Image rows map to
// frequency (row 0 = lowest band), columns to time. An all-constant grid
// (degenerate normalization) produces an all-zero image.
GrayImage to_image(const TFGrid& grid, int height, int width);

// Raw grid dump: 8-byte header (uint32 T, uint32 F, little-endian) followed
// by T*F float32 values in time-major order.
void write_grid(const TFGrid& grid, const std::filesystem::path& path);
TFGrid read_grid(const std::filesystem::path& path);

// argmax frequency bin of each time slice
Eigen::VectorXi ridge(const TFGrid& grid);

} // namespace jamscope::tfa
