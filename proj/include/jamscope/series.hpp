#pragma once

#include <Eigen/Dense>
#include <complex>

namespace jamscope {

using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using cplx = std::complex<double>;

// Uniformly sampled complex time series; the carrier type every stage of the
// pipeline (synthesis, mixing, channel, time-frequency analysis) speaks.
// Synthesized waveforms are real-valued (imaginary part zero); complex
// content appears after channel noise or the analytic transform.
struct ComplexSeries {
    ArrayXcd samples;
    double sample_rate_hz = 0.0;

    Eigen::Index size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

// Throws std::invalid_argument if the series is empty, has a non-positive
// sample rate, or contains non-finite samples.
void validate(const ComplexSeries& s);

// Mean of |x[n]|^2 over the frame.
double measure_power(const ComplexSeries& s);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

} // namespace jamscope
