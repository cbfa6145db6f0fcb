#include "jamscope/series.hpp"

#include <stdexcept>

namespace jamscope {

void validate(const ComplexSeries& s) {
    if (s.samples.size() == 0)
        throw std::invalid_argument("series: empty sample buffer");
    if (!(s.sample_rate_hz > 0.0))
        throw std::invalid_argument("series: sample rate must be positive");
    if (!s.samples.isFinite().all())
        throw std::invalid_argument("series: non-finite sample");
}

double measure_power(const ComplexSeries& s) {
    if (s.samples.size() == 0)
        throw std::invalid_argument("measure_power: empty series");
    return s.samples.abs2().mean();
}

} // namespace jamscope
