#include "jamscope/tfa.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace jamscope::tfa {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_window(const Eigen::VectorXd& w, const char* name) {
    const Eigen::Index n = w.size();
    if (n < 1 || n % 2 == 0)
        throw std::invalid_argument(std::string(name) + ": window length must be odd and positive");
    for (Eigen::Index i = 0; i < n / 2; ++i)
        if (std::abs(w[i] - w[n - 1 - i]) > 1e-12)
            throw std::invalid_argument(std::string(name) + ": window must be symmetric");
    if (std::abs(w.maxCoeff() - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(name) + ": window must be peak-normalized to 1");
}

} // namespace

Eigen::VectorXd WindowSpec::hamming(int len) {
    if (len < 1) throw std::invalid_argument("hamming: length must be >= 1");
    Eigen::VectorXd w(len);
    if (len == 1) {
        w[0] = 1.0;
        return w;
    }
    for (int i = 0; i < len; ++i)
        w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (len - 1));
    // peak-normalize (center of an odd Hamming is exactly 1 already, but keep
    // the invariant explicit)
    w /= w.maxCoeff();
    return w;
}

ComplexSeries analytic_signal(const ComplexSeries& x) {
    validate(x);
    const Eigen::Index n = x.samples.size();
    const bool was_real = (x.samples.imag() == 0.0).all();

    Eigen::FFT<double> fft;
    Eigen::VectorXcd in = x.samples.matrix();
    Eigen::VectorXcd spec;
    fft.fwd(spec, in);

    // keep DC (and Nyquist for even n) once, double strictly-positive bins,
    // zero the negative half
    const Eigen::Index half = n / 2;
    for (Eigen::Index k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    for (Eigen::Index k = half + 1; k < n; ++k) spec[k] = cplx(0.0, 0.0);

    Eigen::VectorXcd out;
    fft.inv(out, spec);

    ComplexSeries y{out.array(), x.sample_rate_hz};
    if (was_real) {
        // by definition the real part is the input; drop FFT round-off
        y.samples.real() = x.samples.real();
    }
    return y;
}

TFGrid spwvd(const ComplexSeries& x, const WindowSpec& w, int n_freq_bins) {
    validate(x);
    const Eigen::Index len = x.samples.size();
    const int nf = n_freq_bins;
    if (nf < 2) throw std::invalid_argument("spwvd: need at least 2 frequency bins");
    check_window(w.time_window, "spwvd time window");
    check_window(w.lag_window, "spwvd lag window");
    if (w.time_window.size() > 2 * len || w.lag_window.size() > 2 * len)
        throw std::invalid_argument("spwvd: window longer than twice the signal");

    const int half_lag = static_cast<int>(w.lag_window.size() / 2);
    if (2 * half_lag + 1 > nf)
        throw std::invalid_argument("spwvd: lag window exceeds frequency bin count");
    const int half_time = static_cast<int>(w.time_window.size() / 2);

    // time window acts as a weighted average, lag window as a taper
    const Eigen::VectorXd gw = w.time_window / w.time_window.sum();
    const Eigen::VectorXd& h = w.lag_window;

    const double ts = 1.0 / x.sample_rate_hz;
    const double scale = 2.0 * ts; // dtau = 2*Ts per unit lag

    TFGrid grid;
    grid.values.resize(len, nf);
    grid.time_axis_s = Eigen::VectorXd::LinSpaced(len, 0.0, ts * static_cast<double>(len - 1));
    grid.freq_axis_hz.resize(nf);
    for (int k = 0; k < nf; ++k)
        grid.freq_axis_hz[k] = static_cast<double>(k) * x.sample_rate_hz / (2.0 * nf);

    Eigen::FFT<double> fft;
    Eigen::VectorXcd buf(nf), spec(nf);
    const cplx* xs = x.samples.data();

    for (Eigen::Index n = 0; n < len; ++n) {
        buf.setZero();
        for (int m = 0; m <= half_lag; ++m) {
            // valid time-smoothing offsets keep both n+p+m and n+p-m inside
            // the frame; everything else reads as zero
            const int plo = std::max<long>(-half_time, m - static_cast<long>(n));
            const int phi = std::min<long>(half_time, len - 1 - n - m);
            if (plo > phi) continue;
            cplx acc(0.0, 0.0);
            for (int p = plo; p <= phi; ++p)
                acc += gw[p + half_time] * xs[n + p + m] * std::conj(xs[n + p - m]);
            const cplx tapered = h[half_lag + m] * acc;
            if (m == 0) {
                buf[0] = tapered;
            } else {
                buf[m] += tapered;
                buf[nf - m] += std::conj(tapered);
            }
        }
        fft.fwd(spec, buf);
        grid.values.row(n) = scale * spec.real().transpose();
    }
    return grid;
}

TFGrid pwvd(const ComplexSeries& x, const Eigen::VectorXd& lag_window, int n_freq_bins) {
    return spwvd(x, WindowSpec{WindowSpec::dirac(), lag_window}, n_freq_bins);
}

TFGrid wvd(const ComplexSeries& x, int n_freq_bins) {
    const int half_lag = (n_freq_bins - 1) / 2;
    return spwvd(x, WindowSpec{WindowSpec::dirac(), WindowSpec::all_ones(2 * half_lag + 1)},
                 n_freq_bins);
}

namespace {

// fractional-coverage box average of `u` (rows=freq, cols=time after the
// caller's transpose indexing) onto out_h x out_w
GrayImage quantize_resampled(const Eigen::MatrixXd& norm_tf, int out_h, int out_w) {
    // norm_tf is T x F, normalized to [0,1]; image rows = frequency
    const Eigen::Index t_in = norm_tf.rows();
    const Eigen::Index f_in = norm_tf.cols();
    GrayImage img;
    img.height = out_h;
    img.width = out_w;
    img.pixels.assign(static_cast<std::size_t>(out_h) * out_w, 0);

    const double fstep = static_cast<double>(f_in) / out_h;
    const double tstep = static_cast<double>(t_in) / out_w;

    for (int r = 0; r < out_h; ++r) {
        const double f0 = r * fstep, f1 = (r + 1) * fstep;
        for (int c = 0; c < out_w; ++c) {
            const double t0 = c * tstep, t1 = (c + 1) * tstep;
            double acc = 0.0;
            for (Eigen::Index fb = static_cast<Eigen::Index>(f0); fb < f_in && fb < f1; ++fb) {
                const double fw = std::min<double>(f1, fb + 1.0) - std::max<double>(f0, fb);
                if (fw <= 0.0) continue;
                double inner = 0.0;
                for (Eigen::Index tb = static_cast<Eigen::Index>(t0); tb < t_in && tb < t1; ++tb) {
                    const double tw = std::min<double>(t1, tb + 1.0) - std::max<double>(t0, tb);
                    if (tw <= 0.0) continue;
                    inner += tw * norm_tf(tb, fb);
                }
                acc += fw * inner;
            }
            const double area = (f1 - f0) * (t1 - t0);
            const double v = acc / area;
            img.at(r, c) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
        }
    }
    return img;
}

} // namespace

GrayImage to_image(const TFGrid& grid, int height, int width) {
    if (height < 1 || width < 1)
        throw std::invalid_argument("to_image: non-positive output size");
    if (!grid.values.allFinite())
        throw std::invalid_argument("to_image: grid holds non-finite values");

    const Eigen::MatrixXd mag = grid.values.cwiseAbs();
    const double peak = mag.maxCoeff();

    GrayImage zero_img;
    zero_img.height = height;
    zero_img.width = width;
    zero_img.pixels.assign(static_cast<std::size_t>(height) * width, 0);
    if (peak <= 0.0) return zero_img;

    const double floor_lin = peak * 1e-6; // -60 dB below peak
    Eigen::MatrixXd db =
        mag.cwiseMax(floor_lin).unaryExpr([](double v) { return 10.0 * std::log10(v); });
    const double lo = db.minCoeff();
    const double hi = db.maxCoeff();
    if (hi - lo <= 0.0) return zero_img; // constant grid: degenerate normalization

    db = (db.array() - lo) / (hi - lo);
    return quantize_resampled(db, height, width);
}

void write_grid(const TFGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_grid: cannot open " + path.string());
    const std::uint32_t t = static_cast<std::uint32_t>(grid.values.rows());
    const std::uint32_t f = static_cast<std::uint32_t>(grid.values.cols());
    out.write(reinterpret_cast<const char*>(&t), 4);
    out.write(reinterpret_cast<const char*>(&f), 4);
    std::vector<float> row(f);
    for (std::uint32_t i = 0; i < t; ++i) {
        for (std::uint32_t j = 0; j < f; ++j) row[j] = static_cast<float>(grid.values(i, j));
        out.write(reinterpret_cast<const char*>(row.data()), sizeof(float) * f);
    }
    if (!out) throw std::runtime_error("write_grid: write failed for " + path.string());
}

TFGrid read_grid(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_grid: cannot open " + path.string());
    std::uint32_t t = 0, f = 0;
    in.read(reinterpret_cast<char*>(&t), 4);
    in.read(reinterpret_cast<char*>(&f), 4);
    if (!in || t == 0 || f == 0) throw std::runtime_error("read_grid: bad header in " + path.string());
    TFGrid grid;
    grid.values.resize(t, f);
    std::vector<float> row(f);
    for (std::uint32_t i = 0; i < t; ++i) {
        in.read(reinterpret_cast<char*>(row.data()), sizeof(float) * f);
        if (!in) throw std::runtime_error("read_grid: truncated data in " + path.string());
        for (std::uint32_t j = 0; j < f; ++j) grid.values(i, j) = row[j];
    }
    grid.time_axis_s = Eigen::VectorXd::LinSpaced(t, 0.0, static_cast<double>(t - 1));
    grid.freq_axis_hz = Eigen::VectorXd::LinSpaced(f, 0.0, static_cast<double>(f - 1));
    return grid;
}

Eigen::VectorXi ridge(const TFGrid& grid) {
    Eigen::VectorXi out(grid.values.rows());
    for (Eigen::Index n = 0; n < grid.values.rows(); ++n) {
        Eigen::Index k = 0;
        grid.values.row(n).maxCoeff(&k);
        out[n] = static_cast<int>(k);
    }
    return out;
}

} // namespace jamscope::tfa
