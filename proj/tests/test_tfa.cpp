#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "jamscope/rng.hpp"
#include "jamscope/tfa.hpp"
#include "oracle_utils.hpp"

using namespace jamscope;
using namespace jamscope::tfa;

namespace {

ComplexSeries random_complex_frame(SeededRng& rng, int len, double fs) {
    ArrayXcd x(len);
    for (int i = 0; i < len; ++i) x[i] = cplx(rng.normal(), rng.normal());
    return {x, fs};
}

ComplexSeries real_tone(double freq_frac, int len, double fs) {
    ArrayXcd x(len);
    for (int i = 0; i < len; ++i) x[i] = std::cos(2.0 * M_PI * freq_frac * i);
    return {x, fs};
}

} // namespace

TEST_SUITE("tfa") {

TEST_CASE("hamming window shape") {
    const Eigen::VectorXd w = WindowSpec::hamming(33);
    CHECK(w.size() == 33);
    CHECK(w[16] == doctest::Approx(1.0));
    CHECK(w[0] == doctest::Approx(0.08).epsilon(1e-9));
    for (int i = 0; i < 16; ++i) CHECK(w[i] == doctest::Approx(w[32 - i]).epsilon(1e-12));
    CHECK(WindowSpec::hamming(1).size() == 1);
    CHECK(WindowSpec::hamming(1)[0] == 1.0);
}

TEST_CASE("analytic signal restores the real part exactly") {
    SeededRng rng(101);
    for (int len : {64, 65, 200}) {
        ArrayXcd x(len);
        for (int i = 0; i < len; ++i) x[i] = rng.normal();
        const ComplexSeries a = analytic_signal({x, 1000.0});
        REQUIRE(a.samples.size() == len);
        for (int i = 0; i < len; ++i) CHECK(a.samples[i].real() == x[i].real());
    }
}

TEST_CASE("analytic imaginary part matches the circular Hilbert kernel") {
    SeededRng rng(102);
    for (int len : {32, 64, 128}) {
        Eigen::VectorXd x(len);
        for (int i = 0; i < len; ++i) x[i] = rng.normal();
        ArrayXcd xc = x.array().cast<cplx>();
        const ComplexSeries a = analytic_signal({xc, 1.0});
        const Eigen::VectorXd want = oracle::hilbert_even(x);
        for (int i = 0; i < len; ++i) CHECK(std::abs(a.samples[i].imag() - want[i]) < 1e-9);
    }
}

TEST_CASE("analytic spectrum is one-sided") {
    SeededRng rng(103);
    const int len = 48;
    ArrayXcd x(len);
    for (int i = 0; i < len; ++i) x[i] = rng.normal();
    const ComplexSeries a = analytic_signal({x, 1.0});
    const Eigen::VectorXcd spec = oracle::dft(a.samples.matrix());
    const double scale = spec.cwiseAbs().maxCoeff();
    for (int k = len / 2 + 1; k < len; ++k) CHECK(std::abs(spec[k]) < 1e-9 * scale);
}

TEST_CASE("analytic doubles positive frequencies and zeroes negative ones") {
    const int len = 64;
    ArrayXcd pos(len), neg(len);
    for (int i = 0; i < len; ++i) {
        pos[i] = std::polar(1.0, 2.0 * M_PI * 8.0 * i / len);
        neg[i] = std::polar(1.0, -2.0 * M_PI * 8.0 * i / len);
    }
    const ComplexSeries keep = analytic_signal({pos, 1.0});
    const ComplexSeries drop = analytic_signal({neg, 1.0});
    CHECK((keep.samples - 2.0 * pos).abs().maxCoeff() < 1e-9);
    CHECK(drop.samples.abs().maxCoeff() < 1e-9);
}

TEST_CASE("spwvd matches the brute-force double sum") {
    SeededRng rng(104);
    for (int trial = 0; trial < 20; ++trial) {
        const int len = 32 + static_cast<int>(rng.integer(33));
        const int g_len = 1 + 2 * static_cast<int>(rng.integer(7));
        const int h_len = 1 + 2 * static_cast<int>(rng.integer(16));
        const int nf = std::max<int>(h_len, 2) + static_cast<int>(rng.integer(32));
        const ComplexSeries x = random_complex_frame(rng, len, 2.0e6);

        const WindowSpec w{WindowSpec::hamming(g_len), WindowSpec::hamming(h_len)};
        const TFGrid got = spwvd(x, w, nf);
        const Eigen::MatrixXd want =
            oracle::spwvd_brute(x.samples.matrix(), x.sample_rate_hz, w.time_window,
                                w.lag_window, nf);
        REQUIRE(got.values.rows() == want.rows());
        REQUIRE(got.values.cols() == want.cols());
        const double scale = std::max(1e-12, want.cwiseAbs().maxCoeff());
        CHECK((got.values - want).cwiseAbs().maxCoeff() / scale < 1e-9);
    }
}

TEST_CASE("wvd is spwvd with a Dirac time window and flat lag window") {
    SeededRng rng(105);
    const ComplexSeries x = random_complex_frame(rng, 50, 1.0e3);
    const int nf = 64;
    const TFGrid a = wvd(x, nf);
    const TFGrid b =
        spwvd(x, WindowSpec{WindowSpec::dirac(), WindowSpec::all_ones(63)}, nf);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("wvd frequency sum recovers per-sample energy") {
    SeededRng rng(106);
    const int len = 64, nf = 64;
    const double fs = 2.0e6;
    const ComplexSeries x = random_complex_frame(rng, len, fs);
    const TFGrid grid = wvd(x, nf);
    const double df = grid.bin_width_hz();
    CHECK(df == doctest::Approx(fs / (2.0 * nf)));
    for (int n = 0; n < len; ++n) {
        const double got = grid.values.row(n).sum() * df;
        const double want = std::norm(x.samples[n]);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("grid axes follow the sampling convention") {
    SeededRng rng(107);
    const double fs = 8.0e3;
    const ComplexSeries x = random_complex_frame(rng, 40, fs);
    const TFGrid grid = spwvd(x, WindowSpec{WindowSpec::hamming(5), WindowSpec::hamming(17)}, 32);
    CHECK(grid.n_time() == 40);
    CHECK(grid.n_freq() == 32);
    CHECK(grid.time_axis_s[1] == doctest::Approx(1.0 / fs));
    CHECK(grid.time_axis_s[39] == doctest::Approx(39.0 / fs));
    CHECK(grid.freq_axis_hz[0] == 0.0);
    CHECK(grid.freq_axis_hz[31] == doctest::Approx(31.0 * fs / 64.0));
}

TEST_CASE("pure tone concentrates on its frequency bin") {
    const double fs = 2.0e6;
    const int len = 256, nf = 128;
    const ComplexSeries x = analytic_signal(real_tone(0.2, len, fs));
    const TFGrid grid = wvd(x, nf);
    const Eigen::VectorXi r = ridge(grid);
    const int want = static_cast<int>(std::lround(0.2 * 2.0 * nf)); // f0 / (fs / (2 nf))
    for (int n = 8; n < len - 8; ++n) CHECK(std::abs(r[n] - want) <= 1);
}

TEST_CASE("smoothing suppresses the midpoint cross-term of a two-tone signal") {
    const double fs = 2.0e6;
    const int len = 256, nf = 128;
    ArrayXcd x(len);
    for (int i = 0; i < len; ++i)
        x[i] = std::cos(2.0 * M_PI * 0.15 * i) + std::cos(2.0 * M_PI * 0.35 * i);
    const ComplexSeries a = analytic_signal({x, fs});

    const TFGrid v_wvd = wvd(a, nf);
    const TFGrid v_pwvd = pwvd(a, WindowSpec::hamming(63), nf);
    const TFGrid v_spwvd =
        spwvd(a, WindowSpec{WindowSpec::hamming(33), WindowSpec::hamming(63)}, nf);

    // cross-terms of two components live midway between them (0.25 here)
    const int mid = static_cast<int>(std::lround(0.25 * 2.0 * nf));
    auto mid_energy = [&](const TFGrid& g) {
        double acc = 0.0;
        for (int n = 16; n < len - 16; ++n)
            for (int k = mid - 2; k <= mid + 2; ++k) acc += std::abs(g.values(n, k));
        return acc;
    };
    const double e_wvd = mid_energy(v_wvd);
    const double e_pwvd = mid_energy(v_pwvd);
    const double e_spwvd = mid_energy(v_spwvd);
    CHECK(e_spwvd < e_pwvd);
    CHECK(e_pwvd < e_wvd);
    CHECK(e_spwvd < 0.1 * e_wvd);
}

TEST_CASE("to_image spans the full 8-bit range and honors the floor") {
    TFGrid grid;
    grid.values.resize(64, 64);
    grid.values.setConstant(1.0);
    grid.values(10, 20) = 1.0e6; // 60 dB above everything else
    grid.time_axis_s = Eigen::VectorXd::LinSpaced(64, 0, 63);
    grid.freq_axis_hz = Eigen::VectorXd::LinSpaced(64, 0, 63);

    const GrayImage img = to_image(grid, 64, 64);
    CHECK(img.height == 64);
    CHECK(img.width == 64);
    // grid row = time = image column; grid col = freq = image row
    CHECK(img.at(20, 10) == 255);
    int n255 = 0;
    for (auto p : img.pixels) n255 += p == 255 ? 1 : 0;
    CHECK(n255 == 1);
    // everything else sits exactly at the -60 dB floor
    CHECK(img.at(0, 0) == 0);
}

TEST_CASE("to_image of a constant grid is all zero") {
    TFGrid grid;
    grid.values = Eigen::MatrixXd::Constant(32, 32, 3.5);
    const GrayImage img = to_image(grid, 16, 16);
    for (auto p : img.pixels) CHECK(p == 0);
}

TEST_CASE("to_image rejects non-finite grids") {
    TFGrid grid;
    grid.values = Eigen::MatrixXd::Zero(8, 8);
    grid.values(3, 3) = std::nan("");
    CHECK_THROWS_AS(to_image(grid, 8, 8), std::invalid_argument);
}

TEST_CASE("grid files round-trip through the float dump") {
    SeededRng rng(108);
    TFGrid grid;
    grid.values.resize(20, 16);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 16; ++j) grid.values(i, j) = rng.normal();
    const auto path = std::filesystem::temp_directory_path() / "jamscope_grid_test.bin";
    write_grid(grid, path);
    const TFGrid back = read_grid(path);
    REQUIRE(back.values.rows() == 20);
    REQUIRE(back.values.cols() == 16);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 16; ++j)
            CHECK(back.values(i, j) == static_cast<double>(static_cast<float>(grid.values(i, j))));
    std::filesystem::remove(path);
}

TEST_CASE("window and bin validation") {
    SeededRng rng(109);
    const ComplexSeries x = random_complex_frame(rng, 32, 1.0);
    CHECK_THROWS_AS(spwvd(x, WindowSpec{WindowSpec::hamming(4), WindowSpec::hamming(9)}, 32),
                    std::invalid_argument);
    Eigen::VectorXd lopsided = WindowSpec::hamming(9);
    lopsided[0] += 0.5;
    CHECK_THROWS_AS(spwvd(x, WindowSpec{WindowSpec::dirac(), lopsided}, 32),
                    std::invalid_argument);
    // lag window wider than the bin count
    CHECK_THROWS_AS(spwvd(x, WindowSpec{WindowSpec::dirac(), WindowSpec::hamming(33)}, 16),
                    std::invalid_argument);
    // window longer than twice the frame
    CHECK_THROWS_AS(spwvd(x, WindowSpec{WindowSpec::hamming(65), WindowSpec::dirac()}, 32),
                    std::invalid_argument);
    CHECK_THROWS_AS(wvd(ComplexSeries{{}, 1.0}, 16), std::invalid_argument);
}

TEST_CASE("ridge picks the per-slice argmax") {
    TFGrid grid;
    grid.values = Eigen::MatrixXd::Zero(3, 5);
    grid.values(0, 4) = 1.0;
    grid.values(1, 2) = 2.0;
    grid.values(2, 0) = 0.5;
    const Eigen::VectorXi r = ridge(grid);
    CHECK(r[0] == 4);
    CHECK(r[1] == 2);
    CHECK(r[2] == 0);
}

} // TEST_SUITE
