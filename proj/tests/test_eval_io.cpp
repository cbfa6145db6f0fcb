#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "jamscope/eval.hpp"
#include "jamscope/image.hpp"
#include "jamscope/model_io.hpp"
#include "jamscope/rng.hpp"

using namespace jamscope;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "jamscope_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// labels {bpsk, comb-spectrum, fh, fh}; the last two differ in snr/jsr
dataset::Dataset tiny_eval_set() {
    dataset::Dataset ds;
    ds.image_height = 8;
    ds.image_width = 8;
    ds.images = Eigen::MatrixXf::Zero(4, 64);
    ds.labels.resize(4);
    ds.labels << 0, 1, 2, 2;
    for (int i = 0; i < 4; ++i) {
        dataset::SampleRecord rec;
        rec.file = "images/x.pgm";
        rec.signal_class = static_cast<synth::SignalClass>(ds.labels[i]);
        rec.split = "test";
        rec.snr_db = i < 2 ? 2.0 : 6.0;
        if (i == 3) rec.jsr_db = 5.0;
        rec.seed = static_cast<std::uint64_t>(i);
        ds.records.push_back(rec);
    }
    return ds;
}

} // namespace

TEST_SUITE("eval") {

TEST_CASE("evaluate fills accuracy, confusion and per-class stats") {
    const dataset::Dataset ds = tiny_eval_set();
    Eigen::VectorXi pred(4);
    pred << 0, 1, 2, 5;

    const eval::EvalReport rep = eval::evaluate(ds, pred);
    CHECK(rep.n_samples == 4);
    CHECK(rep.accuracy == doctest::Approx(0.75));
    REQUIRE(rep.class_tags.size() == 9);
    CHECK(rep.class_tags[0] == "bpsk");
    CHECK(rep.class_tags[2] == "fh");
    CHECK(rep.confusion(0, 0) == 1);
    CHECK(rep.confusion(2, 2) == 1);
    CHECK(rep.confusion(2, 5) == 1);
    CHECK(rep.confusion.sum() == 4);
    CHECK(rep.class_accuracy.at("fh") == doctest::Approx(0.5));
    CHECK(rep.class_accuracy.at("bpsk") == doctest::Approx(1.0));
    CHECK(rep.class_accuracy.count("tracking") == 0); // class absent from the set
    CHECK(rep.group_accuracy.empty());
}

TEST_CASE("evaluate groups by snr and jsr") {
    const dataset::Dataset ds = tiny_eval_set();
    Eigen::VectorXi pred(4);
    pred << 0, 1, 2, 5;

    const eval::EvalReport by_snr = eval::evaluate(ds, pred, "snr");
    CHECK(by_snr.group_counts.at("snr=2") == 2);
    CHECK(by_snr.group_counts.at("snr=6") == 2);
    CHECK(by_snr.group_accuracy.at("snr=2") == doctest::Approx(1.0));
    CHECK(by_snr.group_accuracy.at("snr=6") == doctest::Approx(0.5));

    const eval::EvalReport by_jsr = eval::evaluate(ds, pred, "jsr");
    CHECK(by_jsr.group_counts.at("jsr=na") == 3);
    CHECK(by_jsr.group_accuracy.at("jsr=5") == doctest::Approx(0.0));

    CHECK_THROWS_AS(eval::evaluate(ds, pred, "channel"), std::invalid_argument);
}

TEST_CASE("evaluate rejects malformed inputs") {
    dataset::Dataset ds = tiny_eval_set();
    Eigen::VectorXi pred(4);
    pred << 0, 1, 2, 2;

    Eigen::VectorXi short_pred(3);
    short_pred << 0, 1, 2;
    CHECK_THROWS_AS(eval::evaluate(ds, short_pred), std::invalid_argument);

    Eigen::VectorXi out_of_set = pred;
    out_of_set[0] = 9;
    CHECK_THROWS_AS(eval::evaluate(ds, out_of_set), std::invalid_argument);

    ds.labels[1] = 10; // novel class in the truth labels
    CHECK_THROWS_AS(eval::evaluate(ds, pred), std::invalid_argument);

    dataset::Dataset empty;
    Eigen::VectorXi none;
    CHECK_THROWS_AS(eval::evaluate(empty, none), std::invalid_argument);
}

TEST_CASE("report json and confusion csv round-trip on disk") {
    const fs::path dir = scratch_dir("eval_files");
    const dataset::Dataset ds = tiny_eval_set();
    Eigen::VectorXi pred(4);
    pred << 0, 1, 2, 5;
    const eval::EvalReport rep = eval::evaluate(ds, pred, "snr");

    eval::write_report_json(rep, dir / "report.json");
    const nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(j.at("schema") == "jamscope-eval/1");
    CHECK(j.at("n_samples") == 4);
    CHECK(j.at("accuracy").get<double>() == doctest::Approx(0.75));
    CHECK(j.at("confusion")[2][5] == 1);
    CHECK(j.at("class_accuracy").at("fh").get<double>() == doctest::Approx(0.5));
    CHECK(j.at("group_counts").at("snr=6") == 2);

    eval::write_confusion_csv(rep, dir / "confusion.csv");
    const std::string csv = slurp(dir / "confusion.csv");
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < csv.size()) {
        const std::size_t nl = csv.find('\n', start);
        lines.push_back(csv.substr(start, nl - start));
        start = nl + 1;
    }
    REQUIRE(lines.size() == 10);
    CHECK(lines[0] ==
          "true\\pred,bpsk,comb-spectrum,fh,multi-tone,noise-fm,pulse,single-tone,sweeping,"
          "tracking");
    CHECK(lines[3] == "fh,0,0,1,0,0,1,0,0,0");
}

TEST_CASE("confusion heatmap normalizes rows") {
    const dataset::Dataset ds = tiny_eval_set();
    Eigen::VectorXi pred(4);
    pred << 0, 1, 2, 5;
    const eval::EvalReport rep = eval::evaluate(ds, pred);

    const GrayImage img = eval::confusion_heatmap(rep, 2);
    CHECK(img.height == 18);
    CHECK(img.width == 18);
    CHECK(img.at(0, 0) == 255);         // bpsk row, all mass on the diagonal
    CHECK(img.at(4, 4) == 128);         // fh row split between fh and pulse
    CHECK(img.at(4, 10) == 128);
    CHECK(img.at(4, 2) == 0);
    CHECK(img.at(16, 16) == 0);         // tracking row has no samples
    CHECK_THROWS_AS(eval::confusion_heatmap(rep, 0), std::invalid_argument);
}

TEST_CASE("detect_novel thresholds the top softmax probability") {
    Eigen::MatrixXf probs(3, 4);
    probs << 0.96f, 0.02f, 0.01f, 0.01f,
             0.94f, 0.02f, 0.02f, 0.02f,
             0.25f, 0.25f, 0.25f, 0.25f;
    const Eigen::VectorXi flags = eval::detect_novel(probs, 0.95);
    CHECK(flags[0] == 0);
    CHECK(flags[1] == 1);
    CHECK(flags[2] == 1);
    CHECK(eval::novel_flag_rate(probs, 0.95) == doctest::Approx(2.0 / 3.0));

    CHECK(eval::detect_novel(probs, 0.2).sum() == 0);
    CHECK_THROWS_AS(eval::detect_novel(probs, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(eval::detect_novel(probs, 1.5), std::invalid_argument);
    const Eigen::MatrixXf empty(0, 4);
    CHECK_THROWS_AS(eval::novel_flag_rate(empty, 0.95), std::invalid_argument);
}

} // TEST_SUITE eval

TEST_SUITE("model_io") {

TEST_CASE("cnn parameters round-trip through the container") {
    const fs::path dir = scratch_dir("model_io_cnn");
    classify::CnnConfig cfg;
    cfg.image_height = 16;
    cfg.image_width = 16;
    cfg.conv_channels = {2, 3, 4};
    cfg.dense_units = 10;
    cfg.n_classes = 4;
    classify::CompactCnn<float> net(cfg);
    SeededRng rng(21);
    net.init(rng);

    const fs::path path = dir / "net.jam";
    model_io::save_cnn(path, cfg, net.params());
    CHECK(model_io::peek_model_type(path) == "cnn");

    const model_io::CnnFile loaded = model_io::load_cnn(path);
    CHECK(loaded.config.image_height == 16);
    CHECK(loaded.config.conv_channels == std::array<int, 3>{2, 3, 4});
    CHECK(loaded.config.dense_units == 10);
    CHECK(loaded.config.n_classes == 4);
    REQUIRE(loaded.params.size() == net.params().size());
    CHECK((loaded.params - net.params()).cwiseAbs().maxCoeff() == 0.0f);
    CHECK(!loaded.version.empty());
}

TEST_CASE("knn and gnb models round-trip") {
    const fs::path dir = scratch_dir("model_io_shallow");
    SeededRng rng(9);
    Eigen::MatrixXf x(8, 3);
    Eigen::VectorXi y(8);
    for (int i = 0; i < 8; ++i) {
        y[i] = i % 2;
        for (int d = 0; d < 3; ++d)
            x(i, d) = static_cast<float>(rng.normal(y[i] == 0 ? -1.0 : 1.0, 0.3));
    }

    const classify::KnnModel knn = classify::knn_fit(x, y, 3, 2);
    model_io::save_knn(dir / "knn.jam", knn);
    CHECK(model_io::peek_model_type(dir / "knn.jam") == "knn");
    const model_io::KnnFile knn2 = model_io::load_knn(dir / "knn.jam");
    CHECK(knn2.model.k == 3);
    CHECK(knn2.model.n_classes == 2);
    CHECK((knn2.model.train_labels.array() == knn.train_labels.array()).all());
    CHECK((knn2.model.train_features - knn.train_features).cwiseAbs().maxCoeff() == 0.0f);

    const classify::GnbModel gnb = classify::gnb_fit(x, y, 2);
    model_io::save_gnb(dir / "gnb.jam", gnb);
    CHECK(model_io::peek_model_type(dir / "gnb.jam") == "gnb");
    const model_io::GnbFile gnb2 = model_io::load_gnb(dir / "gnb.jam");
    CHECK(gnb2.model.n_classes == 2);
    CHECK((gnb2.model.means - gnb.means).cwiseAbs().maxCoeff() == 0.0f);
    CHECK((gnb2.model.variances - gnb.variances).cwiseAbs().maxCoeff() == 0.0f);
    CHECK((gnb2.model.log_priors - gnb.log_priors).cwiseAbs().maxCoeff() == 0.0f);

    // queries keep working after the round trip
    CHECK((classify::knn_predict(knn2.model, x).array() == y.array()).all());
    CHECK((classify::gnb_predict(gnb2.model, x).array() == y.array()).all());
}

TEST_CASE("loaders reject mismatched types, junk and truncation") {
    const fs::path dir = scratch_dir("model_io_bad");
    SeededRng rng(2);
    Eigen::MatrixXf x(4, 2);
    Eigen::VectorXi y(4);
    for (int i = 0; i < 4; ++i) {
        y[i] = i % 2;
        x(i, 0) = static_cast<float>(rng.normal(0.0, 1.0));
        x(i, 1) = static_cast<float>(i);
    }
    model_io::save_gnb(dir / "m.jam", classify::gnb_fit(x, y, 2));
    CHECK_THROWS_AS(model_io::load_knn(dir / "m.jam"), std::runtime_error);
    CHECK_THROWS_AS(model_io::load_cnn(dir / "m.jam"), std::runtime_error);

    {
        std::ofstream junk(dir / "junk.jam", std::ios::binary);
        junk << "not a model file at all";
    }
    CHECK_THROWS_AS(model_io::peek_model_type(dir / "junk.jam"), std::runtime_error);
    CHECK_THROWS_AS(model_io::load_gnb(dir / "junk.jam"), std::runtime_error);

    const std::string whole = slurp(dir / "m.jam");
    {
        std::ofstream cut(dir / "cut.jam", std::ios::binary);
        cut.write(whole.data(), static_cast<std::streamsize>(whole.size() / 2));
    }
    CHECK(model_io::peek_model_type(dir / "cut.jam") == "gnb");
    CHECK_THROWS_AS(model_io::load_gnb(dir / "cut.jam"), std::runtime_error);

    CHECK_THROWS_AS(model_io::load_gnb(dir / "missing.jam"), std::runtime_error);
}

} // TEST_SUITE model_io

namespace {

const char* cli_path() { return std::getenv("JAMSCOPE_CLI"); }

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string(cli_path()) + " " + args + " > " + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
    if (!cli_path()) return; // exercised via the cli_smoke ctest entry
    const fs::path dir = scratch_dir("cli_usage");
    CHECK(run_cli("--help", dir / "help.txt") == 0);
    CHECK(run_cli("synth --help", dir / "synth_help.txt") == 0);
    CHECK(slurp(dir / "help.txt").find("synth") != std::string::npos);

    CHECK(run_cli("", dir / "noargs.txt") == 2);
    CHECK(run_cli("synth", dir / "missing.txt") == 2);
    CHECK(run_cli("frobnicate", dir / "unknown.txt") == 2);
    CHECK(run_cli("synth --class fh --out x.iq --bogus-flag 3", dir / "badflag.txt") == 2);
}

TEST_CASE("synth writes iq samples and a spectrogram") {
    if (!cli_path()) return;
    const fs::path dir = scratch_dir("cli_synth");
    const std::string args =
        "synth --class fh --seed 11 --snr 8 --samples 120 --out " + (dir / "fh.iq").string() +
        " --spectrogram " + (dir / "fh.pgm").string() +
        " --freq-bins 64 --lag-window 33 --time-window 9";
    CHECK(run_cli(args, dir / "log.txt") == 0);
    CHECK(fs::file_size(dir / "fh.iq") == 120 * 2 * sizeof(float));
    const GrayImage img = read_pgm(dir / "fh.pgm");
    CHECK(img.height == 64);
    CHECK(img.width == 64);

    // jammed class without a jamming ratio is a runtime refusal
    CHECK(run_cli("synth --class sweeping --seed 1 --snr 8 --out " + (dir / "x.iq").string(),
                  dir / "nojsr.txt") == 1);
}

TEST_CASE("dataset, train, eval and novel chain together") {
    if (!cli_path()) return;
    const fs::path dir = scratch_dir("cli_chain");
    const fs::path data = dir / "data";
    const std::string common =
        " --samples 120 --freq-bins 64 --lag-window 33 --time-window 9 --image-size 32";

    CHECK(run_cli("dataset --out " + data.string() +
                      " --classes fh,sweeping --snr 6 --jsr 5 --train 2 --test 1 --seed 3" +
                      common,
                  dir / "dataset.txt") == 0);
    const fs::path manifest = data / "manifest.json";
    REQUIRE(fs::exists(manifest));

    CHECK(run_cli("train --data " + manifest.string() + " --model knn --k 3 --out " +
                      (dir / "knn.jam").string(),
                  dir / "train_knn.txt") == 0);
    CHECK(model_io::peek_model_type(dir / "knn.jam") == "knn");

    CHECK(run_cli("eval --data " + manifest.string() + " --model " + (dir / "knn.jam").string() +
                      " --out " + (dir / "eval").string() + " --group snr",
                  dir / "eval_knn.txt") == 0);
    const nlohmann::json report = nlohmann::json::parse(slurp(dir / "eval" / "report.json"));
    const double acc = report.at("accuracy").get<double>();
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
    CHECK(fs::exists(dir / "eval" / "confusion.csv"));

    CHECK(run_cli("train --data " + manifest.string() +
                      " --model cnn --epochs 1 --batch 2 --seed 1 --out " +
                      (dir / "cnn.jam").string(),
                  dir / "train_cnn.txt") == 0);
    CHECK(model_io::peek_model_type(dir / "cnn.jam") == "cnn");

    CHECK(run_cli("novel --data " + manifest.string() + " --model " + (dir / "cnn.jam").string() +
                      " --threshold 0.95",
                  dir / "novel.txt") == 0);
    CHECK(slurp(dir / "novel.txt").find("flag") != std::string::npos);

    // gnb path through the same shallow-feature pipeline
    CHECK(run_cli("train --data " + manifest.string() + " --model gnb --out " +
                      (dir / "gnb.jam").string(),
                  dir / "train_gnb.txt") == 0);
    CHECK(run_cli("eval --data " + manifest.string() + " --model " + (dir / "gnb.jam").string() +
                      " --out " + (dir / "eval_gnb").string(),
                  dir / "eval_gnb.txt") == 0);

    // runtime failures exit 1
    CHECK(run_cli("eval --data " + (dir / "nope.json").string() + " --model " +
                      (dir / "knn.jam").string() + " --out " + (dir / "x").string(),
                  dir / "bad_eval.txt") == 1);
    CHECK(run_cli("novel --data " + manifest.string() + " --model " + (dir / "knn.jam").string(),
                  dir / "bad_novel.txt") == 1);
}

} // TEST_SUITE cli
