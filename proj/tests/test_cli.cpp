#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "seamcheck/cli.hpp"
#include "support/scenes.hpp"

using namespace seamcheck;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "seamcheck");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    const Bytes b = read_file_bytes(p);
    return {b.begin(), b.end()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("seamcheck_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        unsetenv("SEAMCHECK_CONFIG");
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string write_spec(const std::string& name, const SceneSpec& spec) {
        const fs::path p = dir / (name + ".json");
        cli::write_text(p, to_json(spec).dump());
        return p.string();
    }

    // Generates a scene and returns the image prefix.
    std::string scene(const std::string& name, std::optional<DefectKind> defect) {
        const auto spec = fixtures::make_scene({fixtures::Shape::Linear, StitchType::Lockstitch301, defect, 21});
        const std::string prefix = (dir / name).string();
        EXPECT_EQ(run({"generate", write_spec(name, spec), "--out", prefix}).code, 0);
        return prefix;
    }

    fs::path dir;
};

} // namespace

TEST_F(CliTest, GenerateWritesImageAndTruth) {
    const std::string prefix = scene("ok", std::nullopt);
    EXPECT_TRUE(fs::exists(prefix + ".ppm"));
    EXPECT_TRUE(fs::exists(prefix + ".truth.json"));
    const std::string first = slurp(prefix + ".ppm");
    scene("ok", std::nullopt);
    EXPECT_EQ(slurp(prefix + ".ppm"), first);

    auto spec = fixtures::make_scene({fixtures::Shape::Circular, StitchType::Lockstitch301, {}, 2});
    EXPECT_EQ(run({"generate", write_spec("png", spec), "--out", (dir / "png").string(), "--png"}).code, 0);
    EXPECT_EQ(load_image(dir / "png.png"), render_scene(spec).first);
}

TEST_F(CliTest, GenerateRejectsThinThread) {
    auto spec = fixtures::make_scene({fixtures::Shape::Linear, StitchType::Lockstitch301, {}, 2});
    spec.paths[0].thread_width = 1;
    Json j = to_json(spec);
    cli::write_text(dir / "thin.json", j.dump());
    const Result r = run({"generate", (dir / "thin.json").string(), "--out", (dir / "thin").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("thread_width"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir / "thin.ppm"));
}

TEST_F(CliTest, InspectExitCodes) {
    const std::string good = scene("good", std::nullopt);
    const Result pass = run({"inspect", good + ".ppm"});
    EXPECT_EQ(pass.code, 0) << pass.err;
    EXPECT_EQ(parse_report(pass.out).verdict, Verdict::Pass);

    const std::string bad = scene("bad", DefectKind::MissingStitch);
    const Result fail = run({"inspect", bad + ".ppm", "--config", SEAMCHECK_SOURCE_DIR "/configs/default.toml"});
    EXPECT_EQ(fail.code, 1);
    const InspectionReport report = parse_report(fail.out);
    ASSERT_EQ(report.defects.size(), 1u);
    EXPECT_EQ(report.defects[0].kind, DefectKind::MissingStitch);
    EXPECT_EQ(report.image_id, "bad.ppm");

    EXPECT_EQ(run({"inspect", good + ".ppm", "--config", (dir / "nope.json").string()}).code, 2);
    EXPECT_EQ(run({"inspect", (dir / "nope.ppm").string()}).code, 2);
    cli::write_text(dir / "junk.ppm", "not an image");
    EXPECT_EQ(run({"inspect", (dir / "junk.ppm").string()}).code, 2);
}

TEST_F(CliTest, ConfigFromEnvironment) {
    const std::string good = scene("good", std::nullopt);
    setenv("SEAMCHECK_CONFIG", (dir / "missing.toml").c_str(), 1);
    EXPECT_EQ(run({"inspect", good + ".ppm"}).code, 2);
    cli::write_text(dir / "strict.json", R"({"lines": {"vote_threshold": 100000}, "geometry": "lines"})");
    setenv("SEAMCHECK_CONFIG", (dir / "strict.json").c_str(), 1);
    const Result r = run({"inspect", good + ".ppm"});
    EXPECT_EQ(r.code, 1); // no line reaches the threshold
    EXPECT_EQ(parse_report(r.out).params.lines.vote_threshold, 100000u);
    // an explicit flag wins over the environment
    EXPECT_EQ(run({"inspect", good + ".ppm", "--config", SEAMCHECK_SOURCE_DIR "/configs/default.json"}).code, 0);
}

TEST_F(CliTest, InspectManyImages) {
    const std::string a = scene("a", std::nullopt);
    const std::string b = scene("b", DefectKind::SkippedStitch);
    EXPECT_EQ(run({"inspect", a + ".ppm", b + ".ppm"}).code, 2);

    const fs::path out = dir / "reports";
    const fs::path ann = dir / "annotated";
    const Result r = run({"inspect", a + ".ppm", b + ".ppm", "--out", out.string(), "--annotate", ann.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(parse_report(slurp(out / "a.report.json")).verdict, Verdict::Pass);
    EXPECT_EQ(parse_report(slurp(out / "b.report.json")).verdict, Verdict::Fail);
    const ImageRgb annotated = load_image(ann / "b.annotated.ppm");
    EXPECT_NE(annotated, load_image(b + ".ppm"));

    EXPECT_EQ(run({"inspect", a + ".ppm", (dir / "sub" / "a.ppm").string(), "--out", out.string()}).code, 2);
}

TEST_F(CliTest, AccumulatorDumpLeavesReportAlone) {
    const std::string a = scene("a", DefectKind::SuperimposedSeam);
    const fs::path plain = dir / "plain";
    const fs::path dumped = dir / "dumped";
    EXPECT_EQ(run({"inspect", a + ".ppm", "--out", plain.string()}).code, 1);
    EXPECT_EQ(run({"inspect", a + ".ppm", "--out", dumped.string(), "--dump-accumulator"}).code, 1);
    EXPECT_EQ(slurp(plain / "a.report.json"), slurp(dumped / "a.report.json"));
    const std::string pgm = slurp(dumped / "a.accumulator.pgm");
    EXPECT_EQ(pgm.substr(0, 3), "P5\n");
}

TEST_F(CliTest, TimingsOnRequest) {
    const std::string a = scene("a", std::nullopt);
    EXPECT_EQ(run({"inspect", a + ".ppm"}).out.find("timings_ms"), std::string::npos);
    EXPECT_NE(run({"inspect", a + ".ppm", "--timings"}).out.find("timings_ms"), std::string::npos);
}

TEST_F(CliTest, EvaluateExitCodes) {
    const std::string bad = scene("bad", DefectKind::MissingStitch);
    const std::string good = scene("good", std::nullopt);
    cli::write_text(dir / "bad.report.json", run({"inspect", bad + ".ppm"}).out);
    cli::write_text(dir / "good.report.json", run({"inspect", good + ".ppm"}).out);

    const Result perfect = run({"evaluate", (dir / "bad.report.json").string(), bad + ".truth.json"});
    EXPECT_EQ(perfect.code, 0);
    EXPECT_EQ(Json::parse(perfect.out).at("f1").get<double>(), 1.0);

    // the conforming report scored against the defective truth misses one
    const Result missed = run({"evaluate", (dir / "good.report.json").string(), bad + ".truth.json", "--iou", "0.5"});
    EXPECT_EQ(missed.code, 1);
    EXPECT_EQ(Json::parse(missed.out).at("false_negatives").get<int>(), 1);

    cli::write_text(dir / "broken.json", "{\"paths\": [");
    EXPECT_EQ(run({"evaluate", (dir / "bad.report.json").string(), (dir / "broken.json").string()}).code, 2);
    EXPECT_EQ(run({"evaluate", (dir / "broken.json").string(), bad + ".truth.json"}).code, 2);
    EXPECT_EQ(run({"evaluate", (dir / "bad.report.json").string(), bad + ".truth.json", "--iou", "0"}).code, 2);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"inspect"}).code, 2);
    EXPECT_EQ(run({"generate", "x.json"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}
