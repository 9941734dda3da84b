#pragma once

// Command-line front end.
//
//   seamcheck inspect <img>... [--config f] [--out dir] [--annotate dir]
//                              [--dump-accumulator] [--timings]
//   seamcheck generate <spec.json> --out <prefix> [--png]
//   seamcheck evaluate <report.json> <truth.json> [--iou 0.3]
//
// Exit codes: 0 pass / perfect score, 1 fail / imperfect score, 2 usage,
// I/O, config or parse error.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "seamcheck/config.hpp"
#include "seamcheck/imagekit.hpp"
#include "seamcheck/inspect.hpp"
#include "seamcheck/report.hpp"
#include "seamcheck/synthgen.hpp"

namespace seamcheck {

inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_error = 2;

namespace cli {

namespace fs = std::filesystem;

struct InspectOptions {
    std::vector<std::string> images;
    std::string config;
    std::string out_dir;
    std::string annotate_dir;
    bool dump_accumulator = false;
    bool timings = false;
};

struct GenerateOptions {
    std::string spec;
    std::string prefix;
    bool png = false;
};

struct EvaluateOptions {
    std::string report;
    std::string truth;
    double iou = 0.3;
};

inline void write_text(const fs::path& path, const std::string& text) {
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline InspectionConfig resolve_config(const std::string& flag) {
    if (!flag.empty())
        return load_config(flag);
    if (const char* env = std::getenv("SEAMCHECK_CONFIG"); env && *env)
        return load_config(env);
    return InspectionConfig{};
}

inline int inspect_one(const InspectOptions& opt, const InspectionConfig& cfg, const fs::path& image,
                       std::ostream& out) {
    const ImageRgb img = load_image(image);
    InspectionTrace trace;
    trace.collect_timings = opt.timings;
    const InspectionReport report = inspect(img, cfg, image.filename().string(), &trace);
    const std::string text = serialize_report(report, opt.timings);
    const std::string stem = image.stem().string();
    if (opt.out_dir.empty())
        out << text;
    else
        write_text(fs::path(opt.out_dir) / (stem + ".report.json"), text);
    if (!opt.annotate_dir.empty())
        write_file_bytes(fs::path(opt.annotate_dir) / (stem + ".annotated.ppm"), encode_image(annotate(img, report)));
    if (opt.dump_accumulator && trace.line_accumulator) {
        const fs::path dir = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
        write_file_bytes(dir / (stem + ".accumulator.pgm"), encode_pgm(accumulator_image(*trace.line_accumulator)));
    }
    return report.verdict == Verdict::Pass ? exit_pass : exit_fail;
}

inline int cmd_inspect(const InspectOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.images.size() > 1 && opt.out_dir.empty()) {
        err << "seamcheck: inspecting more than one image requires --out <dir>\n";
        return exit_error;
    }
    std::set<std::string> stems;
    for (const std::string& image : opt.images) {
        if (!stems.insert(fs::path(image).stem().string()).second) {
            err << "seamcheck: two inputs share the file stem '" << fs::path(image).stem().string() << "'\n";
            return exit_error;
        }
    }
    InspectionConfig cfg;
    try {
        cfg = resolve_config(opt.config);
        for (const std::string& dir : {opt.out_dir, opt.annotate_dir})
            if (!dir.empty())
                fs::create_directories(dir);
    } catch (const std::exception& e) {
        err << "seamcheck: " << e.what() << "\n";
        return exit_error;
    }

    std::vector<int> codes(opt.images.size(), exit_error);
    std::mutex err_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < opt.images.size(); i = next++) {
            try {
                codes[i] = inspect_one(opt, cfg, opt.images[i], out);
            } catch (const std::exception& e) {
                const std::lock_guard lock(err_mutex);
                err << "seamcheck: " << opt.images[i] << ": " << e.what() << "\n";
            }
        }
    };
    const std::size_t n_threads =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(opt.images.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < n_threads; ++t)
            pool.emplace_back(worker);
        worker();
    }
    return *std::max_element(codes.begin(), codes.end());
}

inline int cmd_generate(const GenerateOptions& opt, std::ostream& err) {
    try {
        const SceneSpec spec = scene_from_json(parse_json_document(read_text_file(opt.spec), opt.spec));
        const auto [img, truth] = render_scene(spec);
        const fs::path prefix(opt.prefix);
        if (prefix.has_parent_path())
            fs::create_directories(prefix.parent_path());
        const std::string base = prefix.string();
        write_file_bytes(base + (opt.png ? ".png" : ".ppm"), opt.png ? encode_png(img) : encode_image(img));
        write_text(base + ".truth.json", canonical_dump(to_json(truth)));
        return exit_pass;
    } catch (const std::exception& e) {
        err << "seamcheck: " << e.what() << "\n";
        return exit_error;
    }
}

inline int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err) {
    if (!(opt.iou > 0.0 && opt.iou <= 1.0)) {
        err << "seamcheck: --iou must lie in (0, 1]\n";
        return exit_error;
    }
    EvalResult result;
    try {
        const InspectionReport report = parse_report(read_text_file(opt.report));
        const GroundTruth truth = truth_from_json(parse_json_document(read_text_file(opt.truth), opt.truth));
        result = evaluate(report, truth, opt.iou);
    } catch (const std::exception& e) {
        err << "seamcheck: " << e.what() << "\n";
        return exit_error;
    }
    out << canonical_dump(to_json(result));
    return result.f1 == 1.0 ? exit_pass : exit_fail;
}

} // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Seam defect inspection for airbag fabric images"};
    app.require_subcommand(1);

    cli::InspectOptions inspect_opt;
    auto* inspect_cmd = app.add_subcommand("inspect", "Inspect seam images and emit JSON reports");
    inspect_cmd->add_option("images", inspect_opt.images, "Input images (PPM or PNG)")->required();
    inspect_cmd->add_option("--config", inspect_opt.config, "Inspection config (.json or .toml)");
    inspect_cmd->add_option("--out", inspect_opt.out_dir, "Directory for <stem>.report.json files");
    inspect_cmd->add_option("--annotate", inspect_opt.annotate_dir, "Directory for annotated images");
    inspect_cmd->add_flag("--dump-accumulator", inspect_opt.dump_accumulator, "Write the line accumulator as PGM");
    inspect_cmd->add_flag("--timings", inspect_opt.timings, "Include per-stage timings in the report");

    cli::GenerateOptions generate_opt;
    auto* generate_cmd = app.add_subcommand("generate", "Render a synthetic scene and its ground truth");
    generate_cmd->add_option("spec", generate_opt.spec, "Scene spec JSON")->required();
    generate_cmd->add_option("--out", generate_opt.prefix, "Output prefix")->required();
    generate_cmd->add_flag("--png", generate_opt.png, "Write PNG instead of PPM");

    cli::EvaluateOptions evaluate_opt;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a report against ground truth");
    evaluate_cmd->add_option("report", evaluate_opt.report, "Report JSON")->required();
    evaluate_cmd->add_option("truth", evaluate_opt.truth, "Ground-truth JSON")->required();
    evaluate_cmd->add_option("--iou", evaluate_opt.iou, "Minimum span IoU for a match");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return e.get_exit_code() == 0 ? exit_pass : exit_error;
    }
    if (*inspect_cmd)
        return cli::cmd_inspect(inspect_opt, out, err);
    if (*generate_cmd)
        return cli::cmd_generate(generate_opt, err);
    return cli::cmd_evaluate(evaluate_opt, out, err);
}

} // namespace seamcheck
