#pragma once

// End-to-end inspection: grayscale -> Gaussian smoothing -> Otsu ->
// binarization -> Hough path recognition -> 5x1 color sampling along each
// path -> stitch-rule detectors -> report. Also renders the annotated image.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "seamcheck/binarization.hpp"
#include "seamcheck/color.hpp"
#include "seamcheck/config.hpp"
#include "seamcheck/error.hpp"
#include "seamcheck/hough.hpp"
#include "seamcheck/imagekit.hpp"
#include "seamcheck/stitch.hpp"

namespace seamcheck {

enum class Verdict { Pass, Fail };

inline std::string_view to_string(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }

struct InspectedPath {
    SeamPath path;
    StitchRule rule;
    std::uint32_t score = 0;
};

struct InspectionReport {
    std::string image_id;
    int image_width = 0;
    int image_height = 0;
    std::optional<int> threshold;         // Otsu threshold when binarization succeeded
    std::vector<InspectedPath> paths;     // descending Hough score
    std::vector<Defect> defects;          // by path, then span start
    std::vector<std::string> diagnostics; // stage failures and merged duplicates
    Verdict verdict = Verdict::Pass;
    InspectionConfig params;
    std::map<std::string, double> timings_ms; // per stage, filled only on request
};

/// Optional side outputs of one inspection run.
struct InspectionTrace {
    bool collect_timings = false;
    std::optional<LineAccumulator> line_accumulator;
    std::optional<ThresholdResult> threshold;
};

namespace detail {

class StageTimer {
public:
    StageTimer(InspectionReport& report, bool enabled) : report_(report), enabled_(enabled) {}

    void mark(const std::string& stage) {
        if (!enabled_)
            return;
        const auto now = std::chrono::steady_clock::now();
        report_.timings_ms[stage] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }

private:
    InspectionReport& report_;
    bool enabled_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline double angle_between_lines(double a, double b) {
    double d = std::fabs(a - b);
    return std::min(d, pi - d);
}

inline Point2 midpoint(const LinearPath& p) { return {(p.p0.x + p.p1.x) / 2.0, (p.p0.y + p.p1.y) / 2.0}; }

inline const StitchRule& choose_rule(const InspectionConfig& cfg, const std::string& selection, const SampleSequence& seq) {
    if (selection != "auto")
        return *cfg.find_rule(selection);
    std::array<std::size_t, 4> counts{};
    for (const Sample& s : seq.samples)
        ++counts[static_cast<std::size_t>(s.cls)];
    const StitchRule* best = &cfg.rules.front();
    std::size_t best_count = 0;
    for (const StitchRule& r : cfg.rules) {
        const std::size_t n = counts[static_cast<std::size_t>(r.required()[1])];
        if (n > best_count) {
            best = &r;
            best_count = n;
        }
    }
    return *best;
}

struct Candidate {
    SeamPath path;
    std::uint32_t score = 0;
    double merge_distance = 0.0;
};

inline void line_candidates(const BinaryImage& bin, std::span<const PixelPos> fg, const InspectionConfig& cfg,
                            std::vector<Candidate>& out, InspectionReport& report, InspectionTrace* trace) {
    LineAccumulator acc;
    try {
        acc = hough_lines(bin, cfg.lines.theta_step_deg * pi / 180.0, cfg.lines.rho_step);
    } catch (const Error& e) {
        report.diagnostics.push_back(std::string("line search skipped: ") + e.what());
        return;
    }
    const std::vector<LinePeak> peaks = extract_line_peaks(acc, cfg.lines.vote_threshold, cfg.lines.nms_radius);
    if (trace)
        trace->line_accumulator = std::move(acc);

    // Candidates beyond a few times the path budget are only ever duplicates.
    const std::size_t budget = 4 * static_cast<std::size_t>(cfg.lines.max_paths);
    for (std::size_t i = 0; i < peaks.size() && i < budget; ++i) {
        const LineParams refined = refine_line(fg, peaks[i].line, cfg.lines.refine_band);
        try {
            LinearPath path = line_extent(bin, refined, cfg.lines.gap_tolerance, cfg.lines.min_run);
            path.score = peaks[i].votes;
            if (path.support < cfg.lines.min_support)
                continue;
            out.push_back({path, path.score, cfg.lines.duplicate_distance});
        } catch (const Error&) {
            // a peak without a supported segment is not a seam
        }
    }
}

inline void circle_candidates(const BinaryImage& bin, std::span<const PixelPos> fg, const InspectionConfig& cfg,
                              std::vector<Candidate>& out, InspectionReport& report) {
    std::vector<CircleParams> found;
    try {
        found = hough_circles(bin, cfg.circles.r_min, cfg.circles.r_max, cfg.circles.r_step, cfg.circles.vote_fraction);
    } catch (const Error& e) {
        report.diagnostics.push_back(std::string("circle search skipped: ") + e.what());
        return;
    }
    const std::size_t budget = 4 * static_cast<std::size_t>(cfg.circles.max_paths);
    for (std::size_t i = 0; i < found.size() && i < budget; ++i) {
        CircleParams refined = refine_circle(fg, found[i], cfg.circles.refine_band);
        refined.score = found[i].score;
        refined.support = found[i].support;
        try {
            out.push_back({circle_extent(bin, refined, cfg.circles.arc_gap_fraction), refined.score,
                           cfg.circles.duplicate_distance});
        } catch (const Error&) {
        }
    }
}

/// Fraction of points along `path` (1 px spacing) lying within `distance`
/// of some accepted path.
inline double overlap_fraction(const SeamPath& path, const std::vector<InspectedPath>& accepted, double distance) {
    const double length = path_length(path);
    const auto n = static_cast<long>(std::floor(length)) + 1;
    long near = 0;
    for (long k = 0; k < n; ++k) {
        const Point2 p = point_at(path, std::min(length, static_cast<double>(k)));
        for (const InspectedPath& a : accepted) {
            if (distance_to_path(a.path, p) < distance) {
                ++near;
                break;
            }
        }
    }
    return static_cast<double>(near) / static_cast<double>(n);
}

/// Longest candidates are accepted first. A later candidate that mostly runs
/// along an accepted path (a chord of a thick arc, a partial circle inside a
/// dense stretch, a second peak of the same line) is merged into it.
inline void select_paths(std::vector<Candidate> candidates, const InspectionConfig& cfg, InspectionReport& report) {
    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        const double la = path_length(a.path);
        const double lb = path_length(b.path);
        if (la != lb)
            return la > lb;
        return a.score > b.score;
    });
    const double dup_angle = cfg.lines.duplicate_angle_deg * pi / 180.0;
    int n_lines = 0;
    int n_circles = 0;
    int merged = 0;
    for (Candidate& c : candidates) {
        const bool linear = std::holds_alternative<LinearPath>(c.path);
        if ((linear ? n_lines : n_circles) >= (linear ? cfg.lines.max_paths : cfg.circles.max_paths))
            continue;
        bool duplicate = overlap_fraction(c.path, report.paths, c.merge_distance) >= 0.5;
        if (!duplicate && linear) {
            const auto& lin = std::get<LinearPath>(c.path);
            for (const InspectedPath& a : report.paths) {
                const auto* other = std::get_if<LinearPath>(&a.path);
                if (other && angle_between_lines(other->line.theta, lin.line.theta) < dup_angle &&
                    std::fabs(signed_distance(other->line, midpoint(lin))) < cfg.lines.duplicate_distance)
                    duplicate = true;
            }
        }
        if (duplicate) {
            ++merged;
            continue;
        }
        (linear ? n_lines : n_circles) += 1;
        report.paths.push_back({std::move(c.path), {}, c.score});
    }
    if (merged > 0)
        report.diagnostics.push_back(std::to_string(merged) + " near-duplicate Hough candidate(s) merged into detected paths");
}

} // namespace detail

/// Runs the full pipeline. Stage failures (degenerate histogram, no
/// foreground, no supported path) produce a Fail report with a diagnostic
/// instead of an exception; only an invalid configuration throws.
inline InspectionReport inspect(const ImageRgb& img, const InspectionConfig& cfg, std::string image_id = {},
                                InspectionTrace* trace = nullptr) {
    cfg.validate();
    InspectionReport report;
    report.image_id = std::move(image_id);
    report.image_width = img.width();
    report.image_height = img.height();
    report.params = cfg;
    detail::StageTimer timer(report, trace && trace->collect_timings);

    auto fail = [&](const std::string& why) {
        report.diagnostics.push_back("no seam path detected: " + why);
        report.verdict = Verdict::Fail;
        return report;
    };

    BinaryImage bin;
    try {
        const ImageGray gray = to_grayscale(img);
        timer.mark("grayscale");
        const ImageGray smooth = gaussian_smooth(gray, cfg.smooth_sigma, cfg.smooth_radius);
        timer.mark("smoothing");
        const ThresholdResult th = otsu_threshold(histogram(smooth));
        if (trace)
            trace->threshold = th;
        report.threshold = th.t;
        const double contrast = th.split.m2 - th.split.m1;
        if (contrast < cfg.min_contrast) {
            std::ostringstream os;
            os.precision(4);
            os << "class contrast " << contrast << " below min_contrast " << cfg.min_contrast;
            return fail(os.str());
        }
        bin = binarize(smooth, th.t, cfg.polarity);
        timer.mark("binarization");
    } catch (const Error& e) {
        return fail(e.what());
    }

    const std::vector<PixelPos> fg = foreground_pixels(bin);
    std::vector<detail::Candidate> candidates;
    if (cfg.geometry != GeometryMode::Circles)
        detail::line_candidates(bin, fg, cfg, candidates, report, trace);
    timer.mark("hough_lines");
    if (cfg.geometry != GeometryMode::Lines)
        detail::circle_candidates(bin, fg, cfg, candidates, report);
    timer.mark("hough_circles");
    detail::select_paths(std::move(candidates), cfg, report);

    std::stable_sort(report.paths.begin(), report.paths.end(),
                     [](const InspectedPath& a, const InspectedPath& b) { return a.score > b.score; });
    if (report.paths.empty())
        return fail("no Hough peak with a supported path");

    std::vector<InspectedPath> kept;
    for (InspectedPath& ip : report.paths) {
        SampleSequence seq;
        try {
            seq = sample_path(img, ip.path, cfg.sample_step, cfg.bands);
        } catch (const Error& e) {
            report.diagnostics.push_back(std::string("path dropped: ") + e.what());
            continue;
        }
        const bool linear = std::holds_alternative<LinearPath>(ip.path);
        ip.rule = detail::choose_rule(cfg, linear ? cfg.line_rule : cfg.circle_rule, seq);
        const int index = static_cast<int>(kept.size());
        const std::vector<Defect> missing = detect_missing(seq, ip.rule);
        for (const std::vector<Defect>& found :
             {missing, detect_skipped(seq, ip.rule, missing), detect_superimposed(seq, ip.rule)}) {
            for (Defect d : found) {
                d.path_index = index;
                d.bbox = span_bbox(seq, d.span_lo, d.span_hi, img.width(), img.height());
                report.defects.push_back(std::move(d));
            }
        }
        kept.push_back(std::move(ip));
    }
    report.paths = std::move(kept);
    timer.mark("stitch_rules");
    if (report.paths.empty())
        return fail("every detected path fell outside the image");

    std::stable_sort(report.defects.begin(), report.defects.end(), [](const Defect& a, const Defect& b) {
        return std::tie(a.path_index, a.span_lo, a.kind) < std::tie(b.path_index, b.span_lo, b.kind);
    });
    report.verdict = report.defects.empty() ? Verdict::Pass : Verdict::Fail;
    return report;
}

namespace detail {

inline void put_pixel(ImageRgb& img, double x, double y, Rgb color) {
    const int ix = static_cast<int>(std::lround(x));
    const int iy = static_cast<int>(std::lround(y));
    if (img.contains(ix, iy))
        img.at(ix, iy) = color;
}

} // namespace detail

/// Paths are drawn 1 px wide in pure green, then every defect box is
/// outlined in pure red on top.
inline ImageRgb annotate(const ImageRgb& img, const InspectionReport& report) {
    ImageRgb out = img;
    constexpr Rgb green{0, 255, 0};
    constexpr Rgb red{255, 0, 0};
    for (const InspectedPath& ip : report.paths) {
        const double length = path_length(ip.path);
        const auto n = static_cast<long>(std::ceil(length / 0.5));
        for (long k = 0; k <= n; ++k) {
            const Point2 p = point_at(ip.path, std::min(length, k * 0.5));
            detail::put_pixel(out, p.x, p.y, green);
        }
    }
    for (const Defect& d : report.defects) {
        for (int x = d.bbox.x0; x <= d.bbox.x1; ++x) {
            detail::put_pixel(out, x, d.bbox.y0, red);
            detail::put_pixel(out, x, d.bbox.y1, red);
        }
        for (int y = d.bbox.y0; y <= d.bbox.y1; ++y) {
            detail::put_pixel(out, d.bbox.x0, y, red);
            detail::put_pixel(out, d.bbox.x1, y, red);
        }
    }
    return out;
}

} // namespace seamcheck
