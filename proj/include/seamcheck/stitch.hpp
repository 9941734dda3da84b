#pragma once

// Path sampling with a 5x1 perpendicular window, and the three stitch-rule
// detectors (missing, skipped, superimposed).

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "seamcheck/color.hpp"
#include "seamcheck/error.hpp"
#include "seamcheck/hough.hpp"
#include "seamcheck/imagekit.hpp"

namespace seamcheck {

enum class StitchType { Lockstitch301, Chainstitch401 };

inline std::string_view to_string(StitchType t) {
    return t == StitchType::Lockstitch301 ? "lockstitch_301" : "chainstitch_401";
}

inline std::optional<StitchType> stitch_type_from_string(std::string_view s) {
    if (s == "lockstitch_301")
        return StitchType::Lockstitch301;
    if (s == "chainstitch_401")
        return StitchType::Chainstitch401;
    return std::nullopt;
}

/// Lockstitch: needle + bobbin. Chainstitch: needle + looper.
inline std::array<ColorClass, 2> required_colors(StitchType t) {
    if (t == StitchType::Lockstitch301)
        return {ColorClass::NeedleRed, ColorClass::BobbinGreen};
    return {ColorClass::NeedleRed, ColorClass::LooperOrange};
}

struct StitchRule {
    std::string name = "lockstitch_301";
    StitchType stitch_type = StitchType::Lockstitch301;
    double pitch = 12.0;             // nominal stitch spacing, px along the path
    double max_gap_stitches = 1.5;   // background runs longer than this many pitches are missing stitches
    double coverage_max = 1.5;       // coverage above nominal_coverage * coverage_max is a superimposed seam
    double nominal_coverage = 0.5;   // thread fraction of a conforming seam
    int min_consecutive = 1;         // marked pitch windows needed for a skipped stitch

    std::array<ColorClass, 2> required() const { return required_colors(stitch_type); }

    void validate() const {
        if (!(pitch > 0.0))
            throw Error(ErrorKind::ConfigInvalid, "rule " + name + ": pitch must be positive");
        if (!(max_gap_stitches >= 1.0))
            throw Error(ErrorKind::ConfigInvalid, "rule " + name + ": max_gap_stitches must be >= 1");
        if (!(coverage_max > 1.0))
            throw Error(ErrorKind::ConfigInvalid, "rule " + name + ": coverage_max must be > 1");
        if (!(nominal_coverage > 0.0) || nominal_coverage > 1.0)
            throw Error(ErrorKind::ConfigInvalid, "rule " + name + ": nominal_coverage must lie in (0, 1]");
        if (min_consecutive < 1)
            throw Error(ErrorKind::ConfigInvalid, "rule " + name + ": min_consecutive must be >= 1");
    }

    friend bool operator==(const StitchRule&, const StitchRule&) = default;
};

inline StitchRule default_rule(StitchType t) {
    StitchRule r;
    r.stitch_type = t;
    r.name = std::string(to_string(t));
    return r;
}

struct Sample {
    Point2 position;
    double arclength = 0.0;
    ColorClass cls = ColorClass::Background;
};

struct SampleSequence {
    SeamPath path;
    double step = 1.0;
    std::vector<Sample> samples;
};

inline bool is_thread(ColorClass c) { return c != ColorClass::Background; }

namespace detail {

inline bool inside(const ImageRgb& img, Point2 p) {
    return img.contains(static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y)));
}

} // namespace detail

/// Majority thread class of a 5-pixel window ordered center-out
/// (0, -1, +1, -2, +2). Ties go to the tied class met first in that order;
/// an all-background window is Background.
inline ColorClass window_majority(std::span<const ColorClass, 5> center_out) {
    std::array<int, 4> counts{};
    for (ColorClass c : center_out)
        ++counts[static_cast<std::size_t>(c)];
    int best = 0;
    for (ColorClass c : center_out)
        if (is_thread(c))
            best = std::max(best, counts[static_cast<std::size_t>(c)]);
    if (best == 0)
        return ColorClass::Background;
    for (ColorClass c : center_out)
        if (is_thread(c) && counts[static_cast<std::size_t>(c)] == best)
            return c;
    return ColorClass::Background;
}

/// Samples the path every `step` px of arclength. Each sample classifies the
/// 5 pixels centered on the path point along the path normal and keeps their
/// majority thread class. Samples whose center falls outside the image are
/// dropped from both ends; interior pixels outside the image count as
/// background.
inline SampleSequence sample_path(const ImageRgb& img, const SeamPath& path, double step, std::span<const ColorBand> bands) {
    if (!(step > 0.0))
        throw Error(ErrorKind::InvalidArgument, "sample step must be positive");
    const double length = path_length(path);
    const auto count = static_cast<std::size_t>(std::floor(length / step + 1e-9)) + 1;

    std::size_t first = count;
    std::size_t last = 0;
    for (std::size_t k = 0; k < count; ++k) {
        if (detail::inside(img, point_at(path, k * step))) {
            first = std::min(first, k);
            last = k;
        }
    }
    if (first == count)
        throw Error(ErrorKind::PathOutsideImage, "no sample point lies inside the image");

    SampleSequence seq{path, step, {}};
    seq.samples.reserve(last - first + 1);
    static constexpr int offsets[5] = {0, -1, 1, -2, 2};
    for (std::size_t k = first; k <= last; ++k) {
        const double s = k * step;
        const Point2 p = point_at(path, s);
        const Point2 n = normal_at(path, s);
        std::array<ColorClass, 5> window{};
        for (int i = 0; i < 5; ++i) {
            const int x = static_cast<int>(std::lround(p.x + offsets[i] * n.x));
            const int y = static_cast<int>(std::lround(p.y + offsets[i] * n.y));
            window[static_cast<std::size_t>(i)] =
                img.contains(x, y) ? classify_pixel(rgb_to_hsv(img.at(x, y)), bands) : ColorClass::Background;
        }
        seq.samples.push_back({p, s, window_majority(window)});
    }
    return seq;
}

enum class DefectKind { MissingStitch, SkippedStitch, SuperimposedSeam };

inline std::string_view to_string(DefectKind k) {
    switch (k) {
    case DefectKind::MissingStitch: return "missing_stitch";
    case DefectKind::SkippedStitch: return "skipped_stitch";
    case DefectKind::SuperimposedSeam: return "superimposed_seam";
    }
    return "missing_stitch";
}

inline std::optional<DefectKind> defect_kind_from_string(std::string_view s) {
    for (DefectKind k : {DefectKind::MissingStitch, DefectKind::SkippedStitch, DefectKind::SuperimposedSeam})
        if (to_string(k) == s)
            return k;
    return std::nullopt;
}

/// Inclusive pixel rectangle.
struct BBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    friend bool operator==(const BBox&, const BBox&) = default;
};

struct Defect {
    DefectKind kind = DefectKind::MissingStitch;
    int path_index = 0;
    double span_lo = 0.0; // arclength interval on the path, px
    double span_hi = 0.0;
    BBox bbox;
    std::string detail;

    friend bool operator==(const Defect&, const Defect&) = default;
};

namespace detail {

inline std::string format_px(double v) {
    std::ostringstream os;
    os.precision(1);
    os << std::fixed << v;
    return os.str();
}

// Arclength interval covered by samples [i, j], each owning +-step/2,
// clipped to the path.
inline std::pair<double, double> sample_span(const SampleSequence& seq, std::size_t i, std::size_t j) {
    const double length = path_length(seq.path);
    return {std::max(0.0, seq.samples[i].arclength - seq.step / 2.0),
            std::min(length, seq.samples[j].arclength + seq.step / 2.0)};
}

} // namespace detail

/// Merges same-kind defects whose spans are separated by less than `pitch`.
inline std::vector<Defect> merge_close(std::vector<Defect> defects, double pitch) {
    std::sort(defects.begin(), defects.end(), [](const Defect& a, const Defect& b) { return a.span_lo < b.span_lo; });
    std::vector<Defect> merged;
    for (Defect& d : defects) {
        if (!merged.empty() && merged.back().kind == d.kind && d.span_lo - merged.back().span_hi < pitch) {
            merged.back().span_hi = std::max(merged.back().span_hi, d.span_hi);
            merged.back().detail += "; " + d.detail;
        } else {
            merged.push_back(std::move(d));
        }
    }
    return merged;
}

/// Every maximal background run longer than max_gap_stitches * pitch.
inline std::vector<Defect> detect_missing(const SampleSequence& seq, const StitchRule& rule) {
    std::vector<Defect> out;
    const double limit = rule.max_gap_stitches * rule.pitch;
    const auto& s = seq.samples;
    std::size_t i = 0;
    while (i < s.size()) {
        if (is_thread(s[i].cls)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < s.size() && !is_thread(s[j + 1].cls))
            ++j;
        const double extent = static_cast<double>(j - i + 1) * seq.step;
        if (extent > limit) {
            const auto [lo, hi] = detail::sample_span(seq, i, j);
            out.push_back({DefectKind::MissingStitch, 0, lo, hi, {},
                           "no thread over " + detail::format_px(extent) + " px (limit " + detail::format_px(limit) + " px)"});
        }
        i = j + 1;
    }
    return merge_close(std::move(out), rule.pitch);
}

/// Splits the sequence into consecutive pitch-long windows from arclength 0.
/// A window showing thread but lacking one of the rule's two colors is
/// marked; runs of at least min_consecutive marked windows are skipped
/// stitches. A trailing window shorter than one pitch is not judged.
/// Windows overlapping a span in `missing` belong to that gap and are not
/// judged here.
inline std::vector<Defect> detect_skipped(const SampleSequence& seq, const StitchRule& rule,
                                          std::span<const Defect> missing = {}) {
    std::vector<Defect> out;
    if (seq.samples.empty())
        return out;
    const double length = path_length(seq.path);
    const auto required = rule.required();

    struct Window {
        bool thread = false;
        bool first = false;
        bool second = false;
    };
    std::map<long, Window> windows;
    for (const Sample& smp : seq.samples) {
        const long k = static_cast<long>(std::floor(smp.arclength / rule.pitch + 1e-9));
        Window& w = windows[k];
        w.thread |= is_thread(smp.cls);
        w.first |= smp.cls == required[0];
        w.second |= smp.cls == required[1];
    }

    auto judged = [&](long k) {
        const double lo = k * rule.pitch;
        const double hi = (k + 1) * rule.pitch;
        if (hi - seq.step > length + 1e-9) // the window's last sample is missing
            return false;
        return std::none_of(missing.begin(), missing.end(), [&](const Defect& d) { return d.span_lo < hi && d.span_hi > lo; });
    };
    auto marked = [&](const Window& w) { return w.thread && !(w.first && w.second); };

    std::optional<long> run_start;
    long run_end = 0;
    auto flush = [&]() {
        if (!run_start)
            return;
        const long n = run_end - *run_start + 1;
        if (n >= rule.min_consecutive) {
            const double lo = std::max(0.0, *run_start * rule.pitch);
            const double hi = std::min(length, (run_end + 1) * rule.pitch);
            out.push_back({DefectKind::SkippedStitch, 0, lo, hi, {},
                           std::to_string(n) + " stitch window(s) missing " +
                               std::string(to_string(required[0])) + " or " + std::string(to_string(required[1]))});
        }
        run_start.reset();
    };
    for (const auto& [k, w] : windows) {
        if (judged(k) && marked(w)) {
            if (run_start && k == run_end + 1) {
                run_end = k;
            } else {
                flush();
                run_start = k;
                run_end = k;
            }
        } else {
            flush();
        }
    }
    flush();
    return merge_close(std::move(out), rule.pitch);
}

/// Thread coverage over sliding windows of 4 pitches stepped by one pitch;
/// windows above nominal_coverage * coverage_max are merged, and each merged
/// region is tightened to the samples whose own one-pitch neighbourhood is
/// still above that limit.
inline std::vector<Defect> detect_superimposed(const SampleSequence& seq, const StitchRule& rule) {
    std::vector<Defect> out;
    const auto& s = seq.samples;
    if (s.empty())
        return out;
    const double limit = rule.nominal_coverage * rule.coverage_max;
    const double length = path_length(seq.path);
    const double span = 4.0 * rule.pitch;

    // Prefix counts of thread samples for O(1) window coverage.
    std::vector<std::size_t> prefix(s.size() + 1, 0);
    for (std::size_t i = 0; i < s.size(); ++i)
        prefix[i + 1] = prefix[i] + (is_thread(s[i].cls) ? 1 : 0);
    auto index_at = [&](double arclength) {
        return static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), arclength - 1e-9,
                                                         [](const Sample& a, double v) { return a.arclength < v; }) -
                                        s.begin());
    };
    auto coverage = [&](std::size_t i, std::size_t j) { // samples [i, j)
        return j > i ? static_cast<double>(prefix[j] - prefix[i]) / static_cast<double>(j - i) : 0.0;
    };

    struct Region {
        std::size_t i;
        std::size_t j; // exclusive
    };
    std::vector<Region> regions;
    auto flag = [&](std::size_t i, std::size_t j) {
        if (coverage(i, j) <= limit)
            return;
        if (!regions.empty() && i <= regions.back().j)
            regions.back().j = std::max(regions.back().j, j);
        else
            regions.push_back({i, j});
    };
    if (length < span) {
        flag(0, s.size());
    } else {
        for (double start = 0.0; start + span <= length + seq.step / 2.0 + 1e-9; start += rule.pitch)
            flag(index_at(start), index_at(start + span));
    }

    for (const Region& r : regions) {
        std::optional<std::size_t> first;
        std::size_t last = 0;
        for (std::size_t k = r.i; k < r.j; ++k) {
            const std::size_t lo = index_at(s[k].arclength - rule.pitch / 2.0);
            const std::size_t hi = index_at(s[k].arclength + rule.pitch / 2.0);
            if (coverage(lo, hi) > limit) {
                if (!first)
                    first = k;
                last = k;
            }
        }
        const std::size_t a = first.value_or(r.i);
        const std::size_t b = first ? last : r.j - 1;
        const auto [lo, hi] = detail::sample_span(seq, a, b);
        std::ostringstream detail_text;
        detail_text.precision(3);
        detail_text << "thread coverage " << coverage(r.i, r.j) << " exceeds " << limit;
        out.push_back({DefectKind::SuperimposedSeam, 0, lo, hi, {}, detail_text.str()});
    }
    return merge_close(std::move(out), rule.pitch);
}

/// Pixel rectangle around the samples inside [lo, hi], padded by the
/// half-width of the sampling window and clipped to the image.
inline BBox span_bbox(const SampleSequence& seq, double lo, double hi, int width, int height) {
    double x0 = 1e18, y0 = 1e18, x1 = -1e18, y1 = -1e18;
    auto include = [&](Point2 p) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    };
    for (const Sample& smp : seq.samples)
        if (smp.arclength >= lo - 1e-9 && smp.arclength <= hi + 1e-9)
            include(smp.position);
    include(point_at(seq.path, lo));
    include(point_at(seq.path, hi));
    const double pad = 2.0;
    BBox box;
    box.x0 = std::clamp(static_cast<int>(std::floor(x0 - pad)), 0, width - 1);
    box.y0 = std::clamp(static_cast<int>(std::floor(y0 - pad)), 0, height - 1);
    box.x1 = std::clamp(static_cast<int>(std::ceil(x1 + pad)), 0, width - 1);
    box.y1 = std::clamp(static_cast<int>(std::ceil(y1 + pad)), 0, height - 1);
    return box;
}

} // namespace seamcheck
