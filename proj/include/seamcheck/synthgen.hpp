#pragma once

// Deterministic synthetic seam scenes with injected defects, their ground
// truth, and scoring of inspection reports against that truth.
//
// Stitch rendering along a path, with phase = (s mod pitch) / pitch:
//   conforming    [0, .25) needle color, [.25, .5) second color, rest bare
//   skipped       [0, .5) needle color only
//   missing       nothing
//   superimposed  the conforming pattern drawn again half a pitch later
// Fabric noise is additive per channel, z ~ Irwin-Hall(12) from splitmix64.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "seamcheck/config.hpp"
#include "seamcheck/error.hpp"
#include "seamcheck/hough.hpp"
#include "seamcheck/imagekit.hpp"
#include "seamcheck/inspect.hpp"
#include "seamcheck/stitch.hpp"

namespace seamcheck {

/// splitmix64; the exact sequence is part of the scene format.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Approximately standard normal: sum of twelve 16-bit uniforms, centered
    /// and scaled. Pure integer arithmetic up to the final division.
    double next_normal() {
        std::int64_t sum = 0;
        for (int k = 0; k < 3; ++k) {
            const std::uint64_t r = next();
            for (int part = 0; part < 4; ++part)
                sum += static_cast<std::int64_t>((r >> (16 * part)) & 0xFFFF);
        }
        return static_cast<double>(sum - 12 * 32768 + 6) / 65536.0;
    }

private:
    std::uint64_t state_;
};

struct LinearGeometry {
    Point2 p0;
    Point2 p1;
};

struct CircularGeometry {
    Point2 center;
    double radius = 0.0;
    double arc_start = 0.0;
    double arc_end = 2.0 * pi;
};

using SceneGeometry = std::variant<LinearGeometry, CircularGeometry>;

struct InjectedDefect {
    DefectKind kind = DefectKind::MissingStitch;
    double span_lo = 0.0;
    double span_hi = 0.0;
};

struct ScenePath {
    SceneGeometry geometry;
    StitchRule rule;
    double thread_width = 5.0;
    std::vector<InjectedDefect> injected;
};

struct ThreadColors {
    Rgb needle{190, 25, 30};
    Rgb bobbin{30, 150, 60};
    Rgb looper{235, 120, 10};

    Rgb of(ColorClass c) const {
        switch (c) {
        case ColorClass::NeedleRed: return needle;
        case ColorClass::BobbinGreen: return bobbin;
        case ColorClass::LooperOrange: return looper;
        case ColorClass::Background: break;
        }
        return needle;
    }
};

struct SceneSpec {
    int width = 320;
    int height = 240;
    Rgb fabric_rgb{210, 210, 210};
    double fabric_noise_sigma = 0.0;
    std::uint64_t rng_seed = 1;
    ThreadColors colors;
    std::vector<ScenePath> paths;
};

struct GroundTruthPath {
    SceneGeometry geometry;
    StitchRule rule;
    std::vector<InjectedDefect> injected;
};

struct GroundTruth {
    int width = 0;
    int height = 0;
    std::vector<GroundTruthPath> paths;
};

inline double geometry_length(const SceneGeometry& g) {
    if (const auto* lin = std::get_if<LinearGeometry>(&g))
        return std::hypot(lin->p1.x - lin->p0.x, lin->p1.y - lin->p0.y);
    const auto& c = std::get<CircularGeometry>(g);
    return c.radius * (c.arc_end - c.arc_start);
}

inline Point2 geometry_point(const SceneGeometry& g, double s) {
    if (const auto* lin = std::get_if<LinearGeometry>(&g)) {
        const double len = geometry_length(g);
        return {lin->p0.x + (lin->p1.x - lin->p0.x) * s / len, lin->p0.y + (lin->p1.y - lin->p0.y) * s / len};
    }
    const auto& c = std::get<CircularGeometry>(g);
    const double a = c.arc_start + s / c.radius;
    return {c.center.x + c.radius * std::cos(a), c.center.y + c.radius * std::sin(a)};
}

inline void validate(const SceneSpec& spec) {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::SpecInvalid, msg); };
    if (spec.width < 1 || spec.height < 1)
        fail("canvas dimensions must be positive");
    if (spec.fabric_noise_sigma < 0.0)
        fail("fabric_noise_sigma must be >= 0");
    auto on_canvas = [&](Point2 p) {
        return p.x >= 0.0 && p.y >= 0.0 && p.x <= spec.width - 1.0 && p.y <= spec.height - 1.0;
    };
    for (std::size_t i = 0; i < spec.paths.size(); ++i) {
        const ScenePath& path = spec.paths[i];
        const std::string where = "path " + std::to_string(i) + ": ";
        if (path.thread_width < 3.0)
            fail(where + "thread_width must be >= 3");
        try {
            path.rule.validate();
        } catch (const Error& e) {
            fail(where + e.what());
        }
        if (const auto* c = std::get_if<CircularGeometry>(&path.geometry)) {
            if (!(c->radius > 0.0))
                fail(where + "radius must be positive");
            if (!(c->arc_end > c->arc_start) || c->arc_end - c->arc_start > 2.0 * pi + 1e-9)
                fail(where + "arc must satisfy start < end <= start + 2 pi");
        }
        const double length = geometry_length(path.geometry);
        if (!(length > 0.0))
            fail(where + "path has zero length");
        for (double s = 0.0; s <= length; s += 1.0)
            if (!on_canvas(geometry_point(path.geometry, s)))
                fail(where + "path leaves the canvas");
        if (!on_canvas(geometry_point(path.geometry, length)))
            fail(where + "path leaves the canvas");
        std::vector<InjectedDefect> spans = path.injected;
        std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) { return a.span_lo < b.span_lo; });
        for (std::size_t k = 0; k < spans.size(); ++k) {
            if (!(spans[k].span_lo < spans[k].span_hi) || spans[k].span_lo < 0.0 || spans[k].span_hi > length + 1e-9)
                fail(where + "injected span must satisfy 0 <= lo < hi <= path length");
            if (k > 0 && spans[k].span_lo < spans[k - 1].span_hi)
                fail(where + "injected spans overlap");
        }
    }
}

namespace detail {

inline std::optional<ColorClass> stitch_class_at(double s, const ScenePath& path) {
    std::optional<DefectKind> kind;
    for (const InjectedDefect& d : path.injected)
        if (s >= d.span_lo && s < d.span_hi)
            kind = d.kind;
    const auto colors = path.rule.required();
    const double phase = std::fmod(s, path.rule.pitch) / path.rule.pitch;
    if (!kind) {
        if (phase < 0.25)
            return colors[0];
        if (phase < 0.5)
            return colors[1];
        return std::nullopt;
    }
    switch (*kind) {
    case DefectKind::MissingStitch:
        return std::nullopt;
    case DefectKind::SkippedStitch:
        return phase < 0.5 ? std::optional(colors[0]) : std::nullopt;
    case DefectKind::SuperimposedSeam:
        return (phase < 0.25 || (phase >= 0.5 && phase < 0.75)) ? colors[0] : colors[1];
    }
    return std::nullopt;
}

// Arclength and signed offset of pixel center p in the frame of the path,
// or nullopt when p projects outside the path's extent.
inline std::optional<std::pair<double, double>> path_frame(const SceneGeometry& g, Point2 p) {
    if (const auto* lin = std::get_if<LinearGeometry>(&g)) {
        const double len = geometry_length(g);
        const double ux = (lin->p1.x - lin->p0.x) / len;
        const double uy = (lin->p1.y - lin->p0.y) / len;
        const double dx = p.x - lin->p0.x;
        const double dy = p.y - lin->p0.y;
        const double s = dx * ux + dy * uy;
        if (s < 0.0 || s >= len)
            return std::nullopt;
        return std::pair{s, -dx * uy + dy * ux};
    }
    const auto& c = std::get<CircularGeometry>(g);
    const double dx = p.x - c.center.x;
    const double dy = p.y - c.center.y;
    double a = std::atan2(dy, dx) - c.arc_start;
    a = std::fmod(a, 2.0 * pi);
    if (a < 0.0)
        a += 2.0 * pi;
    const double s = c.radius * a;
    if (s >= geometry_length(g))
        return std::nullopt;
    return std::pair{s, std::hypot(dx, dy) - c.radius};
}

} // namespace detail

/// Renders the scene and returns its ground truth. Bit-identical for a fixed
/// spec (including the seed).
inline std::pair<ImageRgb, GroundTruth> render_scene(const SceneSpec& spec) {
    validate(spec);
    ImageRgb img(spec.width, spec.height, spec.fabric_rgb);
    if (spec.fabric_noise_sigma > 0.0) {
        SplitMix64 rng(spec.rng_seed);
        auto noisy = [&](std::uint8_t base) {
            const double v = base + spec.fabric_noise_sigma * rng.next_normal();
            return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        };
        for (Rgb& p : img.pixels()) {
            p.r = noisy(p.r);
            p.g = noisy(p.g);
            p.b = noisy(p.b);
        }
    }

    GroundTruth truth{spec.width, spec.height, {}};
    for (const ScenePath& path : spec.paths) {
        const double half = path.thread_width / 2.0;
        double x0, y0, x1, y1;
        if (const auto* lin = std::get_if<LinearGeometry>(&path.geometry)) {
            x0 = std::min(lin->p0.x, lin->p1.x);
            x1 = std::max(lin->p0.x, lin->p1.x);
            y0 = std::min(lin->p0.y, lin->p1.y);
            y1 = std::max(lin->p0.y, lin->p1.y);
        } else {
            const auto& c = std::get<CircularGeometry>(path.geometry);
            x0 = c.center.x - c.radius;
            x1 = c.center.x + c.radius;
            y0 = c.center.y - c.radius;
            y1 = c.center.y + c.radius;
        }
        const int xa = std::max(0, static_cast<int>(std::floor(x0 - half - 1)));
        const int xb = std::min(spec.width - 1, static_cast<int>(std::ceil(x1 + half + 1)));
        const int ya = std::max(0, static_cast<int>(std::floor(y0 - half - 1)));
        const int yb = std::min(spec.height - 1, static_cast<int>(std::ceil(y1 + half + 1)));
        for (int y = ya; y <= yb; ++y) {
            for (int x = xa; x <= xb; ++x) {
                const auto frame = detail::path_frame(path.geometry, {static_cast<double>(x), static_cast<double>(y)});
                if (!frame || std::fabs(frame->second) > half)
                    continue;
                if (const auto cls = detail::stitch_class_at(frame->first, path))
                    img.at(x, y) = spec.colors.of(*cls);
            }
        }
        truth.paths.push_back({path.geometry, path.rule, path.injected});
    }
    return {std::move(img), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct DefectMatch {
    int reported = 0;    // index into report.defects
    int truth_path = 0;  // index into truth.paths
    int injected = 0;    // index into truth.paths[truth_path].injected
    double iou = 0.0;
};

struct EvalResult {
    int true_positives = 0;
    int false_positives = 0;
    int false_negatives = 0;
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
    std::vector<DefectMatch> matches;
};

/// Path-matching tolerances (a few Hough bins).
struct PathTolerance {
    double angle_rad = 3.0 * pi / 180.0;
    double distance_px = 4.0;
};

inline double span_iou(double a_lo, double a_hi, double b_lo, double b_hi) {
    const double inter = std::max(0.0, std::min(a_hi, b_hi) - std::max(a_lo, b_lo));
    const double uni = std::max(a_hi, b_hi) - std::min(a_lo, b_lo);
    return uni > 0.0 ? inter / uni : 0.0;
}

namespace detail {

// Cost of pairing a detected path with a true one; nullopt when they are not
// the same seam.
inline std::optional<double> path_match_cost(const SeamPath& found, const SceneGeometry& truth, const PathTolerance& tol) {
    if (const auto* lin = std::get_if<LinearPath>(&found)) {
        const auto* t = std::get_if<LinearGeometry>(&truth);
        if (!t)
            return std::nullopt;
        const double truth_angle = std::atan2(t->p1.y - t->p0.y, t->p1.x - t->p0.x) + pi / 2.0;
        const double dtheta = angle_between_lines(normalize_line({0.0, truth_angle}).theta, lin->line.theta);
        const Point2 mid{(t->p0.x + t->p1.x) / 2.0, (t->p0.y + t->p1.y) / 2.0};
        const double dist = std::fabs(signed_distance(lin->line, mid));
        if (dtheta > tol.angle_rad || dist > tol.distance_px)
            return std::nullopt;
        return dist + dtheta * 180.0 / pi;
    }
    const auto& arc = std::get<CircularPath>(found);
    const auto* t = std::get_if<CircularGeometry>(&truth);
    if (!t)
        return std::nullopt;
    const double dc = std::hypot(arc.circle.cx - t->center.x, arc.circle.cy - t->center.y);
    const double dr = std::fabs(arc.circle.radius - t->radius);
    if (dc > tol.distance_px || dr > tol.distance_px)
        return std::nullopt;
    return dc + dr;
}

// Arclength on the detected path of the point at arclength s on the truth.
inline double to_found_frame(const SeamPath& found, const SceneGeometry& truth, double s) {
    const Point2 p = geometry_point(truth, s);
    if (const auto* lin = std::get_if<LinearPath>(&found)) {
        const double len = path_length(found);
        if (len == 0.0)
            return 0.0;
        return ((p.x - lin->p0.x) * (lin->p1.x - lin->p0.x) + (p.y - lin->p0.y) * (lin->p1.y - lin->p0.y)) / len;
    }
    const auto& arc = std::get<CircularPath>(found);
    double a = std::atan2(p.y - arc.circle.cy, p.x - arc.circle.cx) - arc.arc_start;
    a = std::fmod(a, 2.0 * pi);
    if (a < 0.0)
        a += 2.0 * pi;
    return arc.circle.radius * a;
}

} // namespace detail

/// Greedy one-to-one matching of reported to injected defects by descending
/// span IoU. Pairs must agree on kind and on the seam path, and reach
/// iou_min. Injected spans are mapped onto the detected path's arclength
/// axis before comparison.
inline EvalResult evaluate(const InspectionReport& report, const GroundTruth& truth, double iou_min,
                           const PathTolerance& tol = {}) {
    if (!(iou_min > 0.0) || iou_min > 1.0)
        throw Error(ErrorKind::InvalidArgument, "iou_min must lie in (0, 1]");

    // Pair detected paths with true paths, cheapest first.
    std::vector<std::tuple<double, int, int>> path_pairs;
    for (int f = 0; f < static_cast<int>(report.paths.size()); ++f)
        for (int t = 0; t < static_cast<int>(truth.paths.size()); ++t)
            if (const auto cost = detail::path_match_cost(report.paths[f].path, truth.paths[t].geometry, tol))
                path_pairs.emplace_back(*cost, f, t);
    std::sort(path_pairs.begin(), path_pairs.end());
    std::vector<int> truth_of_found(report.paths.size(), -1);
    std::vector<bool> truth_taken(truth.paths.size(), false);
    for (const auto& [cost, f, t] : path_pairs) {
        if (truth_of_found[static_cast<std::size_t>(f)] >= 0 || truth_taken[static_cast<std::size_t>(t)])
            continue;
        truth_of_found[static_cast<std::size_t>(f)] = t;
        truth_taken[static_cast<std::size_t>(t)] = true;
    }

    std::vector<DefectMatch> candidates;
    for (int r = 0; r < static_cast<int>(report.defects.size()); ++r) {
        const Defect& d = report.defects[static_cast<std::size_t>(r)];
        if (d.path_index < 0 || d.path_index >= static_cast<int>(report.paths.size()))
            continue;
        const int t = truth_of_found[static_cast<std::size_t>(d.path_index)];
        if (t < 0)
            continue;
        const GroundTruthPath& tp = truth.paths[static_cast<std::size_t>(t)];
        const SeamPath& found = report.paths[static_cast<std::size_t>(d.path_index)].path;
        for (int k = 0; k < static_cast<int>(tp.injected.size()); ++k) {
            const InjectedDefect& inj = tp.injected[static_cast<std::size_t>(k)];
            if (inj.kind != d.kind)
                continue;
            double lo = detail::to_found_frame(found, tp.geometry, inj.span_lo);
            double hi = std::holds_alternative<LinearPath>(found)
                            ? detail::to_found_frame(found, tp.geometry, inj.span_hi)
                            : lo + (inj.span_hi - inj.span_lo) * std::get<CircularPath>(found).circle.radius /
                                       std::get<CircularGeometry>(tp.geometry).radius;
            if (lo > hi)
                std::swap(lo, hi);
            const double iou = span_iou(d.span_lo, d.span_hi, lo, hi);
            if (iou >= iou_min)
                candidates.push_back({r, t, k, iou});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const DefectMatch& a, const DefectMatch& b) { return a.iou > b.iou; });

    EvalResult result;
    std::vector<bool> reported_used(report.defects.size(), false);
    std::vector<std::vector<bool>> injected_used;
    int injected_total = 0;
    for (const GroundTruthPath& tp : truth.paths) {
        injected_used.emplace_back(tp.injected.size(), false);
        injected_total += static_cast<int>(tp.injected.size());
    }
    for (const DefectMatch& m : candidates) {
        auto&& inj_flag = injected_used[static_cast<std::size_t>(m.truth_path)][static_cast<std::size_t>(m.injected)];
        if (reported_used[static_cast<std::size_t>(m.reported)] || inj_flag)
            continue;
        reported_used[static_cast<std::size_t>(m.reported)] = true;
        inj_flag = true;
        result.matches.push_back(m);
    }
    result.true_positives = static_cast<int>(result.matches.size());
    result.false_positives = static_cast<int>(report.defects.size()) - result.true_positives;
    result.false_negatives = injected_total - result.true_positives;
    const int tp = result.true_positives;
    result.precision = tp + result.false_positives == 0 ? 1.0 : static_cast<double>(tp) / (tp + result.false_positives);
    result.recall = tp + result.false_negatives == 0 ? 1.0 : static_cast<double>(tp) / (tp + result.false_negatives);
    result.f1 = result.precision + result.recall == 0.0
                    ? 0.0
                    : 2.0 * result.precision * result.recall / (result.precision + result.recall);
    return result;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline Json to_json(const SceneGeometry& g) {
    if (const auto* lin = std::get_if<LinearGeometry>(&g))
        return {{"type", "linear"}, {"p0", {lin->p0.x, lin->p0.y}}, {"p1", {lin->p1.x, lin->p1.y}}};
    const auto& c = std::get<CircularGeometry>(g);
    return {{"type", "circular"},
            {"center", {c.center.x, c.center.y}},
            {"radius", c.radius},
            {"arc", {c.arc_start, c.arc_end}}};
}

inline Json to_json(const InjectedDefect& d) {
    return {{"kind", to_string(d.kind)}, {"span", {d.span_lo, d.span_hi}}};
}

inline Json rgb_json(Rgb c) { return Json::array({c.r, c.g, c.b}); }

inline Json to_json(const SceneSpec& spec) {
    Json paths = Json::array();
    for (const ScenePath& p : spec.paths) {
        Json injected = Json::array();
        for (const InjectedDefect& d : p.injected)
            injected.push_back(to_json(d));
        paths.push_back({{"geometry", to_json(p.geometry)},
                         {"rule", to_json(p.rule)},
                         {"thread_width", p.thread_width},
                         {"injected", injected}});
    }
    return {{"width", spec.width},
            {"height", spec.height},
            {"fabric_rgb", rgb_json(spec.fabric_rgb)},
            {"fabric_noise_sigma", spec.fabric_noise_sigma},
            {"rng_seed", spec.rng_seed},
            {"thread_colors",
             {{"needle_red", rgb_json(spec.colors.needle)},
              {"bobbin_green", rgb_json(spec.colors.bobbin)},
              {"looper_orange", rgb_json(spec.colors.looper)}}},
            {"paths", paths}};
}

inline Json to_json(const GroundTruth& truth) {
    Json paths = Json::array();
    for (const GroundTruthPath& p : truth.paths) {
        Json injected = Json::array();
        for (const InjectedDefect& d : p.injected)
            injected.push_back(to_json(d));
        paths.push_back({{"geometry", to_json(p.geometry)},
                         {"rule", to_json(p.rule)},
                         {"length", geometry_length(p.geometry)},
                         {"injected", injected}});
    }
    return {{"width", truth.width}, {"height", truth.height}, {"paths", paths}};
}

inline Json to_json(const EvalResult& r) {
    Json matches = Json::array();
    for (const DefectMatch& m : r.matches)
        matches.push_back({{"reported", m.reported}, {"truth_path", m.truth_path}, {"injected", m.injected}, {"iou", m.iou}});
    return {{"true_positives", r.true_positives},
            {"false_positives", r.false_positives},
            {"false_negatives", r.false_negatives},
            {"precision", r.precision},
            {"recall", r.recall},
            {"f1", r.f1},
            {"matches", matches}};
}

namespace detail {

inline Point2 point_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw Error(ErrorKind::SpecInvalid, "expected [x, y]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline Rgb rgb_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3)
        throw Error(ErrorKind::SpecInvalid, "expected [r, g, b]");
    auto channel = [](const Json& v) {
        const int c = v.get<int>();
        if (c < 0 || c > 255)
            throw Error(ErrorKind::SpecInvalid, "color channel outside [0, 255]");
        return static_cast<std::uint8_t>(c);
    };
    return {channel(j.at(0)), channel(j.at(1)), channel(j.at(2))};
}

inline SceneGeometry geometry_from_json(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "linear")
        return LinearGeometry{point_from_json(j.at("p0")), point_from_json(j.at("p1"))};
    if (type == "circular") {
        CircularGeometry c;
        c.center = point_from_json(j.at("center"));
        c.radius = j.at("radius").get<double>();
        if (j.contains("arc")) {
            c.arc_start = j.at("arc").at(0).get<double>();
            c.arc_end = j.at("arc").at(1).get<double>();
        }
        return c;
    }
    throw Error(ErrorKind::SpecInvalid, "unknown geometry type '" + type + "'");
}

inline std::vector<InjectedDefect> injected_from_json(const Json& j) {
    std::vector<InjectedDefect> out;
    for (const Json& d : j) {
        const auto kind = defect_kind_from_string(d.at("kind").get<std::string>());
        if (!kind)
            throw Error(ErrorKind::SpecInvalid, "unknown defect kind");
        out.push_back({*kind, d.at("span").at(0).get<double>(), d.at("span").at(1).get<double>()});
    }
    return out;
}

template <typename F>
auto with_spec_errors(F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::SpecInvalid, e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigInvalid)
            throw Error(ErrorKind::SpecInvalid, e.what());
        throw;
    }
}

} // namespace detail

inline SceneSpec scene_from_json(const Json& j) {
    return detail::with_spec_errors([&] {
        SceneSpec spec;
        spec.width = j.at("width").get<int>();
        spec.height = j.at("height").get<int>();
        if (j.contains("fabric_rgb"))
            spec.fabric_rgb = detail::rgb_from_json(j.at("fabric_rgb"));
        spec.fabric_noise_sigma = j.value("fabric_noise_sigma", 0.0);
        spec.rng_seed = j.value("rng_seed", std::uint64_t{1});
        if (j.contains("thread_colors")) {
            const Json& c = j.at("thread_colors");
            if (c.contains("needle_red"))
                spec.colors.needle = detail::rgb_from_json(c.at("needle_red"));
            if (c.contains("bobbin_green"))
                spec.colors.bobbin = detail::rgb_from_json(c.at("bobbin_green"));
            if (c.contains("looper_orange"))
                spec.colors.looper = detail::rgb_from_json(c.at("looper_orange"));
        }
        for (const Json& p : j.at("paths")) {
            ScenePath path;
            path.geometry = detail::geometry_from_json(p.at("geometry"));
            path.rule = p.contains("rule") ? rule_from_json(p.at("rule")) : default_rule(StitchType::Lockstitch301);
            path.thread_width = p.value("thread_width", 5.0);
            if (p.contains("injected"))
                path.injected = detail::injected_from_json(p.at("injected"));
            spec.paths.push_back(std::move(path));
        }
        validate(spec);
        return spec;
    });
}

inline GroundTruth truth_from_json(const Json& j) {
    return detail::with_spec_errors([&] {
        GroundTruth truth;
        truth.width = j.at("width").get<int>();
        truth.height = j.at("height").get<int>();
        for (const Json& p : j.at("paths")) {
            GroundTruthPath path;
            path.geometry = detail::geometry_from_json(p.at("geometry"));
            path.rule = rule_from_json(p.at("rule"));
            path.injected = detail::injected_from_json(p.at("injected"));
            truth.paths.push_back(std::move(path));
        }
        return truth;
    });
}

} // namespace seamcheck
