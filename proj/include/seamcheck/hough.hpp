#pragma once

// Hough transforms for straight and circular seam paths.
//
// Coordinates: origin top-left, x to the right, y down. A line is
//     rho = x cos(theta) + y sin(theta),  theta in [0, pi).
// Circle voting draws a midpoint-rasterized circle of each candidate radius
// around every foreground pixel into a center accumulator of image size.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "seamcheck/binarization.hpp"
#include "seamcheck/error.hpp"
#include "seamcheck/imagekit.hpp"

namespace seamcheck {

inline constexpr double pi = std::numbers::pi;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct PixelPos {
    int x = 0;
    int y = 0;
};

struct LineParams {
    double rho = 0.0;
    double theta = 0.0;

    friend bool operator==(const LineParams&, const LineParams&) = default;
};

/// Brings (rho, theta) into the canonical range theta in [0, pi).
inline LineParams normalize_line(LineParams line) {
    double theta = std::fmod(line.theta, 2.0 * pi);
    if (theta < 0.0)
        theta += 2.0 * pi;
    double rho = line.rho;
    if (theta >= pi) {
        theta -= pi;
        rho = -rho;
    }
    if (theta >= pi) // fmod rounding at exactly 2*pi
        theta = 0.0;
    return {rho, theta};
}

inline double signed_distance(const LineParams& line, Point2 p) {
    return p.x * std::cos(line.theta) + p.y * std::sin(line.theta) - line.rho;
}

inline std::vector<PixelPos> foreground_pixels(const BinaryImage& bin) {
    std::vector<PixelPos> out;
    for (int y = 0; y < bin.height(); ++y)
        for (int x = 0; x < bin.width(); ++x)
            if (bin.at(x, y) == Label::Foreground)
                out.push_back({x, y});
    return out;
}

// ---------------------------------------------------------------------------
// Lines
// ---------------------------------------------------------------------------

class LineAccumulator {
public:
    LineAccumulator() = default;

    LineAccumulator(int image_width, int image_height, double theta_step, double rho_step)
        : theta_step_(theta_step), rho_step_(rho_step) {
        if (!(theta_step > 0.0) || !(rho_step > 0.0))
            throw Error(ErrorKind::InvalidArgument, "theta_step and rho_step must be positive");
        const double diagonal = std::hypot(static_cast<double>(image_width), static_cast<double>(image_height));
        // The epsilon keeps pi / (pi / 180) from rounding up to 181 bins.
        n_theta_ = std::max(1, static_cast<int>(std::ceil(pi / theta_step - 1e-9)));
        n_rho_ = std::max(1, static_cast<int>(std::ceil(2.0 * diagonal / rho_step - 1e-9)));
        rho_offset_ = n_rho_ / 2;
        wraps_ = std::fabs(n_theta_ * theta_step - pi) < 1e-9;
        bins_.assign(static_cast<std::size_t>(n_theta_) * static_cast<std::size_t>(n_rho_), 0);
    }

    int theta_bins() const noexcept { return n_theta_; }
    int rho_bins() const noexcept { return n_rho_; }
    int rho_offset() const noexcept { return rho_offset_; }
    double theta_step() const noexcept { return theta_step_; }
    double rho_step() const noexcept { return rho_step_; }
    /// True when the theta bins tile [0, pi) exactly, so theta wraps onto
    /// itself with rho negated.
    bool wraps() const noexcept { return wraps_; }

    double theta_at(int theta_index) const noexcept { return theta_index * theta_step_; }
    double rho_at(int rho_index) const noexcept { return (rho_index - rho_offset_) * rho_step_; }

    int rho_index(double rho) const noexcept {
        const long idx = std::lround(rho / rho_step_) + rho_offset_;
        return static_cast<int>(std::clamp<long>(idx, 0, n_rho_ - 1));
    }

    std::uint32_t count(int theta_index, int rho_index) const {
        return bins_[static_cast<std::size_t>(theta_index) * n_rho_ + rho_index];
    }
    std::uint32_t& count(int theta_index, int rho_index) {
        return bins_[static_cast<std::size_t>(theta_index) * n_rho_ + rho_index];
    }

    std::uint64_t total_votes() const noexcept {
        std::uint64_t sum = 0;
        for (auto v : bins_)
            sum += v;
        return sum;
    }

    std::uint32_t max_count() const noexcept {
        return bins_.empty() ? 0 : *std::max_element(bins_.begin(), bins_.end());
    }

    std::span<const std::uint32_t> bins() const noexcept { return bins_; }

private:
    double theta_step_ = 0.0;
    double rho_step_ = 0.0;
    int n_theta_ = 0;
    int n_rho_ = 0;
    int rho_offset_ = 0;
    bool wraps_ = false;
    std::vector<std::uint32_t> bins_;
};

/// Every foreground pixel casts one vote per theta bin.
inline LineAccumulator hough_lines(const BinaryImage& bin, double theta_step, double rho_step) {
    LineAccumulator acc(bin.width(), bin.height(), theta_step, rho_step);
    const std::vector<PixelPos> pixels = foreground_pixels(bin);
    if (pixels.empty())
        throw Error(ErrorKind::EmptyImage, "no foreground pixels to vote");

    std::vector<double> cos_table(static_cast<std::size_t>(acc.theta_bins()));
    std::vector<double> sin_table(cos_table.size());
    for (int k = 0; k < acc.theta_bins(); ++k) {
        cos_table[static_cast<std::size_t>(k)] = std::cos(acc.theta_at(k));
        sin_table[static_cast<std::size_t>(k)] = std::sin(acc.theta_at(k));
    }
    for (const PixelPos& p : pixels) {
        for (int k = 0; k < acc.theta_bins(); ++k) {
            const double r = p.x * cos_table[static_cast<std::size_t>(k)] + p.y * sin_table[static_cast<std::size_t>(k)];
            ++acc.count(k, acc.rho_index(r));
        }
    }
    return acc;
}

struct LinePeak {
    LineParams line;
    std::uint32_t votes = 0;
    int theta_index = 0;
    int rho_index = 0;
};

/// Bins with votes >= vote_threshold that beat every other bin in their
/// (2 nms_radius + 1)^2 neighborhood. Equal counts are won by the smaller
/// (theta_index, rho_index). Neighborhoods wrap across theta = 0 / pi with
/// rho mirrored when the theta bins tile the half-turn.
inline std::vector<LinePeak> extract_line_peaks(const LineAccumulator& acc, std::uint32_t vote_threshold, int nms_radius) {
    if (vote_threshold < 1)
        throw Error(ErrorKind::InvalidArgument, "vote_threshold must be at least 1");
    nms_radius = std::max(nms_radius, 0);
    const int nt = acc.theta_bins();
    const int nr = acc.rho_bins();

    auto neighbor = [&](int ti, int ri) -> std::optional<std::pair<int, int>> {
        if (ti < 0 || ti >= nt) {
            if (!acc.wraps())
                return std::nullopt;
            ti = ti < 0 ? ti + nt : ti - nt;
            ri = 2 * acc.rho_offset() - ri;
        }
        if (ri < 0 || ri >= nr)
            return std::nullopt;
        return std::pair{ti, ri};
    };

    std::vector<LinePeak> peaks;
    for (int ti = 0; ti < nt; ++ti) {
        for (int ri = 0; ri < nr; ++ri) {
            const std::uint32_t v = acc.count(ti, ri);
            if (v < vote_threshold)
                continue;
            bool is_peak = true;
            for (int dt = -nms_radius; dt <= nms_radius && is_peak; ++dt) {
                for (int dr = -nms_radius; dr <= nms_radius; ++dr) {
                    if (dt == 0 && dr == 0)
                        continue;
                    const auto n = neighbor(ti + dt, ri + dr);
                    if (!n || (n->first == ti && n->second == ri))
                        continue;
                    const std::uint32_t nv = acc.count(n->first, n->second);
                    if (nv > v || (nv == v && std::pair(n->first, n->second) < std::pair(ti, ri))) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (is_peak)
                peaks.push_back({{acc.rho_at(ri), acc.theta_at(ti)}, v, ti, ri});
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const LinePeak& a, const LinePeak& b) {
        return a.votes > b.votes;
    });
    return peaks;
}

/// Accumulator as a graymap (rho across, theta down), scaled to 0..255.
inline ImageGray accumulator_image(const LineAccumulator& acc) {
    ImageGray out(acc.rho_bins(), acc.theta_bins());
    const double max = std::max<std::uint32_t>(acc.max_count(), 1);
    for (int ti = 0; ti < acc.theta_bins(); ++ti)
        for (int ri = 0; ri < acc.rho_bins(); ++ri)
            out.at(ri, ti) = static_cast<std::uint8_t>(std::lround(255.0 * acc.count(ti, ri) / max));
    return out;
}

// ---------------------------------------------------------------------------
// Circles
// ---------------------------------------------------------------------------

struct CircleParams {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    std::uint32_t score = 0;  // accumulator votes at the maximum
    double support = 0.0;     // score / ideal votes for this radius

    friend bool operator==(const CircleParams&, const CircleParams&) = default;
};

/// Unique pixel offsets of a midpoint-rasterized circle.
inline std::vector<PixelPos> midpoint_circle(int radius) {
    std::vector<PixelPos> pts;
    if (radius <= 0) {
        pts.push_back({0, 0});
        return pts;
    }
    int x = radius;
    int y = 0;
    int err = 1 - radius;
    while (x >= y) {
        const PixelPos octant[8] = {{x, y}, {y, x}, {-y, x}, {-x, y}, {-x, -y}, {-y, -x}, {y, -x}, {x, -y}};
        pts.insert(pts.end(), std::begin(octant), std::end(octant));
        ++y;
        if (err < 0) {
            err += 2 * y + 1;
        } else {
            --x;
            err += 2 * (y - x) + 1;
        }
    }
    std::sort(pts.begin(), pts.end(), [](PixelPos a, PixelPos b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](PixelPos a, PixelPos b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    return pts;
}

/// Radius search over [r_min, r_max] in steps of r_step. A center is kept when
/// it is a 3x3 local maximum whose votes reach vote_fraction of the ideal
/// count for its radius. Detections whose centers lie closer than 2 r_step are
/// collapsed to the one with the highest support.
inline std::vector<CircleParams> hough_circles(const BinaryImage& bin, double r_min, double r_max, double r_step,
                                               double vote_fraction) {
    if (!(r_min > 0.0) || r_max < r_min || !(r_step > 0.0))
        throw Error(ErrorKind::InvalidArgument, "radius range must satisfy 0 < r_min <= r_max, r_step > 0");
    if (!(vote_fraction > 0.0) || vote_fraction > 1.0)
        throw Error(ErrorKind::InvalidArgument, "vote fraction must lie in (0, 1]");
    const std::vector<PixelPos> pixels = foreground_pixels(bin);
    if (pixels.empty())
        throw Error(ErrorKind::EmptyImage, "no foreground pixels to vote");

    const int w = bin.width();
    const int h = bin.height();
    std::vector<std::uint32_t> acc(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    std::vector<CircleParams> candidates;

    const int steps = static_cast<int>(std::floor((r_max - r_min) / r_step + 1e-9));
    for (int k = 0; k <= steps; ++k) {
        const double radius = r_min + k * r_step;
        const std::vector<PixelPos> offsets = midpoint_circle(static_cast<int>(std::lround(radius)));
        std::fill(acc.begin(), acc.end(), 0);
        for (const PixelPos& p : pixels) {
            for (const PixelPos& o : offsets) {
                const int x = p.x + o.x;
                const int y = p.y + o.y;
                if (x >= 0 && y >= 0 && x < w && y < h)
                    ++acc[static_cast<std::size_t>(y) * w + x];
            }
        }
        const double ideal = static_cast<double>(offsets.size());
        const auto threshold = static_cast<std::uint32_t>(std::max(1.0, std::ceil(vote_fraction * ideal - 1e-9)));
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::uint32_t v = acc[static_cast<std::size_t>(y) * w + x];
                if (v < threshold)
                    continue;
                bool is_peak = true;
                for (int dy = -1; dy <= 1 && is_peak; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h)
                            continue;
                        const std::uint32_t nv = acc[static_cast<std::size_t>(ny) * w + nx];
                        if (nv > v || (nv == v && std::pair(ny, nx) < std::pair(y, x))) {
                            is_peak = false;
                            break;
                        }
                    }
                }
                if (is_peak)
                    candidates.push_back({static_cast<double>(x), static_cast<double>(y), radius, v, v / ideal});
            }
        }
    }

    std::stable_sort(candidates.begin(), candidates.end(), [](const CircleParams& a, const CircleParams& b) {
        return std::tie(b.support, b.score) < std::tie(a.support, a.score);
    });
    std::vector<CircleParams> kept;
    const double min_separation = 2.0 * r_step;
    for (const CircleParams& c : candidates) {
        const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const CircleParams& k) {
            return std::hypot(k.cx - c.cx, k.cy - c.cy) < min_separation;
        });
        if (!overlaps)
            kept.push_back(c);
    }
    return kept;
}

// ---------------------------------------------------------------------------
// Seam paths
// ---------------------------------------------------------------------------

struct LinearPath {
    LineParams line;
    Point2 p0;
    Point2 p1;
    std::uint32_t score = 0;
    double support = 0.0; // fraction of 1 px steps from p0 to p1 with foreground nearby
};

struct CircularPath {
    CircleParams circle;
    double arc_start = 0.0; // radians, angle measured from +x towards +y
    double arc_end = 0.0;   // arc_start < arc_end <= arc_start + 2 pi
    bool full = false;
};

using SeamPath = std::variant<LinearPath, CircularPath>;

inline double path_length(const SeamPath& path) {
    if (const auto* lin = std::get_if<LinearPath>(&path))
        return std::hypot(lin->p1.x - lin->p0.x, lin->p1.y - lin->p0.y);
    const auto& arc = std::get<CircularPath>(path);
    return arc.circle.radius * (arc.arc_end - arc.arc_start);
}

inline std::uint32_t path_score(const SeamPath& path) {
    if (const auto* lin = std::get_if<LinearPath>(&path))
        return lin->score;
    return std::get<CircularPath>(path).circle.score;
}

/// Point at arclength s from the path start.
inline Point2 point_at(const SeamPath& path, double s) {
    if (const auto* lin = std::get_if<LinearPath>(&path)) {
        const double len = path_length(path);
        if (len == 0.0)
            return lin->p0;
        return {lin->p0.x + (lin->p1.x - lin->p0.x) * s / len, lin->p0.y + (lin->p1.y - lin->p0.y) * s / len};
    }
    const auto& arc = std::get<CircularPath>(path);
    const double a = arc.arc_start + s / arc.circle.radius;
    return {arc.circle.cx + arc.circle.radius * std::cos(a), arc.circle.cy + arc.circle.radius * std::sin(a)};
}

/// Unit normal at arclength s: the line normal, or the outward radial direction.
inline Point2 normal_at(const SeamPath& path, double s) {
    if (const auto* lin = std::get_if<LinearPath>(&path))
        return {std::cos(lin->line.theta), std::sin(lin->line.theta)};
    const auto& arc = std::get<CircularPath>(path);
    const double a = arc.arc_start + s / arc.circle.radius;
    return {std::cos(a), std::sin(a)};
}

namespace detail {

inline bool foreground_near(const BinaryImage& bin, Point2 p, Point2 normal) {
    for (int k = -1; k <= 1; ++k) {
        const int x = static_cast<int>(std::lround(p.x + k * normal.x));
        const int y = static_cast<int>(std::lround(p.y + k * normal.y));
        if (bin.contains(x, y) && bin.at(x, y) == Label::Foreground)
            return true;
    }
    return false;
}

struct Run {
    double first;
    double last;
};

// Groups sorted positions into runs whose internal gaps are <= gap_tolerance.
inline std::vector<Run> group_runs(const std::vector<double>& positions, double gap_tolerance) {
    std::vector<Run> runs;
    for (double t : positions) {
        if (runs.empty() || t - runs.back().last > gap_tolerance)
            runs.push_back({t, t});
        else
            runs.back().last = t;
    }
    return runs;
}

} // namespace detail

/// Finite extent of a detected line. Walks the line across the image in 1 px
/// steps collecting foreground hits within 1 px, and returns the span between
/// the outermost hits. Interior gaps never split the path. Outermost runs
/// (hits bridged across gaps <= gap_tolerance) shorter than min_run are
/// discarded as stray support.
inline LinearPath line_extent(const BinaryImage& bin, const LineParams& line, double gap_tolerance,
                              double min_run = 0.0) {
    const LineParams ln = normalize_line(line);
    const Point2 normal{std::cos(ln.theta), std::sin(ln.theta)};
    const Point2 dir{normal.y, -normal.x};
    const Point2 base{ln.rho * normal.x, ln.rho * normal.y};

    // Clip the parametric line to the pixel-center rectangle.
    double t_lo = -1e18;
    double t_hi = 1e18;
    auto clip = [&](double origin, double d, double lo, double hi) {
        if (std::fabs(d) < 1e-12) {
            if (origin < lo - 0.5 || origin > hi + 0.5) {
                t_lo = 1;
                t_hi = 0;
            }
            return;
        }
        double a = (lo - origin) / d;
        double b = (hi - origin) / d;
        if (a > b)
            std::swap(a, b);
        t_lo = std::max(t_lo, a);
        t_hi = std::min(t_hi, b);
    };
    clip(base.x, dir.x, 0.0, bin.width() - 1.0);
    clip(base.y, dir.y, 0.0, bin.height() - 1.0);

    std::vector<double> hits;
    if (t_lo <= t_hi) {
        for (double t = std::ceil(t_lo); t <= t_hi; t += 1.0) {
            const Point2 p{base.x + t * dir.x, base.y + t * dir.y};
            if (detail::foreground_near(bin, p, normal))
                hits.push_back(t);
        }
    }
    if (hits.empty())
        throw Error(ErrorKind::NoSupport, "no foreground pixel within 1 px of the line");

    const std::vector<detail::Run> runs = detail::group_runs(hits, std::max(gap_tolerance, 1.0));
    auto long_enough = [&](const detail::Run& r) { return r.last - r.first + 1.0 >= min_run; };
    const auto first = std::find_if(runs.begin(), runs.end(), long_enough);
    const auto last = std::find_if(runs.rbegin(), runs.rend(), long_enough);
    if (first == runs.end())
        throw Error(ErrorKind::NoSupport, "no run of support reaches the minimum length");

    LinearPath path;
    path.line = ln;
    path.p0 = {base.x + first->first * dir.x, base.y + first->first * dir.y};
    path.p1 = {base.x + last->last * dir.x, base.y + last->last * dir.y};
    const auto inside = std::count_if(hits.begin(), hits.end(),
                                      [&](double t) { return t >= first->first && t <= last->last; });
    path.support = static_cast<double>(inside) / (last->last - first->first + 1.0);
    return path;
}

/// Angular extent of a detected circle. Hits are collected every 1 px of arc
/// within 1 px radially. When the largest angular gap without support spans
/// less than min_gap_fraction of the circumference the path is a full circle
/// starting at angle 0; otherwise the arc runs the long way round from the
/// far side of that gap.
inline CircularPath circle_extent(const BinaryImage& bin, const CircleParams& circle, double min_gap_fraction) {
    const double r = circle.radius;
    const int samples = std::max(8, static_cast<int>(std::ceil(2.0 * pi * r)));
    const double step = 2.0 * pi / samples;
    std::vector<double> hits;
    for (int k = 0; k < samples; ++k) {
        const double a = k * step;
        const Point2 normal{std::cos(a), std::sin(a)};
        const Point2 p{circle.cx + r * normal.x, circle.cy + r * normal.y};
        if (detail::foreground_near(bin, p, normal))
            hits.push_back(a);
    }
    if (hits.empty())
        throw Error(ErrorKind::NoSupport, "no foreground pixel within 1 px of the circle");

    double widest = 2.0 * pi - hits.back() + hits.front(); // wrap-around gap
    std::size_t after_gap = 0;
    for (std::size_t i = 1; i < hits.size(); ++i) {
        const double gap = hits[i] - hits[i - 1];
        if (gap > widest) {
            widest = gap;
            after_gap = i;
        }
    }

    CircularPath path;
    path.circle = circle;
    if (widest - step < min_gap_fraction * 2.0 * pi) {
        path.full = true;
        path.arc_start = 0.0;
        path.arc_end = 2.0 * pi;
        return path;
    }
    path.arc_start = hits[after_gap];
    const double before_gap = hits[after_gap == 0 ? hits.size() - 1 : after_gap - 1];
    path.arc_end = before_gap >= path.arc_start ? before_gap : before_gap + 2.0 * pi;
    if (path.arc_end <= path.arc_start)
        throw Error(ErrorKind::NoSupport, "circle support collapses to a single point");
    return path;
}

/// Total-least-squares refit of a line to the foreground pixels within
/// `band` px of it, repeated `iterations` times.
inline LineParams refine_line(std::span<const PixelPos> pixels, LineParams line, double band, int iterations = 3) {
    for (int it = 0; it < iterations; ++it) {
        double n = 0, sx = 0, sy = 0;
        const double c = std::cos(line.theta);
        const double s = std::sin(line.theta);
        std::vector<PixelPos> near;
        for (const PixelPos& p : pixels) {
            if (std::fabs(p.x * c + p.y * s - line.rho) <= band) {
                near.push_back(p);
                n += 1;
                sx += p.x;
                sy += p.y;
            }
        }
        if (near.size() < 3)
            break;
        const double mx = sx / n;
        const double my = sy / n;
        double sxx = 0, syy = 0, sxy = 0;
        for (const PixelPos& p : near) {
            sxx += (p.x - mx) * (p.x - mx);
            syy += (p.y - my) * (p.y - my);
            sxy += (p.x - mx) * (p.y - my);
        }
        const double axis = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
        const double theta = axis + pi / 2.0;
        line = normalize_line({mx * std::cos(theta) + my * std::sin(theta), theta});
    }
    return line;
}

inline LineParams refine_line(const BinaryImage& bin, LineParams line, double band, int iterations = 3) {
    return refine_line(foreground_pixels(bin), line, band, iterations);
}

/// Algebraic (Kasa) least-squares refit of a circle to the foreground pixels
/// within `band` px of its rim, repeated `iterations` times.
inline CircleParams refine_circle(std::span<const PixelPos> pixels, CircleParams circle, double band,
                                  int iterations = 3) {
    for (int it = 0; it < iterations; ++it) {
        std::vector<Point2> near;
        double mx = 0, my = 0;
        for (const PixelPos& p : pixels) {
            const double d = std::hypot(p.x - circle.cx, p.y - circle.cy);
            if (std::fabs(d - circle.radius) <= band) {
                near.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
                mx += p.x;
                my += p.y;
            }
        }
        if (near.size() < 3)
            break;
        mx /= near.size();
        my /= near.size();
        // Solve [Suu Suv Su; Suv Svv Sv; Su Sv n] [D E F]^T = -[Suz Svz Sz]
        // for the centered coordinates u, v with z = u^2 + v^2.
        double a[3][4] = {};
        for (const Point2& p : near) {
            const double u = p.x - mx;
            const double v = p.y - my;
            const double z = u * u + v * v;
            const double row[3] = {u, v, 1.0};
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j)
                    a[i][j] += row[i] * row[j];
                a[i][3] -= row[i] * z;
            }
        }
        // Gaussian elimination with partial pivoting.
        bool singular = false;
        for (int col = 0; col < 3 && !singular; ++col) {
            int pivot = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::fabs(a[r][col]) > std::fabs(a[pivot][col]))
                    pivot = r;
            if (std::fabs(a[pivot][col]) < 1e-9) {
                singular = true;
                break;
            }
            std::swap(a[col], a[pivot]);
            for (int r = 0; r < 3; ++r) {
                if (r == col)
                    continue;
                const double f = a[r][col] / a[col][col];
                for (int k = col; k < 4; ++k)
                    a[r][k] -= f * a[col][k];
            }
        }
        if (singular)
            break;
        const double d = a[0][3] / a[0][0];
        const double e = a[1][3] / a[1][1];
        const double f = a[2][3] / a[2][2];
        const double ucx = -d / 2.0;
        const double ucy = -e / 2.0;
        const double r2 = ucx * ucx + ucy * ucy - f;
        if (!(r2 > 0.0))
            break;
        circle.cx = ucx + mx;
        circle.cy = ucy + my;
        circle.radius = std::sqrt(r2);
    }
    return circle;
}

inline CircleParams refine_circle(const BinaryImage& bin, CircleParams circle, double band, int iterations = 3) {
    return refine_circle(foreground_pixels(bin), circle, band, iterations);
}

/// Euclidean distance from p to the finite path (segment or arc).
inline double distance_to_path(const SeamPath& path, Point2 p) {
    if (const auto* lin = std::get_if<LinearPath>(&path)) {
        const double dx = lin->p1.x - lin->p0.x;
        const double dy = lin->p1.y - lin->p0.y;
        const double len2 = dx * dx + dy * dy;
        double t = len2 > 0.0 ? ((p.x - lin->p0.x) * dx + (p.y - lin->p0.y) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return std::hypot(p.x - (lin->p0.x + t * dx), p.y - (lin->p0.y + t * dy));
    }
    const auto& arc = std::get<CircularPath>(path);
    const double dx = p.x - arc.circle.cx;
    const double dy = p.y - arc.circle.cy;
    double a = std::atan2(dy, dx) - arc.arc_start;
    a = std::fmod(a, 2.0 * pi);
    if (a < 0.0)
        a += 2.0 * pi;
    if (arc.full || a <= arc.arc_end - arc.arc_start)
        return std::fabs(std::hypot(dx, dy) - arc.circle.radius);
    const Point2 a0 = point_at(path, 0.0);
    const Point2 a1 = point_at(path, path_length(path));
    return std::min(std::hypot(p.x - a0.x, p.y - a0.y), std::hypot(p.x - a1.x, p.y - a1.y));
}

} // namespace seamcheck
