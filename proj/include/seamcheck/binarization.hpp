#pragma once

// Intensity histogram, Otsu threshold selection and thresholding.
//
// The threshold minimizes the within-class weighted variance
//     Sw^2(t) = w1(t) S1^2(t) + w2(t) S2^2(t)
// with class 1 = intensities <= t and class 2 = intensities > t. The argmin
// is found in exact integer arithmetic so that ties between partitions with
// identical objective are detected exactly.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "seamcheck/error.hpp"
#include "seamcheck/imagekit.hpp"

namespace seamcheck {

struct Histogram256 {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;

    double probability(int i) const { return static_cast<double>(counts[static_cast<std::size_t>(i)]) / static_cast<double>(total); }
};

inline Histogram256 histogram(const ImageGray& img) {
    Histogram256 h;
    for (std::uint8_t v : img.pixels())
        ++h.counts[v];
    h.total = img.size();
    return h;
}

/// Class statistics for one candidate threshold, in floating point. Used for
/// diagnostics and property checks; the selection itself is exact.
struct ClassSplit {
    int t = 0;
    double w1 = 0, w2 = 0;      // class probabilities
    double m1 = 0, m2 = 0;      // class means
    double var1 = 0, var2 = 0;  // class variances
    double objective = 0;       // w1 var1 + w2 var2
};

struct ThresholdResult {
    int t = 0;
    double objective = 0.0;
    ClassSplit split;
};

/// Floating-point evaluation of the class terms at t. Returns nullopt when
/// either class is empty.
inline std::optional<ClassSplit> class_split(const Histogram256& h, int t) {
    ClassSplit s;
    s.t = t;
    for (int i = 0; i <= t; ++i) {
        s.w1 += h.probability(i);
        s.m1 += i * h.probability(i);
    }
    for (int i = t + 1; i < 256; ++i) {
        s.w2 += h.probability(i);
        s.m2 += i * h.probability(i);
    }
    if (s.w1 == 0.0 || s.w2 == 0.0)
        return std::nullopt;
    s.m1 /= s.w1;
    s.m2 /= s.w2;
    for (int i = 0; i <= t; ++i)
        s.var1 += (i - s.m1) * (i - s.m1) * h.probability(i) / s.w1;
    for (int i = t + 1; i < 256; ++i)
        s.var2 += (i - s.m2) * (i - s.m2) * h.probability(i) / s.w2;
    s.objective = s.w1 * s.var1 + s.w2 * s.var2;
    return s;
}

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

// Sw^2(t) = num / den with
//   num = n2 (n1 Q1 - S1^2) + n1 (n2 Q2 - S2^2),  den = N n1 n2
// where n, S, Q are the zeroth, first and second raw moments of the counts.
struct ExactObjective {
    BigInt num;
    BigInt den;

    bool operator<(const ExactObjective& o) const { return num * o.den < o.num * den; }
    bool operator==(const ExactObjective& o) const { return num * o.den == o.num * den; }
};

} // namespace detail

/// Otsu threshold. Ties are resolved to floor-midpoint of the lowest
/// contiguous run of minimizing thresholds.
inline ThresholdResult otsu_threshold(const Histogram256& h) {
    using detail::BigInt;
    int distinct = 0;
    for (auto c : h.counts)
        distinct += c > 0 ? 1 : 0;
    if (h.total == 0 || distinct < 2)
        throw Error(ErrorKind::DegenerateHistogram, "fewer than two distinct intensities");

    BigInt n_all = 0, s_all = 0, q_all = 0;
    for (int i = 0; i < 256; ++i) {
        const BigInt c = h.counts[static_cast<std::size_t>(i)];
        n_all += c;
        s_all += c * i;
        q_all += c * i * i;
    }

    BigInt n1 = 0, s1 = 0, q1 = 0;
    std::optional<detail::ExactObjective> best;
    int run_lo = -1;
    int run_hi = -1;
    bool run_open = false;
    for (int t = 0; t <= 254; ++t) {
        const BigInt c = h.counts[static_cast<std::size_t>(t)];
        n1 += c;
        s1 += c * t;
        q1 += c * t * t;
        const BigInt n2 = n_all - n1;
        if (n1 == 0 || n2 == 0) {
            run_open = false;
            continue;
        }
        const BigInt s2 = s_all - s1;
        const BigInt q2 = q_all - q1;
        detail::ExactObjective obj{n2 * (n1 * q1 - s1 * s1) + n1 * (n2 * q2 - s2 * s2), n_all * n1 * n2};
        if (!best || obj < *best) {
            best = std::move(obj);
            run_lo = run_hi = t;
            run_open = true;
        } else if (obj == *best) {
            if (run_open && run_hi == t - 1)
                run_hi = t;
        } else {
            run_open = false;
        }
    }

    ThresholdResult result;
    result.t = (run_lo + run_hi) / 2;
    using Rational = boost::multiprecision::cpp_rational;
    result.objective = Rational(best->num, best->den).convert_to<double>();
    result.split = *class_split(h, result.t);
    return result;
}

enum class Label : std::uint8_t { Background = 0, Foreground = 1 };
using BinaryImage = Image<Label>;

enum class Polarity { DarkForeground, LightForeground };

inline BinaryImage binarize(const ImageGray& img, int t, Polarity polarity) {
    if (t < 0 || t > 254)
        throw Error(ErrorKind::InvalidArgument, "threshold must lie in [0, 254]");
    BinaryImage out(img.width(), img.height());
    auto src = img.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const bool dark = src[i] <= t;
        const bool fg = polarity == Polarity::DarkForeground ? dark : !dark;
        dst[i] = fg ? Label::Foreground : Label::Background;
    }
    return out;
}

inline std::size_t count_foreground(const BinaryImage& bin) {
    std::size_t n = 0;
    for (Label l : bin.pixels())
        n += l == Label::Foreground ? 1 : 0;
    return n;
}

} // namespace seamcheck
