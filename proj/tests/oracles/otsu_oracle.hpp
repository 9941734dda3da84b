#pragma once

// Exhaustive Otsu sweep in exact rational arithmetic. Each class variance is
// built from squared deviations about the exact class mean, not from raw
// moments, so it shares no algebra with the library implementation.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

struct OtsuAnswer {
    int t = -1;
    Rational objective;
    std::vector<int> argmins;
};

/// Weighted within-class variance w1 var1 + w2 var2 at split t
/// (class 1 = levels <= t), or nullopt when a class is empty.
inline std::optional<Rational> within_class_variance(const std::array<std::uint64_t, 256>& counts, int t) {
    Rational n_total = 0;
    for (auto c : counts)
        n_total += c;
    Rational result = 0;
    for (auto [lo, hi] : {std::pair{0, t}, std::pair{t + 1, 255}}) {
        Rational n = 0, sum = 0;
        for (int i = lo; i <= hi; ++i) {
            n += counts[i];
            sum += Rational(counts[i]) * i;
        }
        if (n == 0)
            return std::nullopt;
        const Rational mean = sum / n;
        Rational ss = 0;
        for (int i = lo; i <= hi; ++i) {
            const Rational d = Rational(i) - mean;
            ss += Rational(counts[i]) * d * d;
        }
        // w * var = (n / N) * (ss / n)
        result += ss / n_total;
    }
    return result;
}

/// Argmin over every valid t; ties resolve to the floor midpoint of the
/// lowest contiguous run of minimizing thresholds.
inline std::optional<OtsuAnswer> otsu_brute_force(const std::array<std::uint64_t, 256>& counts) {
    std::array<std::optional<Rational>, 256> value;
    std::optional<Rational> best;
    for (int t = 0; t < 255; ++t) {
        value[t] = within_class_variance(counts, t);
        if (value[t] && (!best || *value[t] < *best))
            best = *value[t];
    }
    if (!best)
        return std::nullopt;
    OtsuAnswer a;
    a.objective = *best;
    for (int t = 0; t < 255; ++t)
        if (value[t] && *value[t] == *best)
            a.argmins.push_back(t);
    int hi = a.argmins.front();
    while (hi + 1 < 255 && value[hi + 1] && *value[hi + 1] == *best)
        ++hi;
    a.t = (a.argmins.front() + hi) / 2;
    return a;
}

} // namespace oracle
