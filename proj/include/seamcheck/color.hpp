#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seamcheck/error.hpp"
#include "seamcheck/imagekit.hpp"

namespace seamcheck {

/// Thread roles, color coded: red needle thread, green bobbin thread
/// (lockstitch), orange looper thread (chainstitch).
enum class ColorClass { NeedleRed, BobbinGreen, LooperOrange, Background };

inline std::string_view to_string(ColorClass c) {
    switch (c) {
    case ColorClass::NeedleRed: return "needle_red";
    case ColorClass::BobbinGreen: return "bobbin_green";
    case ColorClass::LooperOrange: return "looper_orange";
    case ColorClass::Background: return "background";
    }
    return "background";
}

inline std::optional<ColorClass> color_class_from_string(std::string_view s) {
    for (ColorClass c : {ColorClass::NeedleRed, ColorClass::BobbinGreen, ColorClass::LooperOrange, ColorClass::Background})
        if (to_string(c) == s)
            return c;
    return std::nullopt;
}

/// HSV decision region. The hue interval is inclusive and wraps through 360
/// when hue_lo > hue_hi.
struct ColorBand {
    ColorClass cls = ColorClass::NeedleRed;
    double hue_lo = 0.0;
    double hue_hi = 0.0;
    double s_min = 0.25;
    double v_min = 0.15;

    bool hue_contains(double h) const {
        return hue_lo <= hue_hi ? (h >= hue_lo && h <= hue_hi) : (h >= hue_lo || h <= hue_hi);
    }

    bool contains(const HsvPixel& p) const { return p.s >= s_min && p.v >= v_min && hue_contains(p.h); }

    friend bool operator==(const ColorBand&, const ColorBand&) = default;
};

inline std::vector<ColorBand> default_bands() {
    return {
        {ColorClass::NeedleRed, 345.0, 15.0, 0.25, 0.15},
        {ColorClass::BobbinGreen, 90.0, 150.0, 0.25, 0.15},
        {ColorClass::LooperOrange, 16.0, 45.0, 0.25, 0.15},
    };
}

namespace detail {

// A hue interval as one or two non-wrapping pieces within [0, 360).
inline std::vector<std::array<double, 2>> hue_pieces(const ColorBand& b) {
    if (b.hue_lo <= b.hue_hi)
        return {{b.hue_lo, b.hue_hi}};
    return {{b.hue_lo, 360.0}, {0.0, b.hue_hi}};
}

} // namespace detail

/// Rejects band sets that could assign a pixel to two classes. Because s_min
/// and v_min are lower bounds only, two bands intersect in HSV space exactly
/// when their hue intervals intersect.
inline void validate_bands(std::span<const ColorBand> bands) {
    for (const ColorBand& b : bands) {
        if (b.cls == ColorClass::Background)
            throw Error(ErrorKind::ConfigInvalid, "a color band cannot target the background class");
        if (b.hue_lo < 0.0 || b.hue_lo >= 360.0 || b.hue_hi < 0.0 || b.hue_hi >= 360.0)
            throw Error(ErrorKind::ConfigInvalid, "band hue bounds must lie in [0, 360)");
        if (!(b.s_min > 0.0) || b.s_min > 1.0 || b.v_min < 0.0 || b.v_min > 1.0)
            throw Error(ErrorKind::ConfigInvalid, "band needs 0 < s_min <= 1 and 0 <= v_min <= 1");
    }
    for (std::size_t i = 0; i < bands.size(); ++i) {
        for (std::size_t j = i + 1; j < bands.size(); ++j) {
            for (const auto& a : detail::hue_pieces(bands[i]))
                for (const auto& b : detail::hue_pieces(bands[j]))
                    if (a[0] <= b[1] && b[0] <= a[1])
                        throw Error(ErrorKind::OverlappingBands,
                                    std::string(to_string(bands[i].cls)) + " overlaps " +
                                        std::string(to_string(bands[j].cls)));
        }
    }
}

inline ColorClass classify_pixel(const HsvPixel& p, std::span<const ColorBand> bands) {
    for (const ColorBand& b : bands)
        if (b.contains(p))
            return b.cls;
    return ColorClass::Background;
}

} // namespace seamcheck
