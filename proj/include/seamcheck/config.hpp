#pragma once

// InspectionConfig and its JSON / TOML file format. Both formats share one
// tree layout; TOML documents are converted to JSON before parsing. Missing
// keys keep their defaults, unknown keys are rejected.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

#include "seamcheck/binarization.hpp"
#include "seamcheck/color.hpp"
#include "seamcheck/error.hpp"
#include "seamcheck/stitch.hpp"

namespace seamcheck {

using Json = nlohmann::json;

enum class GeometryMode { Lines, Circles, Both };

struct LineSearch {
    double theta_step_deg = 1.0;
    double rho_step = 1.0;
    std::uint32_t vote_threshold = 55;
    int nms_radius = 2;
    double gap_tolerance = 8.0;      // px bridged when grouping support along a line
    double min_run = 10.0;           // shortest outermost support run kept, px
    double min_support = 0.25;       // least fraction of the segment with foreground nearby
    double refine_band = 4.0;        // px either side of the line used for the refit
    int max_paths = 8;
    double duplicate_angle_deg = 3.0;
    double duplicate_distance = 6.0;

    friend bool operator==(const LineSearch&, const LineSearch&) = default;
};

struct CircleSearch {
    double r_min = 20.0;
    double r_max = 120.0;
    double r_step = 1.0;
    double vote_fraction = 0.25;
    double arc_gap_fraction = 0.25;  // widest unsupported gap, as a fraction of the circumference, still read as a full circle
    double refine_band = 4.0;
    int max_paths = 4;
    double duplicate_distance = 6.0;

    friend bool operator==(const CircleSearch&, const CircleSearch&) = default;
};

struct InspectionConfig {
    double smooth_sigma = 1.0;
    int smooth_radius = 2;
    Polarity polarity = Polarity::DarkForeground;
    int min_contrast = 40; // gray levels between the two Otsu class means
    GeometryMode geometry = GeometryMode::Both;
    LineSearch lines;
    CircleSearch circles;
    double sample_step = 1.0;
    std::vector<ColorBand> bands = default_bands();
    std::vector<StitchRule> rules = {default_rule(StitchType::Lockstitch301), default_rule(StitchType::Chainstitch401)};
    std::string line_rule = "auto";   // rule name, or "auto" to pick by observed thread colors
    std::string circle_rule = "auto";

    const StitchRule* find_rule(const std::string& name) const {
        for (const StitchRule& r : rules)
            if (r.name == name)
                return &r;
        return nullptr;
    }

    void validate() const {
        auto fail = [](const std::string& msg) { throw Error(ErrorKind::ConfigInvalid, msg); };
        if (!(smooth_sigma > 0.0) || smooth_radius < 1)
            fail("smoothing needs sigma > 0 and radius >= 1");
        if (min_contrast < 0)
            fail("min_contrast must be >= 0");
        if (!(lines.theta_step_deg > 0.0) || !(lines.rho_step > 0.0))
            fail("line quantization steps must be positive");
        if (lines.vote_threshold < 1 || lines.nms_radius < 0 || lines.max_paths < 0)
            fail("line search needs vote_threshold >= 1, nms_radius >= 0, max_paths >= 0");
        if (lines.min_support < 0.0 || lines.min_support > 1.0)
            fail("line min_support must lie in [0, 1]");
        if (!(circles.r_min > 0.0) || circles.r_max < circles.r_min || !(circles.r_step > 0.0))
            fail("circle search needs 0 < r_min <= r_max and r_step > 0");
        if (!(circles.vote_fraction > 0.0) || circles.vote_fraction > 1.0)
            fail("circle vote_fraction must lie in (0, 1]");
        if (circles.arc_gap_fraction < 0.0 || circles.arc_gap_fraction > 1.0 || circles.max_paths < 0)
            fail("circle arc_gap_fraction must lie in [0, 1] and max_paths >= 0");
        if (!(sample_step > 0.0))
            fail("sample step must be positive");
        validate_bands(bands);
        if (rules.empty())
            fail("at least one stitch rule is required");
        std::set<std::string> names;
        for (const StitchRule& r : rules) {
            r.validate();
            if (!names.insert(r.name).second)
                fail("duplicate rule name " + r.name);
        }
        for (const std::string* sel : {&line_rule, &circle_rule})
            if (*sel != "auto" && !find_rule(*sel))
                fail("unknown rule " + *sel);
    }

    friend bool operator==(const InspectionConfig&, const InspectionConfig&) = default;
};

inline std::string_view to_string(GeometryMode m) {
    switch (m) {
    case GeometryMode::Lines: return "lines";
    case GeometryMode::Circles: return "circles";
    case GeometryMode::Both: return "both";
    }
    return "both";
}

inline std::string_view to_string(Polarity p) {
    return p == Polarity::DarkForeground ? "dark_foreground" : "light_foreground";
}

// ---------------------------------------------------------------------------
// JSON mapping
// ---------------------------------------------------------------------------

inline Json to_json(const ColorBand& b) {
    return {{"class", to_string(b.cls)}, {"hue_lo", b.hue_lo}, {"hue_hi", b.hue_hi}, {"s_min", b.s_min}, {"v_min", b.v_min}};
}

inline Json to_json(const StitchRule& r) {
    return {{"name", r.name},
            {"stitch_type", to_string(r.stitch_type)},
            {"pitch", r.pitch},
            {"max_gap_stitches", r.max_gap_stitches},
            {"coverage_max", r.coverage_max},
            {"nominal_coverage", r.nominal_coverage},
            {"min_consecutive", r.min_consecutive}};
}

inline Json to_json(const InspectionConfig& c) {
    Json bands = Json::array();
    for (const ColorBand& b : c.bands)
        bands.push_back(to_json(b));
    Json rules = Json::array();
    for (const StitchRule& r : c.rules)
        rules.push_back(to_json(r));
    return {
        {"smoothing", {{"sigma", c.smooth_sigma}, {"radius", c.smooth_radius}}},
        {"polarity", to_string(c.polarity)},
        {"min_contrast", c.min_contrast},
        {"geometry", to_string(c.geometry)},
        {"lines",
         {{"theta_step_deg", c.lines.theta_step_deg},
          {"rho_step", c.lines.rho_step},
          {"vote_threshold", c.lines.vote_threshold},
          {"nms_radius", c.lines.nms_radius},
          {"gap_tolerance", c.lines.gap_tolerance},
          {"min_run", c.lines.min_run},
          {"refine_band", c.lines.refine_band},
          {"min_support", c.lines.min_support},
          {"max_paths", c.lines.max_paths},
          {"duplicate_angle_deg", c.lines.duplicate_angle_deg},
          {"duplicate_distance", c.lines.duplicate_distance}}},
        {"circles",
         {{"r_min", c.circles.r_min},
          {"r_max", c.circles.r_max},
          {"r_step", c.circles.r_step},
          {"vote_fraction", c.circles.vote_fraction},
          {"arc_gap_fraction", c.circles.arc_gap_fraction},
          {"refine_band", c.circles.refine_band},
          {"max_paths", c.circles.max_paths},
          {"duplicate_distance", c.circles.duplicate_distance}}},
        {"sampling", {{"step", c.sample_step}}},
        {"bands", bands},
        {"rules", rules},
        {"rule_selection", {{"line", c.line_rule}, {"circle", c.circle_rule}}},
    };
}

namespace detail {

// Reads fields out of one JSON object, remembering which keys were used so
// leftovers can be reported.
class ObjectReader {
public:
    ObjectReader(const Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (!obj_.is_object())
            fail("expected an object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end())
            return;
        try {
            if constexpr (std::is_integral_v<T>) {
                if (!it->is_number_integer())
                    fail(std::string(key) + " must be an integer");
                const auto v = it->template get<long long>();
                if constexpr (std::is_unsigned_v<T>)
                    if (v < 0)
                        fail(std::string(key) + " must be non-negative");
                out = static_cast<T>(v);
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!it->is_number())
                    fail(std::string(key) + " must be a number");
                out = it->template get<T>();
            } else {
                out = it->template get<T>();
            }
        } catch (const Json::exception& e) {
            fail(std::string(key) + ": " + e.what());
        }
    }

    const Json* child(const char* key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key()))
                fail("unknown key " + it.key());
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::ConfigInvalid, where_ + ": " + msg);
    }

private:
    const Json& obj_;
    std::string where_;
    std::set<std::string> seen_;
};

inline ColorBand band_from_json(const Json& j) {
    ObjectReader r(j, "band");
    ColorBand b;
    std::string cls;
    r.read("class", cls);
    const auto parsed = color_class_from_string(cls);
    if (!parsed)
        r.fail("unknown color class '" + cls + "'");
    b.cls = *parsed;
    r.read("hue_lo", b.hue_lo);
    r.read("hue_hi", b.hue_hi);
    r.read("s_min", b.s_min);
    r.read("v_min", b.v_min);
    r.finish();
    return b;
}

} // namespace detail

inline StitchRule rule_from_json(const Json& j) {
    detail::ObjectReader r(j, "rule");
    std::string type = "lockstitch_301";
    r.read("stitch_type", type);
    const auto parsed = stitch_type_from_string(type);
    if (!parsed)
        r.fail("unknown stitch_type '" + type + "'");
    StitchRule rule = default_rule(*parsed);
    r.read("name", rule.name);
    r.read("pitch", rule.pitch);
    r.read("max_gap_stitches", rule.max_gap_stitches);
    r.read("coverage_max", rule.coverage_max);
    r.read("nominal_coverage", rule.nominal_coverage);
    r.read("min_consecutive", rule.min_consecutive);
    r.finish();
    return rule;
}

inline InspectionConfig config_from_json(const Json& j) {
    InspectionConfig c;
    detail::ObjectReader top(j, "config");
    if (const Json* s = top.child("smoothing")) {
        detail::ObjectReader r(*s, "smoothing");
        r.read("sigma", c.smooth_sigma);
        r.read("radius", c.smooth_radius);
        r.finish();
    }
    std::string polarity = std::string(to_string(c.polarity));
    top.read("polarity", polarity);
    if (polarity == "dark_foreground")
        c.polarity = Polarity::DarkForeground;
    else if (polarity == "light_foreground")
        c.polarity = Polarity::LightForeground;
    else
        top.fail("unknown polarity '" + polarity + "'");
    top.read("min_contrast", c.min_contrast);
    std::string geometry = std::string(to_string(c.geometry));
    top.read("geometry", geometry);
    if (geometry == "lines")
        c.geometry = GeometryMode::Lines;
    else if (geometry == "circles")
        c.geometry = GeometryMode::Circles;
    else if (geometry == "both")
        c.geometry = GeometryMode::Both;
    else
        top.fail("unknown geometry mode '" + geometry + "'");
    if (const Json* l = top.child("lines")) {
        detail::ObjectReader r(*l, "lines");
        r.read("theta_step_deg", c.lines.theta_step_deg);
        r.read("rho_step", c.lines.rho_step);
        r.read("vote_threshold", c.lines.vote_threshold);
        r.read("nms_radius", c.lines.nms_radius);
        r.read("gap_tolerance", c.lines.gap_tolerance);
        r.read("min_run", c.lines.min_run);
        r.read("refine_band", c.lines.refine_band);
        r.read("min_support", c.lines.min_support);
        r.read("max_paths", c.lines.max_paths);
        r.read("duplicate_angle_deg", c.lines.duplicate_angle_deg);
        r.read("duplicate_distance", c.lines.duplicate_distance);
        r.finish();
    }
    if (const Json* ci = top.child("circles")) {
        detail::ObjectReader r(*ci, "circles");
        r.read("r_min", c.circles.r_min);
        r.read("r_max", c.circles.r_max);
        r.read("r_step", c.circles.r_step);
        r.read("vote_fraction", c.circles.vote_fraction);
        r.read("arc_gap_fraction", c.circles.arc_gap_fraction);
        r.read("refine_band", c.circles.refine_band);
        r.read("max_paths", c.circles.max_paths);
        r.read("duplicate_distance", c.circles.duplicate_distance);
        r.finish();
    }
    if (const Json* s = top.child("sampling")) {
        detail::ObjectReader r(*s, "sampling");
        r.read("step", c.sample_step);
        r.finish();
    }
    if (const Json* b = top.child("bands")) {
        if (!b->is_array())
            top.fail("bands must be an array");
        c.bands.clear();
        for (const Json& item : *b)
            c.bands.push_back(detail::band_from_json(item));
    }
    if (const Json* rs = top.child("rules")) {
        if (!rs->is_array())
            top.fail("rules must be an array");
        c.rules.clear();
        for (const Json& item : *rs)
            c.rules.push_back(rule_from_json(item));
    }
    if (const Json* sel = top.child("rule_selection")) {
        detail::ObjectReader r(*sel, "rule_selection");
        r.read("line", c.line_rule);
        r.read("circle", c.circle_rule);
        r.finish();
    }
    top.finish();
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// TOML
// ---------------------------------------------------------------------------

namespace detail {

inline Json toml_to_json(const toml::node& node) {
    if (const auto* t = node.as_table()) {
        Json obj = Json::object();
        for (const auto& [key, value] : *t)
            obj[std::string(key.str())] = toml_to_json(value);
        return obj;
    }
    if (const auto* a = node.as_array()) {
        Json arr = Json::array();
        for (const auto& value : *a)
            arr.push_back(toml_to_json(value));
        return arr;
    }
    if (const auto* v = node.as_integer())
        return v->get();
    if (const auto* v = node.as_floating_point())
        return v->get();
    if (const auto* v = node.as_boolean())
        return v->get();
    if (const auto* v = node.as_string())
        return v->get();
    throw Error(ErrorKind::ConfigInvalid, "unsupported TOML value type (dates and times are not used)");
}

} // namespace detail

inline Json parse_toml_document(const std::string& text, const std::string& source = "config") {
    try {
        return detail::toml_to_json(toml::parse(text, source));
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << source << ": " << e.description() << " at line " << e.source().begin.line;
        throw Error(ErrorKind::ConfigInvalid, os.str());
    }
}

inline Json parse_json_document(const std::string& text, const std::string& source = "config") {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::ConfigInvalid, source + ": " + e.what());
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Loads a config file; ".toml" is read as TOML, anything else as JSON.
inline InspectionConfig load_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const Json doc = path.extension() == ".toml" ? parse_toml_document(text, path.string())
                                                 : parse_json_document(text, path.string());
    return config_from_json(doc);
}

} // namespace seamcheck
