#pragma once

// On-disk report document. Serialization is canonical: keys sorted, every
// floating-point value rounded to 6 significant digits, two-space indent.
// parse_report(serialize_report(r)) reproduces r up to that rounding, and
// re-serializing is byte-identical.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "seamcheck/config.hpp"
#include "seamcheck/inspect.hpp"

namespace seamcheck {

inline constexpr const char* report_schema_version = "1.0";

/// Rounds to 6 significant digits (the %.6g value).
inline double round_sig6(double v) {
    if (!std::isfinite(v) || v == 0.0)
        return v == 0.0 ? 0.0 : v;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::strtod(buf, nullptr);
}

inline void canonicalize(Json& j) {
    if (j.is_number_float()) {
        j = round_sig6(j.get<double>());
    } else if (j.is_structured()) {
        for (auto& child : j)
            canonicalize(child);
    }
}

inline std::string canonical_dump(Json j) {
    canonicalize(j);
    return j.dump(2) + "\n";
}

inline Json to_json(const SeamPath& path) {
    if (const auto* lin = std::get_if<LinearPath>(&path)) {
        return {{"type", "linear"},
                {"rho", lin->line.rho},
                {"theta", lin->line.theta},
                {"p0", {lin->p0.x, lin->p0.y}},
                {"p1", {lin->p1.x, lin->p1.y}},
                {"support", lin->support}};
    }
    const auto& arc = std::get<CircularPath>(path);
    return {{"type", "circular"},
            {"cx", arc.circle.cx},
            {"cy", arc.circle.cy},
            {"radius", arc.circle.radius},
            {"support", arc.circle.support},
            {"arc_start", arc.arc_start},
            {"arc_end", arc.arc_end},
            {"full", arc.full}};
}

inline Json to_json(const Defect& d) {
    return {{"kind", to_string(d.kind)},
            {"path_index", d.path_index},
            {"span", {d.span_lo, d.span_hi}},
            {"bbox", {d.bbox.x0, d.bbox.y0, d.bbox.x1, d.bbox.y1}},
            {"detail", d.detail}};
}

inline Json report_to_json(const InspectionReport& r, bool include_timings = false) {
    Json paths = Json::array();
    for (const InspectedPath& p : r.paths) {
        Json entry = to_json(p.path);
        entry["score"] = p.score;
        entry["length"] = path_length(p.path);
        entry["rule"] = to_json(p.rule);
        paths.push_back(entry);
    }
    Json defects = Json::array();
    for (const Defect& d : r.defects)
        defects.push_back(to_json(d));
    Json doc = {{"schema_version", report_schema_version},
                {"image_id", r.image_id},
                {"image_size", {r.image_width, r.image_height}},
                {"threshold", r.threshold ? Json(*r.threshold) : Json(nullptr)},
                {"verdict", to_string(r.verdict)},
                {"paths", paths},
                {"defects", defects},
                {"diagnostics", r.diagnostics},
                {"params", to_json(r.params)}};
    if (include_timings)
        doc["timings_ms"] = r.timings_ms;
    return doc;
}

inline std::string serialize_report(const InspectionReport& r, bool include_timings = false) {
    return canonical_dump(report_to_json(r, include_timings));
}

inline SeamPath path_from_json(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "linear") {
        LinearPath p;
        p.line = {j.at("rho").get<double>(), j.at("theta").get<double>()};
        p.p0 = {j.at("p0").at(0).get<double>(), j.at("p0").at(1).get<double>()};
        p.p1 = {j.at("p1").at(0).get<double>(), j.at("p1").at(1).get<double>()};
        p.support = j.value("support", 0.0);
        return p;
    }
    if (type == "circular") {
        CircularPath p;
        p.circle.cx = j.at("cx").get<double>();
        p.circle.cy = j.at("cy").get<double>();
        p.circle.radius = j.at("radius").get<double>();
        p.circle.support = j.value("support", 0.0);
        p.arc_start = j.at("arc_start").get<double>();
        p.arc_end = j.at("arc_end").get<double>();
        p.full = j.value("full", false);
        return p;
    }
    throw Error(ErrorKind::MalformedFile, "unknown path type '" + type + "'");
}

inline InspectionReport report_from_json(const Json& j) {
    try {
        if (j.at("schema_version").get<std::string>() != report_schema_version)
            throw Error(ErrorKind::MalformedFile, "unsupported report schema version");
        InspectionReport r;
        r.image_id = j.at("image_id").get<std::string>();
        r.image_width = j.at("image_size").at(0).get<int>();
        r.image_height = j.at("image_size").at(1).get<int>();
        if (!j.at("threshold").is_null())
            r.threshold = j.at("threshold").get<int>();
        const std::string verdict = j.at("verdict").get<std::string>();
        if (verdict != "pass" && verdict != "fail")
            throw Error(ErrorKind::MalformedFile, "verdict must be pass or fail");
        r.verdict = verdict == "pass" ? Verdict::Pass : Verdict::Fail;
        for (const Json& p : j.at("paths")) {
            InspectedPath ip;
            ip.path = path_from_json(p);
            ip.score = p.at("score").get<std::uint32_t>();
            if (auto* lin = std::get_if<LinearPath>(&ip.path))
                lin->score = ip.score;
            else
                std::get<CircularPath>(ip.path).circle.score = ip.score;
            ip.rule = rule_from_json(p.at("rule"));
            r.paths.push_back(std::move(ip));
        }
        for (const Json& d : j.at("defects")) {
            Defect def;
            const auto kind = defect_kind_from_string(d.at("kind").get<std::string>());
            if (!kind)
                throw Error(ErrorKind::MalformedFile, "unknown defect kind");
            def.kind = *kind;
            def.path_index = d.at("path_index").get<int>();
            def.span_lo = d.at("span").at(0).get<double>();
            def.span_hi = d.at("span").at(1).get<double>();
            const Json& b = d.at("bbox");
            def.bbox = {b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(), b.at(3).get<int>()};
            def.detail = d.at("detail").get<std::string>();
            r.defects.push_back(std::move(def));
        }
        r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
        r.params = config_from_json(j.at("params"));
        if (j.contains("timings_ms"))
            r.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
        return r;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::MalformedFile, std::string("report: ") + e.what());
    }
}

inline InspectionReport parse_report(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::MalformedFile, std::string("report: ") + e.what());
    }
    return report_from_json(j);
}

} // namespace seamcheck
