#include <gtest/gtest.h>

#include "seamcheck/color.hpp"
#include "seamcheck/stitch.hpp"

using namespace seamcheck;

namespace {

constexpr ColorClass R = ColorClass::NeedleRed;
constexpr ColorClass G = ColorClass::BobbinGreen;
constexpr ColorClass O = ColorClass::LooperOrange;
constexpr ColorClass B = ColorClass::Background;

// Horizontal path with one sample per pixel, classes given explicitly.
SampleSequence make_seq(const std::vector<ColorClass>& classes) {
    LinearPath p;
    p.line = {0.0, pi / 2};
    p.p0 = {0.0, 10.0};
    p.p1 = {static_cast<double>(classes.size() - 1), 10.0};
    SampleSequence seq{p, 1.0, {}};
    for (std::size_t i = 0; i < classes.size(); ++i)
        seq.samples.push_back({{static_cast<double>(i), 10.0}, static_cast<double>(i), classes[i]});
    return seq;
}

// One pitch of a conforming lockstitch: 3 red, 3 green, 6 bare.
std::vector<ColorClass> conforming(int pitches, ColorClass second = G) {
    std::vector<ColorClass> out;
    for (int k = 0; k < pitches; ++k)
        for (int i = 0; i < 12; ++i)
            out.push_back(i < 3 ? R : i < 6 ? second : B);
    return out;
}

void fill(std::vector<ColorClass>& v, std::size_t from, std::size_t to, ColorClass c) {
    for (std::size_t i = from; i < to; ++i)
        v[i] = c;
}

} // namespace

TEST(Color, DefaultBandExamples) {
    const auto bands = default_bands();
    EXPECT_EQ(classify_pixel({0, 1, 1}, bands), R);
    EXPECT_EQ(classify_pixel({350, 0.9, 0.9}, bands), R);
    EXPECT_EQ(classify_pixel({120, 0.9, 0.8}, bands), G);
    EXPECT_EQ(classify_pixel({120, 0.05, 0.8}, bands), B);
    EXPECT_EQ(classify_pixel({30, 0.9, 0.9}, bands), O);
    EXPECT_EQ(classify_pixel({30, 0.9, 0.1}, bands), B);
    EXPECT_EQ(classify_pixel({200, 0.9, 0.9}, bands), B);
}

TEST(Color, DefaultBandsValid) { EXPECT_NO_THROW(validate_bands(default_bands())); }

TEST(Color, OverlapRejected) {
    auto bands = default_bands();
    bands[2].hue_lo = 10.0; // orange now reaches into red's wrap piece
    try {
        validate_bands(bands);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::OverlappingBands);
    }
    bands = default_bands();
    bands[1].s_min = 0.0;
    EXPECT_THROW(validate_bands(bands), Error);
}

TEST(Color, NamesRoundTrip) {
    for (ColorClass c : {R, G, O, B})
        EXPECT_EQ(color_class_from_string(to_string(c)), c);
    EXPECT_FALSE(color_class_from_string("purple"));
}

TEST(Rules, RequiredColors) {
    EXPECT_EQ(required_colors(StitchType::Lockstitch301), (std::array{R, G}));
    EXPECT_EQ(required_colors(StitchType::Chainstitch401), (std::array{R, O}));
}

TEST(Window, Majority) {
    EXPECT_EQ(window_majority(std::array{R, R, G, B, B}), R);
    EXPECT_EQ(window_majority(std::array{B, B, B, B, B}), B);
    EXPECT_EQ(window_majority(std::array{B, G, G, B, B}), G);
    // a tie resolves to whichever tied class sits nearer the center
    EXPECT_EQ(window_majority(std::array{B, G, R, R, G}), G);
    EXPECT_EQ(window_majority(std::array{R, G, G, R, B}), R);
}

TEST(Sampling, SolidRedBand) {
    ImageRgb img(60, 20, {210, 210, 210});
    for (int y = 8; y <= 12; ++y)
        for (int x = 0; x < 60; ++x)
            img.at(x, y) = {200, 20, 20};
    LinearPath p;
    p.line = {10.0, pi / 2};
    p.p0 = {5, 10};
    p.p1 = {55, 10};
    const SampleSequence seq = sample_path(img, p, 1.0, default_bands());
    ASSERT_EQ(seq.samples.size(), 51u);
    for (const Sample& s : seq.samples)
        EXPECT_EQ(s.cls, R);

    const SampleSequence bare = sample_path(ImageRgb(60, 20, {210, 210, 210}), p, 1.0, default_bands());
    for (const Sample& s : bare.samples)
        EXPECT_EQ(s.cls, B);
}

TEST(Sampling, AlternatingBlocksMatchPixels) {
    const int pitch = 12;
    ImageRgb img(120, 20, {210, 210, 210});
    for (int x = 0; x < 120; ++x)
        for (int y = 8; y <= 12; ++y)
            img.at(x, y) = (x / pitch) % 2 == 0 ? Rgb{190, 25, 30} : Rgb{30, 150, 60};
    LinearPath p;
    p.line = {10.0, pi / 2};
    p.p0 = {0, 10};
    p.p1 = {119, 10};
    const SampleSequence seq = sample_path(img, p, 1.0, default_bands());
    const auto bands = default_bands();
    int run = 0;
    for (std::size_t i = 0; i < seq.samples.size(); ++i) {
        const Sample& s = seq.samples[i];
        const int x = static_cast<int>(std::lround(s.position.x));
        EXPECT_EQ(s.cls, classify_pixel(rgb_to_hsv(img.at(x, 10)), bands));
        ++run;
        if (i + 1 == seq.samples.size() || seq.samples[i + 1].cls != s.cls) {
            EXPECT_EQ(run, pitch);
            run = 0;
        }
    }
}

TEST(Sampling, OutsideImage) {
    LinearPath p;
    p.p0 = {100, 100};
    p.p1 = {120, 100};
    try {
        sample_path(ImageRgb(10, 10), p, 1.0, default_bands());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PathOutsideImage);
    }
}

TEST(Missing, Examples) {
    const StitchRule rule = default_rule(StitchType::Lockstitch301);
    EXPECT_TRUE(detect_missing(make_seq(std::vector<ColorClass>(100, R)), rule).empty());

    std::vector<ColorClass> v(100, R);
    fill(v, 30, 66, B); // 3 pitches of bare fabric
    const auto found = detect_missing(make_seq(v), rule);
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].kind, DefectKind::MissingStitch);
    EXPECT_DOUBLE_EQ(found[0].span_lo, 29.5);
    EXPECT_DOUBLE_EQ(found[0].span_hi, 65.5);

    std::vector<ColorClass> gap(60, R);
    fill(gap, 20, 32, B); // one pitch: an ordinary inter-stitch gap
    EXPECT_TRUE(detect_missing(make_seq(gap), rule).empty());
}

TEST(Skipped, Examples) {
    const StitchRule lock = default_rule(StitchType::Lockstitch301);
    EXPECT_TRUE(detect_skipped(make_seq(conforming(8)), lock).empty());

    auto v = conforming(8);
    fill(v, 36, 48, B);
    fill(v, 36, 39, R); // window 3 keeps only its needle thread
    const auto found = detect_skipped(make_seq(v), lock);
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].kind, DefectKind::SkippedStitch);
    EXPECT_DOUBLE_EQ(found[0].span_lo, 36.0);
    EXPECT_DOUBLE_EQ(found[0].span_hi, 48.0);

    auto bare = conforming(8);
    fill(bare, 36, 48, B);
    EXPECT_TRUE(detect_skipped(make_seq(bare), lock).empty());

    // chainstitch wants orange, so a lockstitch seam fails every window
    const StitchRule chain = default_rule(StitchType::Chainstitch401);
    const auto all = detect_skipped(make_seq(conforming(8)), chain);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_DOUBLE_EQ(all[0].span_lo, 0.0);
    EXPECT_DOUBLE_EQ(all[0].span_hi, 95.0);
}

TEST(Skipped, WindowsInsideMissingSpanIgnored) {
    const StitchRule lock = default_rule(StitchType::Lockstitch301);
    auto v = conforming(10);
    fill(v, 40, 76, B);
    const auto missing = detect_missing(make_seq(v), lock);
    ASSERT_EQ(missing.size(), 1u);
    // window [72, 84) keeps only green after the gap
    EXPECT_FALSE(detect_skipped(make_seq(v), lock).empty());
    EXPECT_TRUE(detect_skipped(make_seq(v), lock, missing).empty());
}

TEST(Superimposed, Examples) {
    const StitchRule lock = default_rule(StitchType::Lockstitch301);
    EXPECT_TRUE(detect_superimposed(make_seq(conforming(10)), lock).empty());
    EXPECT_TRUE(detect_superimposed(make_seq(std::vector<ColorClass>(120, B)), lock).empty());

    auto v = conforming(12);
    for (std::size_t i = 48; i < 96; ++i)
        v[i] = (i / 3) % 2 == 0 ? R : G;
    const auto found = detect_superimposed(make_seq(v), lock);
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].kind, DefectKind::SuperimposedSeam);
    EXPECT_LE(found[0].span_lo, 54.0);
    EXPECT_GE(found[0].span_hi, 90.0);
}

TEST(Merge, CloseDefectsJoin) {
    std::vector<Defect> d{{DefectKind::MissingStitch, 0, 10, 40, {}, "a"},
                          {DefectKind::MissingStitch, 0, 45, 70, {}, "b"},
                          {DefectKind::MissingStitch, 0, 100, 130, {}, "c"}};
    const auto merged = merge_close(d, 12.0);
    ASSERT_EQ(merged.size(), 2u);
    EXPECT_DOUBLE_EQ(merged[0].span_lo, 10);
    EXPECT_DOUBLE_EQ(merged[0].span_hi, 70);
}

TEST(BBox, ClampedToImage) {
    const SampleSequence seq = make_seq(conforming(3));
    const BBox b = span_bbox(seq, 0, 35, 30, 12);
    EXPECT_GE(b.x0, 0);
    EXPECT_GE(b.y0, 0);
    EXPECT_LE(b.x1, 29);
    EXPECT_LE(b.y1, 11);
}
