#include <gtest/gtest.h>

#include <random>

#include "oracles/otsu_oracle.hpp"
#include "seamcheck/binarization.hpp"

using namespace seamcheck;

namespace {

Histogram256 from_counts(const std::array<std::uint64_t, 256>& counts) {
    Histogram256 h;
    h.counts = counts;
    for (auto c : counts)
        h.total += c;
    return h;
}

std::array<std::uint64_t, 256> random_counts(std::mt19937_64& rng) {
    std::array<std::uint64_t, 256> c{};
    std::uniform_int_distribution<int> clusters(1, 4);
    std::uniform_real_distribution<double> center(0, 255), spread(1, 25);
    const int k = clusters(rng);
    for (int j = 0; j < k; ++j) {
        std::normal_distribution<double> g(center(rng), spread(rng));
        const int n = std::uniform_int_distribution<int>(50, 3000)(rng);
        for (int i = 0; i < n; ++i)
            ++c[static_cast<std::size_t>(std::clamp(std::lround(g(rng)), 0L, 255L))];
    }
    return c;
}

int distinct_levels(const std::array<std::uint64_t, 256>& c) {
    return static_cast<int>(std::count_if(c.begin(), c.end(), [](auto v) { return v > 0; }));
}

} // namespace

TEST(Histogram, ConstantImage) {
    const Histogram256 h = histogram(ImageGray(2, 2, 7));
    EXPECT_EQ(h.counts[7], 4u);
    EXPECT_EQ(h.total, 4u);
    for (int i = 0; i < 256; ++i) {
        if (i != 7) {
            EXPECT_EQ(h.counts[static_cast<std::size_t>(i)], 0u);
        }
    }
}

TEST(Histogram, TwoLevels) {
    const Histogram256 h = histogram(ImageGray(2, 1, std::vector<std::uint8_t>{0, 255}));
    EXPECT_EQ(h.counts[0], 1u);
    EXPECT_EQ(h.counts[255], 1u);
}

TEST(Histogram, Conservation) {
    std::mt19937 rng(4);
    ImageGray img(17, 13);
    for (auto& p : img.pixels())
        p = static_cast<std::uint8_t>(rng());
    std::uint64_t sum = 0;
    for (auto c : histogram(img).counts)
        sum += c;
    EXPECT_EQ(sum, 17u * 13u);
}

TEST(Otsu, BimodalPlateauMidpoint) {
    std::array<std::uint64_t, 256> c{};
    c[50] = 50;
    c[200] = 50;
    const auto oracle_answer = oracle::otsu_brute_force(c);
    ASSERT_TRUE(oracle_answer);
    EXPECT_EQ(oracle_answer->argmins.front(), 50);
    EXPECT_EQ(oracle_answer->argmins.back(), 199);
    EXPECT_EQ(oracle_answer->t, 124);
    const ThresholdResult r = otsu_threshold(from_counts(c));
    EXPECT_EQ(r.t, 124);
    EXPECT_EQ(r.objective, 0.0);
}

TEST(Otsu, Degenerate) {
    std::array<std::uint64_t, 256> c{};
    c[128] = 1000;
    try {
        otsu_threshold(from_counts(c));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateHistogram);
    }
    EXPECT_THROW(otsu_threshold(Histogram256{}), Error);
}

TEST(Otsu, MatchesOracle) {
    std::mt19937_64 rng(2024);
    int checked = 0;
    while (checked < 120) {
        const auto c = random_counts(rng);
        if (distinct_levels(c) < 2)
            continue;
        const auto expected = oracle::otsu_brute_force(c);
        const ThresholdResult r = otsu_threshold(from_counts(c));
        ASSERT_EQ(r.t, expected->t);
        EXPECT_EQ(r.objective, expected->objective.convert_to<double>());
        ++checked;
    }
}

TEST(Otsu, ScaleInvariance) {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 30; ++i) {
        auto c = random_counts(rng);
        if (distinct_levels(c) < 2)
            continue;
        const int t = otsu_threshold(from_counts(c)).t;
        for (auto& v : c)
            v *= 7;
        EXPECT_EQ(otsu_threshold(from_counts(c)).t, t);
    }
}

TEST(Otsu, ClassSplitIdentities) {
    std::mt19937_64 rng(8);
    const auto c = random_counts(rng);
    const Histogram256 h = from_counts(c);
    double mean = 0;
    for (int i = 0; i < 256; ++i)
        mean += i * static_cast<double>(c[static_cast<std::size_t>(i)]);
    mean /= static_cast<double>(h.total);
    for (int t = 0; t < 255; ++t) {
        const auto s = class_split(h, t);
        if (!s)
            continue;
        EXPECT_NEAR(s->w1 + s->w2, 1.0, 1e-12);
        EXPECT_NEAR(s->w1 * s->m1 + s->w2 * s->m2, mean, 1e-9);
        const auto exact = oracle::within_class_variance(c, t);
        EXPECT_NEAR(s->objective, exact->convert_to<double>(), 1e-9 * (1 + s->objective));
    }
}

TEST(Binarize, Examples) {
    const BinaryImage zeros = binarize(ImageGray(3, 2, 0), 0, Polarity::DarkForeground);
    EXPECT_EQ(count_foreground(zeros), 6u);

    const ImageGray two(2, 1, std::vector<std::uint8_t>{10, 200});
    const BinaryImage dark = binarize(two, 124, Polarity::DarkForeground);
    EXPECT_EQ(dark.at(0, 0), Label::Foreground);
    EXPECT_EQ(dark.at(1, 0), Label::Background);
    const BinaryImage light = binarize(two, 124, Polarity::LightForeground);
    EXPECT_EQ(light.at(0, 0), Label::Background);
    EXPECT_EQ(light.at(1, 0), Label::Foreground);
}

TEST(Binarize, PolaritiesAreComplements) {
    std::mt19937 rng(1);
    ImageGray img(20, 20);
    for (auto& p : img.pixels())
        p = static_cast<std::uint8_t>(rng());
    for (int t : {0, 77, 128, 254}) {
        const BinaryImage a = binarize(img, t, Polarity::DarkForeground);
        const BinaryImage b = binarize(img, t, Polarity::LightForeground);
        for (std::size_t i = 0; i < a.size(); ++i)
            EXPECT_NE(a.pixels()[i], b.pixels()[i]);
    }
}
