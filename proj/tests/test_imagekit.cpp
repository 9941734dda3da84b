#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "seamcheck/imagekit.hpp"

using namespace seamcheck;

namespace {

Bytes bytes_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

ImageRgb random_image(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> d(0, 255);
    ImageRgb img(w, h);
    for (Rgb& p : img.pixels())
        p = {static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng))};
    return img;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no seamcheck::Error thrown";
    return ErrorKind::Io;
}

} // namespace

TEST(Ppm, SinglePixel) {
    Bytes b = bytes_of("P6\n1 1\n255\n");
    b.insert(b.end(), {255, 0, 0});
    const ImageRgb img = decode_image(b);
    ASSERT_EQ(img.width(), 1);
    ASSERT_EQ(img.height(), 1);
    EXPECT_EQ(img.at(0, 0), (Rgb{255, 0, 0}));
}

TEST(Ppm, RowMajorOrder) {
    Bytes b = bytes_of("P6 2 2 255\n");
    for (std::uint8_t v = 0; v < 12; ++v)
        b.push_back(v);
    const ImageRgb img = decode_image(b);
    EXPECT_EQ(img.at(0, 0), (Rgb{0, 1, 2}));
    EXPECT_EQ(img.at(1, 0), (Rgb{3, 4, 5}));
    EXPECT_EQ(img.at(0, 1), (Rgb{6, 7, 8}));
    EXPECT_EQ(img.at(1, 1), (Rgb{9, 10, 11}));
    EXPECT_EQ(decode_image(encode_image(img)), img);
}

TEST(Ppm, CommentsInHeader) {
    Bytes b = bytes_of("P6\n# made by hand\n1 # width done\n1\n255\n");
    b.insert(b.end(), {1, 2, 3});
    EXPECT_EQ(decode_image(b).at(0, 0), (Rgb{1, 2, 3}));
}

TEST(Ppm, MalformedInputs) {
    EXPECT_EQ(kind_of([] { decode_image(bytes_of("P6\n1")); }), ErrorKind::MalformedFile);
    EXPECT_EQ(kind_of([] { decode_image(bytes_of("P6\n2 2\n255\n\x01\x02")); }), ErrorKind::MalformedFile);
    EXPECT_EQ(kind_of([] { decode_image(bytes_of("hello")); }), ErrorKind::MalformedFile);
    EXPECT_EQ(kind_of([] { decode_image(bytes_of("P3\n1 1\n255\n0 0 0\n")); }), ErrorKind::UnsupportedFormat);
    EXPECT_EQ(kind_of([] { decode_image(bytes_of("P6\n1 1\n65535\n\0\0\0\0\0\0")); }), ErrorKind::UnsupportedFormat);
}

TEST(Ppm, EncodeMinimal) {
    Bytes expected = bytes_of("P6\n1 1\n255\n");
    expected.insert(expected.end(), {0, 0, 0});
    EXPECT_EQ(encode_image(ImageRgb(1, 1)), expected);
}

TEST(Ppm, EncodePayloadOrder) {
    const ImageRgb img(2, 1, std::vector<Rgb>{{1, 2, 3}, {4, 5, 6}});
    const Bytes b = encode_image(img);
    const Bytes payload(b.end() - 6, b.end());
    EXPECT_EQ(payload, (Bytes{1, 2, 3, 4, 5, 6}));
}

TEST(Ppm, RandomRoundTrip) {
    for (std::uint32_t seed = 0; seed < 20; ++seed) {
        const ImageRgb img = random_image(1 + static_cast<int>(seed % 8), 8, seed);
        EXPECT_EQ(decode_image(encode_image(img)), img);
    }
}

TEST(Png, RoundTripThroughFile) {
    const ImageRgb img = random_image(13, 7, 99);
    const auto path = std::filesystem::temp_directory_path() / "seamcheck_png_roundtrip.png";
    save_image(path, img);
    EXPECT_EQ(load_image(path), img);
    std::filesystem::remove(path);
}

TEST(Png, CorruptData) {
    Bytes b = encode_png(random_image(4, 4, 1));
    b.resize(b.size() / 2);
    EXPECT_THROW(decode_image(b), Error);
}

TEST(Grayscale, Anchors) {
    EXPECT_EQ(luma({255, 255, 255}), 255);
    EXPECT_EQ(luma({0, 0, 0}), 0);
    EXPECT_EQ(luma({255, 0, 0}), static_cast<int>(std::lround(0.299 * 255)));
    EXPECT_EQ(luma({255, 0, 0}), 76);
}

TEST(Grayscale, Pointwise) {
    const ImageRgb img = random_image(9, 5, 3);
    const ImageGray g = to_grayscale(img);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            EXPECT_EQ(g.at(x, y), luma(img.at(x, y)));
}

TEST(Gaussian, KernelSumsToOne) {
    for (double sigma : {0.5, 1.0, 2.5})
        for (int radius : {1, 2, 5}) {
            double sum = 0;
            for (double w : gaussian_kernel(sigma, radius))
                sum += w;
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
}

TEST(Gaussian, ConstantImageUnchanged) {
    const ImageGray img(11, 9, 100);
    for (double sigma : {0.3, 1.0, 4.0})
        EXPECT_EQ(gaussian_smooth(img, sigma, 2), img);
}

TEST(Gaussian, ImpulseCenterMatchesKernel) {
    ImageGray img(9, 9, 0);
    img.at(4, 4) = 255;
    double norm = 0;
    for (int k = -2; k <= 2; ++k)
        norm += std::exp(-k * k / 2.0);
    const double g0 = 1.0 / norm;
    EXPECT_EQ(gaussian_smooth(img, 1.0, 2).at(4, 4), std::lround(255.0 * g0 * g0));
}

TEST(Gaussian, StaysWithinInputRange) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(40, 90);
    ImageGray img(16, 16);
    for (auto& p : img.pixels())
        p = static_cast<std::uint8_t>(d(rng));
    const ImageGray out = gaussian_smooth(img, 1.3, 3);
    for (std::uint8_t v : out.pixels()) {
        EXPECT_GE(v, 40);
        EXPECT_LE(v, 90);
    }
}

TEST(Gaussian, KernelTooLarge) {
    EXPECT_EQ(kind_of([] { gaussian_smooth(ImageGray(3, 10), 1.0, 2); }), ErrorKind::KernelTooLarge);
    EXPECT_EQ(kind_of([] { gaussian_smooth(ImageGray(10, 10), -1.0, 2); }), ErrorKind::InvalidArgument);
}

TEST(Hsv, Examples) {
    const HsvPixel red = rgb_to_hsv(255, 0, 0);
    EXPECT_EQ(red.h, 0.0);
    EXPECT_EQ(red.s, 1.0);
    EXPECT_EQ(red.v, 1.0);
    const HsvPixel green = rgb_to_hsv(0, 255, 0);
    EXPECT_EQ(green.h, 120.0);
    const HsvPixel gray = rgb_to_hsv(128, 128, 128);
    EXPECT_EQ(gray.h, 0.0);
    EXPECT_EQ(gray.s, 0.0);
    EXPECT_NEAR(gray.v, 0.502, 1e-3);
}

TEST(Hsv, InverseWithinOne) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(0, 255);
    for (int i = 0; i < 2000; ++i) {
        const Rgb p{static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng))};
        const Rgb q = hsv_to_rgb(rgb_to_hsv(p));
        EXPECT_LE(std::abs(p.r - q.r), 1);
        EXPECT_LE(std::abs(p.g - q.g), 1);
        EXPECT_LE(std::abs(p.b - q.b), 1);
    }
}
