#pragma once

// Pixel buffers, PPM/PNG codecs and the per-pixel conversions used by the
// inspection pipeline (grayscale, Gaussian smoothing, RGB -> HSV).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include <png.h>

#include "seamcheck/error.hpp"

namespace seamcheck {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major raster with a top-left origin. A default-constructed image is
/// empty (0x0); every other image has width >= 1 and height >= 1.
template <typename Pixel>
class Image {
public:
    using pixel_type = Pixel;

    Image() = default;

    Image(int width, int height, Pixel fill = Pixel{})
        : width_(width), height_(height) {
        check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Image(int width, int height, std::vector<Pixel> data)
        : width_(width), height_(height), data_(std::move(data)) {
        check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw Error(ErrorKind::InvalidArgument, "pixel count does not match width x height");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t size() const noexcept { return data_.size(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    Pixel& at(int x, int y) { return data_[index(x, y)]; }
    const Pixel& at(int x, int y) const { return data_[index(x, y)]; }

    std::span<Pixel> pixels() noexcept { return data_; }
    std::span<const Pixel> pixels() const noexcept { return data_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    static void check_dims(int width, int height) {
        if (width < 1 || height < 1)
            throw Error(ErrorKind::InvalidArgument, "image dimensions must be positive");
    }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Pixel> data_;
};

using ImageRgb = Image<Rgb>;
using ImageGray = Image<std::uint8_t>;

struct HsvPixel {
    double h = 0.0; // degrees, [0, 360)
    double s = 0.0; // [0, 1]
    double v = 0.0; // [0, 1]
};

using Bytes = std::vector<std::uint8_t>;

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

inline Bytes read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(ErrorKind::Io, "short write to " + path.string());
}

namespace detail {

class PnmHeaderReader {
public:
    explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Reads one unsigned decimal token, skipping whitespace and '#' comments.
    long next_number() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size())
            throw Error(ErrorKind::MalformedFile, "truncated PNM header");
        if (bytes_[pos_] < '0' || bytes_[pos_] > '9')
            throw Error(ErrorKind::MalformedFile, "expected a number in PNM header");
        long value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > (1L << 30))
                throw Error(ErrorKind::MalformedFile, "PNM header value out of range");
            ++pos_;
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_]))
            throw Error(ErrorKind::MalformedFile, "missing separator before PNM raster");
        return pos_ + 1;
    }

private:
    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2; // past the magic
};

inline ImageRgb decode_ppm(std::span<const std::uint8_t> bytes) {
    PnmHeaderReader header(bytes);
    const long width = header.next_number();
    const long height = header.next_number();
    const long maxval = header.next_number();
    if (width < 1 || height < 1)
        throw Error(ErrorKind::MalformedFile, "PPM dimensions must be positive");
    if (maxval > 255)
        throw Error(ErrorKind::UnsupportedFormat, "16-bit PPM is not supported");
    if (maxval != 255)
        throw Error(ErrorKind::UnsupportedFormat, "only maxval 255 PPM is supported");
    const std::size_t offset = header.raster_offset();
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < offset || bytes.size() - offset < count * 3)
        throw Error(ErrorKind::MalformedFile, "truncated PPM raster");

    std::vector<Rgb> pixels(count);
    const std::uint8_t* src = bytes.data() + offset;
    for (std::size_t i = 0; i < count; ++i)
        pixels[i] = Rgb{src[3 * i], src[3 * i + 1], src[3 * i + 2]};
    return ImageRgb(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

inline ImageRgb decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw Error(ErrorKind::MalformedFile, std::string("PNG: ") + image.message);
    if (image.format & PNG_FORMAT_FLAG_COLORMAP) {
        png_image_free(&image);
        throw Error(ErrorKind::UnsupportedFormat, "paletted PNG is not supported");
    }
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw Error(ErrorKind::UnsupportedFormat, "16-bit PNG is not supported");
    }
    // Read as RGBA and drop alpha rather than compositing it.
    image.format = PNG_FORMAT_RGBA;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string message = image.message;
        png_image_free(&image);
        throw Error(ErrorKind::MalformedFile, "PNG: " + message);
    }
    const int width = static_cast<int>(image.width);
    const int height = static_cast<int>(image.height);
    std::vector<Rgb> pixels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i] = Rgb{buffer[4 * i], buffer[4 * i + 1], buffer[4 * i + 2]};
    return ImageRgb(width, height, std::move(pixels));
}

} // namespace detail

/// Decodes binary PPM (P6, maxval 255) or 8-bit PNG.
inline ImageRgb decode_image(std::span<const std::uint8_t> bytes) {
    static constexpr std::uint8_t png_magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (bytes.size() >= 8 && std::equal(std::begin(png_magic), std::end(png_magic), bytes.begin()))
        return detail::decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6')
        return detail::decode_ppm(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '7')
        throw Error(ErrorKind::UnsupportedFormat, "only binary RGB PPM (P6) is supported");
    throw Error(ErrorKind::MalformedFile, "unrecognized image signature");
}

/// Binary PPM (P6). decode_image(encode_image(img)) == img.
inline Bytes encode_image(const ImageRgb& img) {
    const std::string header =
        "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    Bytes out(header.begin(), header.end());
    out.reserve(header.size() + img.size() * 3);
    for (const Rgb& p : img.pixels()) {
        out.push_back(p.r);
        out.push_back(p.g);
        out.push_back(p.b);
    }
    return out;
}

/// Binary PGM (P5), used for debug dumps.
inline Bytes encode_pgm(const ImageGray& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    Bytes out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

inline Bytes encode_png(const ImageRgb& img) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    static_assert(sizeof(Rgb) == 3);
    png_alloc_size_t size = 0;
    const void* raster = img.pixels().data();
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, raster, 0, nullptr))
        throw Error(ErrorKind::Io, std::string("PNG encode: ") + image.message);
    Bytes out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, raster, 0, nullptr))
        throw Error(ErrorKind::Io, std::string("PNG encode: ") + image.message);
    out.resize(size);
    return out;
}

inline ImageRgb load_image(const std::filesystem::path& path) {
    const Bytes bytes = read_file_bytes(path);
    return decode_image(bytes);
}

/// Writes PNG for a ".png" extension, PPM otherwise.
inline void save_image(const std::filesystem::path& path, const ImageRgb& img) {
    if (path.extension() == ".png")
        write_file_bytes(path, encode_png(img));
    else
        write_file_bytes(path, encode_image(img));
}

// ---------------------------------------------------------------------------
// Pixel operations
// ---------------------------------------------------------------------------

/// Rec. 601 luma, rounded to nearest.
inline std::uint8_t luma(Rgb p) {
    const double y = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
    return static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
}

inline ImageGray to_grayscale(const ImageRgb& img) {
    ImageGray out(img.width(), img.height());
    std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(), luma);
    return out;
}

/// Normalized weights G(k) for k in [-radius, radius], index k + radius.
inline std::vector<double> gaussian_kernel(double sigma, int radius) {
    if (!(sigma > 0.0))
        throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
    if (radius < 1)
        throw Error(ErrorKind::InvalidArgument, "radius must be at least 1");
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
        kernel[static_cast<std::size_t>(k + radius)] = w;
        sum += w;
    }
    for (double& w : kernel)
        w /= sum;
    return kernel;
}

/// Separable Gaussian blur with edge-clamp borders. The intermediate pass is
/// kept in double precision; only the final result is rounded.
inline ImageGray gaussian_smooth(const ImageGray& img, double sigma, int radius) {
    const std::vector<double> kernel = gaussian_kernel(sigma, radius);
    const int w = img.width();
    const int h = img.height();
    if (2 * radius + 1 > std::min(w, h))
        throw Error(ErrorKind::KernelTooLarge,
                    "kernel size " + std::to_string(2 * radius + 1) + " exceeds image dimension");

    std::vector<double> horizontal(img.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int sx = std::clamp(x + k, 0, w - 1);
                acc += kernel[static_cast<std::size_t>(k + radius)] * img.at(sx, y);
            }
            horizontal[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }

    ImageGray out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int sy = std::clamp(y + k, 0, h - 1);
                acc += kernel[static_cast<std::size_t>(k + radius)] * horizontal[static_cast<std::size_t>(sy) * w + x];
            }
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
        }
    }
    return out;
}

/// Hexcone RGB -> HSV. Achromatic pixels get h = 0 and s = 0.
inline HsvPixel rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int max = std::max({r, g, b});
    const int min = std::min({r, g, b});
    const double delta = max - min;
    HsvPixel out;
    out.v = max / 255.0;
    out.s = max == 0 ? 0.0 : delta / max;
    if (delta == 0.0)
        return out;

    double h;
    if (max == r)
        h = 60.0 * ((g - b) / delta);
    else if (max == g)
        h = 60.0 * ((b - r) / delta + 2.0);
    else
        h = 60.0 * ((r - g) / delta + 4.0);
    if (h < 0.0)
        h += 360.0;
    if (h >= 360.0)
        h -= 360.0;
    out.h = h;
    return out;
}

inline HsvPixel rgb_to_hsv(Rgb p) { return rgb_to_hsv(p.r, p.g, p.b); }

inline Rgb hsv_to_rgb(HsvPixel p) {
    const double c = p.v * p.s;
    const double hp = std::fmod(p.h, 360.0) / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
    }
    const double m = p.v - c;
    auto to_byte = [m](double ch) {
        return static_cast<std::uint8_t>(std::clamp(std::lround((ch + m) * 255.0), 0L, 255L));
    };
    return Rgb{to_byte(r), to_byte(g), to_byte(b)};
}

} // namespace seamcheck
