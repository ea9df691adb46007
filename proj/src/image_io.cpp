/*
 * Copyright 2026 The outpaint Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "outpaint/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include "outpaint/errors.hpp"

namespace outpaint {

std::uint8_t quantize_byte(double intensity) {
    double v = std::floor(intensity * 255.0 + 0.5);
    if (v < 0.0) v = 0.0;
    if (v > 255.0) v = 255.0;
    return static_cast<std::uint8_t>(v);
}

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return {};
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(c));
    return ext;
}

// ---- PNM (binary PPM/PGM, maxval 255) ----------------------------------

// Skips whitespace and '#' comments, then parses one decimal token.
int pnm_next_int(std::istream& in) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw DataError("corrupt PNM header");
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1 << 24) throw DataError("PNM header value out of range");
        c = in.get();
    }
    if (c != EOF) in.unget();
    return static_cast<int>(v);
}

ImageTensor load_pnm(std::ifstream& in, int channels) {
    const int w = pnm_next_int(in);
    const int h = pnm_next_int(in);
    const int maxval = pnm_next_int(in);
    if (w < 1 || h < 1) throw DataError("corrupt PNM header: bad dimensions");
    if (maxval != 255)
        throw FormatError("only maxval-255 PNM images are supported");
    if (in.get() == EOF) throw DataError("truncated PNM file");
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h * channels);
    in.read(reinterpret_cast<char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw DataError("truncated PNM payload");
    ImageTensor img(h, w, channels);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        img.data[i] = bytes[i] / 255.0;
    return img;
}

void save_pnm(const ImageTensor& img, const std::string& path, int channels) {
    if (img.channels != channels)
        throw ValueError(channels == 3 ? "PPM requires a 3-channel image"
                                       : "PGM requires a 1-channel image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot open for writing: " + path);
    out << (channels == 3 ? "P6" : "P5") << "\n"
        << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> bytes(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i)
        bytes[i] = quantize_byte(img.data[i]);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FileError("write failed: " + path);
}

// ---- PNG (8-bit, non-interlaced) ----------------------------------------

struct PngError {
    std::string message;
};

void png_error_fn(png_structp, png_const_charp msg) {
    throw PngError{msg ? msg : "libpng error"};
}
void png_warn_fn(png_structp, png_const_charp) {}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

ImageTensor load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw FileError("cannot open file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             png_error_fn, png_warn_fn);
    if (!png) throw Error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("png_create_info_struct failed");
    }

    try {
        png_init_io(png, fp.get());
        png_read_info(png, info);

        const png_uint_32 w = png_get_image_width(png, info);
        const png_uint_32 h = png_get_image_height(png, info);
        const png_byte color = png_get_color_type(png, info);
        const png_byte depth = png_get_bit_depth(png, info);

        // Normalize everything to 8-bit gray or RGB.
        if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
            png_set_expand_gray_1_2_4_to_8(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
        if (depth == 16) png_set_strip_16(png);
        if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
            png_set_strip_alpha(png);
        png_read_update_info(png, info);

        const int channels = png_get_channels(png, info);
        if (channels != 1 && channels != 3)
            throw FormatError("unsupported PNG channel layout");

        std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * channels);
        ImageTensor img(static_cast<int>(h), static_cast<int>(w), channels);
        for (png_uint_32 y = 0; y < h; ++y) {
            png_read_row(png, row.data(), nullptr);
            for (std::size_t i = 0; i < row.size(); ++i)
                img.data[static_cast<std::size_t>(y) * row.size() + i] =
                    row[i] / 255.0;
        }
        png_read_end(png, nullptr);
        png_destroy_read_struct(&png, &info, nullptr);
        return img;
    } catch (const PngError& e) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("corrupt PNG (" + path + "): " + e.message);
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
}

void save_png(const ImageTensor& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw FileError("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              png_error_fn, png_warn_fn);
    if (!png) throw Error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("png_create_info_struct failed");
    }

    try {
        png_init_io(png, fp.get());
        png_set_compression_level(png, 6);
        png_set_IHDR(png, info, img.width, img.height, 8,
                     img.channels == 3 ? PNG_COLOR_TYPE_RGB
                                       : PNG_COLOR_TYPE_GRAY,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);

        std::vector<std::uint8_t> row(
            static_cast<std::size_t>(img.width) * img.channels);
        for (int y = 0; y < img.height; ++y) {
            for (std::size_t i = 0; i < row.size(); ++i)
                row[i] = quantize_byte(
                    img.data[static_cast<std::size_t>(y) * row.size() + i]);
            png_write_row(png, row.data());
        }
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
    } catch (const PngError& e) {
        png_destroy_write_struct(&png, &info);
        throw FileError("PNG write failed (" + path + "): " + e.message);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
}

} // namespace

ImageTensor load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("no such file: " + path);
    char magic[8] = {};
    in.read(magic, 8);
    const std::streamsize got = in.gcount();
    if (got >= 8 && std::memcmp(magic, "\x89PNG\r\n\x1a\n", 8) == 0) {
        in.close();
        return load_png(path);
    }
    if (got >= 2 && magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) {
        in.clear();
        in.seekg(2);
        return load_pnm(in, magic[1] == '6' ? 3 : 1);
    }
    throw FormatError("unsupported image format: " + path);
}

void save_image(const ImageTensor& img, const std::string& path) {
    img.validate();
    const std::string ext = lower_ext(path);
    if (ext == "png")
        save_png(img, path);
    else if (ext == "ppm")
        save_pnm(img, path, 3);
    else if (ext == "pgm")
        save_pnm(img, path, 1);
    else
        throw FormatError("unknown image extension: " + path);
}

} // namespace outpaint
