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
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "outpaint/errors.hpp"
#include "outpaint/image_io.hpp"
#include "outpaint/rng.hpp"

using namespace outpaint;
namespace fs = std::filesystem;

namespace {

// Per-process scratch directory; removed when the binary exits normally.
struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / "outpaint_io_test";
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator()(const std::string& name) const {
        return (dir / name).string();
    }
};

Scratch scratch;

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_CASE("quantization rounds half up and clamps") {
    CHECK(quantize_byte(0.0) == 0);
    CHECK(quantize_byte(1.0) == 255);
    CHECK(quantize_byte(0.5) == 128);
    CHECK(quantize_byte(1.0 / 255.0) == 1);
    CHECK(quantize_byte(0.4999) == 127);
    CHECK(quantize_byte(-0.25) == 0);
    CHECK(quantize_byte(1.75) == 255);
}

TEST_CASE("white 2x2 PPM loads as all ones") {
    const std::string path = scratch("white.ppm");
    write_bytes(path, std::string("P6\n2 2\n255\n") + std::string(12, '\xff'));

    ImageTensor img = load_image(path);
    CHECK(img.height == 2);
    CHECK(img.width == 2);
    CHECK(img.channels == 3);
    for (double v : img.data) CHECK(v == 1.0);
}

TEST_CASE("PNM headers may contain comments") {
    const std::string path = scratch("commented.pgm");
    write_bytes(path, std::string("P5\n# made by hand\n2 # width\n1\n255\n") +
                          std::string("\x00\x80", 2));
    ImageTensor img = load_image(path);
    CHECK(img.height == 1);
    CHECK(img.width == 2);
    CHECK(img.channels == 1);
    CHECK(img.at(0, 0, 0) == 0.0);
    CHECK(img.at(0, 1, 0) == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("PPM and PGM round-trip through 8-bit quantization") {
    Rng rng(11);
    ImageTensor color(5, 7, 3);
    for (double& v : color.data) v = rng.uniform();

    const std::string ppm = scratch("roundtrip.ppm");
    save_image(color, ppm);
    ImageTensor back = load_image(ppm);
    REQUIRE(back.same_shape(color));
    for (std::size_t i = 0; i < color.size(); ++i)
        CHECK(back.data[i] == quantize_byte(color.data[i]) / 255.0);

    ImageTensor gray(4, 3, 1);
    for (double& v : gray.data) v = rng.uniform();
    const std::string pgm = scratch("roundtrip.pgm");
    save_image(gray, pgm);
    ImageTensor gback = load_image(pgm);
    REQUIRE(gback.same_shape(gray));
    for (std::size_t i = 0; i < gray.size(); ++i)
        CHECK(gback.data[i] == quantize_byte(gray.data[i]) / 255.0);
}

TEST_CASE("PNG round-trips losslessly at 8 bits") {
    Rng rng(13);
    for (int channels : {1, 3}) {
        ImageTensor img(6, 9, channels);
        for (double& v : img.data) v = rng.uniform();

        const std::string path =
            scratch("roundtrip" + std::to_string(channels) + ".png");
        save_image(img, path);
        ImageTensor back = load_image(path);
        REQUIRE(back.same_shape(img));
        for (std::size_t i = 0; i < img.size(); ++i)
            CHECK(back.data[i] == quantize_byte(img.data[i]) / 255.0);
    }
}

TEST_CASE("format detection reads contents, not the extension") {
    ImageTensor img(2, 2, 3, 0.5);
    const std::string lying = scratch("actually_a_ppm.png");
    {
        std::ofstream out(lying, std::ios::binary);
        out << "P6\n2 2\n255\n";
        for (int i = 0; i < 12; ++i) out.put('\x40');
    }
    ImageTensor back = load_image(lying);
    CHECK(back.channels == 3);
    CHECK(back.at(0, 0, 0) == doctest::Approx(64.0 / 255.0));
}

TEST_CASE("loader failure modes map to distinct exceptions") {
    CHECK_THROWS_AS(load_image(scratch("does_not_exist.png")), FileError);

    const std::string junk = scratch("junk.bin");
    write_bytes(junk, "this is not an image at all");
    CHECK_THROWS_AS(load_image(junk), FormatError);

    const std::string deep = scratch("deep.pgm");
    write_bytes(deep, std::string("P5\n2 2\n65535\n") + std::string(8, 'a'));
    CHECK_THROWS_AS(load_image(deep), FormatError);

    const std::string cut = scratch("cut.ppm");
    write_bytes(cut, std::string("P6\n4 4\n255\n") + std::string(10, 'x'));
    CHECK_THROWS_AS(load_image(cut), DataError);

    const std::string badpng = scratch("bad.png");
    write_bytes(badpng, std::string("\x89PNG\r\n\x1a\n", 8) + "garbage here");
    CHECK_THROWS_AS(load_image(badpng), DataError);
}

TEST_CASE("saver rejects mismatched extension or channels") {
    ImageTensor color(2, 2, 3, 0.5);
    ImageTensor gray(2, 2, 1, 0.5);
    CHECK_THROWS_AS(save_image(color, scratch("img.bmp")), FormatError);
    CHECK_THROWS_AS(save_image(color, scratch("img.pgm")), ValueError);
    CHECK_THROWS_AS(save_image(gray, scratch("img.ppm")), ValueError);
    CHECK_THROWS_AS(save_image(color, "/nonexistent_dir_zz/img.png"), FileError);
}
