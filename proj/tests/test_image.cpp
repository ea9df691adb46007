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

#include "outpaint/errors.hpp"
#include "outpaint/image.hpp"
#include "outpaint/rng.hpp"

using namespace outpaint;

namespace {

ImageTensor random_image(Rng& rng, int h, int w, int c) {
    ImageTensor img(h, w, c);
    for (double& v : img.data) v = rng.uniform();
    return img;
}

BinaryMask random_mask(Rng& rng, int h, int w) {
    BinaryMask m(h, w);
    for (auto& v : m.data) v = rng.uniform() < 0.5 ? 1 : 0;
    return m;
}

} // namespace

TEST_CASE("image construction fills and validates") {
    ImageTensor img(2, 3, 3, 0.25);
    CHECK(img.size() == 18);
    CHECK(img.at(1, 2, 0) == 0.25);
    CHECK_NOTHROW(img.validate());

    CHECK_THROWS_AS(ImageTensor(0, 3, 3), ValueError);
    CHECK_THROWS_AS(ImageTensor(2, -1, 1), ValueError);
    CHECK_THROWS_AS(ImageTensor(2, 2, 2), ValueError);
    CHECK_THROWS_AS(ImageTensor(2, 2, 4), ValueError);
}

TEST_CASE("image validate rejects out-of-range and misshaped data") {
    ImageTensor img(2, 2, 1, 0.5);
    img.data[3] = 1.5;
    CHECK_THROWS_AS(img.validate(), ValueError);
    img.data[3] = -0.1;
    CHECK_THROWS_AS(img.validate(), ValueError);
    img.data[3] = 1.0;
    CHECK_NOTHROW(img.validate());

    img.data.push_back(0.0);
    CHECK_THROWS_AS(img.validate(), ShapeError);
}

TEST_CASE("mask construction, sum, validate") {
    BinaryMask m(3, 4, 1);
    CHECK(m.sum() == 12);
    m.at(0, 0) = 0;
    CHECK(m.sum() == 11);
    CHECK_NOTHROW(m.validate());

    m.data[5] = 2;
    CHECK_THROWS_AS(m.validate(), ValueError);
    CHECK_THROWS_AS(BinaryMask(0, 4), ValueError);
    CHECK_THROWS_AS(BinaryMask(2, 2, 7), ValueError);
}

TEST_CASE("grayscale uses BT.601 weights") {
    ImageTensor red(1, 1, 3);
    red.at(0, 0, 0) = 1.0;
    ImageTensor gray = to_grayscale(red);
    CHECK(gray.channels == 1);
    CHECK(gray.at(0, 0, 0) == 0.299);

    ImageTensor green(1, 1, 3);
    green.at(0, 0, 1) = 1.0;
    CHECK(to_grayscale(green).at(0, 0, 0) == 0.587);

    ImageTensor blue(1, 1, 3);
    blue.at(0, 0, 2) = 1.0;
    CHECK(to_grayscale(blue).at(0, 0, 0) == 0.114);

    // Neutral gray maps to (nearly) itself: the weights sum to one.
    ImageTensor mid(1, 1, 3, 0.5);
    CHECK(to_grayscale(mid).at(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));

    ImageTensor mono(1, 1, 1, 0.5);
    CHECK_THROWS_AS(to_grayscale(mono), ShapeError);
}

TEST_CASE("masking keeps the partition identity exactly") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int h = 1 + rng.uniform_int(6);
        const int w = 1 + rng.uniform_int(6);
        const int c = rng.uniform_int(2) == 0 ? 1 : 3;
        ImageTensor img = random_image(rng, h, w, c);
        BinaryMask m = random_mask(rng, h, w);

        ImageTensor kept = apply_mask(img, m);
        ImageTensor hole = apply_mask_complement(img, m);
        REQUIRE(kept.same_shape(img));
        for (std::size_t i = 0; i < img.size(); ++i)
            CHECK(kept.data[i] + hole.data[i] == img.data[i]);
    }
}

TEST_CASE("apply_mask zeroes exactly the masked columns") {
    ImageTensor img(2, 3, 1, 1.0);
    BinaryMask m(2, 3);
    m.at(0, 1) = 1;
    m.at(1, 2) = 1;

    ImageTensor kept = apply_mask(img, m);
    CHECK(kept.at(0, 0, 0) == 1.0);
    CHECK(kept.at(0, 1, 0) == 0.0);
    CHECK(kept.at(1, 2, 0) == 0.0);

    ImageTensor hole = apply_mask_complement(img, m);
    CHECK(hole.at(0, 0, 0) == 0.0);
    CHECK(hole.at(0, 1, 0) == 1.0);
}

TEST_CASE("compose_masked selects b inside the mask") {
    ImageTensor a(2, 2, 3, 0.25);
    ImageTensor b(2, 2, 3, 0.75);
    BinaryMask m(2, 2);
    m.at(1, 0) = 1;

    ImageTensor out = compose_masked(a, b, m);
    CHECK(out.at(0, 0, 0) == 0.25);
    CHECK(out.at(1, 0, 0) == 0.75);
    CHECK(out.at(1, 0, 2) == 0.75);
    CHECK(out.at(1, 1, 1) == 0.25);
}

TEST_CASE("mask and image shape mismatches are rejected") {
    ImageTensor img(2, 2, 1, 0.0);
    BinaryMask m(2, 3);
    CHECK_THROWS_AS(apply_mask(img, m), ShapeError);
    CHECK_THROWS_AS(apply_mask_complement(img, m), ShapeError);

    ImageTensor other(2, 3, 1, 0.0);
    CHECK_THROWS_AS(compose_masked(img, other, m), ShapeError);
}
