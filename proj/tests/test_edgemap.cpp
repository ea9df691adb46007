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

#include <cmath>
#include <filesystem>
#include <vector>

#include "outpaint/edgemap.hpp"
#include "outpaint/errors.hpp"
#include "outpaint/image_io.hpp"
#include "outpaint/rng.hpp"

using namespace outpaint;

namespace {

ImageTensor random_gray(Rng& rng, int h, int w) {
    ImageTensor img(h, w, 1);
    for (double& v : img.data) v = rng.uniform();
    return img;
}

ImageTensor vertical_step(int h, int w, int edge_col, double lo, double hi) {
    ImageTensor img(h, w, 1, lo);
    for (int y = 0; y < h; ++y)
        for (int x = edge_col; x < w; ++x) img.at(y, x, 0) = hi;
    return img;
}

double variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return var / static_cast<double>(v.size());
}

} // namespace

TEST_CASE("smoothing fixes constants and normalizes an impulse") {
    ImageTensor flat(9, 9, 1, 0.375);
    ImageTensor out = gaussian_smooth(flat, 2.0);
    for (double v : out.data)
        CHECK(v == doctest::Approx(0.375).epsilon(1e-12));

    // Unit impulse far from every border: the response is the outer product
    // of the 1-D taps, computed here from first principles.
    const double sigma = 1.0;
    const int r = 3;
    ImageTensor impulse(15, 15, 1);
    impulse.at(7, 7, 0) = 1.0;
    ImageTensor resp = gaussian_smooth(impulse, sigma);

    std::vector<double> taps(2 * r + 1);
    double norm = 0.0;
    for (int i = -r; i <= r; ++i) {
        taps[i + r] = std::exp(-i * i / (2.0 * sigma * sigma));
        norm += taps[i + r];
    }
    for (double& t : taps) t /= norm;

    double total = 0.0;
    for (int y = 0; y < 15; ++y)
        for (int x = 0; x < 15; ++x) {
            const int dy = y - 7;
            const int dx = x - 7;
            const double want =
                (std::abs(dy) <= r && std::abs(dx) <= r)
                    ? taps[dy + r] * taps[dx + r]
                    : 0.0;
            CHECK(resp.at(y, x, 0) == doctest::Approx(want).epsilon(1e-12));
            total += resp.at(y, x, 0);
        }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("smoothing never increases the variance of noise") {
    for (int seed = 1; seed <= 100; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        ImageTensor noise = random_gray(rng, 16, 16);
        ImageTensor out = gaussian_smooth(noise, 1.5);
        CHECK(variance(out.data) <= variance(noise.data));
    }
}

TEST_CASE("sobel on a constant image is silent") {
    ImageTensor flat(8, 8, 1, 0.7);
    GradientField f = sobel_gradients(flat);
    for (double v : f.magnitude.data) CHECK(v == 0.0);
}

TEST_CASE("sobel step response has weight four") {
    ImageTensor img = vertical_step(6, 10, 5, 0.0, 1.0);
    GradientField f = sobel_gradients(img);
    for (int y = 0; y < 6; ++y) {
        CHECK(f.magnitude.at(0, y, 4) == 4.0);
        CHECK(f.magnitude.at(0, y, 5) == 4.0);
        CHECK(f.gy.at(0, y, 4) == 0.0);
        CHECK(f.magnitude.at(0, y, 2) == 0.0);
    }
}

TEST_CASE("rotating the image by 90 degrees swaps the gradient fields") {
    Rng rng(61);
    ImageTensor img = random_gray(rng, 9, 13);
    GradientField f = sobel_gradients(img);

    // rot(y, x) = img(h-1-x, y)
    ImageTensor rot(img.width, img.height, 1);
    for (int y = 0; y < rot.height; ++y)
        for (int x = 0; x < rot.width; ++x)
            rot.at(y, x, 0) = img.at(img.height - 1 - x, y, 0);
    GradientField g = sobel_gradients(rot);

    for (int y = 0; y < rot.height; ++y)
        for (int x = 0; x < rot.width; ++x) {
            const int u = img.height - 1 - x;
            const int v = y;
            CHECK(std::abs(g.gy.at(0, y, x)) ==
                  doctest::Approx(std::abs(f.gx.at(0, u, v))).epsilon(1e-12));
            CHECK(std::abs(g.gx.at(0, y, x)) ==
                  doctest::Approx(std::abs(f.gy.at(0, u, v))).epsilon(1e-12));
        }
}

TEST_CASE("canny finds nothing in a constant image") {
    ImageTensor flat(16, 16, 1, 0.42);
    ImageTensor edges = canny_edges(flat);
    for (double v : edges.data) CHECK(v == 0.0);
}

TEST_CASE("canny traces a vertical step as one single-pixel line") {
    ImageTensor img = vertical_step(32, 32, 16, 0.1, 0.9);
    ImageTensor edges = canny_edges(img);

    int edge_col = -1;
    for (int y = 0; y < 32; ++y) {
        int count = 0;
        int col = -1;
        for (int x = 0; x < 32; ++x)
            if (edges.at(y, x, 0) == 1.0) {
                ++count;
                col = x;
            }
        CHECK(count == 1);
        if (edge_col == -1) edge_col = col;
        CHECK(col == edge_col);
    }
    // The line hugs the intensity boundary.
    CHECK(edge_col >= 14);
    CHECK(edge_col <= 16);
}

TEST_CASE("canny output is binary and hysteresis-consistent") {
    Rng rng(67);
    CannyParams params;
    for (int trial = 0; trial < 20; ++trial) {
        ImageTensor img = random_gray(rng, 24, 24);
        ImageTensor edges = canny_edges(img, params);

        for (double v : edges.data) CHECK((v == 0.0 || v == 1.0));

        GradientField f = sobel_gradients(gaussian_smooth(img, params.gaussian_sigma));
        double max_mag = 0.0;
        for (double v : f.magnitude.data) max_mag = std::max(max_mag, v);

        // Every edge pixel clears the low threshold, and flooding from the
        // strong pixels through edge pixels reaches every edge pixel.
        const double low = params.low_threshold * max_mag;
        const double high = params.high_threshold * max_mag;
        std::vector<char> reached(edges.data.size(), 0);
        std::vector<std::pair<int, int>> stack;
        for (int y = 0; y < 24; ++y)
            for (int x = 0; x < 24; ++x) {
                if (edges.at(y, x, 0) != 1.0) continue;
                CHECK(f.magnitude.at(0, y, x) >= low - 1e-12);
                if (f.magnitude.at(0, y, x) >= high) {
                    reached[static_cast<std::size_t>(y) * 24 + x] = 1;
                    stack.emplace_back(y, x);
                }
            }
        while (!stack.empty()) {
            const auto [y, x] = stack.back();
            stack.pop_back();
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int ny = y + dy;
                    const int nx = x + dx;
                    if (ny < 0 || ny >= 24 || nx < 0 || nx >= 24) continue;
                    const std::size_t i =
                        static_cast<std::size_t>(ny) * 24 + nx;
                    if (reached[i] || edges.at(ny, nx, 0) != 1.0) continue;
                    reached[i] = 1;
                    stack.emplace_back(ny, nx);
                }
        }
        for (int y = 0; y < 24; ++y)
            for (int x = 0; x < 24; ++x)
                if (edges.at(y, x, 0) == 1.0)
                    CHECK(reached[static_cast<std::size_t>(y) * 24 + x] == 1);
    }
}

TEST_CASE("canny parameter validation") {
    ImageTensor img(8, 8, 1, 0.5);
    CannyParams p;
    p.gaussian_sigma = 0.0;
    CHECK_THROWS_AS(canny_edges(img, p), ValueError);
    p = CannyParams{};
    p.low_threshold = 0.3;
    p.high_threshold = 0.2;
    CHECK_THROWS_AS(canny_edges(img, p), ValueError);
    p = CannyParams{};
    p.high_threshold = 1.5;
    CHECK_THROWS_AS(canny_edges(img, p), ValueError);

    ImageTensor color(8, 8, 3, 0.5);
    CHECK_THROWS_AS(canny_edges(color, CannyParams{}), ShapeError);
}

TEST_CASE("edge composition selects by mask") {
    Rng rng(71);
    ImageTensor gt = random_gray(rng, 6, 6);
    ImageTensor pred = random_gray(rng, 6, 6);

    BinaryMask zeros(6, 6, 0);
    CHECK(composite_edge_map(gt, pred, zeros).data == gt.data);
    BinaryMask ones(6, 6, 1);
    CHECK(composite_edge_map(gt, pred, ones).data == pred.data);

    BinaryMask m(6, 6);
    for (auto& v : m.data) v = rng.uniform() < 0.5 ? 1 : 0;
    CHECK(composite_edge_map(gt, gt, m).data == gt.data);

    ImageTensor comp = composite_edge_map(gt, pred, m);
    double sum_comp = 0.0;
    double sum_parts = 0.0;
    for (double v : comp.data) sum_comp += v;
    for (double v : apply_mask(gt, m).data) sum_parts += v;
    for (double v : apply_mask_complement(pred, m).data) sum_parts += v;
    CHECK(sum_comp == doctest::Approx(sum_parts).epsilon(1e-12));
}

TEST_CASE("edge F1 counting") {
    ImageTensor gt(4, 5, 1);
    ImageTensor pred(4, 5, 1);

    // Both empty.
    F1Score s = edge_f1(pred, gt);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);

    // gt has 10 edge pixels; pred hits 5 and invents 5.
    for (int i = 0; i < 10; ++i) gt.data[static_cast<std::size_t>(i)] = 1.0;
    for (int i = 5; i < 10; ++i) pred.data[static_cast<std::size_t>(i)] = 1.0;
    for (int i = 10; i < 15; ++i) pred.data[static_cast<std::size_t>(i)] = 1.0;
    s = edge_f1(pred, gt);
    CHECK(s.precision == doctest::Approx(0.5));
    CHECK(s.recall == doctest::Approx(0.5));
    CHECK(s.f1 == doctest::Approx(0.5));

    // Perfect match.
    s = edge_f1(gt, gt);
    CHECK(s.f1 == 1.0);

    // Empty prediction against nonempty truth.
    ImageTensor none(4, 5, 1);
    s = edge_f1(none, gt);
    CHECK(s.precision == 0.0);
    CHECK(s.recall == 0.0);
    CHECK(s.f1 == 0.0);

    ImageTensor other(5, 4, 1);
    CHECK_THROWS_AS(edge_f1(other, gt), ShapeError);
}

TEST_CASE("edge F1 is symmetric for binary maps") {
    Rng rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        ImageTensor a(7, 7, 1);
        ImageTensor b(7, 7, 1);
        for (double& v : a.data) v = rng.uniform() < 0.3 ? 1.0 : 0.0;
        for (double& v : b.data) v = rng.uniform() < 0.3 ? 1.0 : 0.0;
        CHECK(edge_f1(a, b).f1 == doctest::Approx(edge_f1(b, a).f1));
    }
}

TEST_CASE("edge maps survive a PGM round trip") {
    ImageTensor img = vertical_step(16, 16, 8, 0.0, 1.0);
    ImageTensor edges = canny_edges(img);

    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "outpaint_edges.pgm";
    save_image(edges, path.string());
    ImageTensor back = load_image(path.string());
    CHECK(back.data == edges.data);
    fs::remove(path);
}
