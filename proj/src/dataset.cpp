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
#include "outpaint/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "outpaint/errors.hpp"
#include "outpaint/image_io.hpp"
#include "outpaint/rng.hpp"

namespace outpaint {

namespace {

// Stripe periods are divisors of the width so every image tiles cleanly
// when wrapped; restricting to [6, width/4] keeps bars wide enough to
// survive the sigma=2 blur and guarantees at least four bar boundaries.
std::vector<int> stripe_periods(int width) {
    std::vector<int> out;
    for (int p = 6; p <= width / 4; ++p) {
        if (width % p == 0) out.push_back(p);
    }
    if (out.empty()) out.push_back(std::max(2, width / 2));
    return out;
}

ImageTensor make_stripes(int width, int height, Rng& rng,
                         const std::vector<int>& periods) {
    const int period = periods[rng.uniform_int(periods.size())];
    const int phase = static_cast<int>(rng.uniform_int(period));
    const double lo = rng.uniform(0.05, 0.35);
    const double contrast = rng.uniform(0.3, 0.6);
    const double hi = lo + contrast;
    // Mild per-channel scaling makes the images colored without moving
    // any edge, so the edge stage and the completion stage see the same
    // geometry.
    double tint[3];
    for (double& t : tint) t = rng.uniform(0.85, 1.0);

    ImageTensor img(height, width, 3);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const bool bar = ((x + phase) % period) * 2 < period;
            const double v = bar ? hi : lo;
            for (int c = 0; c < 3; ++c) img.at(y, x, c) = v * tint[c];
        }
    }
    return img;
}

// Cosine-eased horizontal sweep. Unlike a linear ramp, whose constant
// gradient makes the ratio-threshold detector fire on float noise across
// the whole plateau, the sweep has one steepest column and the detector
// responds only there.
ImageTensor make_sweep(int width, int height, Rng& rng) {
    const double lo = rng.uniform(0.05, 0.3);
    const double hi = lo + rng.uniform(0.3, 0.6);
    const bool reversed = rng.uniform() < 0.5;
    double tint[3];
    for (double& t : tint) t = rng.uniform(0.85, 1.0);

    constexpr double kPi = 3.14159265358979323846;
    ImageTensor img(height, width, 3);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double f = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
            f = (1.0 - std::cos(kPi * f)) / 2.0;
            if (reversed) f = 1.0 - f;
            const double v = lo + f * (hi - lo);
            for (int c = 0; c < 3; ++c) img.at(y, x, c) = v * tint[c];
        }
    }
    return img;
}

bool has_image_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

} // namespace

std::vector<ImageTensor> make_synthetic_dataset(int count, int width,
                                                int height,
                                                std::uint64_t seed) {
    if (count < 1) throw ValueError("dataset count must be >= 1");
    if (width < 4 || height < 4)
        throw ValueError("dataset images must be at least 4x4");

    Rng rng(seed);
    const std::vector<int> periods = stripe_periods(width);
    std::vector<ImageTensor> out;
    out.reserve(static_cast<std::size_t>(count));
    // Stripes sit at odd indices so the last image of an even-sized
    // dataset, the one the trainers hold out, always carries edges.
    for (int i = 0; i < count; ++i) {
        out.push_back(i % 2 == 1 ? make_stripes(width, height, rng, periods)
                                 : make_sweep(width, height, rng));
    }
    return out;
}

std::vector<ImageTensor> load_image_directory(const std::string& dir,
                                              int expect_w, int expect_h) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw FileError("not a directory: " + dir);

    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && has_image_extension(entry.path()))
            paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty())
        throw DataError("no .png/.ppm/.pgm images in " + dir);

    std::vector<ImageTensor> out;
    out.reserve(paths.size());
    for (const auto& p : paths) {
        ImageTensor img = load_image(p.string());
        if ((expect_w > 0 && img.width != expect_w) ||
            (expect_h > 0 && img.height != expect_h)) {
            throw DataError("unexpected image size in " + p.string());
        }
        out.push_back(std::move(img));
    }
    return out;
}

} // namespace outpaint
