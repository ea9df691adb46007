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
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "outpaint/dataset.hpp"
#include "outpaint/errors.hpp"
#include "outpaint/image_io.hpp"
#include "outpaint/rng.hpp"
#include "outpaint/train.hpp"

using namespace outpaint;

namespace {

// Two-step curriculum on 16x16 images; small enough that a full training
// run is a unit-test-sized workload.
TrainConfig tiny_config(std::uint64_t seed) {
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.iters_per_step = 3;
    cfg.batch_size = 2;
    cfg.schedule.total_steps = 2;
    cfg.schedule.start_fraction = 0.125;
    cfg.schedule.end_fraction = 0.25;
    cfg.schedule.image_width = 16;
    cfg.schedule.image_height = 16;
    return cfg;
}

int count_edge_pixels(const ImageTensor& img) {
    const ImageTensor e = canny_edges(to_grayscale(img));
    int n = 0;
    for (double v : e.data) n += v > 0.5 ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("synthetic dataset alternates striped and smooth images") {
    const auto ds = make_synthetic_dataset(8, 64, 32, 7);
    REQUIRE(ds.size() == 8);
    for (const auto& img : ds) {
        CHECK(img.width == 64);
        CHECK(img.height == 32);
        CHECK(img.channels == 3);
        img.validate();
    }
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const int edges = count_edge_pixels(ds[i]);
        if (i % 2 == 1)
            CHECK(edges >= 100); // at least four bar boundaries, full height
        else {
            // One steepest column, possibly widened a pixel by the blur.
            CHECK(edges >= 1);
            CHECK(edges <= 2 * ds[i].height);
        }
    }
}

TEST_CASE("synthetic dataset is seed-deterministic") {
    const auto a = make_synthetic_dataset(6, 32, 16, 11);
    const auto b = make_synthetic_dataset(6, 32, 16, 11);
    const auto c = make_synthetic_dataset(6, 32, 16, 12);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].data == b[i].data);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        any_diff = any_diff || a[i].data != c[i].data;
    CHECK(any_diff);
}

TEST_CASE("synthetic dataset rejects bad arguments") {
    CHECK_THROWS_AS(make_synthetic_dataset(0, 32, 32, 1), ValueError);
    CHECK_THROWS_AS(make_synthetic_dataset(4, 2, 32, 1), ValueError);
}

TEST_CASE("image directory loading is sorted and validated") {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / "outpaint_dataset_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const auto ds = make_synthetic_dataset(2, 16, 8, 3);
    save_image(ds[0], (dir / "b.ppm").string());
    save_image(ds[1], (dir / "a.ppm").string());

    const auto loaded = load_image_directory(dir.string(), 16, 8);
    REQUIRE(loaded.size() == 2);
    // Sorted by name: a.ppm first, which holds ds[1]'s quantized pixels.
    CHECK(loaded[0].at(0, 0, 0) ==
          doctest::Approx(ds[1].at(0, 0, 0)).epsilon(0.01));

    CHECK_THROWS_AS(load_image_directory(dir.string(), 32, 8), DataError);
    CHECK_THROWS_AS(load_image_directory((dir / "missing").string()),
                    FileError);

    const fs::path empty = dir / "empty";
    fs::create_directories(empty);
    CHECK_THROWS_AS(load_image_directory(empty.string()), DataError);
    fs::remove_all(dir);
}

TEST_CASE("generator input builders mask the known channels") {
    ImageTensor gray(4, 4, 1, 0.5);
    ImageTensor edges(4, 4, 1, 1.0);
    BinaryMask m(4, 4, 0);
    m.at(1, 2) = 1;

    const Tensor3 in = edge_generator_input(gray, edges, m);
    REQUIRE(in.channels == 3);
    CHECK(in.at(0, 1, 2) == 0.0);
    CHECK(in.at(1, 1, 2) == 0.0);
    CHECK(in.at(2, 1, 2) == 1.0);
    CHECK(in.at(0, 0, 0) == 0.5);
    CHECK(in.at(1, 0, 0) == 1.0);
    CHECK(in.at(2, 0, 0) == 0.0);

    ImageTensor img(4, 4, 3, 0.25);
    const Tensor3 cin = completion_generator_input(img, edges, m);
    REQUIRE(cin.channels == 4);
    CHECK(cin.at(0, 1, 2) == 0.0);
    CHECK(cin.at(2, 1, 2) == 0.0);
    CHECK(cin.at(3, 1, 2) == 1.0); // edge channel is never masked
    CHECK(cin.at(0, 0, 0) == 0.25);

    CHECK_THROWS_AS(edge_generator_input(img, edges, m), ShapeError);
    CHECK_THROWS_AS(completion_generator_input(gray, edges, m), ShapeError);
}

TEST_CASE("loss variant names round-trip") {
    CHECK(loss_variant_name(LossVariant::hinge) == "hinge");
    CHECK(loss_variant_name(LossVariant::nsgan) == "nsgan");
    CHECK(loss_variant_from_name("hinge") == LossVariant::hinge);
    CHECK(loss_variant_from_name("nsgan") == LossVariant::nsgan);
    CHECK_THROWS_AS(loss_variant_from_name("wgan"), ValueError);
}

TEST_CASE("train config validation rejects bad settings") {
    TrainConfig cfg = tiny_config(1);
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), ValueError);

    cfg = tiny_config(1);
    cfg.lr_fine = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValueError);

    cfg = tiny_config(1);
    cfg.schedule.image_width = 18; // not divisible by 4
    CHECK_THROWS_AS(cfg.validate(), ValueError);

    CHECK_NOTHROW(tiny_config(1).validate());
}

TEST_CASE("edge stage training is bit-deterministic under a fixed seed") {
    const auto ds = make_synthetic_dataset(4, 16, 16, 21);
    const TrainConfig cfg = tiny_config(9);

    const StageResult a = train_edge_stage(cfg, ds);
    const StageResult b = train_edge_stage(cfg, ds);
    CHECK(a.log_lines == b.log_lines);
    CHECK(a.g_loss == b.g_loss);
    CHECK(gather_params(a.generator) == gather_params(b.generator));

    TrainConfig other = cfg;
    other.seed = 10;
    const StageResult c = train_edge_stage(other, ds);
    CHECK(a.log_lines != c.log_lines);
}

TEST_CASE("edge stage logs carry every component and parse as JSON") {
    const auto ds = make_synthetic_dataset(4, 16, 16, 21);
    const TrainConfig cfg = tiny_config(9);
    const StageResult r = train_edge_stage(cfg, ds);

    const int total = cfg.schedule.total_steps * cfg.iters_per_step;
    CHECK(static_cast<int>(r.g_loss.size()) == total);
    REQUIRE(r.metric_curve.size() >= 2);
    CHECK(r.metric_curve.front().first == 0);
    CHECK(r.metric_curve.back().first == total);
    CHECK(r.initial_metric == r.metric_curve.front().second);
    CHECK(r.final_metric == r.metric_curve.back().second);

    int iter_lines = 0;
    for (const std::string& line : r.log_lines) {
        const auto j = nlohmann::json::parse(line);
        if (j.contains("metric")) {
            CHECK(j["metric"] == "edge_f1");
            continue;
        }
        ++iter_lines;
        for (const char* key : {"iter", "step", "lr", "d", "adv", "fm",
                                "total"})
            CHECK(j.contains(key));
        CHECK(std::isfinite(j["total"].get<double>()));
    }
    CHECK(iter_lines == total);
}

TEST_CASE("completion stage trains against a frozen edge generator") {
    const auto ds = make_synthetic_dataset(4, 16, 16, 33);
    const TrainConfig cfg = tiny_config(5);

    Rng rng(5);
    ToyNetwork edge_gen = make_edge_generator(rng);
    const StageResult r = train_completion_stage(cfg, ds, edge_gen);

    const int total = cfg.schedule.total_steps * cfg.iters_per_step;
    CHECK(static_cast<int>(r.g_loss.size()) == total);
    for (const std::string& line : r.log_lines) {
        const auto j = nlohmann::json::parse(line);
        if (j.contains("metric")) {
            CHECK(j["metric"] == "masked_l1");
            continue;
        }
        for (const char* key : {"l1", "adv", "perc", "style", "total", "d"})
            CHECK(j.contains(key));
    }

    ToyNetwork not_edge = make_discriminator(2, false, rng);
    CHECK_THROWS_AS(train_completion_stage(cfg, ds, not_edge), ValueError);
}

TEST_CASE("training rejects unusable datasets") {
    const TrainConfig cfg = tiny_config(1);
    CHECK_THROWS_AS(
        train_edge_stage(cfg, make_synthetic_dataset(1, 16, 16, 1)),
        ValueError);
    CHECK_THROWS_AS(
        train_edge_stage(cfg, make_synthetic_dataset(4, 32, 16, 1)),
        ShapeError);
}

TEST_CASE("outpainting to the input width returns the input bit-exactly") {
    Rng rng(2);
    ToyNetwork ge = make_edge_generator(rng);
    ToyNetwork gc = make_completion_generator(rng);
    const auto ds = make_synthetic_dataset(1, 16, 16, 2);

    const ImageTensor out = infer_outpaint(ge, gc, ds[0], 16);
    CHECK(out.data == ds[0].data);
}

TEST_CASE("outpainting preserves every known pixel bit-exactly") {
    Rng rng(3);
    ToyNetwork ge = make_edge_generator(rng);
    ToyNetwork gc = make_completion_generator(rng);
    const auto ds = make_synthetic_dataset(1, 16, 16, 4);
    const ImageTensor& in = ds[0];

    const ImageTensor out = infer_outpaint(ge, gc, in, 24);
    REQUIRE(out.width == 24);
    REQUIRE(out.height == 16);
    const int off = (24 - 16) / 2;
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
            for (int c = 0; c < 3; ++c)
                CHECK(out.at(y, x + off, c) == in.at(y, x, c));
    // The generated flanks came from a sigmoid, so they are strictly
    // inside (0, 1) and the output is a valid image.
    out.validate();
}

TEST_CASE("outpainting rejects unusable inputs and networks") {
    Rng rng(6);
    ToyNetwork ge = make_edge_generator(rng);
    ToyNetwork gc = make_completion_generator(rng);
    const auto ds = make_synthetic_dataset(1, 16, 16, 6);

    CHECK_THROWS_AS(infer_outpaint(gc, ge, ds[0], 24), ValueError);
    CHECK_THROWS_AS(infer_outpaint(ge, gc, ds[0], 26), ValueError);
    CHECK_THROWS_AS(infer_outpaint(ge, gc, ds[0], 8), ValueError);

    ImageTensor gray(16, 16, 1, 0.5);
    CHECK_THROWS_AS(infer_outpaint(ge, gc, gray, 24), ValueError);

    ToyNetwork zero = make_edge_generator(rng);
    std::vector<double> zeros(param_count(zero), 0.0);
    scatter_params(zero, zeros);
    CHECK_THROWS_AS(infer_outpaint(zero, gc, ds[0], 24), ValueError);
}

TEST_CASE("boundary seam score measures the known-unknown jumps") {
    ImageTensor img(1, 4, 1);
    img.at(0, 0, 0) = 0.0;
    img.at(0, 1, 0) = 1.0;
    img.at(0, 2, 0) = 1.0;
    img.at(0, 3, 0) = 0.0;
    CHECK(boundary_seam_score(img, 1, 2) == doctest::Approx(1.0));
    CHECK(boundary_seam_score(img, 0, 4) == 0.0);
    CHECK_THROWS_AS(boundary_seam_score(img, 3, 2), ValueError);
}

TEST_CASE("objective closures expose their components") {
    Rng rng(8);
    ToyNetwork g = make_edge_generator(rng);
    ToyNetwork d = make_discriminator(2, false, rng);

    const auto ds = make_synthetic_dataset(2, 16, 16, 8);
    const ImageTensor gray = to_grayscale(ds[0]);
    const ImageTensor edges = canny_edges(gray);
    BinaryMask m(16, 16, 0);
    for (int y = 0; y < 16; ++y) m.at(y, 8) = 1;

    LossWeights w;
    EdgeLossParts parts;
    const LossProbe probe = edge_generator_objective(
        g, d, edge_generator_input(gray, edges, m), tensor_from_image(gray),
        edges, w, LossVariant::hinge, true, &parts);
    CHECK(std::isfinite(probe.value));
    CHECK(probe.value ==
          doctest::Approx(w.lambda_hinge * parts.hinge +
                          w.lambda_fm * parts.feature_matching));

    double grad_norm = 0.0;
    for (double v : gather_grads(g)) grad_norm += v * v;
    CHECK(grad_norm > 0.0);
}
