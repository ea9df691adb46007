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
#ifndef OUTPAINT_TRAIN_HPP
#define OUTPAINT_TRAIN_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "outpaint/edgemap.hpp"
#include "outpaint/image.hpp"
#include "outpaint/loss.hpp"
#include "outpaint/mask_schedule.hpp"
#include "outpaint/net.hpp"
#include "outpaint/tensor.hpp"

namespace outpaint {

// Adversarial objective family for the edge stage: hinge scores from a
// linear discriminator head, or non-saturating log loss from a sigmoid head.
enum class LossVariant { hinge, nsgan };

std::string loss_variant_name(LossVariant v);
LossVariant loss_variant_from_name(const std::string& name);

// Knobs shared by both training stages. The mask schedule carries the
// image size; every dataset image must match it. Training walks the
// schedule front to back, spending iters_per_step iterations on each mask
// width, and drops the learning rate to lr_fine for the last 20% of the
// total iteration budget.
struct TrainConfig {
    std::uint64_t seed = 1;
    int iters_per_step = 62;
    int batch_size = 4;
    double lr_initial = 1e-4;
    double lr_fine = 1e-5;
    // The discriminators update at this fraction of the generator rate.
    // Neither has spectral normalization at this scale, so an equal-rate
    // discriminator reorients its features faster than the generator can
    // track and the adversarial signal degenerates into texture soup; a
    // strongly damped one still separates real from fake but moves slowly
    // enough to act as a stable target.
    double d_lr_scale = 0.01;
    LossVariant loss_variant = LossVariant::hinge;
    ScheduleSpec schedule;
    CannyParams canny;
    LossWeights weights;
    int eval_interval = 50; // held-out metric cadence, in iterations

    int image_width() const { return schedule.image_width; }
    int image_height() const { return schedule.image_height; }

    void validate() const;
};

// Stacks the channels the edge generator reads: grayscale with the masked
// region zeroed, the edge map likewise zeroed, and the mask itself.
Tensor3 edge_generator_input(const ImageTensor& gray, const ImageTensor& edges,
                             const BinaryMask& m);

// Stacks the channels the completion generator reads: the color image with
// the masked region zeroed plus the full composite edge map.
Tensor3 completion_generator_input(const ImageTensor& image,
                                   const ImageTensor& e_comp,
                                   const BinaryMask& m);

// Pairs an image (edge map or color) with its conditioning channels the way
// the discriminators see it: [candidate, condition].
Tensor3 discriminator_input(const Tensor3& candidate, const Tensor3& condition);

// One-sample generator objective for the edge stage: adversarial term from
// the discriminator's score of (predicted edges, gray) plus feature
// matching between the discriminator activations on real and predicted
// pairs. When want_grad is set, analytic gradients are left in g (d's
// gradients are scratch). near_kink flags any feature pair closer than the
// finite-difference guard band, where the L1 terms are not differentiable.
// parts, when given, receives the unweighted component values.
LossProbe edge_generator_objective(ToyNetwork& g, ToyNetwork& d,
                                   const Tensor3& g_input,
                                   const Tensor3& gray_plane,
                                   const ImageTensor& edges_gt,
                                   const LossWeights& w, LossVariant variant,
                                   bool want_grad,
                                   EdgeLossParts* parts = nullptr);

// One-sample generator objective for the completion stage: masked L1
// against the ground-truth image plus adversarial (non-saturating),
// perceptual, and style terms. Gradients land in g; d and the extractor
// stay frozen. near_kink flags L1 or feature gaps inside the guard band.
LossProbe completion_generator_objective(ToyNetwork& g, ToyNetwork& d,
                                         ToyNetwork& extractor,
                                         const Tensor3& g_input,
                                         const Tensor3& e_comp,
                                         const ImageTensor& gt_image,
                                         const BinaryMask& m,
                                         const LossWeights& w, bool want_grad,
                                         CompletionLossParts* parts = nullptr);

// What a finished stage hands back: the trained pair, one JSON line per
// iteration (deterministic under the config seed, byte for byte), the raw
// generator loss sequence, and the held-out metric before and after.
// The held-out metric is edge F1 for the edge stage and masked L1 for the
// completion stage, both measured on the last dataset image under the
// final (widest) mask; curve entries use the mask of the step they were
// taken in.
struct StageResult {
    ToyNetwork generator;
    ToyNetwork discriminator;
    std::vector<std::string> log_lines;
    std::vector<double> g_loss;
    std::vector<std::pair<int, double>> metric_curve; // (iteration, value)
    double initial_metric = 0.0;
    double final_metric = 0.0;
};

// Trains the edge generator and its discriminator from scratch over the
// progressive mask schedule, alternating one discriminator update with one
// generator update per iteration. The last dataset image is held out of
// the batches and used only for evaluation. Throws NumericError as soon as
// any loss stops being finite.
StageResult train_edge_stage(const TrainConfig& cfg,
                             const std::vector<ImageTensor>& dataset);

// Trains the completion generator against a frozen edge generator, whose
// predictions fill the masked part of each composite edge map. The
// discriminator is non-saturating regardless of cfg.loss_variant.
StageResult train_completion_stage(const TrainConfig& cfg,
                                   const std::vector<ImageTensor>& dataset,
                                   ToyNetwork& edge_generator);

// Full outpainting pass: embed the input centered in an out_width canvas,
// circularly shift so the unknown flanks meet in the middle, detect edges
// on the known region, let the edge generator finish the edge map and the
// completion generator fill the pixels, keep every known pixel exactly,
// then shift back. out_width == input.width returns the input unchanged.
// Untrained (all-zero) generators are rejected.
ImageTensor infer_outpaint(ToyNetwork& edge_generator,
                           ToyNetwork& completion_generator,
                           const ImageTensor& input, int out_width,
                           const CannyParams& canny = {});

// Mean absolute jump across the two seams where generated columns meet
// known ones: columns known_off-1|known_off and known_off+known_w-1|+known_w.
// The continuity statistic for judging outpainted flanks.
double boundary_seam_score(const ImageTensor& img, int known_off, int known_w);

} // namespace outpaint

#endif // OUTPAINT_TRAIN_HPP
