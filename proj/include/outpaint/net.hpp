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
#ifndef OUTPAINT_NET_HPP
#define OUTPAINT_NET_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "outpaint/kernels.hpp"
#include "outpaint/loss.hpp"
#include "outpaint/rng.hpp"
#include "outpaint/tensor.hpp"

namespace outpaint {

// Differentiable layer primitives plus two structural markers:
// residual_begin remembers its input and residual_end adds that input back,
// so a block between the markers learns a correction on top of identity.
enum class LayerKind {
    conv,
    conv_transpose,
    instance_norm,
    relu,
    leaky_relu,
    sigmoid,
    tanh,
    global_mean,
    residual_begin,
    residual_end,
};

struct Layer {
    LayerKind kind = LayerKind::relu;
    ConvSpec spec;              // conv and conv_transpose only
    double slope = 0.2;         // leaky_relu only
    std::vector<double> weights;
    std::vector<double> bias;

    // Filled by backward(); same layouts as weights and bias.
    std::vector<double> grad_weights;
    std::vector<double> grad_bias;

    // Forward pass caches consumed by backward().
    Tensor3 input_cache;
    Tensor3 output_cache;
    NormStats stats_cache;
    Tensor3 skip_grad;          // residual_begin: gradient routed from its end
};

Layer make_conv(int in_ch, int out_ch, int kernel, int stride, int pad);
Layer make_conv_transpose(int in_ch, int out_ch, int kernel, int stride,
                          int pad);
Layer make_instance_norm();
Layer make_relu();
Layer make_leaky_relu(double slope = 0.2);
Layer make_sigmoid();
Layer make_tanh();
Layer make_global_mean();
Layer make_residual_begin();
Layer make_residual_end();

enum class NetRole { edge_generator, completion_generator, discriminator };

std::string role_name(NetRole role);
NetRole role_from_name(const std::string& name);

// An ordered layer stack evaluated front to back. Forward caches every
// intermediate activation; backward consumes those caches exactly once.
struct ToyNetwork {
    NetRole role = NetRole::discriminator;
    std::vector<Layer> layers;
    bool cache_fresh = false;

    // Structural checks: residual markers pair up, parameter shapes match
    // the layer specs, every strided stage halves (or doubles) exactly,
    // and the first layer's input channels fit the role.
    void validate() const;
};

// Number of trainable scalars across all layers.
std::size_t param_count(const ToyNetwork& net);

// Canonical parameter order: layers front to back, weights before bias.
// gather/scatter round-trip exactly; gather_grads follows the same order.
std::vector<double> gather_params(const ToyNetwork& net);
void scatter_params(ToyNetwork& net, const std::vector<double>& params);
std::vector<double> gather_grads(const ToyNetwork& net);
void zero_grads(ToyNetwork& net);

// Layer-by-layer evaluation. Throws ShapeError when the input does not fit
// the first layer, and leaves per-layer caches behind for backward().
Tensor3 forward(ToyNetwork& net, const Tensor3& input);

// Reverse-mode sweep. Returns the gradient with respect to the forward
// input and fills every layer's grad_weights/grad_bias. When `tap_grads`
// is given, its layers are added to the flowing gradient at the outputs of
// the matching `tap_kind` layers (front-to-back order), which is how
// feature-level losses feed the chain. Requires a fresh forward cache.
Tensor3 backward(ToyNetwork& net, const Tensor3& grad_out,
                 const ActivationStack* tap_grads = nullptr,
                 LayerKind tap_kind = LayerKind::leaky_relu);

// Cached outputs of every layer of the given kind, after a forward pass.
ActivationStack collect_taps(const ToyNetwork& net, LayerKind kind);

// Architectures. Weights are drawn from normal(0, 0.02) with the caller's
// generator, biases start at zero.
//
// Edge generator: reads 3 channels (gray, edges, mask), emits 1. It runs
// at full resolution throughout ([conv k3 s1 p1, norm, relu] at 8 then 16
// channels, two single-conv residual blocks at 16, one more at 8, a 1x1
// head, sigmoid) because one-pixel edge lines do not survive a stride-2
// round trip at this size.
//
// Completion generator: reads 4 channels (color + edges), emits 3, as an
// hourglass: [conv k4 s2 p1, norm, relu] x2 (8, 16 channels), two
// single-conv residual blocks at 16, [tconv k4 s2 p1, norm, relu] x2
// (8, 4 channels), then a 1x1 conv head into sigmoid; color fill needs
// reach more than precision, so it keeps the wider receptive field.
// Parameter counts stay under 10^4 so the full generators remain
// gradient-checkable.
ToyNetwork make_edge_generator(Rng& rng);
ToyNetwork make_completion_generator(Rng& rng);

// Discriminator: [conv k4 s2 p1, leaky_relu 0.2] x3 (8, 16, 32 channels)
// followed by a global mean. With `sigmoid_head` the scalar passes through
// sigmoid (probability output); without it the score stays linear.
ToyNetwork make_discriminator(int in_channels, bool sigmoid_head, Rng& rng);

// Frozen feature pyramid for perceptual and style losses: three
// [conv k3 s2 p1, relu] stages (8, 16, 32 channels) reading 3 channels.
// Never trained; its relu outputs are the feature taps.
ToyNetwork make_feature_extractor(Rng& rng);

// Runs `net` on the image and returns the relu tap stack.
ActivationStack extractor_features(ToyNetwork& net, const Tensor3& image);

// One evaluation of the objective under test. `near_kink` marks states
// where some piecewise-linear term sits within its guard band of a kink,
// where central differences are meaningless.
struct LossProbe {
    double value = 0.0;
    bool near_kink = false;
};

// Evaluates the loss; when `want_grad` is set it must also leave analytic
// parameter gradients in the network (via backward).
using LossFn = std::function<LossProbe(bool want_grad)>;

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t checked = 0;
    std::size_t skipped = 0;
};

// Central-difference verification of every parameter against the analytic
// gradients, step h. Parameters whose probes land near a kink — flagged by
// the loss itself or betrayed by a rectifier argument changing sign inside
// the probe interval — are skipped and counted instead of failing
// spuriously; the analytic side is exact one-sided there while the central
// difference averages two slopes.
GradCheckReport gradient_check(ToyNetwork& net, const LossFn& loss,
                               double h = 1e-5);

// Checkpoint format: little-endian u32 header length, a JSON header
// describing the architecture and metadata, then every parameter as a
// little-endian f32 in canonical order.
struct CheckpointMeta {
    std::uint64_t seed = 0;
    int step = 0;
};

void save_checkpoint(const ToyNetwork& net, const CheckpointMeta& meta,
                     const std::string& path);
ToyNetwork load_checkpoint(const std::string& path,
                           CheckpointMeta* meta = nullptr);

} // namespace outpaint

#endif // OUTPAINT_NET_HPP
