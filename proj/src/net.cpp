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
#include "outpaint/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "outpaint/errors.hpp"

namespace outpaint {

namespace {

constexpr double kNormEps = 1e-5;
constexpr double kInitStd = 0.02;

// Matches every residual_end with the nearest unmatched residual_begin.
// pair[i] holds the partner index, -1 for ordinary layers.
std::vector<int> residual_pairs(const std::vector<Layer>& layers) {
    std::vector<int> pair(layers.size(), -1);
    std::vector<int> open;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].kind == LayerKind::residual_begin) {
            open.push_back(static_cast<int>(i));
        } else if (layers[i].kind == LayerKind::residual_end) {
            if (open.empty())
                throw ValueError("residual_end without matching begin");
            pair[i] = open.back();
            pair[static_cast<std::size_t>(open.back())] = static_cast<int>(i);
            open.pop_back();
        }
    }
    if (!open.empty())
        throw ValueError("residual_begin without matching end");
    return pair;
}

bool has_params(const Layer& layer) {
    return layer.kind == LayerKind::conv ||
           layer.kind == LayerKind::conv_transpose;
}

void init_conv_params(Layer& layer, Rng& rng) {
    layer.weights.resize(layer.spec.weight_count());
    for (double& w : layer.weights) w = kInitStd * rng.normal();
    layer.bias.assign(static_cast<std::size_t>(layer.spec.out_channels), 0.0);
}

const char* kind_name(LayerKind kind) {
    switch (kind) {
    case LayerKind::conv: return "conv";
    case LayerKind::conv_transpose: return "conv_transpose";
    case LayerKind::instance_norm: return "instance_norm";
    case LayerKind::relu: return "relu";
    case LayerKind::leaky_relu: return "leaky_relu";
    case LayerKind::sigmoid: return "sigmoid";
    case LayerKind::tanh: return "tanh";
    case LayerKind::global_mean: return "global_mean";
    case LayerKind::residual_begin: return "residual_begin";
    case LayerKind::residual_end: return "residual_end";
    }
    throw ValueError("unknown layer kind");
}

LayerKind kind_from_name(const std::string& name) {
    static const std::pair<const char*, LayerKind> table[] = {
        {"conv", LayerKind::conv},
        {"conv_transpose", LayerKind::conv_transpose},
        {"instance_norm", LayerKind::instance_norm},
        {"relu", LayerKind::relu},
        {"leaky_relu", LayerKind::leaky_relu},
        {"sigmoid", LayerKind::sigmoid},
        {"tanh", LayerKind::tanh},
        {"global_mean", LayerKind::global_mean},
        {"residual_begin", LayerKind::residual_begin},
        {"residual_end", LayerKind::residual_end},
    };
    for (const auto& [n, k] : table)
        if (name == n) return k;
    throw FormatError("unknown layer kind '" + name + "'");
}

} // namespace

Layer make_conv(int in_ch, int out_ch, int kernel, int stride, int pad) {
    Layer layer;
    layer.kind = LayerKind::conv;
    layer.spec = ConvSpec{in_ch, out_ch, kernel, stride, pad};
    layer.spec.validate();
    layer.weights.assign(layer.spec.weight_count(), 0.0);
    layer.bias.assign(static_cast<std::size_t>(out_ch), 0.0);
    return layer;
}

Layer make_conv_transpose(int in_ch, int out_ch, int kernel, int stride,
                          int pad) {
    Layer layer = make_conv(in_ch, out_ch, kernel, stride, pad);
    layer.kind = LayerKind::conv_transpose;
    return layer;
}

namespace {

Layer plain_layer(LayerKind kind) {
    Layer layer;
    layer.kind = kind;
    return layer;
}

} // namespace

Layer make_instance_norm() { return plain_layer(LayerKind::instance_norm); }
Layer make_relu() { return plain_layer(LayerKind::relu); }
Layer make_leaky_relu(double slope) {
    Layer layer = plain_layer(LayerKind::leaky_relu);
    layer.slope = slope;
    return layer;
}
Layer make_sigmoid() { return plain_layer(LayerKind::sigmoid); }
Layer make_tanh() { return plain_layer(LayerKind::tanh); }
Layer make_global_mean() { return plain_layer(LayerKind::global_mean); }
Layer make_residual_begin() {
    return plain_layer(LayerKind::residual_begin);
}
Layer make_residual_end() { return plain_layer(LayerKind::residual_end); }

std::string role_name(NetRole role) {
    switch (role) {
    case NetRole::edge_generator: return "edge_generator";
    case NetRole::completion_generator: return "completion_generator";
    case NetRole::discriminator: return "discriminator";
    }
    throw ValueError("unknown network role");
}

NetRole role_from_name(const std::string& name) {
    if (name == "edge_generator") return NetRole::edge_generator;
    if (name == "completion_generator") return NetRole::completion_generator;
    if (name == "discriminator") return NetRole::discriminator;
    throw FormatError("unknown network role '" + name + "'");
}

void ToyNetwork::validate() const {
    if (layers.empty()) throw ValueError("network has no layers");
    residual_pairs(layers);

    const Layer* first_conv = nullptr;
    for (const Layer& layer : layers) {
        if (!has_params(layer)) continue;
        if (!first_conv) first_conv = &layer;
        layer.spec.validate();
        if (layer.weights.size() != layer.spec.weight_count())
            throw ShapeError("layer weight buffer does not match its spec");
        if (layer.bias.size() !=
            static_cast<std::size_t>(layer.spec.out_channels))
            throw ShapeError("layer bias buffer does not match its spec");
        // Every strided stage must halve (conv) or double (transpose)
        // exactly; stride-1 stages must preserve the extent.
        if (layer.spec.stride == 2) {
            if (layer.spec.kernel != 4 || layer.spec.pad != 1)
                throw ValueError(
                    "stride-2 stages require kernel 4 and padding 1");
        } else if (layer.spec.stride == 1) {
            if (layer.spec.pad != layer.spec.kernel / 2 ||
                layer.spec.kernel % 2 != 1)
                throw ValueError(
                    "stride-1 stages must preserve the spatial extent");
        } else {
            throw ValueError("only strides 1 and 2 are used");
        }
    }
    if (!first_conv) throw ValueError("network has no trainable layers");

    const int in_ch = first_conv->spec.in_channels;
    if (role == NetRole::edge_generator && in_ch != 3)
        throw ShapeError("edge generator must read 3 channels");
    if (role == NetRole::completion_generator && in_ch != 4)
        throw ShapeError("completion generator must read 4 channels");
    if (role != NetRole::discriminator &&
        layers.back().kind != LayerKind::sigmoid)
        throw ValueError("generators must end in sigmoid");
}

std::size_t param_count(const ToyNetwork& net) {
    std::size_t n = 0;
    for (const Layer& layer : net.layers)
        n += layer.weights.size() + layer.bias.size();
    return n;
}

std::vector<double> gather_params(const ToyNetwork& net) {
    std::vector<double> out;
    out.reserve(param_count(net));
    for (const Layer& layer : net.layers) {
        out.insert(out.end(), layer.weights.begin(), layer.weights.end());
        out.insert(out.end(), layer.bias.begin(), layer.bias.end());
    }
    return out;
}

void scatter_params(ToyNetwork& net, const std::vector<double>& params) {
    if (params.size() != param_count(net))
        throw ShapeError("parameter vector length mismatch");
    std::size_t pos = 0;
    for (Layer& layer : net.layers) {
        std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos),
                    layer.weights.size(), layer.weights.begin());
        pos += layer.weights.size();
        std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos),
                    layer.bias.size(), layer.bias.begin());
        pos += layer.bias.size();
    }
}

std::vector<double> gather_grads(const ToyNetwork& net) {
    std::vector<double> out;
    out.reserve(param_count(net));
    for (const Layer& layer : net.layers) {
        if (has_params(layer) && layer.grad_weights.size() !=
                                     layer.weights.size())
            throw DataError("gradients missing; run backward first");
        out.insert(out.end(), layer.grad_weights.begin(),
                   layer.grad_weights.end());
        out.insert(out.end(), layer.grad_bias.begin(), layer.grad_bias.end());
    }
    return out;
}

void zero_grads(ToyNetwork& net) {
    for (Layer& layer : net.layers) {
        layer.grad_weights.assign(layer.weights.size(), 0.0);
        layer.grad_bias.assign(layer.bias.size(), 0.0);
    }
}

Tensor3 forward(ToyNetwork& net, const Tensor3& input) {
    if (net.layers.empty()) throw ValueError("network has no layers");
    const std::vector<int> pairs = residual_pairs(net.layers);

    Tensor3 cur = input;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        Layer& layer = net.layers[i];
        layer.input_cache = std::move(cur);
        const Tensor3& in = layer.input_cache;
        Tensor3 out;
        switch (layer.kind) {
        case LayerKind::conv:
            out = kernels::conv2d_forward(in, layer.weights, layer.bias,
                                          layer.spec);
            break;
        case LayerKind::conv_transpose:
            out = kernels::tconv2d_forward(in, layer.weights, layer.bias,
                                           layer.spec);
            break;
        case LayerKind::instance_norm:
            layer.stats_cache = kernels::instance_norm_stats(in, kNormEps);
            out = kernels::instance_norm_forward(in, layer.stats_cache);
            break;
        case LayerKind::relu:
            out = in;
            for (double& v : out.data) v = v > 0.0 ? v : 0.0;
            break;
        case LayerKind::leaky_relu:
            out = in;
            for (double& v : out.data) v = v > 0.0 ? v : layer.slope * v;
            break;
        case LayerKind::sigmoid:
            out = in;
            for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
            break;
        case LayerKind::tanh:
            out = in;
            for (double& v : out.data) v = std::tanh(v);
            break;
        case LayerKind::global_mean: {
            double acc = 0.0;
            for (double v : in.data) acc += v;
            out = Tensor3(1, 1, 1);
            out.data[0] = acc / static_cast<double>(in.size());
            break;
        }
        case LayerKind::residual_begin:
            out = in;
            break;
        case LayerKind::residual_end: {
            const Tensor3& skip =
                net.layers[static_cast<std::size_t>(pairs[i])].input_cache;
            if (!skip.same_shape(in))
                throw ShapeError("residual block changed the tensor shape");
            out = in;
            for (std::size_t j = 0; j < out.data.size(); ++j)
                out.data[j] += skip.data[j];
            break;
        }
        }
        layer.output_cache = out;
        cur = std::move(out);
    }
    net.cache_fresh = true;
    return cur;
}

Tensor3 backward(ToyNetwork& net, const Tensor3& grad_out,
                 const ActivationStack* tap_grads, LayerKind tap_kind) {
    if (net.layers.empty()) throw ValueError("network has no layers");
    if (!net.cache_fresh)
        throw DataError("forward cache is stale; run forward first");
    if (!grad_out.same_shape(net.layers.back().output_cache))
        throw ShapeError("output gradient shape mismatch");
    const std::vector<int> pairs = residual_pairs(net.layers);

    std::size_t tap_count = 0;
    for (const Layer& layer : net.layers)
        if (layer.kind == tap_kind) ++tap_count;
    if (tap_grads && tap_grads->layers.size() != tap_count)
        throw ShapeError("tap gradient count does not match the network");

    Tensor3 g = grad_out;
    std::size_t tap_idx = tap_count;
    for (std::size_t i = net.layers.size(); i-- > 0;) {
        Layer& layer = net.layers[i];
        if (layer.kind == tap_kind && tap_grads) {
            --tap_idx;
            const Tensor3& tg = tap_grads->layers[tap_idx];
            if (!tg.same_shape(g))
                throw ShapeError("tap gradient shape mismatch");
            for (std::size_t j = 0; j < g.data.size(); ++j)
                g.data[j] += tg.data[j];
        }
        switch (layer.kind) {
        case LayerKind::conv:
            kernels::conv2d_backward_params(g, layer.input_cache, layer.spec,
                                            layer.grad_weights,
                                            layer.grad_bias);
            g = kernels::conv2d_backward_input(g, layer.weights, layer.spec,
                                               layer.input_cache.height,
                                               layer.input_cache.width);
            break;
        case LayerKind::conv_transpose:
            kernels::tconv2d_backward_params(g, layer.input_cache, layer.spec,
                                             layer.grad_weights,
                                             layer.grad_bias);
            g = kernels::tconv2d_backward_input(g, layer.weights, layer.spec,
                                                layer.input_cache.height,
                                                layer.input_cache.width);
            break;
        case LayerKind::instance_norm:
            g = kernels::instance_norm_backward(layer.input_cache,
                                                layer.stats_cache, g);
            break;
        case LayerKind::relu:
            for (std::size_t j = 0; j < g.data.size(); ++j)
                if (layer.input_cache.data[j] <= 0.0) g.data[j] = 0.0;
            break;
        case LayerKind::leaky_relu:
            for (std::size_t j = 0; j < g.data.size(); ++j)
                if (layer.input_cache.data[j] <= 0.0)
                    g.data[j] *= layer.slope;
            break;
        case LayerKind::sigmoid:
            for (std::size_t j = 0; j < g.data.size(); ++j) {
                const double s = layer.output_cache.data[j];
                g.data[j] *= s * (1.0 - s);
            }
            break;
        case LayerKind::tanh:
            for (std::size_t j = 0; j < g.data.size(); ++j) {
                const double t = layer.output_cache.data[j];
                g.data[j] *= 1.0 - t * t;
            }
            break;
        case LayerKind::global_mean: {
            const Tensor3& in = layer.input_cache;
            const double s =
                g.data[0] / static_cast<double>(in.size());
            g = Tensor3(in.channels, in.height, in.width, s);
            break;
        }
        case LayerKind::residual_begin:
            if (!layer.skip_grad.data.empty()) {
                for (std::size_t j = 0; j < g.data.size(); ++j)
                    g.data[j] += layer.skip_grad.data[j];
                layer.skip_grad = Tensor3();
            }
            break;
        case LayerKind::residual_end:
            net.layers[static_cast<std::size_t>(pairs[i])].skip_grad = g;
            break;
        }
    }
    return g;
}

ActivationStack collect_taps(const ToyNetwork& net, LayerKind kind) {
    ActivationStack taps;
    for (const Layer& layer : net.layers)
        if (layer.kind == kind) taps.layers.push_back(layer.output_cache);
    return taps;
}

namespace {

void append_generator_trunk(ToyNetwork& net, int in_ch, int out_ch,
                            Rng& rng) {
    auto add = [&net](Layer layer) {
        net.layers.push_back(std::move(layer));
    };
    add(make_conv(in_ch, 8, 4, 2, 1));
    add(make_instance_norm());
    add(make_relu());
    add(make_conv(8, 16, 4, 2, 1));
    add(make_instance_norm());
    add(make_relu());
    for (int block = 0; block < 2; ++block) {
        add(make_residual_begin());
        add(make_conv(16, 16, 3, 1, 1));
        add(make_instance_norm());
        add(make_relu());
        add(make_residual_end());
    }
    add(make_conv_transpose(16, 8, 4, 2, 1));
    add(make_instance_norm());
    add(make_relu());
    add(make_conv_transpose(8, 4, 4, 2, 1));
    add(make_instance_norm());
    add(make_relu());
    add(make_conv(4, out_ch, 1, 1, 0));
    add(make_sigmoid());
    for (Layer& layer : net.layers)
        if (has_params(layer)) init_conv_params(layer, rng);
}

} // namespace

ToyNetwork make_edge_generator(Rng& rng) {
    ToyNetwork net;
    net.role = NetRole::edge_generator;
    // Edge maps are one-pixel lines; they do not survive a stride-2
    // round trip at this parameter budget, so the edge network keeps full
    // resolution throughout and trades receptive field for precision.
    auto add = [&net](Layer layer) {
        net.layers.push_back(std::move(layer));
    };
    add(make_conv(3, 8, 3, 1, 1));
    add(make_instance_norm());
    add(make_relu());
    add(make_conv(8, 16, 3, 1, 1));
    add(make_instance_norm());
    add(make_relu());
    for (int block = 0; block < 2; ++block) {
        add(make_residual_begin());
        add(make_conv(16, 16, 3, 1, 1));
        add(make_instance_norm());
        add(make_relu());
        add(make_residual_end());
    }
    add(make_conv(16, 8, 3, 1, 1));
    add(make_instance_norm());
    add(make_relu());
    add(make_conv(8, 1, 1, 1, 0));
    add(make_sigmoid());
    for (Layer& layer : net.layers)
        if (has_params(layer)) init_conv_params(layer, rng);
    net.validate();
    return net;
}

ToyNetwork make_completion_generator(Rng& rng) {
    ToyNetwork net;
    net.role = NetRole::completion_generator;
    append_generator_trunk(net, 4, 3, rng);
    net.validate();
    return net;
}

ToyNetwork make_discriminator(int in_channels, bool sigmoid_head, Rng& rng) {
    ToyNetwork net;
    net.role = NetRole::discriminator;
    net.layers.push_back(make_conv(in_channels, 8, 4, 2, 1));
    net.layers.push_back(make_leaky_relu());
    net.layers.push_back(make_conv(8, 16, 4, 2, 1));
    net.layers.push_back(make_leaky_relu());
    net.layers.push_back(make_conv(16, 32, 4, 2, 1));
    net.layers.push_back(make_leaky_relu());
    net.layers.push_back(make_global_mean());
    if (sigmoid_head) net.layers.push_back(make_sigmoid());
    for (Layer& layer : net.layers)
        if (has_params(layer)) init_conv_params(layer, rng);
    net.validate();
    return net;
}

ToyNetwork make_feature_extractor(Rng& rng) {
    ToyNetwork net;
    net.role = NetRole::discriminator;
    net.layers.push_back(make_conv(3, 8, 3, 2, 1));
    net.layers.push_back(make_relu());
    net.layers.push_back(make_conv(8, 16, 3, 2, 1));
    net.layers.push_back(make_relu());
    net.layers.push_back(make_conv(16, 32, 3, 2, 1));
    net.layers.push_back(make_relu());
    for (Layer& layer : net.layers)
        if (has_params(layer)) init_conv_params(layer, rng);
    return net;
}

ActivationStack extractor_features(ToyNetwork& net, const Tensor3& image) {
    forward(net, image);
    return collect_taps(net, LayerKind::relu);
}

namespace {

// Sign pattern of every rectifier argument in the net's cached forward
// pass. A probe that flips any entry stepped across that rectifier's
// kink, so the central difference there mixes two slopes.
std::vector<bool> rectifier_signs(const ToyNetwork& net) {
    std::vector<bool> signs;
    for (const Layer& layer : net.layers) {
        if (layer.kind != LayerKind::relu &&
            layer.kind != LayerKind::leaky_relu)
            continue;
        for (double v : layer.input_cache.data) signs.push_back(v > 0.0);
    }
    return signs;
}

} // namespace

GradCheckReport gradient_check(ToyNetwork& net, const LossFn& loss,
                               double h) {
    const LossProbe base = loss(true);
    const std::vector<double> analytic = gather_grads(net);
    const std::vector<bool> base_signs = rectifier_signs(net);
    std::vector<double> params = gather_params(net);

    GradCheckReport report;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + h;
        scatter_params(net, params);
        const LossProbe up = loss(false);
        const std::vector<bool> up_signs = rectifier_signs(net);
        params[i] = keep - h;
        scatter_params(net, params);
        const LossProbe down = loss(false);
        const std::vector<bool> down_signs = rectifier_signs(net);
        params[i] = keep;
        scatter_params(net, params);

        if (base.near_kink || up.near_kink || down.near_kink ||
            up_signs != base_signs || down_signs != base_signs) {
            ++report.skipped;
            continue;
        }
        const double fd = (up.value - down.value) / (2.0 * h);
        // The floor sets the absolute agreement demanded of numerically
        // dead parameters: below it, the central difference measures
        // cancellation noise (~eps * |loss| / h), not the gradient, so a
        // raw ratio would amplify that noise into spurious failures.
        const double denom =
            std::max({std::abs(analytic[i]), std::abs(fd), 1e-4});
        report.max_rel_error = std::max(report.max_rel_error,
                                        std::abs(analytic[i] - fd) / denom);
        ++report.checked;
    }
    return report;
}

namespace {

nlohmann::json layer_to_json(const Layer& layer) {
    nlohmann::json j;
    j["kind"] = kind_name(layer.kind);
    if (has_params(layer)) {
        j["in"] = layer.spec.in_channels;
        j["out"] = layer.spec.out_channels;
        j["kernel"] = layer.spec.kernel;
        j["stride"] = layer.spec.stride;
        j["pad"] = layer.spec.pad;
    }
    if (layer.kind == LayerKind::leaky_relu) j["slope"] = layer.slope;
    return j;
}

Layer layer_from_json(const nlohmann::json& j) {
    const LayerKind kind = kind_from_name(j.at("kind").get<std::string>());
    switch (kind) {
    case LayerKind::conv:
        return make_conv(j.at("in"), j.at("out"), j.at("kernel"),
                         j.at("stride"), j.at("pad"));
    case LayerKind::conv_transpose:
        return make_conv_transpose(j.at("in"), j.at("out"), j.at("kernel"),
                                   j.at("stride"), j.at("pad"));
    case LayerKind::leaky_relu:
        return make_leaky_relu(j.value("slope", 0.2));
    case LayerKind::instance_norm: return make_instance_norm();
    case LayerKind::relu: return make_relu();
    case LayerKind::sigmoid: return make_sigmoid();
    case LayerKind::tanh: return make_tanh();
    case LayerKind::global_mean: return make_global_mean();
    case LayerKind::residual_begin: return make_residual_begin();
    case LayerKind::residual_end: return make_residual_end();
    }
    throw FormatError("unknown layer kind in checkpoint");
}

} // namespace

void save_checkpoint(const ToyNetwork& net, const CheckpointMeta& meta,
                     const std::string& path) {
    nlohmann::json header;
    header["format"] = "outpaint-checkpoint-v1";
    header["role"] = role_name(net.role);
    header["seed"] = meta.seed;
    header["step"] = meta.step;
    header["param_count"] = param_count(net);
    header["layers"] = nlohmann::json::array();
    for (const Layer& layer : net.layers)
        header["layers"].push_back(layer_to_json(layer));

    const std::string text = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot open '" + path + "' for writing");

    const std::uint32_t len = static_cast<std::uint32_t>(text.size());
    unsigned char len_bytes[4] = {
        static_cast<unsigned char>(len & 0xff),
        static_cast<unsigned char>((len >> 8) & 0xff),
        static_cast<unsigned char>((len >> 16) & 0xff),
        static_cast<unsigned char>((len >> 24) & 0xff),
    };
    out.write(reinterpret_cast<const char*>(len_bytes), 4);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));

    for (const double p : gather_params(net)) {
        const float f = static_cast<float>(p);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        unsigned char b[4] = {
            static_cast<unsigned char>(bits & 0xff),
            static_cast<unsigned char>((bits >> 8) & 0xff),
            static_cast<unsigned char>((bits >> 16) & 0xff),
            static_cast<unsigned char>((bits >> 24) & 0xff),
        };
        out.write(reinterpret_cast<const char*>(b), 4);
    }
    if (!out) throw FileError("short write to '" + path + "'");
}

ToyNetwork load_checkpoint(const std::string& path, CheckpointMeta* meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open '" + path + "'");

    unsigned char len_bytes[4];
    in.read(reinterpret_cast<char*>(len_bytes), 4);
    if (!in) throw DataError("checkpoint truncated in header length");
    const std::uint32_t len = static_cast<std::uint32_t>(len_bytes[0]) |
                              (static_cast<std::uint32_t>(len_bytes[1]) << 8) |
                              (static_cast<std::uint32_t>(len_bytes[2]) << 16) |
                              (static_cast<std::uint32_t>(len_bytes[3]) << 24);
    std::string text(len, '\0');
    in.read(text.data(), static_cast<std::streamsize>(len));
    if (!in) throw DataError("checkpoint truncated in header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
        throw FormatError("checkpoint header is not valid JSON");
    }
    if (header.value("format", "") != "outpaint-checkpoint-v1")
        throw FormatError("not an outpaint checkpoint");

    ToyNetwork net;
    try {
        net.role = role_from_name(header.at("role").get<std::string>());
        for (const nlohmann::json& jl : header.at("layers"))
            net.layers.push_back(layer_from_json(jl));
        if (meta) {
            meta->seed = header.value("seed", std::uint64_t{0});
            meta->step = header.value("step", 0);
        }
    } catch (const nlohmann::json::exception&) {
        throw FormatError("checkpoint header is missing required fields");
    }

    const std::size_t count = param_count(net);
    if (header.value("param_count", std::size_t{0}) != count)
        throw FormatError("checkpoint parameter count disagrees with its "
                          "architecture");
    std::vector<double> params(count);
    for (std::size_t i = 0; i < count; ++i) {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        if (!in) throw DataError("checkpoint truncated in parameter blob");
        const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) |
                                   (static_cast<std::uint32_t>(b[1]) << 8) |
                                   (static_cast<std::uint32_t>(b[2]) << 16) |
                                   (static_cast<std::uint32_t>(b[3]) << 24);
        float f;
        std::memcpy(&f, &bits, 4);
        params[i] = static_cast<double>(f);
    }
    scatter_params(net, params);
    net.validate();
    return net;
}

} // namespace outpaint
