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
#include "outpaint/train.hpp"

#include <cmath>

#include "json.hpp"
#include "outpaint/errors.hpp"
#include "outpaint/optim.hpp"
#include "outpaint/rearrange.hpp"
#include "outpaint/rng.hpp"

namespace outpaint {

namespace {

// Finite-difference guard bands. A piecewise-linear term whose arguments
// sit closer to a kink than the probe step can resolve makes central
// differences meaningless, so objectives flag those states instead of
// reporting a bogus gradient.
constexpr double kKinkGuard = 1e-6;
// Relative band: a gram gap under this fraction of the entries' combined
// magnitude can cross zero inside a probe step and flip the style sign.
constexpr double kGramGuard = 1e-6;
// Mirror of the probability clamp inside the non-saturating losses.
constexpr double kProbEps = 1e-7;

bool near_probability_clamp(double p) {
    return p <= 2.0 * kProbEps || p >= 1.0 - 2.0 * kProbEps;
}

bool stacks_near_tie(const ActivationStack& a, const ActivationStack& b) {
    for (std::size_t l = 0; l < a.layers.size(); ++l)
        for (std::size_t i = 0; i < a.layers[l].data.size(); ++i) {
            const double va = a.layers[l].data[i];
            const double vb = b.layers[l].data[i];
            // Two dead rectifier outputs tie at exactly zero, but the gap
            // is pinned there under small perturbations — a flat stretch,
            // not a kink. Only moving ties threaten the |a-b| terms.
            if (va == 0.0 && vb == 0.0) continue;
            if (std::abs(va - vb) < kKinkGuard) return true;
        }
    return false;
}

bool grams_near_tie(const ActivationStack& a, const ActivationStack& b) {
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        const Eigen::MatrixXd ga = gram_matrix(a.layers[l]);
        const Eigen::MatrixXd gb = gram_matrix(b.layers[l]);
        for (Eigen::Index j = 0; j < ga.size(); ++j) {
            const double va = ga.data()[j];
            const double vb = gb.data()[j];
            // Gram entries scale with the square of the feature magnitude,
            // so the tie band must scale with them: a fixed absolute band
            // flags every near-dead channel pair and nothing else. A pair
            // of exactly-zero entries (dead channels both sides) yields
            // 0 < 0 and correctly stays unflagged — that stretch is flat.
            if (std::abs(va - vb) < kGramGuard * (std::abs(va) + std::abs(vb)))
                return true;
        }
    }
    return false;
}

bool masked_l1_near_tie(const ImageTensor& pred, const ImageTensor& gt,
                        const BinaryMask& m) {
    const int c = pred.channels;
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        if (!m.data[i]) continue;
        for (int k = 0; k < c; ++k)
            if (std::abs(pred.data[i * c + k] - gt.data[i * c + k]) <
                kKinkGuard)
                return true;
    }
    return false;
}

void scale_stack(ActivationStack& s, double factor) {
    for (Tensor3& layer : s.layers)
        for (double& v : layer.data) v *= factor;
}

void add_scaled_stack(ActivationStack& dst, const ActivationStack& src,
                      double factor) {
    for (std::size_t l = 0; l < src.layers.size(); ++l)
        for (std::size_t i = 0; i < src.layers[l].data.size(); ++i)
            dst.layers[l].data[i] += factor * src.layers[l].data[i];
}

void add_tensor(Tensor3& dst, const Tensor3& src) {
    if (!dst.same_shape(src)) throw ShapeError("gradient shapes differ");
    for (std::size_t i = 0; i < src.data.size(); ++i)
        dst.data[i] += src.data[i];
}

// The masked-L1 gradient arrives in the image's interleaved layout; the
// network wants it planar.
Tensor3 planar_from_interleaved(const std::vector<double>& grad, int h, int w,
                                int c) {
    Tensor3 out(c, h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int k = 0; k < c; ++k)
                out.at(k, y, x) =
                    grad[(static_cast<std::size_t>(y) * w + x) * c + k];
    return out;
}

double score_of(const Tensor3& d_out) { return d_out.data.at(0); }

void accumulate(std::vector<double>& acc, const std::vector<double>& grads,
                double factor) {
    if (acc.size() != grads.size()) throw ShapeError("gradient sizes differ");
    for (std::size_t i = 0; i < grads.size(); ++i)
        acc[i] += factor * grads[i];
}

bool all_zero_params(const ToyNetwork& net) {
    for (const Layer& layer : net.layers) {
        for (double w : layer.weights)
            if (w != 0.0) return false;
        for (double b : layer.bias)
            if (b != 0.0) return false;
    }
    return true;
}

// Per-image tensors both stages draw from; computed once per dataset.
struct Sample {
    ImageTensor image;     // 3-channel ground truth
    ImageTensor gray_img;  // luminance
    ImageTensor edges_img; // detector output on the luminance
    Tensor3 gray;
    Tensor3 edges;
    Tensor3 color;
};

std::vector<Sample> prepare_samples(const TrainConfig& cfg,
                                    const std::vector<ImageTensor>& dataset) {
    if (dataset.size() < 2)
        throw ValueError("training needs at least two images (one held out)");
    std::vector<Sample> out;
    out.reserve(dataset.size());
    for (const ImageTensor& img : dataset) {
        if (img.width != cfg.image_width() || img.height != cfg.image_height())
            throw ShapeError("dataset image size does not match the schedule");
        if (img.channels != 3)
            throw ShapeError("training images must have 3 channels");
        Sample s;
        s.image = img;
        s.gray_img = to_grayscale(img);
        s.edges_img = canny_edges(s.gray_img, cfg.canny);
        s.gray = tensor_from_image(s.gray_img);
        s.edges = tensor_from_image(s.edges_img);
        s.color = tensor_from_image(img);
        out.push_back(std::move(s));
    }
    return out;
}

double current_lr(const TrainConfig& cfg, int iter, int total_iters) {
    // The fine rate serves the last fifth of the budget.
    return iter > (total_iters * 4) / 5 ? cfg.lr_fine : cfg.lr_initial;
}

void check_finite(double v, const char* what, int iter) {
    if (!std::isfinite(v))
        throw NumericError(std::string(what) + " is not finite at iteration " +
                           std::to_string(iter));
}

// Masks of every step's width never reach the border columns, otherwise
// the held-out seam would have no known side.
void check_masks(const TrainConfig& cfg) {
    for (int step = 1; step <= cfg.schedule.total_steps; ++step) {
        const BinaryMask m = build_center_mask(cfg.schedule, step);
        if (m.sum() == 0)
            throw ValueError("schedule produced an empty mask at step " +
                             std::to_string(step));
        if (m.sum() == m.data.size())
            throw ValueError("schedule produced an all-unknown mask at step " +
                             std::to_string(step));
    }
}

} // namespace

std::string loss_variant_name(LossVariant v) {
    return v == LossVariant::hinge ? "hinge" : "nsgan";
}

LossVariant loss_variant_from_name(const std::string& name) {
    if (name == "hinge") return LossVariant::hinge;
    if (name == "nsgan") return LossVariant::nsgan;
    throw ValueError("unknown loss variant: " + name);
}

void TrainConfig::validate() const {
    if (iters_per_step < 1) throw ValueError("iters_per_step must be >= 1");
    if (batch_size < 1) throw ValueError("batch_size must be >= 1");
    if (lr_initial <= 0.0 || lr_fine <= 0.0)
        throw ValueError("learning rates must be positive");
    if (d_lr_scale <= 0.0)
        throw ValueError("d_lr_scale must be positive");
    if (eval_interval < 1) throw ValueError("eval_interval must be >= 1");
    schedule.validate();
    canny.validate();
    weights.validate();
    // Two stride-2 halvings followed by two doublings restore the input
    // shape only when both sides divide by 4.
    if (schedule.image_width % 4 != 0 || schedule.image_height % 4 != 0)
        throw ValueError("image sides must be divisible by 4");
    if (schedule.image_width < 8 || schedule.image_height < 8)
        throw ValueError("images must be at least 8x8");
}

Tensor3 edge_generator_input(const ImageTensor& gray, const ImageTensor& edges,
                             const BinaryMask& m) {
    if (gray.channels != 1 || edges.channels != 1)
        throw ShapeError("edge inputs must be single-channel");
    if (gray.height != edges.height || gray.width != edges.width ||
        gray.height != m.height || gray.width != m.width)
        throw ShapeError("edge input sizes differ");
    Tensor3 in(3, gray.height, gray.width);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x) {
            const double known = m.at(y, x) ? 0.0 : 1.0;
            in.at(0, y, x) = gray.at(y, x, 0) * known;
            in.at(1, y, x) = edges.at(y, x, 0) * known;
            in.at(2, y, x) = static_cast<double>(m.at(y, x));
        }
    return in;
}

Tensor3 completion_generator_input(const ImageTensor& image,
                                   const ImageTensor& e_comp,
                                   const BinaryMask& m) {
    if (image.channels != 3 || e_comp.channels != 1)
        throw ShapeError("completion input wants a color image and one edge "
                         "channel");
    if (image.height != e_comp.height || image.width != e_comp.width ||
        image.height != m.height || image.width != m.width)
        throw ShapeError("completion input sizes differ");
    Tensor3 in(4, image.height, image.width);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            const double known = m.at(y, x) ? 0.0 : 1.0;
            for (int c = 0; c < 3; ++c)
                in.at(c, y, x) = image.at(y, x, c) * known;
            in.at(3, y, x) = e_comp.at(y, x, 0);
        }
    return in;
}

Tensor3 discriminator_input(const Tensor3& candidate,
                            const Tensor3& condition) {
    return concat_channels(candidate, condition);
}

LossProbe edge_generator_objective(ToyNetwork& g, ToyNetwork& d,
                                   const Tensor3& g_input,
                                   const Tensor3& gray_plane,
                                   const ImageTensor& edges_gt,
                                   const LossWeights& w, LossVariant variant,
                                   bool want_grad, EdgeLossParts* parts) {
    const Tensor3 e_pred = forward(g, g_input);
    const Tensor3 real_in =
        discriminator_input(tensor_from_image(edges_gt), gray_plane);
    const Tensor3 fake_in = discriminator_input(e_pred, gray_plane);

    // Real pair first: the discriminator caches must describe the fake
    // pass when the chain runs backward.
    forward(d, real_in);
    const ActivationStack real_taps = collect_taps(d, LayerKind::leaky_relu);
    const Tensor3 d_out = forward(d, fake_in);
    const ActivationStack fake_taps = collect_taps(d, LayerKind::leaky_relu);
    const double fake_score = score_of(d_out);

    double adv;
    double adv_grad;
    if (variant == LossVariant::hinge) {
        adv = hinge_g_loss({fake_score});
        adv_grad = hinge_g_grad({fake_score})[0];
    } else {
        adv = nsgan_g_loss({fake_score});
        adv_grad = nsgan_g_grad({fake_score})[0];
    }
    const double fm = feature_matching_loss(real_taps, fake_taps);

    LossProbe probe;
    probe.value = w.lambda_hinge * adv + w.lambda_fm * fm;
    probe.near_kink = stacks_near_tie(real_taps, fake_taps);
    if (variant == LossVariant::nsgan && near_probability_clamp(fake_score))
        probe.near_kink = true;
    if (parts) {
        parts->hinge = adv;
        parts->feature_matching = fm;
    }

    if (want_grad) {
        zero_grads(g);
        zero_grads(d);
        ActivationStack tap_grads = feature_matching_grad(real_taps, fake_taps);
        scale_stack(tap_grads, w.lambda_fm);
        const Tensor3 d_in_grad =
            backward(d, Tensor3(1, 1, 1, w.lambda_hinge * adv_grad),
                     &tap_grads, LayerKind::leaky_relu);
        backward(g, slice_channels(d_in_grad, 0, 1));
    }
    return probe;
}

LossProbe completion_generator_objective(ToyNetwork& g, ToyNetwork& d,
                                         ToyNetwork& extractor,
                                         const Tensor3& g_input,
                                         const Tensor3& e_comp,
                                         const ImageTensor& gt_image,
                                         const BinaryMask& m,
                                         const LossWeights& w, bool want_grad,
                                         CompletionLossParts* parts) {
    const Tensor3 pred = forward(g, g_input);
    // The generator head is a sigmoid, so every prediction is strictly
    // inside (0,1) and this conversion never clamps; the image-space L1
    // gradient maps back onto the tensor unchanged.
    const ImageTensor pred_img = image_from_tensor(pred);
    const Tensor3 gt_plane = tensor_from_image(gt_image);

    const double l1 = l1_masked_loss(pred_img, gt_image, m);

    const Tensor3 d_out = forward(d, discriminator_input(pred, e_comp));
    const double fake_prob = score_of(d_out);
    const double adv = nsgan_g_loss({fake_prob});

    // Ground truth runs through the extractor first so its caches describe
    // the prediction when the feature losses run backward.
    const ActivationStack gt_feats = extractor_features(extractor, gt_plane);
    const ActivationStack pred_feats = extractor_features(extractor, pred);
    const double perc = perceptual_loss(pred_feats, gt_feats);
    const double style = style_loss(pred_feats, gt_feats);

    LossProbe probe;
    probe.value = w.lambda_l1 * l1 + w.lambda_adv * adv +
                  w.lambda_perc * perc + w.lambda_style * style;
    probe.near_kink = masked_l1_near_tie(pred_img, gt_image, m) ||
                      stacks_near_tie(pred_feats, gt_feats) ||
                      grams_near_tie(pred_feats, gt_feats) ||
                      near_probability_clamp(fake_prob);
    if (parts) {
        parts->l1 = l1;
        parts->adversarial = adv;
        parts->perceptual = perc;
        parts->style = style;
    }

    if (want_grad) {
        zero_grads(g);
        zero_grads(d);
        zero_grads(extractor);

        Tensor3 pred_grad = planar_from_interleaved(
            l1_masked_grad(pred_img, gt_image, m), pred.height, pred.width,
            pred.channels);
        for (double& v : pred_grad.data) v *= w.lambda_l1;

        const double p_grad = w.lambda_adv * nsgan_g_grad({fake_prob})[0];
        const Tensor3 d_in_grad = backward(d, Tensor3(1, 1, 1, p_grad));
        add_tensor(pred_grad, slice_channels(d_in_grad, 0, 3));

        ActivationStack feat_grads = perceptual_grad(pred_feats, gt_feats);
        scale_stack(feat_grads, w.lambda_perc);
        add_scaled_stack(feat_grads, style_grad(pred_feats, gt_feats),
                         w.lambda_style);
        const Tensor3& last = pred_feats.layers.back();
        const Tensor3 ex_in_grad =
            backward(extractor, Tensor3(last.channels, last.height, last.width),
                     &feat_grads, LayerKind::relu);
        add_tensor(pred_grad, ex_in_grad);

        backward(g, pred_grad);
    }
    return probe;
}

namespace {

// Shared stage driver. The two stages differ only in how they build
// discriminator pairs, evaluate the generator objective, and score the
// held-out image, so those arrive as callables.
struct StageHooks {
    // Returns the generator input for sample i under the given mask.
    std::function<Tensor3(const Sample&, const BinaryMask&)> gen_input;
    // Returns (real, fake) discriminator inputs; fake uses the given
    // generator output.
    std::function<std::pair<Tensor3, Tensor3>(const Sample&, const Tensor3&,
                                              const BinaryMask&)>
        disc_inputs;
    // Per-sample generator objective; fills g's grads when asked.
    std::function<LossProbe(ToyNetwork&, ToyNetwork&, const Sample&,
                            const Tensor3&, const BinaryMask&, bool,
                            nlohmann::json&)>
        gen_objective;
    // Held-out metric value (higher-is-better or lower-is-better is up to
    // the caller).
    std::function<double(ToyNetwork&, const Sample&, const BinaryMask&)>
        held_out;
    const char* metric_name = "";
    bool sigmoid_scores = false; // true when the discriminator emits probs
};

StageResult run_stage(const TrainConfig& cfg, const std::vector<Sample>& all,
                      ToyNetwork g, ToyNetwork d, const StageHooks& hooks,
                      Rng& rng) {
    StageResult res;
    const std::size_t train_count = all.size() - 1;
    const Sample& held = all.back();

    AdamState g_state(param_count(g));
    AdamState d_state(param_count(d));
    const int total_iters = cfg.schedule.total_steps * cfg.iters_per_step;
    const int n = cfg.batch_size;

    const auto eval_line = [&](int iter, int step, const BinaryMask& mask) {
        const double v = hooks.held_out(g, held, mask);
        nlohmann::json j;
        j["iter"] = iter;
        j["step"] = step;
        j["metric"] = hooks.metric_name;
        j["value"] = v;
        res.log_lines.push_back(j.dump());
        res.metric_curve.emplace_back(iter, v);
        return v;
    };

    // Baseline under the final (widest) mask, for a like-for-like gain.
    const BinaryMask final_mask =
        build_center_mask(cfg.schedule, cfg.schedule.total_steps);
    res.initial_metric = eval_line(0, cfg.schedule.total_steps, final_mask);

    int iter = 0;
    for (int step = 1; step <= cfg.schedule.total_steps; ++step) {
        const BinaryMask mask = build_center_mask(cfg.schedule, step);
        for (int k = 0; k < cfg.iters_per_step; ++k) {
            ++iter;
            const double lr = current_lr(cfg, iter, total_iters);

            std::vector<std::size_t> batch(static_cast<std::size_t>(n));
            for (auto& b : batch) b = rng.uniform_int(train_count);

            // Discriminator pass: score every pair, take the batch
            // gradient of the chosen objective, then replay each pair
            // to push its scalar through the chain.
            std::vector<Tensor3> real_ins, fake_ins;
            std::vector<double> real_scores, fake_scores;
            real_ins.reserve(batch.size());
            fake_ins.reserve(batch.size());
            for (std::size_t b : batch) {
                const Sample& s = all[b];
                const Tensor3 g_out = forward(g, hooks.gen_input(s, mask));
                auto [real_in, fake_in] = hooks.disc_inputs(s, g_out, mask);
                real_scores.push_back(score_of(forward(d, real_in)));
                fake_scores.push_back(score_of(forward(d, fake_in)));
                real_ins.push_back(std::move(real_in));
                fake_ins.push_back(std::move(fake_in));
            }
            double d_loss;
            std::vector<double> gr, gf;
            if (hooks.sigmoid_scores) {
                d_loss = nsgan_d_loss(real_scores, fake_scores);
                nsgan_d_grad(real_scores, fake_scores, gr, gf);
            } else {
                d_loss = hinge_d_loss(real_scores, fake_scores);
                hinge_d_grad(real_scores, fake_scores, gr, gf);
            }
            check_finite(d_loss, "discriminator loss", iter);

            std::vector<double> d_acc(param_count(d), 0.0);
            for (std::size_t i = 0; i < batch.size(); ++i) {
                if (gr[i] != 0.0) {
                    forward(d, real_ins[i]);
                    zero_grads(d);
                    backward(d, Tensor3(1, 1, 1, gr[i]));
                    accumulate(d_acc, gather_grads(d), 1.0);
                }
                if (gf[i] != 0.0) {
                    forward(d, fake_ins[i]);
                    zero_grads(d);
                    backward(d, Tensor3(1, 1, 1, gf[i]));
                    accumulate(d_acc, gather_grads(d), 1.0);
                }
            }
            std::vector<double> d_params = gather_params(d);
            adam_update(d_state, d_params, d_acc, lr * cfg.d_lr_scale);
            scatter_params(d, d_params);

            // Generator pass against the just-updated discriminator.
            std::vector<double> g_acc(param_count(g), 0.0);
            double g_total = 0.0;
            nlohmann::json parts_sum;
            for (std::size_t i = 0; i < batch.size(); ++i) {
                nlohmann::json parts;
                const LossProbe probe = hooks.gen_objective(
                    g, d, all[batch[i]], hooks.gen_input(all[batch[i]], mask),
                    mask, true, parts);
                g_total += probe.value / n;
                accumulate(g_acc, gather_grads(g), 1.0 / n);
                for (auto& [key, val] : parts.items()) {
                    const double prev = parts_sum.contains(key)
                                            ? parts_sum[key].get<double>()
                                            : 0.0;
                    parts_sum[key] = prev + val.get<double>() / n;
                }
            }
            check_finite(g_total, "generator loss", iter);

            std::vector<double> g_params = gather_params(g);
            adam_update(g_state, g_params, g_acc, lr);
            scatter_params(g, g_params);

            nlohmann::json j = parts_sum;
            j["iter"] = iter;
            j["step"] = step;
            j["lr"] = lr;
            j["d"] = d_loss;
            j["total"] = g_total;
            res.log_lines.push_back(j.dump());
            res.g_loss.push_back(g_total);

            if (iter % cfg.eval_interval == 0 && iter != total_iters)
                eval_line(iter, step, mask);
        }
    }

    res.final_metric = eval_line(total_iters, cfg.schedule.total_steps,
                                 final_mask);
    res.generator = std::move(g);
    res.discriminator = std::move(d);
    return res;
}

} // namespace

StageResult train_edge_stage(const TrainConfig& cfg,
                             const std::vector<ImageTensor>& dataset) {
    cfg.validate();
    check_masks(cfg);
    const std::vector<Sample> samples = prepare_samples(cfg, dataset);

    Rng rng(cfg.seed);
    ToyNetwork g = make_edge_generator(rng);
    ToyNetwork d = make_discriminator(
        2, cfg.loss_variant == LossVariant::nsgan, rng);

    StageHooks hooks;
    hooks.metric_name = "edge_f1";
    hooks.sigmoid_scores = cfg.loss_variant == LossVariant::nsgan;
    hooks.gen_input = [](const Sample& s, const BinaryMask& m) {
        return edge_generator_input(s.gray_img, s.edges_img, m);
    };
    hooks.disc_inputs = [](const Sample& s, const Tensor3& g_out,
                           const BinaryMask&) {
        return std::make_pair(discriminator_input(s.edges, s.gray),
                              discriminator_input(g_out, s.gray));
    };
    hooks.gen_objective = [&cfg](ToyNetwork& gn, ToyNetwork& dn,
                                 const Sample& s, const Tensor3& g_in,
                                 const BinaryMask&, bool want_grad,
                                 nlohmann::json& parts_out) {
        EdgeLossParts parts;
        const LossProbe probe = edge_generator_objective(
            gn, dn, g_in, s.gray, s.edges_img, cfg.weights, cfg.loss_variant,
            want_grad, &parts);
        parts_out["adv"] = parts.hinge;
        parts_out["fm"] = parts.feature_matching;
        return probe;
    };
    hooks.held_out = [&cfg](ToyNetwork& gn, const Sample& s,
                            const BinaryMask& m) {
        const Tensor3 pred =
            forward(gn, edge_generator_input(s.gray_img, s.edges_img, m));
        return edge_f1(image_from_tensor(pred), s.edges_img).f1;
    };

    return run_stage(cfg, samples, std::move(g), std::move(d), hooks, rng);
}

StageResult train_completion_stage(const TrainConfig& cfg,
                                   const std::vector<ImageTensor>& dataset,
                                   ToyNetwork& edge_generator) {
    cfg.validate();
    check_masks(cfg);
    if (edge_generator.role != NetRole::edge_generator)
        throw ValueError("completion training needs an edge generator");
    const std::vector<Sample> samples = prepare_samples(cfg, dataset);

    Rng rng(cfg.seed);
    ToyNetwork g = make_completion_generator(rng);
    ToyNetwork d = make_discriminator(4, true, rng);
    ToyNetwork extractor = make_feature_extractor(rng);

    // The frozen edge generator's composite prediction for a sample at the
    // current mask; recomputed per sample per iteration through this hook.
    auto composite_for = [&edge_generator](const Sample& s,
                                           const BinaryMask& m) {
        const Tensor3 e_pred = forward(
            edge_generator, edge_generator_input(s.gray_img, s.edges_img, m));
        return composite_edge_map(s.edges_img, image_from_tensor(e_pred), m);
    };

    StageHooks hooks;
    hooks.metric_name = "masked_l1";
    hooks.sigmoid_scores = true;
    hooks.gen_input = [&composite_for](const Sample& s, const BinaryMask& m) {
        return completion_generator_input(s.image, composite_for(s, m), m);
    };
    hooks.disc_inputs = [&composite_for](const Sample& s, const Tensor3& g_out,
                                         const BinaryMask& m) {
        const Tensor3 cond = tensor_from_image(composite_for(s, m));
        return std::make_pair(discriminator_input(s.color, cond),
                              discriminator_input(g_out, cond));
    };
    hooks.gen_objective = [&cfg, &extractor, &composite_for](
                              ToyNetwork& gn, ToyNetwork& dn, const Sample& s,
                              const Tensor3& g_in, const BinaryMask& m,
                              bool want_grad, nlohmann::json& parts_out) {
        const Tensor3 e_comp = tensor_from_image(composite_for(s, m));
        CompletionLossParts parts;
        const LossProbe probe = completion_generator_objective(
            gn, dn, extractor, g_in, e_comp, s.image, m, cfg.weights,
            want_grad, &parts);
        parts_out["l1"] = parts.l1;
        parts_out["adv"] = parts.adversarial;
        parts_out["perc"] = parts.perceptual;
        parts_out["style"] = parts.style;
        return probe;
    };
    hooks.held_out = [&cfg, &composite_for](ToyNetwork& gn, const Sample& s,
                                            const BinaryMask& m) {
        const Tensor3 pred = forward(
            gn, completion_generator_input(s.image, composite_for(s, m), m));
        return l1_masked_loss(image_from_tensor(pred), s.image, m);
    };

    return run_stage(cfg, samples, std::move(g), std::move(d), hooks, rng);
}

ImageTensor infer_outpaint(ToyNetwork& edge_generator,
                           ToyNetwork& completion_generator,
                           const ImageTensor& input, int out_width,
                           const CannyParams& canny) {
    input.validate();
    canny.validate();
    if (input.channels != 3)
        throw ValueError("outpainting expects a color image");
    // Nothing to generate: the canvas equals the input and both nets are
    // bypassed, so the result is the input itself, bit for bit.
    if (out_width == input.width) return input;

    if (edge_generator.role != NetRole::edge_generator ||
        completion_generator.role != NetRole::completion_generator)
        throw ValueError("networks passed in the wrong order");
    if (all_zero_params(edge_generator) ||
        all_zero_params(completion_generator))
        throw ValueError("refusing to outpaint with untrained networks");
    if (out_width % 4 != 0 || input.height % 4 != 0)
        throw ValueError("generator strides need sides divisible by 4");

    const OutpaintCanvas canvas = make_outpaint_canvas(input, out_width);
    const OutpaintCanvas shifted = rearrange_forward(canvas);
    const BinaryMask& m = shifted.mask;

    const ImageTensor gray = to_grayscale(shifted.image);
    const ImageTensor edges_known = canny_edges(gray, canny);

    const Tensor3 e_pred = forward(
        edge_generator, edge_generator_input(gray, edges_known, m));
    const ImageTensor e_comp =
        composite_edge_map(edges_known, image_from_tensor(e_pred), m);

    const Tensor3 filled = forward(
        completion_generator,
        completion_generator_input(shifted.image, e_comp, m));
    const ImageTensor composed =
        compose_masked(shifted.image, image_from_tensor(filled), m);

    OutpaintCanvas out = shifted;
    out.image = composed;
    return rearrange_inverse(out).image;
}

double boundary_seam_score(const ImageTensor& img, int known_off,
                           int known_w) {
    if (known_off < 0 || known_w < 1 || known_off + known_w > img.width)
        throw ValueError("known region out of bounds");
    double acc = 0.0;
    std::size_t count = 0;
    const auto seam = [&](int xa, int xb) {
        for (int y = 0; y < img.height; ++y)
            for (int c = 0; c < img.channels; ++c) {
                acc += std::abs(img.at(y, xa, c) - img.at(y, xb, c));
                ++count;
            }
    };
    if (known_off > 0) seam(known_off - 1, known_off);
    if (known_off + known_w < img.width)
        seam(known_off + known_w - 1, known_off + known_w);
    return count == 0 ? 0.0 : acc / static_cast<double>(count);
}

} // namespace outpaint
