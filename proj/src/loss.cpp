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
#include "outpaint/loss.hpp"

#include <cmath>
#include <cstddef>

#include "outpaint/errors.hpp"

namespace outpaint {

namespace {

constexpr double kProbEps = 1e-7;

void check_nonempty(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw ValueError(std::string(what) + " must be nonempty");
}

void check_probs(const std::vector<double>& v, const char* what) {
    check_nonempty(v, what);
    for (double p : v)
        if (!(p >= 0.0 && p <= 1.0))
            throw ValueError(std::string(what) +
                             " must lie in [0, 1], got " + std::to_string(p));
}

void check_same_layers(const ActivationStack& a, const ActivationStack& b) {
    if (a.layers.size() != b.layers.size())
        throw ShapeError("activation stacks have different layer counts");
    for (std::size_t i = 0; i < a.layers.size(); ++i)
        if (!a.layers[i].same_shape(b.layers[i]))
            throw ShapeError("activation stacks differ in shape at layer " +
                             std::to_string(i));
}

double clamp_prob(double p) {
    if (p < kProbEps) return kProbEps;
    if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
    return p;
}

// sum_i |a_i - b_i| / N_i, shared by feature matching and perceptual.
double normalized_stack_l1(const ActivationStack& a, const ActivationStack& b) {
    check_same_layers(a, b);
    double total = 0.0;
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        const Tensor3& la = a.layers[i];
        const Tensor3& lb = b.layers[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < la.data.size(); ++j)
            acc += std::abs(la.data[j] - lb.data[j]);
        total += acc / static_cast<double>(la.size());
    }
    return total;
}

// Gradient of normalized_stack_l1 with respect to its first stack.
ActivationStack normalized_stack_l1_grad(const ActivationStack& a,
                                         const ActivationStack& b) {
    check_same_layers(a, b);
    ActivationStack grad;
    grad.layers.reserve(a.layers.size());
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        const Tensor3& la = a.layers[i];
        const Tensor3& lb = b.layers[i];
        Tensor3 g(la.channels, la.height, la.width);
        const double scale = 1.0 / static_cast<double>(la.size());
        for (std::size_t j = 0; j < la.data.size(); ++j) {
            const double d = la.data[j] - lb.data[j];
            g.data[j] = d > 0.0 ? scale : (d < 0.0 ? -scale : 0.0);
        }
        grad.layers.push_back(std::move(g));
    }
    return grad;
}

} // namespace

void LossWeights::validate() const {
    const double all[] = {lambda_l1,    lambda_adv,   lambda_perc,
                          lambda_style, lambda_hinge, lambda_fm};
    for (double w : all)
        if (!(w >= 0.0))
            throw ValueError("loss weights must be nonnegative");
}

double hinge_g_loss(const std::vector<double>& fake_scores) {
    check_nonempty(fake_scores, "fake_scores");
    double acc = 0.0;
    for (double s : fake_scores) acc += s;
    return -acc / static_cast<double>(fake_scores.size());
}

std::vector<double> hinge_g_grad(const std::vector<double>& fake_scores) {
    check_nonempty(fake_scores, "fake_scores");
    return std::vector<double>(fake_scores.size(),
                               -1.0 / static_cast<double>(fake_scores.size()));
}

double hinge_d_loss(const std::vector<double>& real_scores,
                    const std::vector<double>& fake_scores) {
    check_nonempty(real_scores, "real_scores");
    check_nonempty(fake_scores, "fake_scores");
    double real_acc = 0.0;
    for (double s : real_scores) real_acc += std::max(0.0, 1.0 - s);
    double fake_acc = 0.0;
    for (double s : fake_scores) fake_acc += std::max(0.0, 1.0 + s);
    return real_acc / static_cast<double>(real_scores.size()) +
           fake_acc / static_cast<double>(fake_scores.size());
}

void hinge_d_grad(const std::vector<double>& real_scores,
                  const std::vector<double>& fake_scores,
                  std::vector<double>& grad_real,
                  std::vector<double>& grad_fake) {
    check_nonempty(real_scores, "real_scores");
    check_nonempty(fake_scores, "fake_scores");
    const double rn = static_cast<double>(real_scores.size());
    const double fn = static_cast<double>(fake_scores.size());
    grad_real.assign(real_scores.size(), 0.0);
    grad_fake.assign(fake_scores.size(), 0.0);
    for (std::size_t i = 0; i < real_scores.size(); ++i)
        if (real_scores[i] < 1.0) grad_real[i] = -1.0 / rn;
    for (std::size_t i = 0; i < fake_scores.size(); ++i)
        if (fake_scores[i] > -1.0) grad_fake[i] = 1.0 / fn;
}

double nsgan_g_loss(const std::vector<double>& fake_probs) {
    check_probs(fake_probs, "fake_probs");
    double acc = 0.0;
    for (double p : fake_probs) acc += std::log(clamp_prob(p));
    return -acc / static_cast<double>(fake_probs.size());
}

std::vector<double> nsgan_g_grad(const std::vector<double>& fake_probs) {
    check_probs(fake_probs, "fake_probs");
    const double n = static_cast<double>(fake_probs.size());
    std::vector<double> grad(fake_probs.size(), 0.0);
    for (std::size_t i = 0; i < fake_probs.size(); ++i) {
        const double p = fake_probs[i];
        if (p >= kProbEps && p <= 1.0 - kProbEps) grad[i] = -1.0 / (n * p);
    }
    return grad;
}

double nsgan_d_loss(const std::vector<double>& real_probs,
                    const std::vector<double>& fake_probs) {
    check_probs(real_probs, "real_probs");
    check_probs(fake_probs, "fake_probs");
    double real_acc = 0.0;
    for (double p : real_probs) real_acc += std::log(clamp_prob(p));
    double fake_acc = 0.0;
    for (double p : fake_probs) fake_acc += std::log(clamp_prob(1.0 - p));
    return -real_acc / static_cast<double>(real_probs.size()) -
           fake_acc / static_cast<double>(fake_probs.size());
}

void nsgan_d_grad(const std::vector<double>& real_probs,
                  const std::vector<double>& fake_probs,
                  std::vector<double>& grad_real,
                  std::vector<double>& grad_fake) {
    check_probs(real_probs, "real_probs");
    check_probs(fake_probs, "fake_probs");
    const double rn = static_cast<double>(real_probs.size());
    const double fn = static_cast<double>(fake_probs.size());
    grad_real.assign(real_probs.size(), 0.0);
    grad_fake.assign(fake_probs.size(), 0.0);
    for (std::size_t i = 0; i < real_probs.size(); ++i) {
        const double p = real_probs[i];
        if (p >= kProbEps && p <= 1.0 - kProbEps)
            grad_real[i] = -1.0 / (rn * p);
    }
    for (std::size_t i = 0; i < fake_probs.size(); ++i) {
        const double q = 1.0 - fake_probs[i];
        if (q >= kProbEps && q <= 1.0 - kProbEps)
            grad_fake[i] = 1.0 / (fn * q);
    }
}

double feature_matching_loss(const ActivationStack& real_acts,
                             const ActivationStack& fake_acts) {
    return normalized_stack_l1(real_acts, fake_acts);
}

ActivationStack feature_matching_grad(const ActivationStack& real_acts,
                                      const ActivationStack& fake_acts) {
    return normalized_stack_l1_grad(fake_acts, real_acts);
}

double perceptual_loss(const ActivationStack& pred_acts,
                       const ActivationStack& gt_acts) {
    return normalized_stack_l1(pred_acts, gt_acts);
}

ActivationStack perceptual_grad(const ActivationStack& pred_acts,
                                const ActivationStack& gt_acts) {
    return normalized_stack_l1_grad(pred_acts, gt_acts);
}

double l1_masked_loss(const ImageTensor& pred, const ImageTensor& gt,
                      const BinaryMask& m) {
    if (!pred.same_shape(gt))
        throw ShapeError("pred and gt shapes differ");
    if (m.height != pred.height || m.width != pred.width)
        throw ShapeError("mask shape does not match the images");
    const std::int64_t selected = m.sum();
    if (selected == 0) throw ValueError("mask selects no pixels");

    double acc = 0.0;
    for (int y = 0; y < pred.height; ++y)
        for (int x = 0; x < pred.width; ++x) {
            if (m.at(y, x) == 0) continue;
            for (int c = 0; c < pred.channels; ++c)
                acc += std::abs(pred.at(y, x, c) - gt.at(y, x, c));
        }
    return acc / (static_cast<double>(selected) *
                  static_cast<double>(pred.channels));
}

std::vector<double> l1_masked_grad(const ImageTensor& pred,
                                   const ImageTensor& gt,
                                   const BinaryMask& m) {
    if (!pred.same_shape(gt))
        throw ShapeError("pred and gt shapes differ");
    if (m.height != pred.height || m.width != pred.width)
        throw ShapeError("mask shape does not match the images");
    const std::int64_t selected = m.sum();
    if (selected == 0) throw ValueError("mask selects no pixels");

    const double scale = 1.0 / (static_cast<double>(selected) *
                                static_cast<double>(pred.channels));
    std::vector<double> grad(pred.data.size(), 0.0);
    std::size_t i = 0;
    for (int y = 0; y < pred.height; ++y)
        for (int x = 0; x < pred.width; ++x)
            for (int c = 0; c < pred.channels; ++c, ++i) {
                if (m.at(y, x) == 0) continue;
                const double d = pred.data[i] - gt.data[i];
                grad[i] = d > 0.0 ? scale : (d < 0.0 ? -scale : 0.0);
            }
    return grad;
}

Eigen::MatrixXd gram_matrix(const Tensor3& features) {
    const int c = features.channels;
    const Eigen::Index hw =
        static_cast<Eigen::Index>(features.height) * features.width;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        f(features.data.data(), c, hw);
    return (f * f.transpose()) / static_cast<double>(features.size());
}

double style_loss(const ActivationStack& pred_acts,
                  const ActivationStack& gt_acts) {
    check_same_layers(pred_acts, gt_acts);
    if (pred_acts.layers.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < pred_acts.layers.size(); ++i) {
        const Eigen::MatrixXd diff =
            gram_matrix(pred_acts.layers[i]) - gram_matrix(gt_acts.layers[i]);
        total += diff.cwiseAbs().sum();
    }
    return total / static_cast<double>(pred_acts.layers.size());
}

ActivationStack style_grad(const ActivationStack& pred_acts,
                           const ActivationStack& gt_acts) {
    check_same_layers(pred_acts, gt_acts);
    ActivationStack grad;
    grad.layers.reserve(pred_acts.layers.size());
    const double layer_scale =
        pred_acts.layers.empty()
            ? 0.0
            : 1.0 / static_cast<double>(pred_acts.layers.size());
    for (std::size_t i = 0; i < pred_acts.layers.size(); ++i) {
        const Tensor3& lp = pred_acts.layers[i];
        const int c = lp.channels;
        const Eigen::Index hw =
            static_cast<Eigen::Index>(lp.height) * lp.width;
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
            f(lp.data.data(), c, hw);

        // d|G - H|/dF = (S + S^T) F / N with S = sign(G - H) / layer count.
        const Eigen::MatrixXd diff =
            gram_matrix(lp) - gram_matrix(gt_acts.layers[i]);
        const Eigen::MatrixXd s =
            diff.unaryExpr([layer_scale](double v) {
                return v > 0.0 ? layer_scale : (v < 0.0 ? -layer_scale : 0.0);
            });
        const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                            Eigen::RowMajor>
            g = ((s + s.transpose()) * f) / static_cast<double>(lp.size());

        Tensor3 layer_grad(lp.channels, lp.height, lp.width);
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>(layer_grad.data.data(), c,
                                                   hw) = g;
        grad.layers.push_back(std::move(layer_grad));
    }
    return grad;
}

double total_edge_loss(const EdgeLossParts& parts, const LossWeights& w) {
    w.validate();
    return w.lambda_hinge * parts.hinge + w.lambda_fm * parts.feature_matching;
}

double total_completion_loss(const CompletionLossParts& parts,
                             const LossWeights& w) {
    w.validate();
    return w.lambda_l1 * parts.l1 + w.lambda_adv * parts.adversarial +
           w.lambda_perc * parts.perceptual + w.lambda_style * parts.style;
}

} // namespace outpaint
