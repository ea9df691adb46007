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
#ifndef OUTPAINT_LOSS_HPP
#define OUTPAINT_LOSS_HPP

#include <vector>

#include <Eigen/Dense>

#include "outpaint/image.hpp"
#include "outpaint/tensor.hpp"

namespace outpaint {

// Coefficients for the two weighted training objectives. The completion
// generator combines reconstruction, adversarial, perceptual, and style
// terms; the edge generator combines hinge and feature-matching terms.
// All weights must be nonnegative.
struct LossWeights {
    double lambda_l1 = 1.0;
    double lambda_adv = 0.2;
    double lambda_perc = 0.1;
    double lambda_style = 250.0;
    double lambda_hinge = 1.0;
    double lambda_fm = 10.0;

    void validate() const;
};

// An ordered list of feature tensors, one per tapped network layer.
// Layer shapes may differ between layers but must agree between the two
// stacks handed to any loss below.
struct ActivationStack {
    std::vector<Tensor3> layers;
};

// Scalar loss components for the edge-stage objective.
struct EdgeLossParts {
    double hinge = 0.0;
    double feature_matching = 0.0;
};

// Scalar loss components for the completion-stage objective.
struct CompletionLossParts {
    double l1 = 0.0;
    double adversarial = 0.0;
    double perceptual = 0.0;
    double style = 0.0;
};

// Generator hinge objective: -mean(fake_scores). Unbounded in sign.
double hinge_g_loss(const std::vector<double>& fake_scores);
std::vector<double> hinge_g_grad(const std::vector<double>& fake_scores);

// Discriminator hinge objective:
// mean(max(0, 1 - real)) + mean(max(0, 1 + fake)).
double hinge_d_loss(const std::vector<double>& real_scores,
                    const std::vector<double>& fake_scores);
void hinge_d_grad(const std::vector<double>& real_scores,
                  const std::vector<double>& fake_scores,
                  std::vector<double>& grad_real,
                  std::vector<double>& grad_fake);

// Non-saturating generator objective: -mean(log p). Probabilities are
// clamped to [1e-7, 1 - 1e-7] before the log; values outside [0, 1] are
// rejected. Gradients are zero in the clamped region.
double nsgan_g_loss(const std::vector<double>& fake_probs);
std::vector<double> nsgan_g_grad(const std::vector<double>& fake_probs);

// Non-saturating discriminator objective:
// -mean(log real) - mean(log(1 - fake)), with the same clamping rule.
double nsgan_d_loss(const std::vector<double>& real_probs,
                    const std::vector<double>& fake_probs);
void nsgan_d_grad(const std::vector<double>& real_probs,
                  const std::vector<double>& fake_probs,
                  std::vector<double>& grad_real,
                  std::vector<double>& grad_fake);

// Sum over layers of the per-element L1 gap: sum_i |real_i - fake_i| / N_i
// where N_i is the element count of layer i. The gradient is taken with
// respect to the fake stack.
double feature_matching_loss(const ActivationStack& real_acts,
                             const ActivationStack& fake_acts);
ActivationStack feature_matching_grad(const ActivationStack& real_acts,
                                      const ActivationStack& fake_acts);

// Same functional form as feature matching, applied to extractor features
// of the predicted and ground-truth images. Gradient is with respect to
// the predicted stack.
double perceptual_loss(const ActivationStack& pred_acts,
                       const ActivationStack& gt_acts);
ActivationStack perceptual_grad(const ActivationStack& pred_acts,
                                const ActivationStack& gt_acts);

// Mean absolute error over masked pixels only, normalized by mask size
// times channel count so the value is a per-element error independent of
// how much area the mask covers. The mask must select at least one pixel.
// The gradient (with respect to pred) is laid out exactly like pred.data.
double l1_masked_loss(const ImageTensor& pred, const ImageTensor& gt,
                      const BinaryMask& m);
std::vector<double> l1_masked_grad(const ImageTensor& pred,
                                   const ImageTensor& gt,
                                   const BinaryMask& m);

// Channel co-occurrence matrix G = F F^T / (C*H*W), where F is the
// C x (H*W) unfolding of the layer. Symmetric positive semidefinite.
Eigen::MatrixXd gram_matrix(const Tensor3& features);

// Mean over layers of the elementwise L1 gap between Gram matrices.
// Invariant to any spatial permutation applied uniformly to a layer's
// channels. Gradient is with respect to the predicted stack.
double style_loss(const ActivationStack& pred_acts,
                  const ActivationStack& gt_acts);
ActivationStack style_grad(const ActivationStack& pred_acts,
                           const ActivationStack& gt_acts);

// Weighted totals for the two training stages.
double total_edge_loss(const EdgeLossParts& parts, const LossWeights& w);
double total_completion_loss(const CompletionLossParts& parts,
                             const LossWeights& w);

} // namespace outpaint

#endif // OUTPAINT_LOSS_HPP
