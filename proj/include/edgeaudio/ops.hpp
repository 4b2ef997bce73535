/* Copyright 2026 The EdgeAudio Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
//
// Float32 layer kernels. Activations are laid out [H x W x C] (channels
// last), conv weights [kh x kw x Cin x Cout], depthwise kernels
// [kh x kw x C]. Accumulation is double precision with a fixed order, so
// results are deterministic.

#ifndef EDGEAUDIO_OPS_HPP_
#define EDGEAUDIO_OPS_HPP_

#include "edgeaudio/tensor.hpp"

namespace edgeaudio::ops {

enum class Padding { kSame, kValid };

struct Stride2D {
  int h = 1;
  int w = 1;
};

struct Window2D {
  int h = 1;
  int w = 1;
};

// Output extent and leading pad for one spatial axis.
//   SAME:  out = ceil(in / stride), pad split with the extra on the trailing
//          side (matching the shape columns this codebase is built around).
//   VALID: out = floor((in - k) / stride) + 1.
void conv_axis_geometry(int in, int k, int stride, Padding padding, int* out,
                        int* pad_before);

TensorValue conv2d(const TensorValue& input, const TensorValue& weights,
                   const TensorValue& bias, Stride2D stride, Padding padding);

TensorValue depthwise_conv2d(const TensorValue& input,
                             const TensorValue& kernels,
                             const TensorValue& bias, Stride2D stride,
                             Padding padding);

// y = x W + b applied to the last axis; input [... x n], weights [n x m].
TensorValue dense(const TensorValue& input, const TensorValue& weights,
                  const TensorValue& bias);

TensorValue relu6(const TensorValue& input);
TensorValue sigmoid(const TensorValue& input);

enum class PoolKind { kMax, kAvg };
TensorValue pool2d(const TensorValue& input, PoolKind kind, Window2D window,
                   Stride2D stride, Padding padding = Padding::kValid);

// Mean over all leading (spatial) axes; [H x W x C] -> [C], [N x D] -> [D].
TensorValue global_avg_pool(const TensorValue& input);

// Normalized exponentials along `axis` (negative counts from the back).
TensorValue softmax(const TensorValue& input, int axis = -1);

// Normalizes the last axis to zero mean / unit variance, then gamma*x + beta.
TensorValue layer_norm(const TensorValue& input, const TensorValue& gamma,
                       const TensorValue& beta, double eps = 1e-6);

// BatchNorm at inference: gamma * (x - mean) / sqrt(var + eps) + beta,
// parameters per channel (last axis).
TensorValue batch_norm(const TensorValue& input, const TensorValue& gamma,
                       const TensorValue& beta, const TensorValue& mean,
                       const TensorValue& variance, double eps = 1e-3);

struct AttentionWeights {
  TensorValue wq, bq, wk, bk, wv, bv, wo, bo;  // all [d x d] / [d]
};

// softmax(Q K^T / sqrt(d)) V followed by the output projection; tokens
// [n x d], no masking.
TensorValue single_head_attention(const TensorValue& tokens,
                                  const AttentionWeights& w);

// Interleaved sine/cosine position table [n x d]; d must be even.
TensorValue sinusoidal_positions(int n, int d);

// Channel gating: input * sigmoid(W2 relu6(W1 avg(input) + b1) + b2).
TensorValue se_block(const TensorValue& input, const TensorValue& squeeze_w,
                     const TensorValue& squeeze_b, const TensorValue& excite_w,
                     const TensorValue& excite_b);

struct FoldedConv {
  TensorValue weights;
  TensorValue bias;
};

// Folds BatchNorm parameters into the preceding conv so that running the
// folded conv equals conv followed by BN. Throws NumericalError on
// non-positive variance. Works for conv2d ([kh x kw x Cin x Cout]) and
// depthwise ([kh x kw x C]) weight layouts.
FoldedConv fold_batchnorm(const TensorValue& conv_weights,
                          const TensorValue& conv_bias,
                          const TensorValue& gamma, const TensorValue& beta,
                          const TensorValue& mean, const TensorValue& variance,
                          double eps = 1e-3);

// Elementwise with trailing-axis broadcast (shapes equal, or rhs a suffix of
// lhs, e.g. [H x W x C] op [C]).
TensorValue add(const TensorValue& a, const TensorValue& b);
TensorValue sub(const TensorValue& a, const TensorValue& b);
TensorValue mul(const TensorValue& a, const TensorValue& b);

TensorValue concat(const std::vector<TensorValue>& parts, int axis);
TensorValue transpose2d(const TensorValue& input);

}  // namespace edgeaudio::ops

#endif  // EDGEAUDIO_OPS_HPP_
