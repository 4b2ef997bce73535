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
#include "edgeaudio/ops.hpp"

#include <algorithm>
#include <cmath>

#include "edgeaudio/error.hpp"

namespace edgeaudio::ops {

namespace {

void require(bool cond, const std::string& msg) {
  check(cond, ErrorCategory::kShape, msg);
}

void require_f32(const TensorValue& t, const char* what) {
  check(t.dtype() == DType::kFloat32, ErrorCategory::kShape,
        std::string(what) + " must be float32");
}

}  // namespace

void conv_axis_geometry(int in, int k, int stride, Padding padding, int* out,
                        int* pad_before) {
  if (padding == Padding::kSame) {
    *out = (in + stride - 1) / stride;
    const int pad_total = std::max((*out - 1) * stride + k - in, 0);
    *pad_before = pad_total / 2;
  } else {
    require(in >= k, "kernel larger than input under VALID padding");
    *out = (in - k) / stride + 1;
    *pad_before = 0;
  }
}

TensorValue conv2d(const TensorValue& input, const TensorValue& weights,
                   const TensorValue& bias, Stride2D stride, Padding padding) {
  require_f32(input, "conv2d input");
  require(input.rank() == 3, "conv2d input must be [H x W x C]");
  require(weights.rank() == 4, "conv2d weights must be [kh x kw x Cin x Cout]");
  const int h = input.dim(0), w = input.dim(1), cin = input.dim(2);
  const int kh = weights.dim(0), kw = weights.dim(1);
  const int cout = weights.dim(3);
  require(weights.dim(2) == cin, "conv2d channel mismatch: input has " +
                                     std::to_string(cin) + ", weights expect " +
                                     std::to_string(weights.dim(2)));
  require(bias.rank() == 1 && bias.dim(0) == cout, "conv2d bias mismatch");

  int oh = 0, ow = 0, pad_h = 0, pad_w = 0;
  conv_axis_geometry(h, kh, stride.h, padding, &oh, &pad_h);
  conv_axis_geometry(w, kw, stride.w, padding, &ow, &pad_w);

  TensorValue out = TensorValue::zeros(DType::kFloat32, {oh, ow, cout});
  const float* in = input.f32().data();
  const float* wt = weights.f32().data();
  const float* b = bias.f32().data();
  float* o = out.f32().data();

  std::vector<double> acc(static_cast<size_t>(cout));
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      for (int c = 0; c < cout; ++c) acc[c] = b[c];
      for (int ky = 0; ky < kh; ++ky) {
        const int iy = y * stride.h - pad_h + ky;
        if (iy < 0 || iy >= h) continue;
        for (int kx = 0; kx < kw; ++kx) {
          const int ix = x * stride.w - pad_w + kx;
          if (ix < 0 || ix >= w) continue;
          const float* in_px = in + (static_cast<size_t>(iy) * w + ix) * cin;
          const float* w_px =
              wt + ((static_cast<size_t>(ky) * kw + kx) * cin) * cout;
          for (int ci = 0; ci < cin; ++ci) {
            const double v = in_px[ci];
            const float* w_row = w_px + static_cast<size_t>(ci) * cout;
            for (int c = 0; c < cout; ++c) acc[c] += v * w_row[c];
          }
        }
      }
      float* o_px = o + (static_cast<size_t>(y) * ow + x) * cout;
      for (int c = 0; c < cout; ++c) o_px[c] = static_cast<float>(acc[c]);
    }
  }
  return out;
}

TensorValue depthwise_conv2d(const TensorValue& input,
                             const TensorValue& kernels,
                             const TensorValue& bias, Stride2D stride,
                             Padding padding) {
  require_f32(input, "depthwise input");
  require(input.rank() == 3, "depthwise input must be [H x W x C]");
  require(kernels.rank() == 3, "depthwise kernels must be [kh x kw x C]");
  const int h = input.dim(0), w = input.dim(1), c = input.dim(2);
  const int kh = kernels.dim(0), kw = kernels.dim(1);
  require(kernels.dim(2) == c, "depthwise channel mismatch");
  require(bias.rank() == 1 && bias.dim(0) == c, "depthwise bias mismatch");

  int oh = 0, ow = 0, pad_h = 0, pad_w = 0;
  conv_axis_geometry(h, kh, stride.h, padding, &oh, &pad_h);
  conv_axis_geometry(w, kw, stride.w, padding, &ow, &pad_w);

  TensorValue out = TensorValue::zeros(DType::kFloat32, {oh, ow, c});
  const float* in = input.f32().data();
  const float* kn = kernels.f32().data();
  const float* b = bias.f32().data();
  float* o = out.f32().data();

  std::vector<double> acc(static_cast<size_t>(c));
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      for (int ci = 0; ci < c; ++ci) acc[ci] = b[ci];
      for (int ky = 0; ky < kh; ++ky) {
        const int iy = y * stride.h - pad_h + ky;
        if (iy < 0 || iy >= h) continue;
        for (int kx = 0; kx < kw; ++kx) {
          const int ix = x * stride.w - pad_w + kx;
          if (ix < 0 || ix >= w) continue;
          const float* in_px = in + (static_cast<size_t>(iy) * w + ix) * c;
          const float* k_px = kn + (static_cast<size_t>(ky) * kw + kx) * c;
          for (int ci = 0; ci < c; ++ci) acc[ci] += double(in_px[ci]) * k_px[ci];
        }
      }
      float* o_px = o + (static_cast<size_t>(y) * ow + x) * c;
      for (int ci = 0; ci < c; ++ci) o_px[ci] = static_cast<float>(acc[ci]);
    }
  }
  return out;
}

TensorValue dense(const TensorValue& input, const TensorValue& weights,
                  const TensorValue& bias) {
  require_f32(input, "dense input");
  require(weights.rank() == 2, "dense weights must be [n x m]");
  require(input.rank() >= 1, "dense input must have rank >= 1");
  const int n = weights.dim(0), m = weights.dim(1);
  require(input.dim(input.rank() - 1) == n,
          "dense dimension mismatch: input " + shape_str(input.shape()) +
              " vs weights " + shape_str(weights.shape()));
  require(bias.rank() == 1 && bias.dim(0) == m, "dense bias mismatch");

  Shape out_shape = input.shape();
  out_shape.back() = m;
  const int64_t rows = input.elems() / n;
  TensorValue out = TensorValue::zeros(DType::kFloat32, out_shape);
  const float* in = input.f32().data();
  const float* wt = weights.f32().data();
  const float* b = bias.f32().data();
  float* o = out.f32().data();

  std::vector<double> acc(static_cast<size_t>(m));
  for (int64_t r = 0; r < rows; ++r) {
    const float* row = in + r * n;
    for (int j = 0; j < m; ++j) acc[j] = b[j];
    for (int i = 0; i < n; ++i) {
      const double v = row[i];
      const float* w_row = wt + static_cast<size_t>(i) * m;
      for (int j = 0; j < m; ++j) acc[j] += v * w_row[j];
    }
    float* o_row = o + r * m;
    for (int j = 0; j < m; ++j) o_row[j] = static_cast<float>(acc[j]);
  }
  return out;
}

TensorValue relu6(const TensorValue& input) {
  require_f32(input, "relu6 input");
  TensorValue out = input;
  for (float& v : out.f32()) v = std::clamp(v, 0.0f, 6.0f);
  return out;
}

TensorValue sigmoid(const TensorValue& input) {
  require_f32(input, "sigmoid input");
  TensorValue out = input;
  for (float& v : out.f32()) {
    v = static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(v))));
  }
  return out;
}

TensorValue pool2d(const TensorValue& input, PoolKind kind, Window2D window,
                   Stride2D stride, Padding padding) {
  require_f32(input, "pool input");
  require(input.rank() == 3, "pool input must be [H x W x C]");
  const int h = input.dim(0), w = input.dim(1), c = input.dim(2);
  int oh = 0, ow = 0, pad_h = 0, pad_w = 0;
  conv_axis_geometry(h, window.h, stride.h, padding, &oh, &pad_h);
  conv_axis_geometry(w, window.w, stride.w, padding, &ow, &pad_w);

  TensorValue out = TensorValue::zeros(DType::kFloat32, {oh, ow, c});
  const float* in = input.f32().data();
  float* o = out.f32().data();
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      for (int ci = 0; ci < c; ++ci) {
        double acc = kind == PoolKind::kMax
                         ? -std::numeric_limits<double>::infinity()
                         : 0.0;
        int count = 0;
        for (int ky = 0; ky < window.h; ++ky) {
          const int iy = y * stride.h - pad_h + ky;
          if (iy < 0 || iy >= h) continue;
          for (int kx = 0; kx < window.w; ++kx) {
            const int ix = x * stride.w - pad_w + kx;
            if (ix < 0 || ix >= w) continue;
            const double v = in[(static_cast<size_t>(iy) * w + ix) * c + ci];
            if (kind == PoolKind::kMax) {
              acc = std::max(acc, v);
            } else {
              acc += v;
            }
            ++count;
          }
        }
        require(count > 0, "empty pooling window");
        o[(static_cast<size_t>(y) * ow + x) * c + ci] = static_cast<float>(
            kind == PoolKind::kMax ? acc : acc / count);
      }
    }
  }
  return out;
}

TensorValue global_avg_pool(const TensorValue& input) {
  require_f32(input, "global_avg_pool input");
  require(input.rank() >= 2, "global_avg_pool input must have rank >= 2");
  const int c = input.dim(input.rank() - 1);
  const int64_t spatial = input.elems() / c;
  TensorValue out = TensorValue::zeros(DType::kFloat32, {c});
  const float* in = input.f32().data();
  float* o = out.f32().data();
  std::vector<double> acc(static_cast<size_t>(c), 0.0);
  for (int64_t s = 0; s < spatial; ++s) {
    const float* px = in + s * c;
    for (int ci = 0; ci < c; ++ci) acc[ci] += px[ci];
  }
  for (int ci = 0; ci < c; ++ci) {
    o[ci] = static_cast<float>(acc[ci] / static_cast<double>(spatial));
  }
  return out;
}

TensorValue softmax(const TensorValue& input, int axis) {
  require_f32(input, "softmax input");
  const int rank = input.rank();
  if (axis < 0) axis += rank;
  require(axis >= 0 && axis < rank, "softmax axis out of range");

  const int n = input.dim(axis);
  int64_t inner = 1;
  for (int i = axis + 1; i < rank; ++i) inner *= input.dim(i);
  int64_t outer = input.elems() / (n * inner);

  TensorValue out = input;
  const float* in = input.f32().data();
  float* o = out.f32().data();
  for (int64_t a = 0; a < outer; ++a) {
    for (int64_t b = 0; b < inner; ++b) {
      const float* slice = in + a * n * inner + b;
      float* oslice = o + a * n * inner + b;
      double max_v = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        max_v = std::max(max_v, static_cast<double>(slice[i * inner]));
      }
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += std::exp(static_cast<double>(slice[i * inner]) - max_v);
      }
      for (int i = 0; i < n; ++i) {
        oslice[i * inner] = static_cast<float>(
            std::exp(static_cast<double>(slice[i * inner]) - max_v) / sum);
      }
    }
  }
  return out;
}

TensorValue layer_norm(const TensorValue& input, const TensorValue& gamma,
                       const TensorValue& beta, double eps) {
  require_f32(input, "layer_norm input");
  const int d = input.dim(input.rank() - 1);
  require(gamma.rank() == 1 && gamma.dim(0) == d, "layer_norm gamma mismatch");
  require(beta.rank() == 1 && beta.dim(0) == d, "layer_norm beta mismatch");
  const int64_t rows = input.elems() / d;

  TensorValue out = input;
  const float* in = input.f32().data();
  const float* g = gamma.f32().data();
  const float* b = beta.f32().data();
  float* o = out.f32().data();
  for (int64_t r = 0; r < rows; ++r) {
    const float* row = in + r * d;
    double mean = 0.0;
    for (int i = 0; i < d; ++i) mean += row[i];
    mean /= d;
    double var = 0.0;
    for (int i = 0; i < d; ++i) {
      const double dlt = row[i] - mean;
      var += dlt * dlt;
    }
    var /= d;
    const double inv = 1.0 / std::sqrt(var + eps);
    float* orow = o + r * d;
    for (int i = 0; i < d; ++i) {
      orow[i] = static_cast<float>((row[i] - mean) * inv * g[i] + b[i]);
    }
  }
  return out;
}

TensorValue batch_norm(const TensorValue& input, const TensorValue& gamma,
                       const TensorValue& beta, const TensorValue& mean,
                       const TensorValue& variance, double eps) {
  require_f32(input, "batch_norm input");
  const int c = input.dim(input.rank() - 1);
  require(gamma.dim(0) == c && beta.dim(0) == c && mean.dim(0) == c &&
              variance.dim(0) == c,
          "batch_norm parameter size mismatch");
  for (float v : variance.f32()) {
    check(v + eps > 0.0, ErrorCategory::kNumerical,
          "batch_norm variance must be positive");
  }
  TensorValue out = input;
  const float* in = input.f32().data();
  const float* g = gamma.f32().data();
  const float* b = beta.f32().data();
  const float* m = mean.f32().data();
  const float* var = variance.f32().data();
  float* o = out.f32().data();
  const int64_t rows = input.elems() / c;
  for (int64_t r = 0; r < rows; ++r) {
    for (int ci = 0; ci < c; ++ci) {
      const double inv = 1.0 / std::sqrt(static_cast<double>(var[ci]) + eps);
      o[r * c + ci] = static_cast<float>(
          (in[r * c + ci] - m[ci]) * inv * g[ci] + b[ci]);
    }
  }
  return out;
}

TensorValue single_head_attention(const TensorValue& tokens,
                                  const AttentionWeights& w) {
  require_f32(tokens, "attention tokens");
  require(tokens.rank() == 2, "attention tokens must be [n x d]");
  const int n = tokens.dim(0);
  const int d = tokens.dim(1);
  require(w.wq.dim(0) == d && w.wq.dim(1) == d, "attention wq mismatch");

  const TensorValue q = dense(tokens, w.wq, w.bq);
  const TensorValue k = dense(tokens, w.wk, w.bk);
  const TensorValue v = dense(tokens, w.wv, w.bv);

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  TensorValue scores = TensorValue::zeros(DType::kFloat32, {n, n});
  {
    const float* qd = q.f32().data();
    const float* kd = k.f32().data();
    float* s = scores.f32().data();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int t = 0; t < d; ++t) {
          acc += static_cast<double>(qd[i * d + t]) * kd[j * d + t];
        }
        s[i * n + j] = static_cast<float>(acc * inv_sqrt_d);
      }
    }
  }
  const TensorValue attn = softmax(scores, 1);

  TensorValue ctx = TensorValue::zeros(DType::kFloat32, {n, d});
  {
    const float* a = attn.f32().data();
    const float* vd = v.f32().data();
    float* c = ctx.f32().data();
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < d; ++t) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
          acc += static_cast<double>(a[i * n + j]) * vd[j * d + t];
        }
        c[i * d + t] = static_cast<float>(acc);
      }
    }
  }
  return dense(ctx, w.wo, w.bo);
}

TensorValue sinusoidal_positions(int n, int d) {
  check(d % 2 == 0, ErrorCategory::kShape,
        "positional encoding dimension must be even");
  TensorValue out = TensorValue::zeros(DType::kFloat32, {n, d});
  float* o = out.f32().data();
  for (int pos = 0; pos < n; ++pos) {
    for (int i = 0; i < d / 2; ++i) {
      const double rate = std::pow(10000.0, 2.0 * i / d);
      o[pos * d + 2 * i] = static_cast<float>(std::sin(pos / rate));
      o[pos * d + 2 * i + 1] = static_cast<float>(std::cos(pos / rate));
    }
  }
  return out;
}

TensorValue se_block(const TensorValue& input, const TensorValue& squeeze_w,
                     const TensorValue& squeeze_b, const TensorValue& excite_w,
                     const TensorValue& excite_b) {
  require(input.rank() == 3, "se_block input must be [H x W x C]");
  const int c = input.dim(2);
  require(squeeze_w.dim(0) == c && excite_w.dim(1) == c,
          "se_block gate dimensions mismatch");
  const TensorValue pooled = global_avg_pool(input);
  const TensorValue hidden = relu6(dense(pooled, squeeze_w, squeeze_b));
  const TensorValue gates = sigmoid(dense(hidden, excite_w, excite_b));
  return mul(input, gates);
}

FoldedConv fold_batchnorm(const TensorValue& conv_weights,
                          const TensorValue& conv_bias,
                          const TensorValue& gamma, const TensorValue& beta,
                          const TensorValue& mean, const TensorValue& variance,
                          double eps) {
  const int c = gamma.dim(0);
  require(conv_bias.dim(0) == c, "fold_batchnorm bias size mismatch");
  require(conv_weights.dim(conv_weights.rank() - 1) == c,
          "fold_batchnorm channel mismatch");
  for (float v : variance.f32()) {
    check(static_cast<double>(v) + eps > 0.0, ErrorCategory::kNumerical,
          "fold_batchnorm variance must be positive");
  }
  FoldedConv folded{conv_weights, conv_bias};
  const float* g = gamma.f32().data();
  const float* b = beta.f32().data();
  const float* m = mean.f32().data();
  const float* var = variance.f32().data();

  std::vector<double> factor(static_cast<size_t>(c));
  for (int ci = 0; ci < c; ++ci) {
    factor[ci] = g[ci] / std::sqrt(static_cast<double>(var[ci]) + eps);
  }
  auto& wd = folded.weights.f32();
  const int64_t rows = folded.weights.elems() / c;
  for (int64_t r = 0; r < rows; ++r) {
    for (int ci = 0; ci < c; ++ci) {
      wd[r * c + ci] = static_cast<float>(wd[r * c + ci] * factor[ci]);
    }
  }
  auto& bd = folded.bias.f32();
  for (int ci = 0; ci < c; ++ci) {
    bd[ci] = static_cast<float>((bd[ci] - m[ci]) * factor[ci] + b[ci]);
  }
  return folded;
}

namespace {

TensorValue broadcast_binary(const TensorValue& a, const TensorValue& b,
                             double (*f)(double, double)) {
  require_f32(a, "binary lhs");
  require_f32(b, "binary rhs");
  // Shapes equal, or rhs a trailing suffix of lhs.
  const bool equal = a.shape() == b.shape();
  bool suffix = !equal && b.rank() <= a.rank();
  if (suffix) {
    for (int i = 0; i < b.rank(); ++i) {
      if (b.dim(b.rank() - 1 - i) != a.dim(a.rank() - 1 - i)) {
        suffix = false;
        break;
      }
    }
  }
  require(equal || suffix,
          "incompatible shapes for elementwise op: " + shape_str(a.shape()) +
              " vs " + shape_str(b.shape()));
  TensorValue out = a;
  const auto& ad = a.f32();
  const auto& bd = b.f32();
  auto& od = out.f32();
  const size_t bn = bd.size();
  for (size_t i = 0; i < ad.size(); ++i) {
    od[i] = static_cast<float>(f(ad[i], bd[i % bn]));
  }
  return out;
}

}  // namespace

TensorValue add(const TensorValue& a, const TensorValue& b) {
  return broadcast_binary(a, b, +[](double x, double y) { return x + y; });
}
TensorValue sub(const TensorValue& a, const TensorValue& b) {
  return broadcast_binary(a, b, +[](double x, double y) { return x - y; });
}
TensorValue mul(const TensorValue& a, const TensorValue& b) {
  return broadcast_binary(a, b, +[](double x, double y) { return x * y; });
}

TensorValue concat(const std::vector<TensorValue>& parts, int axis) {
  require(!parts.empty(), "concat needs at least one input");
  const int rank = parts[0].rank();
  if (axis < 0) axis += rank;
  require(axis >= 0 && axis < rank, "concat axis out of range");
  Shape out_shape = parts[0].shape();
  int total = 0;
  for (const auto& p : parts) {
    require(p.rank() == rank, "concat rank mismatch");
    for (int i = 0; i < rank; ++i) {
      require(i == axis || p.dim(i) == out_shape[i], "concat shape mismatch");
    }
    total += p.dim(axis);
  }
  out_shape[axis] = total;

  int64_t inner = 1;
  for (int i = axis + 1; i < rank; ++i) inner *= out_shape[i];
  int64_t outer = 1;
  for (int i = 0; i < axis; ++i) outer *= out_shape[i];

  TensorValue out = TensorValue::zeros(DType::kFloat32, out_shape);
  float* o = out.f32().data();
  const int64_t out_row = static_cast<int64_t>(total) * inner;
  for (int64_t a = 0; a < outer; ++a) {
    int64_t offset = 0;
    for (const auto& p : parts) {
      const int64_t row = static_cast<int64_t>(p.dim(axis)) * inner;
      const float* src = p.f32().data() + a * row;
      std::copy(src, src + row, o + a * out_row + offset);
      offset += row;
    }
  }
  return out;
}

TensorValue transpose2d(const TensorValue& input) {
  require_f32(input, "transpose input");
  require(input.rank() == 2, "transpose2d input must be [R x C]");
  const int r = input.dim(0), c = input.dim(1);
  TensorValue out = TensorValue::zeros(DType::kFloat32, {c, r});
  const float* in = input.f32().data();
  float* o = out.f32().data();
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) {
      o[static_cast<size_t>(j) * r + i] = in[static_cast<size_t>(i) * c + j];
    }
  }
  return out;
}

}  // namespace edgeaudio::ops
