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
#include "edgeaudio/executor.hpp"

#include <algorithm>
#include <cmath>

#include "edgeaudio/error.hpp"

namespace edgeaudio::graph {

namespace {

using ops::Padding;

const TensorValue& resolve(const std::vector<TensorValue>& inputs,
                           const std::vector<TensorValue>& acts,
                           ValueRef ref) {
  if (ref.is_input()) return inputs[ref.input_index()];
  return acts[ref.node_id()];
}

TensorValue slice_tensor(const TensorValue& in, const std::vector<int>& begin,
                         const std::vector<int>& size) {
  const Shape& s = in.shape();
  Shape out_shape(size.begin(), size.end());
  TensorValue out = TensorValue::zeros(in.dtype(), out_shape);
  if (in.quant()) out.set_quant(*in.quant());

  // Generic strided copy over the output index space.
  const int rank = in.rank();
  std::vector<int64_t> in_stride(rank, 1), out_stride(rank, 1);
  for (int i = rank - 2; i >= 0; --i) {
    in_stride[i] = in_stride[i + 1] * s[i + 1];
    out_stride[i] = out_stride[i + 1] * out_shape[i + 1];
  }
  const int64_t n = out.elems();
  const size_t esz = dtype_bytes(in.dtype());
  const char* src = static_cast<const char*>(in.raw_data());
  char* dst = static_cast<char*>(out.raw_data());
  for (int64_t flat = 0; flat < n; ++flat) {
    int64_t rem = flat;
    int64_t src_idx = 0;
    for (int i = 0; i < rank; ++i) {
      const int64_t coord = rem / out_stride[i];
      rem %= out_stride[i];
      src_idx += (coord + begin[i]) * in_stride[i];
    }
    std::copy_n(src + src_idx * esz, esz, dst + flat * esz);
  }
  return out;
}

TensorValue transpose_tensor(const TensorValue& in, std::vector<int> perm) {
  const Shape& s = in.shape();
  if (perm.empty()) perm = {1, 0};
  Shape out_shape(s.size());
  for (size_t i = 0; i < perm.size(); ++i) out_shape[i] = s[perm[i]];
  TensorValue out = TensorValue::zeros(in.dtype(), out_shape);
  if (in.quant()) out.set_quant(*in.quant());

  const int rank = in.rank();
  std::vector<int64_t> in_stride(rank, 1), out_stride(rank, 1);
  for (int i = rank - 2; i >= 0; --i) {
    in_stride[i] = in_stride[i + 1] * s[i + 1];
    out_stride[i] = out_stride[i + 1] * out_shape[i + 1];
  }
  const int64_t n = in.elems();
  const size_t esz = dtype_bytes(in.dtype());
  const char* src = static_cast<const char*>(in.raw_data());
  char* dst = static_cast<char*>(out.raw_data());
  for (int64_t flat = 0; flat < n; ++flat) {
    int64_t rem = flat;
    int64_t dst_idx = 0;
    for (int i = 0; i < rank; ++i) {
      const int64_t coord = rem / out_stride[i];
      rem %= out_stride[i];
      dst_idx += coord * in_stride[perm[i]];
    }
    std::copy_n(src + dst_idx * esz, esz, dst + flat * esz);
  }
  return out;
}

TensorValue run_float_node(const Node& n,
                           const std::vector<TensorValue const*>& in) {
  switch (n.kind) {
    case LayerKind::kConv2D:
      return ops::conv2d(*in[0], n.weights[0], n.weights[1], n.attrs.stride,
                         n.attrs.padding);
    case LayerKind::kDepthwiseConv2D:
      return ops::depthwise_conv2d(*in[0], n.weights[0], n.weights[1],
                                   n.attrs.stride, n.attrs.padding);
    case LayerKind::kDense:
      return ops::dense(*in[0], n.weights[0], n.weights[1]);
    case LayerKind::kRelu6:
      return ops::relu6(*in[0]);
    case LayerKind::kSigmoid:
      return ops::sigmoid(*in[0]);
    case LayerKind::kMaxPool2D:
      return ops::pool2d(*in[0], ops::PoolKind::kMax, n.attrs.window,
                         n.attrs.stride, n.attrs.padding);
    case LayerKind::kAvgPool2D:
      return ops::pool2d(*in[0], ops::PoolKind::kAvg, n.attrs.window,
                         n.attrs.stride, n.attrs.padding);
    case LayerKind::kGlobalAvgPool:
      return ops::global_avg_pool(*in[0]);
    case LayerKind::kSoftmax:
      return ops::softmax(*in[0], n.attrs.axis);
    case LayerKind::kLayerNorm:
      return ops::layer_norm(*in[0], n.weights[0], n.weights[1], n.attrs.eps);
    case LayerKind::kBatchNorm:
      return ops::batch_norm(*in[0], n.weights[0], n.weights[1], n.weights[2],
                             n.weights[3], n.attrs.eps);
    case LayerKind::kAttentionSingleHead: {
      ops::AttentionWeights w{n.weights[0], n.weights[1], n.weights[2],
                              n.weights[3], n.weights[4], n.weights[5],
                              n.weights[6], n.weights[7]};
      return ops::single_head_attention(*in[0], w);
    }
    case LayerKind::kAdd:
      return ops::add(*in[0], *in[1]);
    case LayerKind::kSub:
      return ops::sub(*in[0], *in[1]);
    case LayerKind::kMul:
      return ops::mul(*in[0], *in[1]);
    case LayerKind::kSquaredDifference: {
      const TensorValue d = ops::sub(*in[0], *in[1]);
      return ops::mul(d, d);
    }
    case LayerKind::kConcat: {
      std::vector<TensorValue> parts;
      parts.reserve(in.size());
      for (const TensorValue* t : in) parts.push_back(*t);
      return ops::concat(parts, n.attrs.axis);
    }
    case LayerKind::kReshape:
      return in[0]->reshaped(n.attrs.new_shape);
    case LayerKind::kTranspose:
      return transpose_tensor(*in[0], n.attrs.perm);
    case LayerKind::kSlice:
      return slice_tensor(*in[0], n.attrs.begin, n.attrs.size);
    case LayerKind::kPosEncoding: {
      const Shape& s = in[0]->shape();
      return ops::add(*in[0], ops::sinusoidal_positions(s[0], s[1]));
    }
    case LayerKind::kSubSpectralNorm:
      // Placeholder kind for compiler stress tests; passes data through.
      return *in[0];
  }
  raise(ErrorCategory::kGraph, "unknown layer kind in executor");
}

}  // namespace

const TensorValue& ExecResult::of(const ModelGraph& g,
                                  const std::string& node_name) const {
  const Node* n = g.find_node(node_name);
  check(n != nullptr, ErrorCategory::kGraph, "no node named " + node_name);
  return activations[n->id];
}

std::vector<TensorValue> ExecResult::outputs(const ModelGraph& g) const {
  std::vector<TensorValue> out;
  out.reserve(g.outputs.size());
  for (const GraphOutput& o : g.outputs) out.push_back(activations[o.node_id]);
  return out;
}

ExecResult execute_float(const ModelGraph& graph,
                         const std::vector<TensorValue>& inputs) {
  check(!graph.quantized, ErrorCategory::kGraph,
        "execute_float on a quantized graph");
  check(inputs.size() == graph.inputs.size(), ErrorCategory::kShape,
        "wrong number of graph inputs");
  for (size_t i = 0; i < inputs.size(); ++i) {
    check(inputs[i].shape() == graph.inputs[i].shape, ErrorCategory::kShape,
          "graph input '" + graph.inputs[i].name + "' expects " +
              shape_str(graph.inputs[i].shape) + ", got " +
              shape_str(inputs[i].shape()));
  }
  ExecResult res;
  res.activations.reserve(graph.nodes.size());
  for (const Node& n : graph.nodes) {
    std::vector<TensorValue const*> in;
    in.reserve(n.inputs.size());
    for (ValueRef ref : n.inputs) {
      in.push_back(&resolve(inputs, res.activations, ref));
    }
    res.activations.push_back(run_float_node(n, in));
    check(res.activations.back().shape() == n.out_shape, ErrorCategory::kShape,
          "node '" + n.name + "' produced " +
              shape_str(res.activations.back().shape()) + ", inferred " +
              shape_str(n.out_shape));
  }
  return res;
}

// ---------------------------------------------------------------------------
// INT8 path
// ---------------------------------------------------------------------------

namespace {

int8_t requant_i8(double real, const QuantParams& qp) {
  const double q = std::round(real / qp.scale) + qp.zero_point;
  return static_cast<int8_t>(std::clamp(q, -128.0, 127.0));
}

TensorValue dequant_float_requant(const Node& n,
                                  const std::vector<TensorValue const*>& in) {
  std::vector<TensorValue> fin;
  fin.reserve(in.size());
  std::vector<TensorValue const*> fptr;
  for (const TensorValue* t : in) fin.push_back(dequantize_tensor(*t));
  for (const TensorValue& t : fin) fptr.push_back(&t);

  Node float_node = n;
  if (!float_node.weights.empty()) {
    for (TensorValue& w : float_node.weights) {
      if (w.dtype() != DType::kFloat32) w = dequantize_tensor(w);
    }
  }
  const TensorValue f = run_float_node(float_node, fptr);
  return quantize_tensor(f, n.oqp);
}

TensorValue quant_conv2d(const Node& n, const TensorValue& input) {
  const TensorValue& w = n.weights[0];
  const TensorValue& b = n.weights[1];
  const QuantParams iq = *input.quant();
  const QuantParams wq = *w.quant();
  const QuantParams oq = n.oqp;

  const int h = input.dim(0), wd = input.dim(1), cin = input.dim(2);
  const int kh = w.dim(0), kw = w.dim(1), cout = w.dim(3);
  int oh = 0, ow = 0, pad_h = 0, pad_w = 0;
  ops::conv_axis_geometry(h, kh, n.attrs.stride.h, n.attrs.padding, &oh,
                          &pad_h);
  ops::conv_axis_geometry(wd, kw, n.attrs.stride.w, n.attrs.padding, &ow,
                          &pad_w);

  TensorValue out = TensorValue::zeros(DType::kInt8, {oh, ow, cout});
  out.set_quant(oq);
  const int8_t* in = input.i8().data();
  const int8_t* wt = w.i8().data();
  const int32_t* bias = b.i32().data();
  int8_t* o = out.i8().data();
  const double multiplier = iq.scale * wq.scale / oq.scale;

  std::vector<int32_t> acc(static_cast<size_t>(cout));
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      for (int c = 0; c < cout; ++c) acc[c] = bias[c];
      for (int ky = 0; ky < kh; ++ky) {
        const int iy = y * n.attrs.stride.h - pad_h + ky;
        if (iy < 0 || iy >= h) continue;
        for (int kx = 0; kx < kw; ++kx) {
          const int ix = x * n.attrs.stride.w - pad_w + kx;
          if (ix < 0 || ix >= wd) continue;
          const int8_t* in_px = in + (static_cast<size_t>(iy) * wd + ix) * cin;
          const int8_t* w_px =
              wt + ((static_cast<size_t>(ky) * kw + kx) * cin) * cout;
          for (int ci = 0; ci < cin; ++ci) {
            const int32_t v = static_cast<int32_t>(in_px[ci]) - iq.zero_point;
            if (v == 0) continue;
            const int8_t* w_row = w_px + static_cast<size_t>(ci) * cout;
            for (int c = 0; c < cout; ++c) {
              acc[c] += v * static_cast<int32_t>(w_row[c]);
            }
          }
        }
      }
      int8_t* o_px = o + (static_cast<size_t>(y) * ow + x) * cout;
      for (int c = 0; c < cout; ++c) {
        const double q = std::round(acc[c] * multiplier) + oq.zero_point;
        o_px[c] = static_cast<int8_t>(std::clamp(q, -128.0, 127.0));
      }
    }
  }
  return out;
}

TensorValue quant_depthwise(const Node& n, const TensorValue& input) {
  const TensorValue& w = n.weights[0];
  const TensorValue& b = n.weights[1];
  const QuantParams iq = *input.quant();
  const QuantParams wq = *w.quant();
  const QuantParams oq = n.oqp;

  const int h = input.dim(0), wd = input.dim(1), c = input.dim(2);
  const int kh = w.dim(0), kw = w.dim(1);
  int oh = 0, ow = 0, pad_h = 0, pad_w = 0;
  ops::conv_axis_geometry(h, kh, n.attrs.stride.h, n.attrs.padding, &oh,
                          &pad_h);
  ops::conv_axis_geometry(wd, kw, n.attrs.stride.w, n.attrs.padding, &ow,
                          &pad_w);

  TensorValue out = TensorValue::zeros(DType::kInt8, {oh, ow, c});
  out.set_quant(oq);
  const int8_t* in = input.i8().data();
  const int8_t* kn = w.i8().data();
  const int32_t* bias = b.i32().data();
  int8_t* o = out.i8().data();
  const double multiplier = iq.scale * wq.scale / oq.scale;

  std::vector<int32_t> acc(static_cast<size_t>(c));
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      for (int ci = 0; ci < c; ++ci) acc[ci] = bias[ci];
      for (int ky = 0; ky < kh; ++ky) {
        const int iy = y * n.attrs.stride.h - pad_h + ky;
        if (iy < 0 || iy >= h) continue;
        for (int kx = 0; kx < kw; ++kx) {
          const int ix = x * n.attrs.stride.w - pad_w + kx;
          if (ix < 0 || ix >= wd) continue;
          const int8_t* in_px = in + (static_cast<size_t>(iy) * wd + ix) * c;
          const int8_t* k_px = kn + (static_cast<size_t>(ky) * kw + kx) * c;
          for (int ci = 0; ci < c; ++ci) {
            acc[ci] += (static_cast<int32_t>(in_px[ci]) - iq.zero_point) *
                       static_cast<int32_t>(k_px[ci]);
          }
        }
      }
      int8_t* o_px = o + (static_cast<size_t>(y) * ow + x) * c;
      for (int ci = 0; ci < c; ++ci) {
        const double q = std::round(acc[ci] * multiplier) + oq.zero_point;
        o_px[ci] = static_cast<int8_t>(std::clamp(q, -128.0, 127.0));
      }
    }
  }
  return out;
}

TensorValue quant_dense(const Node& n, const TensorValue& input) {
  const TensorValue& w = n.weights[0];
  const TensorValue& b = n.weights[1];
  const QuantParams iq = *input.quant();
  const QuantParams wq = *w.quant();
  const QuantParams oq = n.oqp;
  const int nin = w.dim(0), m = w.dim(1);
  const int64_t rows = input.elems() / nin;

  Shape out_shape = input.shape();
  out_shape.back() = m;
  TensorValue out = TensorValue::zeros(DType::kInt8, out_shape);
  out.set_quant(oq);
  const int8_t* in = input.i8().data();
  const int8_t* wt = w.i8().data();
  const int32_t* bias = b.i32().data();
  int8_t* o = out.i8().data();
  const double multiplier = iq.scale * wq.scale / oq.scale;

  std::vector<int32_t> acc(static_cast<size_t>(m));
  for (int64_t r = 0; r < rows; ++r) {
    const int8_t* row = in + r * nin;
    for (int j = 0; j < m; ++j) acc[j] = bias[j];
    for (int i = 0; i < nin; ++i) {
      const int32_t v = static_cast<int32_t>(row[i]) - iq.zero_point;
      if (v == 0) continue;
      const int8_t* w_row = wt + static_cast<size_t>(i) * m;
      for (int j = 0; j < m; ++j) acc[j] += v * static_cast<int32_t>(w_row[j]);
    }
    int8_t* o_row = o + r * m;
    for (int j = 0; j < m; ++j) {
      const double q = std::round(acc[j] * multiplier) + oq.zero_point;
      o_row[j] = static_cast<int8_t>(std::clamp(q, -128.0, 127.0));
    }
  }
  return out;
}

TensorValue quant_pool(const Node& n, const TensorValue& input,
                       ops::PoolKind kind) {
  // Pools keep the input scale; max picks a value, avg rounds the mean.
  const QuantParams qp = *input.quant();
  const int h = input.dim(0), w = input.dim(1), c = input.dim(2);
  int oh = 0, ow = 0, pad_h = 0, pad_w = 0;
  ops::conv_axis_geometry(h, n.attrs.window.h, n.attrs.stride.h,
                          n.attrs.padding, &oh, &pad_h);
  ops::conv_axis_geometry(w, n.attrs.window.w, n.attrs.stride.w,
                          n.attrs.padding, &ow, &pad_w);
  TensorValue out = TensorValue::zeros(DType::kInt8, {oh, ow, c});
  out.set_quant(qp);
  const int8_t* in = input.i8().data();
  int8_t* o = out.i8().data();
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      for (int ci = 0; ci < c; ++ci) {
        int32_t max_v = -128;
        int64_t sum = 0;
        int count = 0;
        for (int ky = 0; ky < n.attrs.window.h; ++ky) {
          const int iy = y * n.attrs.stride.h - pad_h + ky;
          if (iy < 0 || iy >= h) continue;
          for (int kx = 0; kx < n.attrs.window.w; ++kx) {
            const int ix = x * n.attrs.stride.w - pad_w + kx;
            if (ix < 0 || ix >= w) continue;
            const int8_t v = in[(static_cast<size_t>(iy) * w + ix) * c + ci];
            max_v = std::max<int32_t>(max_v, v);
            sum += v;
            ++count;
          }
        }
        int32_t result;
        if (kind == ops::PoolKind::kMax) {
          result = max_v;
        } else {
          const double mean = static_cast<double>(sum) / count;
          result = static_cast<int32_t>(std::lround(mean));
        }
        o[(static_cast<size_t>(y) * ow + x) * c + ci] =
            static_cast<int8_t>(std::clamp(result, -128, 127));
      }
    }
  }
  return out;
}

TensorValue quant_global_avg_pool(const Node& n, const TensorValue& input) {
  (void)n;
  const QuantParams qp = *input.quant();
  const int c = input.dim(input.rank() - 1);
  const int64_t spatial = input.elems() / c;
  TensorValue out = TensorValue::zeros(DType::kInt8, {c});
  out.set_quant(qp);
  const int8_t* in = input.i8().data();
  int8_t* o = out.i8().data();
  for (int ci = 0; ci < c; ++ci) {
    int64_t sum = 0;
    for (int64_t s = 0; s < spatial; ++s) sum += in[s * c + ci];
    const double mean = static_cast<double>(sum) / static_cast<double>(spatial);
    o[ci] = static_cast<int8_t>(
        std::clamp<int64_t>(std::lround(mean), -128, 127));
  }
  return out;
}

TensorValue quant_relu6(const Node& n, const TensorValue& input) {
  (void)n;
  const QuantParams qp = *input.quant();
  const int32_t q_lo = qp.zero_point;
  const int32_t q_hi = static_cast<int32_t>(
      std::min(127.0, std::round(6.0 / qp.scale) + qp.zero_point));
  TensorValue out = input;
  for (int8_t& v : out.i8()) {
    v = static_cast<int8_t>(std::clamp<int32_t>(v, q_lo, q_hi));
  }
  return out;
}

TensorValue quant_elementwise(const Node& n,
                              const std::vector<TensorValue const*>& in) {
  // a (op) b in real space, requantized to the output parameters.
  const TensorValue& a = *in[0];
  const TensorValue& b = *in[1];
  const QuantParams aq = *a.quant();
  const QuantParams bq = *b.quant();
  const QuantParams oq = n.oqp;
  TensorValue out = TensorValue::zeros(DType::kInt8, n.out_shape);
  out.set_quant(oq);
  const auto& ad = a.i8();
  const auto& bd = b.i8();
  auto& od = out.i8();
  const size_t bn = bd.size();
  for (size_t i = 0; i < ad.size(); ++i) {
    const double x = aq.scale * (ad[i] - aq.zero_point);
    const double y = bq.scale * (bd[i % bn] - bq.zero_point);
    double r = 0.0;
    switch (n.kind) {
      case LayerKind::kAdd: r = x + y; break;
      case LayerKind::kSub: r = x - y; break;
      case LayerKind::kMul: r = x * y; break;
      case LayerKind::kSquaredDifference: r = (x - y) * (x - y); break;
      default: raise(ErrorCategory::kGraph, "bad elementwise kind");
    }
    od[i] = requant_i8(r, oq);
  }
  return out;
}

TensorValue quant_concat(const Node& n,
                         const std::vector<TensorValue const*>& in) {
  const QuantParams oq = n.oqp;
  TensorValue out = TensorValue::zeros(DType::kInt8, n.out_shape);
  out.set_quant(oq);
  int axis = n.attrs.axis < 0 ? n.attrs.axis + static_cast<int>(n.out_shape.size())
                              : n.attrs.axis;
  int64_t inner = 1;
  for (size_t i = axis + 1; i < n.out_shape.size(); ++i)
    inner *= n.out_shape[i];
  int64_t outer = 1;
  for (int i = 0; i < axis; ++i) outer *= n.out_shape[i];
  const int64_t out_row = static_cast<int64_t>(n.out_shape[axis]) * inner;

  int8_t* o = out.i8().data();
  for (int64_t a = 0; a < outer; ++a) {
    int64_t offset = 0;
    for (const TensorValue* p : in) {
      const QuantParams pq = *p->quant();
      const int64_t row = static_cast<int64_t>(p->shape()[axis]) * inner;
      const int8_t* src = p->i8().data() + a * row;
      for (int64_t i = 0; i < row; ++i) {
        // Inputs may carry different scales; requantize into the output's.
        const double real = pq.scale * (src[i] - pq.zero_point);
        o[a * out_row + offset + i] = requant_i8(real, oq);
      }
      offset += row;
    }
  }
  return out;
}

}  // namespace

ExecResult execute_quantized(const ModelGraph& graph,
                             const std::vector<TensorValue>& inputs) {
  check(graph.quantized, ErrorCategory::kGraph,
        "execute_quantized needs a quantized graph");
  check(inputs.size() == graph.inputs.size(), ErrorCategory::kShape,
        "wrong number of graph inputs");
  std::vector<TensorValue> qinputs;
  qinputs.reserve(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    check(inputs[i].shape() == graph.inputs[i].shape, ErrorCategory::kShape,
          "graph input shape mismatch");
    if (inputs[i].dtype() == DType::kFloat32) {
      qinputs.push_back(quantize_tensor(inputs[i], graph.inputs[i].qp));
    } else {
      check(inputs[i].dtype() == DType::kInt8 && inputs[i].quant().has_value(),
            ErrorCategory::kShape, "quantized input must be int8 with params");
      qinputs.push_back(inputs[i]);
    }
  }

  ExecResult res;
  res.activations.reserve(graph.nodes.size());
  for (const Node& n : graph.nodes) {
    std::vector<TensorValue const*> in;
    in.reserve(n.inputs.size());
    for (ValueRef ref : n.inputs) {
      in.push_back(&resolve(qinputs, res.activations, ref));
    }
    TensorValue out;
    switch (n.kind) {
      case LayerKind::kConv2D: out = quant_conv2d(n, *in[0]); break;
      case LayerKind::kDepthwiseConv2D: out = quant_depthwise(n, *in[0]); break;
      case LayerKind::kDense: out = quant_dense(n, *in[0]); break;
      case LayerKind::kMaxPool2D:
        out = quant_pool(n, *in[0], ops::PoolKind::kMax);
        break;
      case LayerKind::kAvgPool2D:
        out = quant_pool(n, *in[0], ops::PoolKind::kAvg);
        break;
      case LayerKind::kGlobalAvgPool:
        out = quant_global_avg_pool(n, *in[0]);
        break;
      case LayerKind::kRelu6: out = quant_relu6(n, *in[0]); break;
      case LayerKind::kAdd:
      case LayerKind::kSub:
      case LayerKind::kMul:
      case LayerKind::kSquaredDifference:
        out = quant_elementwise(n, in);
        break;
      case LayerKind::kConcat: out = quant_concat(n, in); break;
      case LayerKind::kReshape:
        out = in[0]->reshaped(n.attrs.new_shape);
        break;
      case LayerKind::kTranspose:
        out = transpose_tensor(*in[0], n.attrs.perm);
        break;
      case LayerKind::kSlice:
        out = slice_tensor(*in[0], n.attrs.begin, n.attrs.size);
        break;
      default:
        // Softmax, layer norm, sigmoid, attention, positional encodings:
        // table-style ops run dequantize -> float -> requantize.
        out = dequant_float_requant(n, in);
        break;
    }
    check(out.shape() == n.out_shape, ErrorCategory::kShape,
          "quantized node '" + n.name + "' produced " +
              shape_str(out.shape()) + ", inferred " + shape_str(n.out_shape));
    res.activations.push_back(std::move(out));
  }
  return res;
}

std::vector<TensorValue> execute_quantized_dequant(
    const ModelGraph& graph, const std::vector<TensorValue>& inputs) {
  const ExecResult res = execute_quantized(graph, inputs);
  std::vector<TensorValue> out;
  out.reserve(graph.outputs.size());
  for (const GraphOutput& o : graph.outputs) {
    out.push_back(dequantize_tensor(res.activations[o.node_id]));
  }
  return out;
}

}  // namespace edgeaudio::graph
