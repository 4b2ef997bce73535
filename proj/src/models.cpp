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
#include "edgeaudio/models.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "edgeaudio/error.hpp"
#include "edgeaudio/executor.hpp"
#include "edgeaudio/rng.hpp"

namespace edgeaudio::models {

using graph::Attrs;
using graph::LayerKind;
using graph::ModelGraph;
using graph::Node;
using graph::ValueRef;
using ops::Padding;

namespace {

// Fan-in-scaled normal init. First-layer weights are additionally divided by
// the expected input magnitude so raw log-mel counts land inside the ReLU6
// range instead of saturating it.
class WeightInit {
 public:
  WeightInit(const BuildOptions& opts) : rng_(opts.seed), opts_(opts) {}

  TensorValue normal(const Shape& shape, double stddev) {
    TensorValue t = TensorValue::zeros(DType::kFloat32, shape);
    for (float& v : t.f32()) {
      v = static_cast<float>(rng_.normal(0.0, stddev));
    }
    return t;
  }

  TensorValue conv(int kh, int kw, int cin, int cout, bool first_layer) {
    double std = std::sqrt(2.0 / (kh * kw * cin)) * opts_.init_scale;
    if (first_layer) std *= 2.0 / opts_.input_rms;
    return normal({kh, kw, cin, cout}, std);
  }

  TensorValue depthwise(int kh, int kw, int c) {
    return normal({kh, kw, c}, std::sqrt(2.0 / (kh * kw)) * opts_.init_scale);
  }

  TensorValue dense(int n, int m) {
    return normal({n, m}, std::sqrt(2.0 / n) * opts_.init_scale);
  }

  TensorValue attention(int d) {
    return normal({d, d}, std::sqrt(1.0 / d) * opts_.init_scale);
  }

  static TensorValue zeros1d(int n) {
    return TensorValue::zeros(DType::kFloat32, {n});
  }
  static TensorValue ones1d(int n) {
    TensorValue t = TensorValue::zeros(DType::kFloat32, {n});
    for (float& v : t.f32()) v = 1.0f;
    return t;
  }

 private:
  Rng rng_;
  const BuildOptions& opts_;
};

struct Builder {
  ModelGraph& g;
  WeightInit& init;

  int emit(const std::string& name, LayerKind kind,
           std::vector<ValueRef> inputs, Attrs attrs = {},
           std::vector<TensorValue> weights = {}) {
    Node n;
    n.name = name;
    n.kind = kind;
    n.inputs = std::move(inputs);
    n.attrs = attrs;
    n.weights = std::move(weights);
    return g.add(std::move(n));
  }

  int conv(const std::string& name, ValueRef in, int kh, int kw, int cin,
           int cout, ops::Stride2D stride, Padding padding,
           bool first_layer = false) {
    Attrs a;
    a.stride = stride;
    a.padding = padding;
    return emit(name, LayerKind::kConv2D, {in}, a,
                {init.conv(kh, kw, cin, cout, first_layer),
                 WeightInit::zeros1d(cout)});
  }

  int dwconv(const std::string& name, ValueRef in, int kh, int kw, int c) {
    Attrs a;
    a.stride = {1, 1};
    a.padding = Padding::kSame;
    return emit(name, LayerKind::kDepthwiseConv2D, {in}, a,
                {init.depthwise(kh, kw, c), WeightInit::zeros1d(c)});
  }

  int dense(const std::string& name, ValueRef in, int n, int m) {
    return emit(name, LayerKind::kDense, {in}, {},
                {init.dense(n, m), WeightInit::zeros1d(m)});
  }

  int bn(const std::string& name, ValueRef in, int c) {
    Attrs a;
    a.eps = 1e-3;
    return emit(name, LayerKind::kBatchNorm, {in}, a,
                {WeightInit::ones1d(c), WeightInit::zeros1d(c),
                 WeightInit::zeros1d(c), WeightInit::ones1d(c)});
  }

  int relu(const std::string& name, ValueRef in) {
    return emit(name, LayerKind::kRelu6, {in});
  }
  int sigmoid_node(const std::string& name, ValueRef in) {
    return emit(name, LayerKind::kSigmoid, {in});
  }

  int maxpool(const std::string& name, ValueRef in, ops::Window2D w,
              ops::Stride2D s) {
    Attrs a;
    a.window = w;
    a.stride = s;
    a.padding = Padding::kValid;
    return emit(name, LayerKind::kMaxPool2D, {in}, a);
  }

  int avgpool(const std::string& name, ValueRef in, ops::Window2D w,
              ops::Stride2D s) {
    Attrs a;
    a.window = w;
    a.stride = s;
    a.padding = Padding::kValid;
    return emit(name, LayerKind::kAvgPool2D, {in}, a);
  }

  int gap(const std::string& name, ValueRef in) {
    return emit(name, LayerKind::kGlobalAvgPool, {in});
  }

  int softmax_node(const std::string& name, ValueRef in, int axis = -1) {
    Attrs a;
    a.axis = axis;
    return emit(name, LayerKind::kSoftmax, {in}, a);
  }

  int reshape(const std::string& name, ValueRef in, Shape shape) {
    Attrs a;
    a.new_shape = std::move(shape);
    return emit(name, LayerKind::kReshape, {in}, a);
  }

  int ln(const std::string& name, ValueRef in, int d) {
    Attrs a;
    a.eps = 1e-6;
    return emit(name, LayerKind::kLayerNorm, {in}, a,
                {WeightInit::ones1d(d), WeightInit::zeros1d(d)});
  }

  int attention(const std::string& name, ValueRef in, int d) {
    std::vector<TensorValue> w;
    for (int i = 0; i < 4; ++i) {
      w.push_back(init.attention(d));
      w.push_back(WeightInit::zeros1d(d));
    }
    return emit(name, LayerKind::kAttentionSingleHead, {in}, {}, std::move(w));
  }
};

struct KwsFeatures {
  int pooled_id;     // [2 x 5 x 256]
  int embedding_id;  // [256]
};

int emit_resds_se(Builder& b, const std::string& prefix, ValueRef in, int cin,
                  int cout, int se_reduction) {
  const int dw = b.dwconv(prefix + "/dw", in, 3, 3, cin);
  const int pw = b.conv(prefix + "/pw", ValueRef::node(dw), 1, 1, cin, cout,
                        {1, 1}, Padding::kSame);
  const int bn = b.bn(prefix + "/bn", ValueRef::node(pw), cout);
  const int act = b.relu(prefix + "/relu", ValueRef::node(bn));
  // Residual path picks up a 1x1 projection because the channel count grows.
  const int proj = b.conv(prefix + "/proj", in, 1, 1, cin, cout, {1, 1},
                          Padding::kSame);
  const int sum = b.emit(prefix + "/add", LayerKind::kAdd,
                         {ValueRef::node(act), ValueRef::node(proj)});

  const int hidden = cout / se_reduction;
  const int se_gap = b.gap(prefix + "/se/gap", ValueRef::node(sum));
  const int se_fc1 =
      b.dense(prefix + "/se/fc1", ValueRef::node(se_gap), cout, hidden);
  const int se_relu = b.relu(prefix + "/se/relu", ValueRef::node(se_fc1));
  const int se_fc2 =
      b.dense(prefix + "/se/fc2", ValueRef::node(se_relu), hidden, cout);
  const int se_gate =
      b.sigmoid_node(prefix + "/se/gate", ValueRef::node(se_fc2));
  return b.emit(prefix + "/se/mul", LayerKind::kMul,
                {ValueRef::node(sum), ValueRef::node(se_gate)});
}

KwsFeatures emit_kws_feature_extractor(Builder& b, const std::string& prefix,
                                       ValueRef input, int se_reduction) {
  const int conv1 = b.conv(prefix + "/conv1", input, 3, 3, 1, 32, {1, 1},
                           Padding::kSame, /*first_layer=*/true);
  const int bn1 = b.bn(prefix + "/conv1_bn", ValueRef::node(conv1), 32);
  const int act1 = b.relu(prefix + "/conv1_relu", ValueRef::node(bn1));
  const int pool1 =
      b.maxpool(prefix + "/pool1", ValueRef::node(act1), {2, 2}, {2, 2});

  const int block1 = emit_resds_se(b, prefix + "/block1",
                                   ValueRef::node(pool1), 32, 64, se_reduction);
  const int pool2 =
      b.maxpool(prefix + "/pool2", ValueRef::node(block1), {2, 2}, {2, 2});
  const int block2 = emit_resds_se(b, prefix + "/block2",
                                   ValueRef::node(pool2), 64, 128, se_reduction);
  const int pool3 =
      b.maxpool(prefix + "/pool3", ValueRef::node(block2), {2, 2}, {2, 2});
  const int block3 = emit_resds_se(b, prefix + "/block3", ValueRef::node(pool3),
                                   128, 256, se_reduction);
  const int pool4 =
      b.maxpool(prefix + "/pool4", ValueRef::node(block3), {2, 2}, {2, 2});

  // 2x30x256 -> 2x5x256: one pooled column per second of audio.
  const int avgpool =
      b.avgpool(prefix + "/avgpool", ValueRef::node(pool4), {1, 6}, {1, 6});
  const int embedding = b.gap(prefix + "/embedding", ValueRef::node(avgpool));
  return {avgpool, embedding};
}

int emit_specconv(Builder& b, const std::string& prefix, ValueRef in, int cin,
                  int filters, bool first_layer = false) {
  // Strided 2x1 conv halves the time axis, then a padded 3x3 keeps shape.
  const int ca = b.conv(prefix + "/conv_a", in, 2, 1, cin, filters, {2, 1},
                        Padding::kSame, first_layer);
  const int ra = b.relu(prefix + "/relu_a", ValueRef::node(ca));
  const int cb = b.conv(prefix + "/conv_b", ValueRef::node(ra), 3, 3, filters,
                        filters, {1, 1}, Padding::kSame);
  return b.relu(prefix + "/relu_b", ValueRef::node(cb));
}

int emit_transformer_block(Builder& b, const std::string& prefix, ValueRef in,
                           int d) {
  const int attn = b.attention(prefix + "/attn", in, d);
  const int add1 =
      b.emit(prefix + "/add1", LayerKind::kAdd, {ValueRef::node(attn), in});
  const int ln1 = b.ln(prefix + "/ln1", ValueRef::node(add1), d);
  // Feed-forward width stays at d_model; no 4x expansion.
  const int f1 = b.dense(prefix + "/ffn1", ValueRef::node(ln1), d, d);
  const int fr = b.relu(prefix + "/ffn_relu", ValueRef::node(f1));
  const int f2 = b.dense(prefix + "/ffn2", ValueRef::node(fr), d, d);
  const int add2 = b.emit(prefix + "/add2", LayerKind::kAdd,
                          {ValueRef::node(f2), ValueRef::node(ln1)});
  return b.ln(prefix + "/ln2", ValueRef::node(add2), d);
}

}  // namespace

std::vector<std::string> emotion_labels() {
  return {"happy", "neutral", "sad", "angry", "none"};
}

std::vector<std::string> kws_labels(int num_classes) {
  check(num_classes >= 3, ErrorCategory::kConfig,
        "keyword class set needs at least one keyword plus UNKNOWN/NEGATIVE");
  std::vector<std::string> labels;
  for (int i = 0; i < num_classes - 2; ++i) {
    std::ostringstream os;
    os << "kw" << std::setw(2) << std::setfill('0') << i;
    labels.push_back(os.str());
  }
  labels.push_back("UNKNOWN");
  labels.push_back("NEGATIVE");
  return labels;
}

graph::ModelGraph build_kws_model(int num_classes, int se_reduction,
                                  const BuildOptions& opts) {
  check(num_classes >= 3, ErrorCategory::kConfig, "num_classes too small");
  check(256 % se_reduction == 0 && se_reduction >= 1, ErrorCategory::kConfig,
        "se_reduction must divide the channel counts");
  ModelGraph g;
  g.arch = "kws";
  g.labels = kws_labels(num_classes);
  g.inputs.push_back(
      {"spectrogram", {kMelChannels, kKwsInputFrames, 1}, QuantParams{}});

  WeightInit init(opts);
  Builder b{g, init};
  const KwsFeatures fx =
      emit_kws_feature_extractor(b, "kws", ValueRef::input(0), se_reduction);

  const int cls = b.conv("kws/classifier", ValueRef::node(fx.pooled_id), 2, 1,
                         256, num_classes, {1, 1}, Padding::kValid);
  const int sm = b.softmax_node("kws/softmax", ValueRef::node(cls), -1);
  const int rs = b.reshape("kws/reshape", ValueRef::node(sm),
                           {kKwsPredictionsPerClip, num_classes});

  g.outputs.push_back({"probs", rs});
  g.outputs.push_back({"embedding", fx.embedding_id});
  graph::infer_shapes(g);
  return g;
}

graph::ModelGraph build_emotion_model(int d_model, int se_reduction,
                                      const BuildOptions& opts) {
  check(d_model > 0 && d_model % 2 == 0, ErrorCategory::kConfig,
        "d_model must be positive and even");
  ModelGraph g;
  g.arch = "emotion";
  g.labels = emotion_labels();
  g.inputs.push_back(
      {"spectrogram", {kMelChannels, kEmotionInputFrames}, QuantParams{}});

  WeightInit init(opts);
  Builder b{g, init};

  // Keyword branch: clip to the keyword model's window, run the frozen
  // feature extractor, adapt the embedding to d_model with a residual pair.
  Attrs clip_attrs;
  clip_attrs.begin = {0, 0};
  clip_attrs.size = {kMelChannels, kKwsInputFrames};
  const int clip =
      b.emit("kw/clip", LayerKind::kSlice, {ValueRef::input(0)}, clip_attrs);
  const int expand = b.reshape("kw/expand", ValueRef::node(clip),
                               {kMelChannels, kKwsInputFrames, 1});
  const KwsFeatures fx = emit_kws_feature_extractor(
      b, "kw/kws", ValueRef::node(expand), se_reduction);
  const int fc1 = b.dense("kw/fc1", ValueRef::node(fx.embedding_id),
                          kEmbeddingDim, d_model);
  const int r1 = b.relu("kw/relu1", ValueRef::node(fc1));
  const int fc2 = b.dense("kw/fc2", ValueRef::node(r1), d_model, d_model);
  const int r2 = b.relu("kw/relu2", ValueRef::node(fc2));
  const int kw_out = b.emit("kw/residual", LayerKind::kAdd,
                            {ValueRef::node(r2), ValueRef::node(r1)});

  // Spectrogram branch: transpose to time-major, reduce 498 -> 32 time steps
  // with four strided conv blocks, then encode with single-head transformers.
  const int tr =
      b.emit("spec/transpose", LayerKind::kTranspose, {ValueRef::input(0)});
  const int ex = b.reshape("spec/expand", ValueRef::node(tr),
                           {kEmotionInputFrames, kMelChannels, 1});
  const int b1 = emit_specconv(b, "spec/block1", ValueRef::node(ex), 1, 16,
                               /*first_layer=*/true);
  const int b2 = emit_specconv(b, "spec/block2", ValueRef::node(b1), 16, 32);
  const int b3 = emit_specconv(b, "spec/block3", ValueRef::node(b2), 32, 64);
  const int b4 = emit_specconv(b, "spec/block4", ValueRef::node(b3), 64, 1);
  const int sq = b.reshape("spec/squeeze", ValueRef::node(b4),
                           {kMelChannels, kMelChannels});
  const int proj =
      b.dense("spec/proj", ValueRef::node(sq), kMelChannels, d_model);
  const int pos =
      b.emit("spec/pos", LayerKind::kPosEncoding, {ValueRef::node(proj)});

  int x = pos;
  for (int k = 0; k < 4; ++k) {
    x = emit_transformer_block(b, "enc" + std::to_string(k),
                               ValueRef::node(x), d_model);
  }
  const int tokens3d = b.reshape("spec/tokens3d", ValueRef::node(x),
                                 {kMelChannels, 1, d_model});
  const int pooled = b.gap("spec/pool", ValueRef::node(tokens3d));

  // Head: concatenate acoustic and keyword embeddings, classify.
  Attrs cat_attrs;
  cat_attrs.axis = 0;
  const int cat = b.emit("head/concat", LayerKind::kConcat,
                         {ValueRef::node(pooled), ValueRef::node(kw_out)},
                         cat_attrs);
  const int h1 = b.dense("head/fc1", ValueRef::node(cat), 2 * d_model, d_model);
  const int hr = b.relu("head/relu", ValueRef::node(h1));
  const int h2 = b.dense("head/fc2", ValueRef::node(hr), d_model,
                         static_cast<int>(g.labels.size()));
  const int sm = b.softmax_node("head/softmax", ValueRef::node(h2), -1);

  g.outputs.push_back({"probs", sm});
  graph::infer_shapes(g);
  return g;
}

// ---------------------------------------------------------------------------
// Inference entry points
// ---------------------------------------------------------------------------

TensorValue spectrogram_to_tensor(const frontend::Spectrogram& spec) {
  TensorValue t = TensorValue::zeros(DType::kFloat32,
                                     {spec.num_channels, spec.num_frames});
  auto& d = t.f32();
  for (size_t i = 0; i < spec.values.size(); ++i) {
    d[i] = static_cast<float>(spec.values[i]);
  }
  return t;
}

namespace {

std::vector<TensorValue> run_model(const ModelGraph& model,
                                   const std::vector<TensorValue>& inputs) {
  if (model.quantized) {
    return graph::execute_quantized_dequant(model, inputs);
  }
  return graph::execute_float(model, inputs).outputs(model);
}

const TensorValue& output_by_name(const ModelGraph& model,
                                  const std::vector<TensorValue>& outs,
                                  const std::string& name) {
  for (size_t i = 0; i < model.outputs.size(); ++i) {
    if (model.outputs[i].name == name) return outs[i];
  }
  raise(ErrorCategory::kGraph, "model has no output named " + name);
}

}  // namespace

KwsOutput infer_kws_tensor(const ModelGraph& model, const TensorValue& input) {
  check(model.arch == "kws", ErrorCategory::kGraph, "not a keyword model");
  const auto outs = run_model(model, {input});
  return KwsOutput{output_by_name(model, outs, "probs")};
}

KwsOutput infer_kws(const ModelGraph& model,
                    const frontend::Spectrogram& spec) {
  check(spec.num_channels == kMelChannels &&
            spec.num_frames == kKwsInputFrames,
        ErrorCategory::kShape,
        "keyword model expects a 32x490 spectrogram, got " +
            std::to_string(spec.num_channels) + "x" +
            std::to_string(spec.num_frames));
  return infer_kws_tensor(model, spectrogram_to_tensor(spec).reshaped(
                                     {kMelChannels, kKwsInputFrames, 1}));
}

EmotionOutput infer_emotion_tensor(const ModelGraph& model,
                                   const TensorValue& input) {
  check(model.arch == "emotion", ErrorCategory::kGraph,
        "not an emotion model");
  const auto outs = run_model(model, {input});
  const TensorValue& probs = output_by_name(model, outs, "probs");
  return EmotionOutput{probs.f32()};
}

EmotionOutput infer_emotion(const ModelGraph& model,
                            const frontend::Spectrogram& spec) {
  check(spec.num_channels == kMelChannels &&
            spec.num_frames == kEmotionInputFrames,
        ErrorCategory::kShape,
        "emotion model expects a 32x498 spectrogram, got " +
            std::to_string(spec.num_channels) + "x" +
            std::to_string(spec.num_frames));
  return infer_emotion_tensor(model, spectrogram_to_tensor(spec));
}

KwsEmbedding extract_kws_embedding(const ModelGraph& kws,
                                   const frontend::Spectrogram& spec) {
  check(kws.arch == "kws", ErrorCategory::kGraph, "not a keyword model");
  check(spec.num_channels == kMelChannels &&
            spec.num_frames == kKwsInputFrames,
        ErrorCategory::kShape, "embedding extraction expects 32x490 input");
  const TensorValue input = spectrogram_to_tensor(spec).reshaped(
      {kMelChannels, kKwsInputFrames, 1});
  const auto outs = run_model(kws, {input});
  return KwsEmbedding{output_by_name(kws, outs, "embedding").f32()};
}

// ---------------------------------------------------------------------------
// Parameter reconciliation
// ---------------------------------------------------------------------------

namespace {

struct DesignRow {
  const char* section;
  const char* operation;
  int64_t design_params;  // -1: no published figure
  std::vector<const char*> prefixes;
};

const std::vector<DesignRow>& kws_design() {
  static const std::vector<DesignRow> rows = {
      {"features", "Conv2D 3x3, BN, ReLU6", 169, {"kws/conv1"}},
      {"features", "MaxPool2D 2x2", 0, {"kws/pool1"}},
      {"features", "ResDS + SE (64)", 10404, {"kws/block1"}},
      {"features", "MaxPool2D 2x2", 0, {"kws/pool2"}},
      {"features", "ResDS + SE (128)", 38216, {"kws/block2"}},
      {"features", "MaxPool2D 2x2", 0, {"kws/pool3"}},
      {"features", "ResDS + SE (256)", 146064, {"kws/block3"}},
      {"features", "MaxPool2D 2x2", 0, {"kws/pool4"}},
      {"features", "AvgPool2D 1x6", 0, {"kws/avgpool"}},
      {"features", "Embedding tap (global avg)", 0, {"kws/embedding"}},
      {"head", "Conv2D 2x1, Softmax", 26163, {"kws/classifier", "kws/softmax"}},
      {"head", "Reshape", 0, {"kws/reshape"}},
  };
  return rows;
}

const std::vector<DesignRow>& emotion_design() {
  static const std::vector<DesignRow> rows = {
      {"keyword encoder", "Clip and expand", 0, {"kw/clip", "kw/expand"}},
      {"keyword encoder", "Extract keyword embedding", 194853, {"kw/kws"}},
      {"keyword encoder", "Linear 256->128, ReLU6, Dropout", 32896,
       {"kw/fc1", "kw/relu1"}},
      {"keyword encoder", "Linear 128->128, ReLU6", 16512,
       {"kw/fc2", "kw/relu2", "kw/residual"}},
      {"spectrogram encoder", "Transpose and expand", 0,
       {"spec/transpose", "spec/expand"}},
      {"spectrogram encoder", "SpecConv (16 filters)", 2368, {"spec/block1"}},
      {"spectrogram encoder", "SpecConv (32 filters)", 10304, {"spec/block2"}},
      {"spectrogram encoder", "SpecConv (64 filters)", 41088, {"spec/block3"}},
      {"spectrogram encoder", "SpecConv (1 filter)", 139, {"spec/block4"}},
      {"spectrogram encoder", "Linear 32->128", 4224,
       {"spec/squeeze", "spec/proj"}},
      {"spectrogram encoder", "Positional encodings", 0, {"spec/pos"}},
      {"spectrogram encoder", "Transformer block x4", 398336,
       {"enc0", "enc1", "enc2", "enc3"}},
      {"spectrogram encoder", "AvgPool over tokens", 0,
       {"spec/tokens3d", "spec/pool"}},
      {"head", "Concatenate", 0, {"head/concat"}},
      {"head", "Linear 256->128, ReLU6, Dropout", 32896,
       {"head/fc1", "head/relu"}},
      {"head", "Linear 128->5, Softmax", 645, {"head/fc2", "head/softmax"}},
  };
  return rows;
}

bool name_in_row(const std::string& name, const DesignRow& row) {
  for (const char* p : row.prefixes) {
    const std::string prefix(p);
    if (name == prefix) return true;
    if (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0 &&
        name[prefix.size()] == '/') {
      return true;
    }
  }
  return false;
}

Shape row_input_shape(const ModelGraph& g, const Node& first_node) {
  if (first_node.inputs.empty()) return {};
  const ValueRef ref = first_node.inputs[0];
  if (ref.is_input()) return g.inputs[ref.input_index()].shape;
  return g.nodes[ref.node_id()].out_shape;
}

}  // namespace

ModelSummary model_summary(const ModelGraph& model) {
  const std::vector<DesignRow>* design = nullptr;
  if (model.arch == "kws") {
    design = &kws_design();
  } else if (model.arch == "emotion") {
    design = &emotion_design();
  } else {
    raise(ErrorCategory::kGraph, "no design table for arch " + model.arch);
  }

  ModelSummary summary;
  summary.arch = model.arch;
  int64_t covered = 0;
  for (const DesignRow& row : *design) {
    SummaryRow out;
    out.section = row.section;
    out.operation = row.operation;
    out.design_params = row.design_params;
    const Node* first = nullptr;
    for (const Node& n : model.nodes) {
      if (!name_in_row(n.name, row)) continue;
      if (!first) first = &n;
      out.params += graph::node_param_count(n);
    }
    check(first != nullptr, ErrorCategory::kGraph,
          "summary row matched no nodes: " + std::string(row.operation));
    out.input_shape = row_input_shape(model, *first);
    covered += out.params;
    summary.rows.push_back(std::move(out));
    if (row.design_params > 0) summary.design_total += row.design_params;
  }
  summary.total_params = model.param_count();
  check(covered == summary.total_params, ErrorCategory::kGraph,
        "summary rows do not cover every parameter");
  return summary;
}

std::string summary_table(const ModelSummary& summary) {
  std::ostringstream os;
  os << "model: " << summary.arch << "\n";
  os << std::left << std::setw(22) << "section" << std::setw(34) << "operation"
     << std::setw(14) << "input" << std::right << std::setw(10) << "params"
     << std::setw(10) << "design" << std::setw(9) << "delta" << "\n";
  for (const SummaryRow& r : summary.rows) {
    os << std::left << std::setw(22) << r.section << std::setw(34)
       << r.operation << std::setw(14) << shape_str(r.input_shape)
       << std::right << std::setw(10) << r.params;
    if (r.design_params >= 0) {
      os << std::setw(10) << r.design_params << std::setw(9)
         << (r.params - r.design_params);
    } else {
      os << std::setw(10) << "-" << std::setw(9) << "-";
    }
    os << "\n";
  }
  os << std::left << std::setw(70) << "total" << std::right << std::setw(10)
     << summary.total_params << std::setw(10) << summary.design_total
     << std::setw(9) << (summary.total_params - summary.design_total) << "\n";
  return os.str();
}

void write_summary_csv(const std::string& path, const ModelSummary& summary) {
  std::ofstream out(path);
  check(out.good(), ErrorCategory::kIo, "cannot write CSV: " + path);
  out << "section,operation,input,params,design_params\n";
  for (const SummaryRow& r : summary.rows) {
    out << r.section << ",\"" << r.operation << "\"," << shape_str(r.input_shape)
        << ',' << r.params << ','
        << (r.design_params >= 0 ? std::to_string(r.design_params) : "")
        << "\n";
  }
  out << "total,,," << summary.total_params << ',' << summary.design_total
      << "\n";
}

int64_t kws_branch_param_count(const ModelGraph& emotion) {
  check(emotion.arch == "emotion", ErrorCategory::kGraph,
        "expected an emotion model");
  int64_t count = 0;
  for (const Node& n : emotion.nodes) {
    if (n.name.rfind("kw/kws/", 0) == 0) count += graph::node_param_count(n);
  }
  return count;
}

int64_t non_kws_param_count(const ModelGraph& emotion) {
  return emotion.param_count() - kws_branch_param_count(emotion);
}

}  // namespace edgeaudio::models
