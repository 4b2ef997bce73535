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
#include "edgeaudio/weights.hpp"

#include "edgeaudio/container.hpp"
#include "edgeaudio/models.hpp"
#include "edgeaudio/quantize.hpp"

namespace edgeaudio::models {

using graph::ModelGraph;
using graph::Node;

void save_weights(const ModelGraph& model, const std::string& path) {
  check(model.arch == "kws" || model.arch == "emotion", ErrorCategory::kGraph,
        "only built model architectures can be serialized");
  std::vector<NamedTensor> tensors;
  for (const Node& n : model.nodes) {
    const auto roles = graph::weight_roles(n.kind);
    check(roles.size() == n.weights.size(), ErrorCategory::kGraph,
          "node '" + n.name + "' weight/role mismatch");
    for (size_t i = 0; i < n.weights.size(); ++i) {
      tensors.push_back({n.name + "/" + roles[i], n.weights[i]});
    }
  }

  nlohmann::json meta;
  meta["kind"] = "model";
  meta["arch"] = model.arch;
  meta["labels"] = model.labels;
  meta["quantized"] = model.quantized;
  if (model.arch == "kws") {
    meta["num_classes"] = static_cast<int>(model.labels.size());
    const Node* fc1 = model.find_node("kws/block1/se/fc1");
    meta["se_reduction"] = 64 / fc1->weights[0].dim(1);
  } else {
    const Node* proj = model.find_node("spec/proj");
    meta["d_model"] = proj->weights[0].dim(1);
    const Node* fc1 = model.find_node("kw/kws/block1/se/fc1");
    meta["se_reduction"] = 64 / fc1->weights[0].dim(1);
  }
  if (model.quantized) {
    nlohmann::json node_qp = nlohmann::json::object();
    for (const Node& n : model.nodes) {
      node_qp[n.name] = {n.oqp.scale, n.oqp.zero_point};
    }
    meta["node_qparams"] = std::move(node_qp);
    nlohmann::json input_qp = nlohmann::json::object();
    for (const auto& in : model.inputs) {
      input_qp[in.name] = {in.qp.scale, in.qp.zero_point};
    }
    meta["input_qparams"] = std::move(input_qp);
  }
  write_container(path, tensors, meta);
}

ModelGraph load_weights(const std::string& path) {
  const Container c = read_container(path, ErrorCategory::kManifest);
  check(c.meta.value("kind", "") == "model", ErrorCategory::kManifest,
        "container does not hold model weights: " + path);
  const std::string arch = c.meta.value("arch", "");
  const bool quantized = c.meta.value("quantized", false);
  const int se_reduction = c.meta.value("se_reduction", 8);

  ModelGraph model;
  if (arch == "kws") {
    model = build_kws_model(c.meta.value("num_classes", 51), se_reduction);
  } else if (arch == "emotion") {
    model = build_emotion_model(c.meta.value("d_model", 128), se_reduction);
  } else {
    raise(ErrorCategory::kManifest, "unknown model arch: " + arch);
  }
  if (c.meta.contains("labels")) {
    model.labels = c.meta.at("labels").get<std::vector<std::string>>();
  }
  if (quantized) {
    // The stored graph is the post-folding structure.
    model = graph::fold_batchnorm_pass(model);
    model.quantized = true;
    const auto& node_qp = c.meta.at("node_qparams");
    for (Node& n : model.nodes) {
      check(node_qp.contains(n.name), ErrorCategory::kManifest,
            "missing quantization parameters for node " + n.name);
      n.oqp.scale = node_qp.at(n.name).at(0).get<double>();
      n.oqp.zero_point = node_qp.at(n.name).at(1).get<int>();
    }
    const auto& input_qp = c.meta.at("input_qparams");
    for (auto& in : model.inputs) {
      check(input_qp.contains(in.name), ErrorCategory::kManifest,
            "missing quantization parameters for input " + in.name);
      in.qp.scale = input_qp.at(in.name).at(0).get<double>();
      in.qp.zero_point = input_qp.at(in.name).at(1).get<int>();
    }
  }

  size_t used = 0;
  for (Node& n : model.nodes) {
    const auto roles = graph::weight_roles(n.kind);
    for (size_t i = 0; i < roles.size(); ++i) {
      const std::string name = n.name + "/" + roles[i];
      const NamedTensor* t = c.find(name);
      check(t != nullptr, ErrorCategory::kManifest,
            "weight container is missing tensor: " + name);
      check(t->value.shape() == n.weights[i].shape(), ErrorCategory::kManifest,
            "tensor shape mismatch for " + name + ": file has " +
                shape_str(t->value.shape()) + ", model expects " +
                shape_str(n.weights[i].shape()));
      if (!quantized) {
        check(t->value.dtype() == DType::kFloat32, ErrorCategory::kManifest,
              "tensor dtype mismatch for " + name + ": expected float32, got " +
                  dtype_name(t->value.dtype()));
      }
      n.weights[i] = t->value;
      ++used;
    }
  }
  check(used == c.tensors.size(), ErrorCategory::kManifest,
        "weight container holds " + std::to_string(c.tensors.size()) +
            " tensors, model uses " + std::to_string(used));
  graph::infer_shapes(model);
  return model;
}

void import_kws_branch(ModelGraph& emotion, const ModelGraph& kws) {
  check(emotion.arch == "emotion" && kws.arch == "kws", ErrorCategory::kGraph,
        "import_kws_branch expects an emotion model and a keyword model");
  check(!emotion.quantized && !kws.quantized, ErrorCategory::kGraph,
        "branch import must happen before quantization");
  for (graph::Node& n : emotion.nodes) {
    if (n.name.rfind("kw/kws/", 0) != 0) continue;
    const std::string source_name = "kws/" + n.name.substr(7);
    const Node* src = kws.find_node(source_name);
    check(src != nullptr, ErrorCategory::kGraph,
          "keyword model has no node " + source_name);
    check(src->weights.size() == n.weights.size(), ErrorCategory::kGraph,
          "node arity mismatch at " + source_name);
    for (size_t i = 0; i < n.weights.size(); ++i) {
      check(src->weights[i].shape() == n.weights[i].shape(),
            ErrorCategory::kShape, "weight shape mismatch at " + source_name);
      n.weights[i] = src->weights[i];
    }
  }
}

}  // namespace edgeaudio::models
