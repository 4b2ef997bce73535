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
#include "edgeaudio/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "edgeaudio/error.hpp"

namespace edgeaudio {

const char* dtype_name(DType d) {
  switch (d) {
    case DType::kFloat32: return "float32";
    case DType::kInt8: return "int8";
    case DType::kInt16: return "int16";
    case DType::kInt32: return "int32";
  }
  return "unknown";
}

DType dtype_from_name(const std::string& name) {
  if (name == "float32") return DType::kFloat32;
  if (name == "int8") return DType::kInt8;
  if (name == "int16") return DType::kInt16;
  if (name == "int32") return DType::kInt32;
  raise(ErrorCategory::kManifest, "unknown dtype: " + name);
}

size_t dtype_bytes(DType d) {
  switch (d) {
    case DType::kFloat32: return 4;
    case DType::kInt8: return 1;
    case DType::kInt16: return 2;
    case DType::kInt32: return 4;
  }
  return 0;
}

int64_t shape_elems(const Shape& shape) {
  int64_t n = 1;
  for (int d : shape) {
    check(d > 0, ErrorCategory::kShape, "non-positive shape extent");
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

TensorValue TensorValue::zeros(DType dtype, const Shape& shape) {
  TensorValue t;
  t.shape_ = shape;
  t.dtype_ = dtype;
  const size_t n = static_cast<size_t>(shape_elems(shape));
  switch (dtype) {
    case DType::kFloat32: t.data_ = std::vector<float>(n, 0.0f); break;
    case DType::kInt8: t.data_ = std::vector<int8_t>(n, 0); break;
    case DType::kInt16: t.data_ = std::vector<int16_t>(n, 0); break;
    case DType::kInt32: t.data_ = std::vector<int32_t>(n, 0); break;
  }
  return t;
}

TensorValue TensorValue::from_floats(const Shape& shape,
                                     std::vector<float> data) {
  check(static_cast<int64_t>(data.size()) == shape_elems(shape),
        ErrorCategory::kShape, "data length does not match shape");
  TensorValue t;
  t.shape_ = shape;
  t.dtype_ = DType::kFloat32;
  t.data_ = std::move(data);
  return t;
}

void TensorValue::set_quant(const QuantParams& qp) {
  check(dtype_ != DType::kFloat32, ErrorCategory::kShape,
        "float tensors cannot carry quantization parameters");
  check(qp.scale > 0.0, ErrorCategory::kShape, "scale must be positive");
  quant_ = qp;
}

std::vector<float>& TensorValue::f32() {
  check(dtype_ == DType::kFloat32, ErrorCategory::kShape,
        "tensor is not float32");
  return std::get<std::vector<float>>(data_);
}
const std::vector<float>& TensorValue::f32() const {
  check(dtype_ == DType::kFloat32, ErrorCategory::kShape,
        "tensor is not float32");
  return std::get<std::vector<float>>(data_);
}
std::vector<int8_t>& TensorValue::i8() {
  check(dtype_ == DType::kInt8, ErrorCategory::kShape, "tensor is not int8");
  return std::get<std::vector<int8_t>>(data_);
}
const std::vector<int8_t>& TensorValue::i8() const {
  check(dtype_ == DType::kInt8, ErrorCategory::kShape, "tensor is not int8");
  return std::get<std::vector<int8_t>>(data_);
}
std::vector<int16_t>& TensorValue::i16() {
  check(dtype_ == DType::kInt16, ErrorCategory::kShape, "tensor is not int16");
  return std::get<std::vector<int16_t>>(data_);
}
const std::vector<int16_t>& TensorValue::i16() const {
  check(dtype_ == DType::kInt16, ErrorCategory::kShape, "tensor is not int16");
  return std::get<std::vector<int16_t>>(data_);
}
std::vector<int32_t>& TensorValue::i32() {
  check(dtype_ == DType::kInt32, ErrorCategory::kShape, "tensor is not int32");
  return std::get<std::vector<int32_t>>(data_);
}
const std::vector<int32_t>& TensorValue::i32() const {
  check(dtype_ == DType::kInt32, ErrorCategory::kShape, "tensor is not int32");
  return std::get<std::vector<int32_t>>(data_);
}

const void* TensorValue::raw_data() const {
  switch (dtype_) {
    case DType::kFloat32: return f32().data();
    case DType::kInt8: return i8().data();
    case DType::kInt16: return i16().data();
    case DType::kInt32: return i32().data();
  }
  return nullptr;
}

void* TensorValue::raw_data() {
  return const_cast<void*>(static_cast<const TensorValue*>(this)->raw_data());
}

size_t TensorValue::byte_size() const {
  return static_cast<size_t>(elems()) * dtype_bytes(dtype_);
}

TensorValue TensorValue::reshaped(const Shape& new_shape) const {
  check(shape_elems(new_shape) == elems(), ErrorCategory::kShape,
        "reshape changes element count: " + shape_str(shape_) + " -> " +
            shape_str(new_shape));
  TensorValue t = *this;
  t.shape_ = new_shape;
  return t;
}

bool TensorValue::same_contents(const TensorValue& other) const {
  if (dtype_ != other.dtype_ || shape_ != other.shape_) return false;
  return std::memcmp(raw_data(), other.raw_data(), byte_size()) == 0;
}

int8_t quantize_value_i8(float x, const QuantParams& qp) {
  const double q = std::round(static_cast<double>(x) / qp.scale) +
                   qp.zero_point;
  return static_cast<int8_t>(std::clamp(q, -128.0, 127.0));
}

float dequantize_value(int64_t q, const QuantParams& qp) {
  return static_cast<float>(qp.scale * static_cast<double>(q - qp.zero_point));
}

TensorValue quantize_tensor(const TensorValue& t, const QuantParams& qp) {
  check(t.dtype() == DType::kFloat32, ErrorCategory::kShape,
        "quantize_tensor expects a float32 tensor");
  check(qp.scale > 0.0, ErrorCategory::kShape, "scale must be positive");
  TensorValue q = TensorValue::zeros(DType::kInt8, t.shape());
  const auto& src = t.f32();
  auto& dst = q.i8();
  for (size_t i = 0; i < src.size(); ++i) {
    dst[i] = quantize_value_i8(src[i], qp);
  }
  q.set_quant(qp);
  return q;
}

TensorValue dequantize_tensor(const TensorValue& t) {
  check(t.dtype() != DType::kFloat32, ErrorCategory::kShape,
        "dequantize_tensor expects an integer tensor");
  check(t.quant().has_value(), ErrorCategory::kShape,
        "tensor has no quantization parameters");
  const QuantParams qp = *t.quant();
  TensorValue out = TensorValue::zeros(DType::kFloat32, t.shape());
  auto& dst = out.f32();
  switch (t.dtype()) {
    case DType::kInt8: {
      const auto& src = t.i8();
      for (size_t i = 0; i < src.size(); ++i)
        dst[i] = dequantize_value(src[i], qp);
      break;
    }
    case DType::kInt16: {
      const auto& src = t.i16();
      for (size_t i = 0; i < src.size(); ++i)
        dst[i] = dequantize_value(src[i], qp);
      break;
    }
    case DType::kInt32: {
      const auto& src = t.i32();
      for (size_t i = 0; i < src.size(); ++i)
        dst[i] = dequantize_value(src[i], qp);
      break;
    }
    default: break;
  }
  return out;
}

}  // namespace edgeaudio
