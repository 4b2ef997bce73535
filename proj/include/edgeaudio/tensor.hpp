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
#ifndef EDGEAUDIO_TENSOR_HPP_
#define EDGEAUDIO_TENSOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace edgeaudio {

enum class DType { kFloat32, kInt8, kInt16, kInt32 };

const char* dtype_name(DType d);
DType dtype_from_name(const std::string& name);
size_t dtype_bytes(DType d);

// Per-tensor affine quantization: real = scale * (q - zero_point).
struct QuantParams {
  double scale = 1.0;
  int zero_point = 0;

  bool operator==(const QuantParams&) const = default;
};

using Shape = std::vector<int>;

int64_t shape_elems(const Shape& shape);
std::string shape_str(const Shape& shape);

// Dense row-major n-dimensional array. Integer dtypes carry quantization
// parameters; float tensors never do.
class TensorValue {
 public:
  TensorValue() = default;

  static TensorValue zeros(DType dtype, const Shape& shape);
  static TensorValue from_floats(const Shape& shape, std::vector<float> data);

  const Shape& shape() const { return shape_; }
  DType dtype() const { return dtype_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t elems() const { return shape_elems(shape_); }
  int dim(int i) const { return shape_[i]; }

  const std::optional<QuantParams>& quant() const { return quant_; }
  void set_quant(const QuantParams& qp);

  std::vector<float>& f32();
  const std::vector<float>& f32() const;
  std::vector<int8_t>& i8();
  const std::vector<int8_t>& i8() const;
  std::vector<int16_t>& i16();
  const std::vector<int16_t>& i16() const;
  std::vector<int32_t>& i32();
  const std::vector<int32_t>& i32() const;

  // Raw little-endian bytes of the payload (host is little-endian).
  const void* raw_data() const;
  void* raw_data();
  size_t byte_size() const;

  // Reinterpret under a new shape with the same element count.
  TensorValue reshaped(const Shape& new_shape) const;

  bool same_contents(const TensorValue& other) const;

 private:
  Shape shape_;
  DType dtype_ = DType::kFloat32;
  std::optional<QuantParams> quant_;
  std::variant<std::vector<float>, std::vector<int8_t>, std::vector<int16_t>,
               std::vector<int32_t>>
      data_;
};

// q = clamp(round(x / scale) + zero_point, -128, 127)
TensorValue quantize_tensor(const TensorValue& t, const QuantParams& qp);

// x = scale * (q - zero_point); accepts int8/int16/int32 input.
TensorValue dequantize_tensor(const TensorValue& t);

int8_t quantize_value_i8(float x, const QuantParams& qp);
float dequantize_value(int64_t q, const QuantParams& qp);

}  // namespace edgeaudio

#endif  // EDGEAUDIO_TENSOR_HPP_
