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
#include "edgeaudio/container.hpp"

#include <cstring>
#include <fstream>

namespace edgeaudio {

namespace {

constexpr char kMagic[4] = {'E', 'A', 'T', 'C'};

std::string hex64(uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

uint64_t fnv1a64(const void* data, size_t bytes, uint64_t seed) {
  const uint8_t* p = static_cast<const uint8_t*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

const NamedTensor* Container::find(const std::string& name) const {
  for (const NamedTensor& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

void write_container(const std::string& path,
                     const std::vector<NamedTensor>& tensors,
                     const nlohmann::json& meta) {
  nlohmann::json manifest;
  manifest["container_version"] = 1;
  manifest["endianness"] = "little";
  manifest["meta"] = meta;

  std::vector<uint8_t> blob;
  nlohmann::json entries = nlohmann::json::array();
  for (const NamedTensor& t : tensors) {
    nlohmann::json e;
    e["name"] = t.name;
    e["shape"] = t.value.shape();
    e["dtype"] = dtype_name(t.value.dtype());
    if (t.value.quant()) {
      e["scale"] = t.value.quant()->scale;
      e["zero_point"] = t.value.quant()->zero_point;
    }
    e["byte_offset"] = blob.size();
    e["byte_length"] = t.value.byte_size();
    const uint8_t* p = static_cast<const uint8_t*>(t.value.raw_data());
    blob.insert(blob.end(), p, p + t.value.byte_size());
    entries.push_back(std::move(e));
  }
  manifest["tensors"] = std::move(entries);
  manifest["blob_bytes"] = blob.size();
  manifest["checksum_fnv1a64"] = hex64(fnv1a64(blob.data(), blob.size()));

  const std::string mstr = manifest.dump();
  std::ofstream out(path, std::ios::binary);
  check(out.good(), ErrorCategory::kIo, "cannot write container: " + path);
  out.write(kMagic, 4);
  const uint32_t mlen = static_cast<uint32_t>(mstr.size());
  uint8_t lenb[4] = {static_cast<uint8_t>(mlen & 0xff),
                     static_cast<uint8_t>((mlen >> 8) & 0xff),
                     static_cast<uint8_t>((mlen >> 16) & 0xff),
                     static_cast<uint8_t>((mlen >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(lenb), 4);
  out.write(mstr.data(), static_cast<std::streamsize>(mstr.size()));
  out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size()));
  check(out.good(), ErrorCategory::kIo, "short write: " + path);
}

Container read_container(const std::string& path, ErrorCategory cat) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), ErrorCategory::kIo, "cannot open container: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  check(bytes.size() >= 8 && std::memcmp(bytes.data(), kMagic, 4) == 0, cat,
        "not a tensor container: " + path);
  const uint32_t mlen = static_cast<uint32_t>(bytes[4]) |
                        (static_cast<uint32_t>(bytes[5]) << 8) |
                        (static_cast<uint32_t>(bytes[6]) << 16) |
                        (static_cast<uint32_t>(bytes[7]) << 24);
  check(bytes.size() >= 8 + static_cast<size_t>(mlen), cat,
        "truncated container manifest: " + path);

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(bytes.begin() + 8,
                                     bytes.begin() + 8 + mlen);
  } catch (const nlohmann::json::exception& e) {
    raise(cat, std::string("bad container manifest: ") + e.what());
  }

  const uint8_t* blob = bytes.data() + 8 + mlen;
  const size_t blob_bytes = bytes.size() - 8 - mlen;
  check(manifest.value("blob_bytes", size_t{0}) == blob_bytes, cat,
        "container blob size mismatch (truncated?): " + path);
  const std::string want_sum = manifest.value("checksum_fnv1a64", "");
  if (!want_sum.empty()) {
    check(want_sum == hex64(fnv1a64(blob, blob_bytes)), cat,
          "container checksum mismatch: " + path);
  }

  Container c;
  c.meta = manifest.value("meta", nlohmann::json::object());
  for (const auto& e : manifest.at("tensors")) {
    NamedTensor t;
    t.name = e.at("name").get<std::string>();
    const Shape shape = e.at("shape").get<Shape>();
    const DType dtype = dtype_from_name(e.at("dtype").get<std::string>());
    const size_t offset = e.at("byte_offset").get<size_t>();
    const size_t length = e.at("byte_length").get<size_t>();
    check(offset + length <= blob_bytes, cat,
          "tensor payload out of range: " + t.name);
    t.value = TensorValue::zeros(dtype, shape);
    check(t.value.byte_size() == length, cat,
          "tensor byte length does not match shape: " + t.name);
    std::memcpy(t.value.raw_data(), blob + offset, length);
    if (e.contains("scale")) {
      t.value.set_quant(
          QuantParams{e.at("scale").get<double>(), e.at("zero_point").get<int>()});
    }
    c.tensors.push_back(std::move(t));
  }
  return c;
}

void write_spectrogram_container(const std::string& path,
                                 const frontend::Spectrogram& spec) {
  TensorValue t =
      TensorValue::zeros(DType::kInt16, {spec.num_channels, spec.num_frames});
  auto& d = t.i16();
  for (size_t i = 0; i < spec.values.size(); ++i) {
    d[i] = static_cast<int16_t>(spec.values[i]);
  }
  nlohmann::json meta;
  meta["kind"] = "spectrogram";
  meta["frame_duration_ms"] = spec.frame_duration_ms;
  meta["log_scale_shift"] = spec.log_scale_shift;
  write_container(path, {{"spectrogram", std::move(t)}}, meta);
}

frontend::Spectrogram read_spectrogram_container(const std::string& path) {
  const Container c = read_container(path);
  const NamedTensor* t = c.find("spectrogram");
  check(t != nullptr, ErrorCategory::kContainer,
        "container has no spectrogram tensor: " + path);
  check(t->value.dtype() == DType::kInt16 && t->value.rank() == 2,
        ErrorCategory::kContainer, "unexpected spectrogram tensor layout");
  frontend::Spectrogram spec;
  spec.num_channels = t->value.dim(0);
  spec.num_frames = t->value.dim(1);
  spec.frame_duration_ms = c.meta.value("frame_duration_ms", 10);
  spec.log_scale_shift = c.meta.value("log_scale_shift", 6);
  spec.values.resize(t->value.elems());
  const auto& d = t->value.i16();
  for (size_t i = 0; i < d.size(); ++i) {
    check(d[i] >= 0, ErrorCategory::kContainer,
          "spectrogram values must be non-negative");
    spec.values[i] = static_cast<uint16_t>(d[i]);
  }
  return spec;
}

}  // namespace edgeaudio
