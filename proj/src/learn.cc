// Copyright 2026 The MiNER Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "miner/learn.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "miner/errors.h"
#include "miner/hash.h"

namespace miner {

void FeatureBag::add(std::string_view name) { keys_.push_back(fnv1a(name)); }

void FeatureBag::add(std::string_view name, std::string_view value) {
  keys_.push_back(fnv1a(name, value));
}

void FeatureBag::cross(uint64_t key) {
  for (auto& k : keys_) k = mix64(k ^ key);
}

std::vector<uint32_t> FeatureSpace::lookup(const std::vector<uint64_t>& keys, bool grow) {
  if (!grow) return static_cast<const FeatureSpace&>(*this).lookup(keys);
  std::vector<uint32_t> ids;
  ids.reserve(keys.size());
  for (uint64_t k : keys) {
    auto [it, inserted] = ids_.emplace(k, static_cast<uint32_t>(keys_.size()));
    if (inserted) keys_.push_back(k);
    ids.push_back(it->second);
  }
  return ids;
}

std::vector<uint32_t> FeatureSpace::lookup(const std::vector<uint64_t>& keys) const {
  std::vector<uint32_t> ids;
  ids.reserve(keys.size());
  for (uint64_t k : keys) {
    auto it = ids_.find(k);
    if (it != ids_.end()) ids.push_back(it->second);
  }
  return ids;
}

void FeatureSpace::assign(std::vector<uint64_t> keys) {
  keys_ = std::move(keys);
  ids_.clear();
  ids_.reserve(keys_.size());
  for (size_t i = 0; i < keys_.size(); ++i) ids_.emplace(keys_[i], static_cast<uint32_t>(i));
}

float* GradientBuffer::row(uint32_t id) {
  auto [it, inserted] = slots_.emplace(id, values_.size());
  if (inserted) values_.resize(values_.size() + outputs_, 0.0f);
  return values_.data() + it->second;
}

void GradientBuffer::add(std::span<const uint32_t> ids, std::span<const float> grad) {
  for (uint32_t id : ids) {
    float* r = row(id);
    for (int k = 0; k < outputs_; ++k) r[k] += grad[k];
  }
}

void GradientBuffer::scale(float factor) {
  for (auto& v : values_) v *= factor;
}

void GradientBuffer::clear() {
  slots_.clear();
  values_.clear();
}

void LinearLayer::resize(size_t rows) {
  if (rows * outputs_ > weights_.size()) {
    weights_.resize(rows * outputs_, 0.0f);
    sq_.resize(rows * outputs_, 0.0f);
  }
}

void LinearLayer::accumulate(std::span<const uint32_t> ids, std::span<float> out) const {
  for (uint32_t id : ids) {
    size_t base = static_cast<size_t>(id) * outputs_;
    if (base >= weights_.size()) continue;
    const float* w = weights_.data() + base;
    for (int k = 0; k < outputs_; ++k) out[k] += w[k];
  }
}

void LinearLayer::apply(const GradientBuffer& grad, const OptimizerConfig& config) {
  const auto& values = grad.values();
  size_t max_row = 0;
  for (const auto& [id, slot] : grad.slots()) max_row = std::max<size_t>(max_row, id + 1);
  resize(max_row);
  if (sq_.size() < weights_.size()) sq_.resize(weights_.size(), 0.0f);
  const float lr = static_cast<float>(config.learning_rate);
  const float decay = static_cast<float>(config.learning_rate * config.weight_decay);
  const float eps = static_cast<float>(config.epsilon);
  for (const auto& [id, slot] : grad.slots()) {
    float* w = weights_.data() + static_cast<size_t>(id) * outputs_;
    float* s = sq_.data() + static_cast<size_t>(id) * outputs_;
    const float* g = values.data() + slot;
    for (int k = 0; k < outputs_; ++k) {
      s[k] += g[k] * g[k];
      w[k] -= decay * w[k];
      w[k] -= lr * g[k] / (std::sqrt(s[k]) + eps);
    }
  }
}

void LinearLayer::reset_optimizer() { std::fill(sq_.begin(), sq_.end(), 0.0f); }

namespace {
constexpr char kMagic[8] = {'M', 'I', 'N', 'E', 'R', 'L', 'I', 'N'};
constexpr uint32_t kVersion = 1;
}  // namespace

void save_linear(const std::filesystem::path& path, const FeatureSpace& space,
                 const LinearLayer& layer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  uint32_t outputs = static_cast<uint32_t>(layer.outputs());
  uint64_t rows = space.size();
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
  out.write(reinterpret_cast<const char*>(&outputs), sizeof(outputs));
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(space.keys().data()), rows * sizeof(uint64_t));
  std::vector<float> w = layer.weights();
  w.resize(rows * outputs, 0.0f);
  out.write(reinterpret_cast<const char*>(w.data()), w.size() * sizeof(float));
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

void load_linear(const std::filesystem::path& path, FeatureSpace* space, LinearLayer* layer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BackendError("cannot open model weights '" + path.string() + "'");
  char magic[8];
  uint32_t version = 0, outputs = 0;
  uint64_t rows = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&outputs), sizeof(outputs));
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || version != kVersion ||
      outputs == 0) {
    throw BackendError("'" + path.string() + "' is not a model weight file");
  }
  std::vector<uint64_t> keys(rows);
  in.read(reinterpret_cast<char*>(keys.data()), rows * sizeof(uint64_t));
  *layer = LinearLayer(static_cast<int>(outputs));
  layer->resize(rows);
  in.read(reinterpret_cast<char*>(layer->mutable_weights().data()),
          rows * outputs * sizeof(float));
  if (!in) throw BackendError("truncated model weights '" + path.string() + "'");
  space->assign(std::move(keys));
}

double softmax(std::span<float> scores) {
  if (scores.empty()) return 0.0;
  float mx = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (auto& s : scores) {
    s = std::exp(s - mx);
    sum += s;
  }
  for (auto& s : scores) s = static_cast<float>(s / sum);
  return mx + std::log(sum);
}

}  // namespace miner
