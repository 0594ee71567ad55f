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

// Sparse feature encoder shared by the boundary and entity models: string
// features are hashed to 64-bit keys, interned to dense rows during training,
// and scored by a linear layer trained with AdaGrad and decoupled weight decay.

#ifndef MINER_LEARN_H_
#define MINER_LEARN_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace miner {

// Accumulates hashed feature keys for one position.
class FeatureBag {
 public:
  void add(std::string_view name);
  void add(std::string_view name, std::string_view value);
  // Conjoins every key collected so far with `key`.
  void cross(uint64_t key);
  void clear() { keys_.clear(); }
  const std::vector<uint64_t>& keys() const { return keys_; }

 private:
  std::vector<uint64_t> keys_;
};

class FeatureSpace {
 public:
  // Unknown keys are dropped when `grow` is false.
  std::vector<uint32_t> lookup(const std::vector<uint64_t>& keys, bool grow);
  std::vector<uint32_t> lookup(const std::vector<uint64_t>& keys) const;
  size_t size() const { return keys_.size(); }
  const std::vector<uint64_t>& keys() const { return keys_; }
  void assign(std::vector<uint64_t> keys);

 private:
  std::unordered_map<uint64_t, uint32_t> ids_;
  std::vector<uint64_t> keys_;
};

struct OptimizerConfig {
  double learning_rate = 0.1;
  double weight_decay = 0.01;
  double epsilon = 1e-6;
};

// Row-sparse gradient for a LinearLayer.
class GradientBuffer {
 public:
  explicit GradientBuffer(int outputs) : outputs_(outputs) {}
  float* row(uint32_t id);
  void add(std::span<const uint32_t> ids, std::span<const float> grad);
  void scale(float factor);
  bool empty() const { return slots_.empty(); }
  void clear();
  int outputs() const { return outputs_; }
  const std::unordered_map<uint32_t, size_t>& slots() const { return slots_; }
  const std::vector<float>& values() const { return values_; }

 private:
  int outputs_;
  std::unordered_map<uint32_t, size_t> slots_;
  std::vector<float> values_;
};

class LinearLayer {
 public:
  explicit LinearLayer(int outputs = 1) : outputs_(outputs) {}

  int outputs() const { return outputs_; }
  size_t rows() const { return weights_.size() / outputs_; }
  void resize(size_t rows);
  // out[k] += sum over ids of W[id][k]
  void accumulate(std::span<const uint32_t> ids, std::span<float> out) const;
  void apply(const GradientBuffer& grad, const OptimizerConfig& config);
  void reset_optimizer();
  const std::vector<float>& weights() const { return weights_; }
  std::vector<float>& mutable_weights() { return weights_; }

 private:
  int outputs_;
  std::vector<float> weights_;
  std::vector<float> sq_;
};

// Binary checkpoint of a feature space and its layer.
void save_linear(const std::filesystem::path& path, const FeatureSpace& space,
                 const LinearLayer& layer);
void load_linear(const std::filesystem::path& path, FeatureSpace* space, LinearLayer* layer);

// Numerically stable in-place softmax; returns log-sum-exp.
double softmax(std::span<float> scores);

}  // namespace miner

#endif  // MINER_LEARN_H_
