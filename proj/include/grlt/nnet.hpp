// Copyright 2026 The grlt Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace grlt {

enum class Activation { relu, gelu, sigmoid, none };

const char* activation_name(Activation a);
Activation parse_activation(const std::string& name);

struct LayerSpec {
  int out = 0;
  Activation activation = Activation::none;
  bool operator==(const LayerSpec&) const = default;
};

struct NetSpec {
  int input_dim = 0;
  std::vector<LayerSpec> layers;

  int output_dim() const { return layers.empty() ? input_dim : layers.back().out; }
  /// "64 -> 32:relu -> 16:none"
  std::string describe() const;
  static NetSpec parse(const std::string& text);
  bool operator==(const NetSpec&) const = default;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
  Activation activation = Activation::none;
};

/// Cached activations of one forward pass; rows are batch entries.
struct Tape {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<Eigen::MatrixXd> pre;
  Eigen::MatrixXd output;
  bool empty() const { return inputs.empty(); }
};

struct NetGradients {
  /// Same layout as DenseNet::parameters().
  Eigen::VectorXd params;
  Eigen::MatrixXd input;
};

/// A stack of dense layers computing Y = act(X W^T + b) on row batches.
class DenseNet {
 public:
  DenseNet() = default;
  explicit DenseNet(NetSpec spec);

  /// Uniform(-a, a) weights with a = sqrt(3 / fan_in), zero biases.
  static DenseNet init(const NetSpec& spec, std::uint64_t seed);

  const NetSpec& spec() const { return spec_; }
  int input_dim() const { return spec_.input_dim; }
  int output_dim() const { return spec_.output_dim(); }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  Eigen::Index parameter_count() const;
  /// Per layer: weight entries in column-major order, then the bias.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat);

  Tape forward(const Eigen::MatrixXd& batch) const;
  Eigen::MatrixXd predict(const Eigen::MatrixXd& batch) const { return forward(batch).output; }
  /// `upstream` is dLoss/dOutput for the tape's batch.
  NetGradients backward(const Tape& tape, const Eigen::MatrixXd& upstream) const;

 private:
  NetSpec spec_;
  std::vector<DenseLayer> layers_;
};

struct ModelCheckpoint {
  NetSpec spec;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  Eigen::VectorXd parameters;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Writes `GRLT`, u32 version, u64-prefixed descriptor text, u64 parameter
/// count and little-endian doubles. The file is replaced atomically.
void save_checkpoint(const ModelCheckpoint& checkpoint, const std::string& path);
std::string serialize_checkpoint(const ModelCheckpoint& checkpoint);
/// Throws FormatError on corrupt content and UnsupportedVersionError on a
/// version mismatch.
ModelCheckpoint load_checkpoint(const std::string& path);
ModelCheckpoint parse_checkpoint(const std::string& bytes);

DenseNet restore(const ModelCheckpoint& checkpoint);

}  // namespace grlt
