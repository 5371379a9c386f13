// Copyright 2026 The Imitate Authors.
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

#ifndef IMITATE_NETWORK_H_
#define IMITATE_NETWORK_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace imitate {

enum class Activation : std::uint8_t { kRelu = 0, kTanh = 1 };
enum class Variant : std::uint8_t { kDense = 0, kConv1dFront = 1 };

std::string_view ActivationName(Activation a);
Activation ParseActivation(std::string_view name);
std::string_view VariantName(Variant v);
Variant ParseVariant(std::string_view name);

// Layer shapes. The dense variant is input -> hidden... -> output with the
// hidden activation after every hidden layer and a linear output. The
// conv1d-front variant first runs `conv_channels` kernel-3, stride-1,
// zero-padded 1D convolutions with tanh over the input vector, and feeds the
// flattened channels (channel-major) into the same dense stack.
struct NetworkSpec {
  int input_dim = 28;
  std::vector<int> hidden = {768, 768, 768};
  int output_dim = 25;
  Activation activation = Activation::kRelu;
  Variant variant = Variant::kDense;
  int conv_channels = 4;

  // Throws kUsage on any non-positive dimension.
  void Validate() const;
  std::size_t ParameterCount() const;
  // Width of the vector entering the first dense layer.
  int DenseInputDim() const;

  bool operator==(const NetworkSpec&) const = default;
};

// All weights and biases in one flat vector. Layout, in order: the conv
// kernel (channels x 3, column-major) and its biases when present, then for
// each dense layer its weight matrix (out x in, column-major) and bias.
class NetworkParams {
 public:
  NetworkParams(NetworkSpec spec, std::uint64_t seed, Eigen::VectorXd values);

  const NetworkSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& mutable_values() { return values_; }

  bool operator==(const NetworkParams& other) const;

 private:
  NetworkSpec spec_;
  std::uint64_t seed_;
  Eigen::VectorXd values_;
};

// Fan-in scaled uniform weights (limit sqrt(6 / fan_in) into a ReLU,
// sqrt(3 / fan_in) otherwise), zero biases. Deterministic in `seed`.
NetworkParams InitNetwork(const NetworkSpec& spec, std::uint64_t seed);

// Deep copy. NetworkParams has value semantics, so this is a plain copy; it
// exists to name the target-network sync.
inline NetworkParams CopyParams(const NetworkParams& src) { return src; }

Eigen::VectorXd Forward(const NetworkParams& params,
                        const Eigen::VectorXd& input);
// One sample per column.
Eigen::MatrixXd ForwardBatch(const NetworkParams& params,
                             const Eigen::MatrixXd& inputs);

// Gradient of dot(output, loss_grad) with respect to every parameter, in the
// flat layout.
Eigen::VectorXd Backward(const NetworkParams& params,
                         const Eigen::VectorXd& input,
                         const Eigen::VectorXd& loss_grad);
// Sum over columns of the per-sample gradients.
Eigen::VectorXd BackwardBatch(const NetworkParams& params,
                              const Eigen::MatrixXd& inputs,
                              const Eigen::MatrixXd& loss_grads);

// One forward pass; `output_grad` maps the batch outputs to d loss / d output
// (same shape), which is then backpropagated and summed over the batch.
Eigen::VectorXd BackwardWith(
    const NetworkParams& params, const Eigen::MatrixXd& inputs,
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& output_grad);

struct MseResult {
  double loss = 0.0;
  Eigen::VectorXd grad;  // d loss / d pred
};

// Mean of squared differences and its gradient 2 (pred - target) / n.
MseResult MseLoss(const Eigen::VectorXd& pred, const Eigen::VectorXd& target);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

struct AdamState {
  AdamConfig config;
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t t = 0;

  static AdamState Fresh(std::size_t parameter_count, AdamConfig config = {});
  bool operator==(const AdamState& other) const;
};

// Bias-corrected Adam update. Throws kNumeric, leaving everything untouched,
// if any gradient entry is non-finite.
void AdamStep(NetworkParams& params, const Eigen::VectorXd& grads,
              AdamState& state);

struct Checkpoint {
  NetworkParams params;
  AdamState adam;
};

// Binary checkpoint; layout in docs/file_formats.md. Round trips bit-exactly.
std::string EncodeCheckpoint(const Checkpoint& checkpoint);
Checkpoint DecodeCheckpoint(std::string_view bytes);
void SaveCheckpoint(const std::filesystem::path& path,
                    const Checkpoint& checkpoint);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace imitate

#endif  // IMITATE_NETWORK_H_
