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

#include "imitate/network.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "imitate/error.h"
#include "imitate/rng.h"

namespace imitate {
namespace {

using ConstMatMap = Eigen::Map<const Eigen::MatrixXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using MatMap = Eigen::Map<Eigen::MatrixXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

constexpr int kConvKernel = 3;

struct DenseSlot {
  std::size_t weights;
  std::size_t bias;
  int in;
  int out;
};

struct Layout {
  bool conv = false;
  std::size_t conv_weights = 0;
  std::size_t conv_bias = 0;
  std::vector<DenseSlot> dense;
  std::size_t total = 0;
};

Layout MakeLayout(const NetworkSpec& spec) {
  Layout layout;
  std::size_t offset = 0;
  if (spec.variant == Variant::kConv1dFront) {
    layout.conv = true;
    layout.conv_weights = offset;
    offset += static_cast<std::size_t>(spec.conv_channels) * kConvKernel;
    layout.conv_bias = offset;
    offset += static_cast<std::size_t>(spec.conv_channels);
  }
  int in = spec.DenseInputDim();
  std::vector<int> outs = spec.hidden;
  outs.push_back(spec.output_dim);
  for (int out : outs) {
    DenseSlot slot{offset, 0, in, out};
    offset += static_cast<std::size_t>(in) * out;
    slot.bias = offset;
    offset += static_cast<std::size_t>(out);
    layout.dense.push_back(slot);
    in = out;
  }
  layout.total = offset;
  return layout;
}

// Activations recorded on the way forward. dense_inputs[l] is the input of
// dense layer l; the last entry is the network output.
struct Tape {
  Eigen::MatrixXd conv_out;
  std::vector<Eigen::MatrixXd> dense_inputs;
};

void ApplyActivation(Activation a, Eigen::MatrixXd& m) {
  if (a == Activation::kRelu) {
    m = m.cwiseMax(0.0);
  } else {
    m = m.array().tanh().matrix();
  }
}

// Derivative expressed through the post-activation value.
Eigen::ArrayXXd ActivationSlope(Activation a, const Eigen::MatrixXd& post) {
  if (a == Activation::kRelu) {
    return (post.array() > 0.0).cast<double>();
  }
  return 1.0 - post.array().square();
}

void CheckInput(const NetworkSpec& spec, Eigen::Index rows) {
  if (rows != spec.input_dim) {
    ThrowUsage("network input has " + std::to_string(rows) +
               " entries, expected " + std::to_string(spec.input_dim));
  }
}

Tape RunForward(const NetworkParams& params, const Layout& layout,
                const Eigen::MatrixXd& inputs) {
  const NetworkSpec& spec = params.spec();
  CheckInput(spec, inputs.rows());
  const double* data = params.values().data();
  const Eigen::Index batch = inputs.cols();

  Tape tape;
  if (layout.conv) {
    const int channels = spec.conv_channels;
    const int len = spec.input_dim;
    ConstMatMap kernel(data + layout.conv_weights, channels, kConvKernel);
    ConstVecMap bias(data + layout.conv_bias, channels);
    tape.conv_out.resize(static_cast<Eigen::Index>(channels) * len, batch);
    for (Eigen::Index s = 0; s < batch; ++s) {
      for (int c = 0; c < channels; ++c) {
        for (int i = 0; i < len; ++i) {
          double z = bias(c);
          for (int o = 0; o < kConvKernel; ++o) {
            const int src = i + o - 1;
            if (src >= 0 && src < len) z += kernel(c, o) * inputs(src, s);
          }
          tape.conv_out(c * len + i, s) = std::tanh(z);
        }
      }
    }
    tape.dense_inputs.push_back(tape.conv_out);
  } else {
    tape.dense_inputs.push_back(inputs);
  }

  const std::size_t count = layout.dense.size();
  for (std::size_t l = 0; l < count; ++l) {
    const DenseSlot& slot = layout.dense[l];
    ConstMatMap w(data + slot.weights, slot.out, slot.in);
    ConstVecMap b(data + slot.bias, slot.out);
    Eigen::MatrixXd z = w * tape.dense_inputs.back();
    z.colwise() += b;
    if (l + 1 < count) ApplyActivation(spec.activation, z);
    tape.dense_inputs.push_back(std::move(z));
  }
  return tape;
}

}  // namespace

std::string_view ActivationName(Activation a) {
  return a == Activation::kRelu ? "relu" : "tanh";
}

Activation ParseActivation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  ThrowUsage("unknown activation '" + std::string(name) + "'");
}

std::string_view VariantName(Variant v) {
  return v == Variant::kDense ? "dense" : "conv1d-front";
}

Variant ParseVariant(std::string_view name) {
  if (name == "dense") return Variant::kDense;
  if (name == "conv1d-front") return Variant::kConv1dFront;
  ThrowUsage("unknown network variant '" + std::string(name) + "'");
}

void NetworkSpec::Validate() const {
  if (input_dim < 1) ThrowUsage("network input_dim must be >= 1");
  if (output_dim < 1) ThrowUsage("network output_dim must be >= 1");
  for (int h : hidden) {
    if (h < 1) ThrowUsage("network hidden sizes must be >= 1");
  }
  if (variant == Variant::kConv1dFront && conv_channels < 1) {
    ThrowUsage("network conv_channels must be >= 1");
  }
}

int NetworkSpec::DenseInputDim() const {
  return variant == Variant::kConv1dFront ? conv_channels * input_dim
                                          : input_dim;
}

std::size_t NetworkSpec::ParameterCount() const {
  return MakeLayout(*this).total;
}

NetworkParams::NetworkParams(NetworkSpec spec, std::uint64_t seed,
                             Eigen::VectorXd values)
    : spec_(std::move(spec)), seed_(seed), values_(std::move(values)) {
  spec_.Validate();
  if (static_cast<std::size_t>(values_.size()) != spec_.ParameterCount()) {
    ThrowData("parameter vector has " + std::to_string(values_.size()) +
              " entries, spec needs " +
              std::to_string(spec_.ParameterCount()));
  }
}

bool NetworkParams::operator==(const NetworkParams& other) const {
  return spec_ == other.spec_ && seed_ == other.seed_ &&
         values_.size() == other.values_.size() &&
         std::memcmp(values_.data(), other.values_.data(),
                     sizeof(double) * values_.size()) == 0;
}

NetworkParams InitNetwork(const NetworkSpec& spec, std::uint64_t seed) {
  spec.Validate();
  const Layout layout = MakeLayout(spec);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(layout.total);
  Rng rng = SubStream(seed, "init");

  auto fill = [&](std::size_t offset, std::size_t count, double limit) {
    for (std::size_t i = 0; i < count; ++i) {
      values(offset + i) = limit * (2.0 * UniformUnit(rng) - 1.0);
    }
  };

  if (layout.conv) {
    fill(layout.conv_weights,
         static_cast<std::size_t>(spec.conv_channels) * kConvKernel,
         std::sqrt(3.0 / kConvKernel));
  }
  for (std::size_t l = 0; l < layout.dense.size(); ++l) {
    const DenseSlot& slot = layout.dense[l];
    const bool feeds_relu =
        l + 1 < layout.dense.size() && spec.activation == Activation::kRelu;
    const double limit = std::sqrt((feeds_relu ? 6.0 : 3.0) / slot.in);
    fill(slot.weights, static_cast<std::size_t>(slot.in) * slot.out, limit);
  }
  return NetworkParams(spec, seed, std::move(values));
}

Eigen::VectorXd Forward(const NetworkParams& params,
                        const Eigen::VectorXd& input) {
  return ForwardBatch(params, input);
}

Eigen::MatrixXd ForwardBatch(const NetworkParams& params,
                             const Eigen::MatrixXd& inputs) {
  const Layout layout = MakeLayout(params.spec());
  Tape tape = RunForward(params, layout, inputs);
  return std::move(tape.dense_inputs.back());
}

Eigen::VectorXd Backward(const NetworkParams& params,
                         const Eigen::VectorXd& input,
                         const Eigen::VectorXd& loss_grad) {
  return BackwardBatch(params, input, loss_grad);
}

Eigen::VectorXd BackwardBatch(const NetworkParams& params,
                              const Eigen::MatrixXd& inputs,
                              const Eigen::MatrixXd& loss_grads) {
  return BackwardWith(params, inputs,
                      [&](const Eigen::MatrixXd&) { return loss_grads; });
}

Eigen::VectorXd BackwardWith(
    const NetworkParams& params, const Eigen::MatrixXd& inputs,
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& output_grad) {
  const NetworkSpec& spec = params.spec();
  const Layout layout = MakeLayout(spec);
  const Tape tape = RunForward(params, layout, inputs);
  const Eigen::MatrixXd loss_grads = output_grad(tape.dense_inputs.back());
  if (loss_grads.rows() != spec.output_dim ||
      loss_grads.cols() != inputs.cols()) {
    ThrowUsage("loss gradient shape does not match network output");
  }
  const double* data = params.values().data();

  Eigen::VectorXd grads = Eigen::VectorXd::Zero(layout.total);
  Eigen::MatrixXd delta = loss_grads;
  for (std::size_t l = layout.dense.size(); l-- > 0;) {
    const DenseSlot& slot = layout.dense[l];
    const Eigen::MatrixXd& in = tape.dense_inputs[l];
    MatMap(grads.data() + slot.weights, slot.out, slot.in).noalias() =
        delta * in.transpose();
    VecMap(grads.data() + slot.bias, slot.out) = delta.rowwise().sum();

    const bool has_upstream = l > 0 || layout.conv;
    if (!has_upstream) break;
    ConstMatMap w(data + slot.weights, slot.out, slot.in);
    Eigen::MatrixXd upstream = w.transpose() * delta;
    if (l > 0) {
      delta = (upstream.array() * ActivationSlope(spec.activation, in)).matrix();
    } else {
      delta = (upstream.array() * ActivationSlope(Activation::kTanh, in))
                  .matrix();
    }
  }

  if (layout.conv) {
    // `delta` now holds d/d(pre-tanh conv output).
    const int channels = spec.conv_channels;
    const int len = spec.input_dim;
    MatMap gk(grads.data() + layout.conv_weights, channels, kConvKernel);
    VecMap gb(grads.data() + layout.conv_bias, channels);
    for (Eigen::Index s = 0; s < inputs.cols(); ++s) {
      for (int c = 0; c < channels; ++c) {
        for (int i = 0; i < len; ++i) {
          const double d = delta(c * len + i, s);
          gb(c) += d;
          for (int o = 0; o < kConvKernel; ++o) {
            const int src = i + o - 1;
            if (src >= 0 && src < len) gk(c, o) += d * inputs(src, s);
          }
        }
      }
    }
  }
  return grads;
}

MseResult MseLoss(const Eigen::VectorXd& pred, const Eigen::VectorXd& target) {
  if (pred.size() != target.size()) {
    ThrowUsage("mse: prediction has " + std::to_string(pred.size()) +
               " entries, target has " + std::to_string(target.size()));
  }
  if (pred.size() == 0) ThrowUsage("mse: empty input");
  const Eigen::VectorXd diff = pred - target;
  const double n = static_cast<double>(pred.size());
  return MseResult{diff.squaredNorm() / n, 2.0 * diff / n};
}

AdamState AdamState::Fresh(std::size_t parameter_count, AdamConfig config) {
  AdamState state;
  state.config = config;
  state.m = Eigen::VectorXd::Zero(parameter_count);
  state.v = Eigen::VectorXd::Zero(parameter_count);
  state.t = 0;
  return state;
}

bool AdamState::operator==(const AdamState& other) const {
  auto same = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
  };
  return config == other.config && t == other.t && same(m, other.m) &&
         same(v, other.v);
}

void AdamStep(NetworkParams& params, const Eigen::VectorXd& grads,
              AdamState& state) {
  const Eigen::Index n = params.values().size();
  if (grads.size() != n || state.m.size() != n || state.v.size() != n) {
    ThrowUsage("adam: gradient/state size does not match parameters");
  }
  if (!grads.allFinite()) ThrowNumeric("adam: non-finite gradient");

  const AdamConfig& c = state.config;
  state.t += 1;
  state.m = c.beta1 * state.m + (1.0 - c.beta1) * grads;
  state.v = c.beta2 * state.v + (1.0 - c.beta2) * grads.cwiseAbs2();
  const double t = static_cast<double>(state.t);
  const double m_scale = 1.0 / (1.0 - std::pow(c.beta1, t));
  const double v_scale = 1.0 / (1.0 - std::pow(c.beta2, t));
  params.mutable_values().array() -=
      c.learning_rate * (state.m.array() * m_scale) /
      ((state.v.array() * v_scale).sqrt() + c.epsilon);
}

// --- checkpoint -------------------------------------------------------------

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint encoding assumes a little-endian host");

constexpr char kMagic[4] = {'I', 'M', 'C', 'K'};
constexpr std::uint32_t kCheckpointVersion = 1;

class Writer {
 public:
  template <typename T>
  void Put(T value) {
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void PutDoubles(const Eigen::VectorXd& v) {
    out_.append(reinterpret_cast<const char*>(v.data()),
                sizeof(double) * static_cast<std::size_t>(v.size()));
  }
  void PutRaw(const char* data, std::size_t n) { out_.append(data, n); }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T value;
    std::memcpy(&value, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  Eigen::VectorXd GetDoubles(std::size_t n) {
    Need(sizeof(double) * n);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    std::memcpy(v.data(), in_.data() + pos_, sizeof(double) * n);
    pos_ += sizeof(double) * n;
    return v;
  }
  std::string_view GetRaw(std::size_t n) {
    Need(n);
    std::string_view s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool AtEnd() const { return pos_ == in_.size(); }

 private:
  void Need(std::size_t n) const {
    if (in_.size() - pos_ < n) ThrowData("checkpoint is truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string EncodeCheckpoint(const Checkpoint& checkpoint) {
  const NetworkParams& p = checkpoint.params;
  const NetworkSpec& spec = p.spec();
  Writer w;
  w.PutRaw(kMagic, sizeof(kMagic));
  w.Put<std::uint32_t>(kCheckpointVersion);
  w.Put<std::int32_t>(spec.input_dim);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(spec.hidden.size()));
  for (int h : spec.hidden) w.Put<std::int32_t>(h);
  w.Put<std::int32_t>(spec.output_dim);
  w.Put<std::uint8_t>(static_cast<std::uint8_t>(spec.activation));
  w.Put<std::uint8_t>(static_cast<std::uint8_t>(spec.variant));
  w.Put<std::int32_t>(spec.conv_channels);
  w.Put<std::uint64_t>(p.seed());
  w.Put<std::uint64_t>(static_cast<std::uint64_t>(p.values().size()));
  w.PutDoubles(p.values());

  const AdamState& a = checkpoint.adam;
  if (a.m.size() != p.values().size() || a.v.size() != p.values().size()) {
    ThrowUsage("checkpoint: adam state does not match parameters");
  }
  w.Put<double>(a.config.learning_rate);
  w.Put<double>(a.config.beta1);
  w.Put<double>(a.config.beta2);
  w.Put<double>(a.config.epsilon);
  w.Put<std::int64_t>(a.t);
  w.PutDoubles(a.m);
  w.PutDoubles(a.v);
  return w.Take();
}

Checkpoint DecodeCheckpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.GetRaw(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    ThrowData("not a checkpoint file (bad magic)");
  }
  const auto version = r.Get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    ThrowData("unsupported checkpoint version " + std::to_string(version));
  }
  NetworkSpec spec;
  spec.input_dim = r.Get<std::int32_t>();
  const auto hidden_count = r.Get<std::uint32_t>();
  if (hidden_count > 1024) ThrowData("checkpoint: implausible layer count");
  spec.hidden.clear();
  for (std::uint32_t i = 0; i < hidden_count; ++i) {
    spec.hidden.push_back(r.Get<std::int32_t>());
  }
  spec.output_dim = r.Get<std::int32_t>();
  const auto activation = r.Get<std::uint8_t>();
  const auto variant = r.Get<std::uint8_t>();
  if (activation > 1 || variant > 1) ThrowData("checkpoint: bad enum value");
  spec.activation = static_cast<Activation>(activation);
  spec.variant = static_cast<Variant>(variant);
  spec.conv_channels = r.Get<std::int32_t>();
  try {
    spec.Validate();
  } catch (const Error& e) {
    ThrowData(std::string("checkpoint: ") + e.what());
  }
  const auto seed = r.Get<std::uint64_t>();
  const auto count = r.Get<std::uint64_t>();
  if (count != spec.ParameterCount()) {
    ThrowData("checkpoint: parameter count does not match its spec");
  }
  Eigen::VectorXd values = r.GetDoubles(count);

  AdamState adam;
  adam.config.learning_rate = r.Get<double>();
  adam.config.beta1 = r.Get<double>();
  adam.config.beta2 = r.Get<double>();
  adam.config.epsilon = r.Get<double>();
  adam.t = r.Get<std::int64_t>();
  adam.m = r.GetDoubles(count);
  adam.v = r.GetDoubles(count);
  if (!r.AtEnd()) ThrowData("checkpoint: trailing bytes");
  return Checkpoint{NetworkParams(std::move(spec), seed, std::move(values)),
                    std::move(adam)};
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const Checkpoint& checkpoint) {
  const std::string bytes = EncodeCheckpoint(checkpoint);
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowData("cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) ThrowData("write failed: " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowData("cannot open checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return DecodeCheckpoint(buffer.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace imitate
