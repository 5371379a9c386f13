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

#include "imitate/dqn.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "imitate/error.h"

namespace imitate {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) ThrowUsage("replay capacity must be >= 1");
  items_.reserve(std::min<std::size_t>(capacity_, 1 << 16));
}

void ReplayBuffer::Push(Transition transition) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(transition));
    return;
  }
  items_[head_] = std::move(transition);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::operator[](std::size_t i) const {
  return items_[(head_ + i) % items_.size()];
}

std::vector<std::size_t> SampleIndices(const ReplayBuffer& buffer,
                                       std::size_t n, Rng& rng) {
  if (buffer.empty()) ThrowData("cannot sample from an empty replay buffer");
  const std::size_t size = buffer.size();
  const std::size_t k = std::min(n, size);
  // Floyd's algorithm: k distinct indices in O(k^2) without touching all of
  // [0, size).
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  for (std::size_t j = size - k; j < size; ++j) {
    const std::size_t t = UniformIndex(rng, j + 1);
    const bool taken = std::find(chosen.begin(), chosen.end(), t) != chosen.end();
    chosen.push_back(taken ? j : t);
  }
  return chosen;
}

std::vector<Transition> SampleBatch(const ReplayBuffer& buffer, std::size_t n,
                                    Rng& rng) {
  std::vector<Transition> batch;
  for (std::size_t i : SampleIndices(buffer, n, rng)) batch.push_back(buffer[i]);
  return batch;
}

int GreedyAction(const Eigen::VectorXd& q_values, int valid_actions) {
  if (valid_actions < 1 || valid_actions > q_values.size()) {
    ThrowUsage("valid action count " + std::to_string(valid_actions) +
               " does not fit " + std::to_string(q_values.size()) +
               " Q-values");
  }
  int best = 0;
  for (int a = 1; a < valid_actions; ++a) {
    if (q_values(a) > q_values(best)) best = a;
  }
  return best;
}

int SelectAction(const NetworkParams& net, const Eigen::VectorXd& state,
                 double epsilon, int valid_actions, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    ThrowUsage("epsilon must lie in [0, 1]");
  }
  if (epsilon > 0.0 && UniformUnit(rng) < epsilon) {
    return static_cast<int>(
        UniformIndex(rng, static_cast<std::uint64_t>(valid_actions)));
  }
  return GreedyAction(Forward(net, state), valid_actions);
}

namespace {

Eigen::MatrixXd StackColumns(const std::vector<Transition>& batch,
                             bool next) {
  const Eigen::Index rows =
      next ? batch.front().next_state.size() : batch.front().state.size();
  Eigen::MatrixXd out(rows, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) =
        next ? batch[i].next_state : batch[i].state;
  }
  return out;
}

}  // namespace

Eigen::VectorXd TdTargets(const std::vector<Transition>& batch,
                          const NetworkParams& target_net, double gamma,
                          int valid_actions) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(batch.size()));
  if (batch.empty()) return y;
  const Eigen::MatrixXd next_q = ForwardBatch(target_net, StackColumns(batch, true));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    double target = batch[i].reward;
    if (!batch[i].terminal && gamma != 0.0) {
      const int best = GreedyAction(next_q.col(col), valid_actions);
      target += gamma * next_q(best, col);
    }
    y(col) = target;
  }
  return y;
}

void TrainerConfig::Validate() const {
  std::vector<std::string> problems;
  if (epochs < 0) problems.push_back("epochs must be >= 0");
  if (!(gamma >= 0.0 && gamma <= 1.0)) problems.push_back("gamma must lie in [0, 1]");
  if (batch_size < 1) problems.push_back("batch_size must be >= 1");
  if (sync_period < 1) problems.push_back("sync_period must be >= 1");
  if (replay_capacity < 1) problems.push_back("replay_capacity must be >= 1");
  for (double e : {epsilon_start, epsilon_end}) {
    if (!(e >= 0.0 && e <= 1.0)) {
      problems.push_back("epsilon schedule values must lie in [0, 1]");
      break;
    }
  }
  if (!(epsilon_decay_fraction >= 0.0 && epsilon_decay_fraction <= 1.0)) {
    problems.push_back("epsilon_decay_fraction must lie in [0, 1]");
  }
  if (!(adam.learning_rate > 0.0)) problems.push_back("learning_rate must be > 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    problems.push_back("adam betas must lie in [0, 1)");
  }
  if (!(adam.epsilon > 0.0)) problems.push_back("adam epsilon must be > 0");
  if (problems.empty()) return;
  std::string message = "invalid trainer config:";
  for (const auto& p : problems) message += "\n  - " + p;
  ThrowUsage(message);
}

double TrainerConfig::EpsilonAt(int epoch) const {
  const double span = epsilon_decay_fraction * epochs;
  if (span <= 0.0) return epsilon_end;
  const double progress = epoch / span;
  if (progress >= 1.0) return epsilon_end;
  return epsilon_start + (epsilon_end - epsilon_start) * progress;
}

TrainResult Train(const ImitationEnv& env, const NetworkSpec& spec,
                  const TrainerConfig& cfg, const TrainHooks& hooks) {
  cfg.Validate();
  spec.Validate();
  const int actions = env.action_count();
  if (spec.output_dim < actions) {
    ThrowUsage("network has " + std::to_string(spec.output_dim) +
               " outputs but the environment needs " + std::to_string(actions));
  }
  if (spec.input_dim != env.config().state_dim) {
    ThrowUsage("network input_dim " + std::to_string(spec.input_dim) +
               " does not match env state_dim " +
               std::to_string(env.config().state_dim));
  }

  NetworkParams prediction = InitNetwork(spec, cfg.seed);
  TrainResult result{prediction, CopyParams(prediction),
                     AdamState::Fresh(spec.ParameterCount(), cfg.adam),
                     {}, 0};
  NetworkParams& net = result.params;
  NetworkParams& target = result.target;

  ReplayBuffer memory(cfg.replay_capacity);
  Rng explore = SubStream(cfg.seed, "explore");
  Rng sampler = SubStream(cfg.seed, "sample");
  const std::uint64_t reset_base = SubSeed(cfg.seed, "reset");

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double epsilon = cfg.EpsilonAt(epoch);
    EnvState state = env.Reset(reset_base + static_cast<std::uint64_t>(epoch));
    Eigen::VectorXd encoded = env.Encode(state);
    double loss_sum = 0.0;
    int loss_count = 0;
    double total_reward = 0.0;

    bool terminal = false;
    while (!terminal) {
      const int action = SelectAction(net, encoded, epsilon, actions, explore);
      StepResult step = env.Step(state, action);
      Eigen::VectorXd next_encoded = env.Encode(step.state);
      memory.Push(Transition{encoded, action, step.reward, next_encoded,
                             step.terminal});
      total_reward += step.reward;
      terminal = step.terminal;
      state = std::move(step.state);
      encoded = std::move(next_encoded);

      const std::vector<Transition> batch =
          SampleBatch(memory, static_cast<std::size_t>(cfg.batch_size), sampler);
      const Eigen::VectorXd targets = TdTargets(batch, target, cfg.gamma, actions);
      double loss = 0.0;
      const Eigen::VectorXd grads = BackwardWith(
          net, StackColumns(batch, false), [&](const Eigen::MatrixXd& q) {
            Eigen::VectorXd taken(targets.size());
            for (Eigen::Index i = 0; i < taken.size(); ++i) {
              taken(i) = q(batch[static_cast<std::size_t>(i)].action, i);
            }
            const MseResult mse = MseLoss(taken, targets);
            loss = mse.loss;
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(q.rows(), q.cols());
            for (Eigen::Index i = 0; i < taken.size(); ++i) {
              g(batch[static_cast<std::size_t>(i)].action, i) = mse.grad(i);
            }
            return g;
          });
      if (!std::isfinite(loss)) ThrowNumeric("training loss became non-finite");
      AdamStep(net, grads, result.adam);
      ++result.updates;
      loss_sum += loss;
      ++loss_count;

      if (result.updates % cfg.sync_period == 0) target = CopyParams(net);
      if (hooks.on_update) {
        hooks.on_update(
            UpdateInfo{result.updates, loss, &net, &target, &batch});
      }
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.mse = loss_count > 0 ? loss_sum / loss_count : 0.0;
    entry.rmse = std::sqrt(entry.mse);
    entry.epsilon = epsilon;
    entry.total_reward = total_reward;
    result.log.push_back(entry);
    if (hooks.on_epoch) hooks.on_epoch(entry, net, result.adam);
  }
  return result;
}

RolloutResult GreedyRollout(const NetworkParams& net, const ImitationEnv& env,
                            std::uint64_t reset_seed) {
  const int actions = env.action_count();
  const JointLimits& limits = env.config().limits;
  EnvState state = env.Reset(reset_seed);

  std::vector<AngleFrame> frames;
  frames.reserve(env.episode_length());
  RolloutResult result{AngleTrajectory({AngleFrame{}}, env.demo().frame_rate()),
                       0.0, {}, true};
  result.errors.push_back(env.TrackingError(state));
  result.within_limits = limits.Contains(state.angles);

  bool terminal = false;
  while (!terminal) {
    AngleFrame frame;
    frame.angles = state.angles;
    frame.valid.fill(true);
    frames.push_back(frame);

    const int action = GreedyAction(Forward(net, env.Encode(state)), actions);
    StepResult step = env.Step(state, action);
    result.total_reward += step.reward;
    terminal = step.terminal;
    state = std::move(step.state);
    result.errors.push_back(env.TrackingError(state));
    result.within_limits = result.within_limits && limits.Contains(state.angles);
  }
  result.executed = AngleTrajectory(std::move(frames), env.demo().frame_rate());
  return result;
}

std::string FormatTrainingLog(const std::vector<EpochLog>& log) {
  std::string out = "epoch,mse,rmse,epsilon,total_reward\n";
  char buf[256];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.6f,%.12g\n", e.epoch,
                  e.mse, e.rmse, e.epsilon, e.total_reward);
    out += buf;
  }
  return out;
}

}  // namespace imitate
