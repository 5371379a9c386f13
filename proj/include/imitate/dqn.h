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

#ifndef IMITATE_DQN_H_
#define IMITATE_DQN_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "imitate/env.h"
#include "imitate/network.h"
#include "imitate/rng.h"

namespace imitate {

struct Transition {
  Eigen::VectorXd state;
  int action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool terminal = false;
};

// Fixed-capacity ring; once full, each push evicts the oldest transition.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void Push(Transition transition);

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  // i = 0 is the oldest transition still held.
  const Transition& operator[](std::size_t i) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // slot of the oldest item once full
  std::vector<Transition> items_;
};

// Indices (oldest = 0) of min(n, size) distinct transitions, uniformly
// without replacement. Throws kData on an empty buffer.
std::vector<std::size_t> SampleIndices(const ReplayBuffer& buffer,
                                       std::size_t n, Rng& rng);
std::vector<Transition> SampleBatch(const ReplayBuffer& buffer, std::size_t n,
                                    Rng& rng);

// y = r for terminal transitions, else r + gamma * max over the first
// `valid_actions` outputs of the target network at the next state.
Eigen::VectorXd TdTargets(const std::vector<Transition>& batch,
                          const NetworkParams& target_net, double gamma,
                          int valid_actions);

// Argmax over the first `valid_actions` entries; ties go to the lowest index.
int GreedyAction(const Eigen::VectorXd& q_values, int valid_actions);

// With probability epsilon a uniformly random valid action, otherwise the
// greedy one. With epsilon = 0 no random number is drawn.
int SelectAction(const NetworkParams& net, const Eigen::VectorXd& state,
                 double epsilon, int valid_actions, Rng& rng);

struct TrainerConfig {
  // Outer iterations; one episode each.
  int epochs = 500;
  double gamma = 0.99;
  int batch_size = 64;
  // Gradient updates between target-network syncs.
  int sync_period = 250;
  std::size_t replay_capacity = 10000;
  // Linear decay from start to end over the first decay_fraction of epochs.
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.5;
  AdamConfig adam;
  std::uint64_t seed = 0;

  // Lists every problem at once in the kUsage message.
  void Validate() const;
  double EpsilonAt(int epoch) const;
  bool operator==(const TrainerConfig&) const = default;
};

struct EpochLog {
  int epoch = 0;
  double mse = 0.0;   // mean batch TD loss over the epoch's updates
  double rmse = 0.0;  // sqrt(mse)
  double epsilon = 0.0;
  double total_reward = 0.0;
};

struct UpdateInfo {
  std::int64_t update = 0;  // 1-based count of gradient updates so far
  double loss = 0.0;
  const NetworkParams* prediction = nullptr;
  const NetworkParams* target = nullptr;
  const std::vector<Transition>* batch = nullptr;
};

struct TrainHooks {
  std::function<void(const UpdateInfo&)> on_update;
  // Called after each epoch with the current prediction network and
  // optimizer state.
  std::function<void(const EpochLog&, const NetworkParams&, const AdamState&)>
      on_epoch;
};

struct TrainResult {
  NetworkParams params;
  NetworkParams target;
  AdamState adam;
  std::vector<EpochLog> log;
  std::int64_t updates = 0;
};

// Deep Q-learning against the imitation environment: per step, act
// epsilon-greedily, store the transition, sample a batch, regress the taken
// action's Q-value onto its TD target with Adam, and copy the prediction
// network into the target network every sync_period updates. Deterministic
// in cfg.seed.
TrainResult Train(const ImitationEnv& env, const NetworkSpec& spec,
                  const TrainerConfig& cfg, const TrainHooks& hooks = {});

struct RolloutResult {
  // Angles of the states at steps 0 .. T-1, aligned with the demo frames.
  AngleTrajectory executed;
  double total_reward = 0.0;
  // Tracking error at every state 0 .. T.
  std::vector<double> errors;
  bool within_limits = true;

  double first_error() const { return errors.front(); }
  double last_error() const { return errors.back(); }
};

// One epsilon = 0 episode.
RolloutResult GreedyRollout(const NetworkParams& net, const ImitationEnv& env,
                            std::uint64_t reset_seed = 0);

// `epoch,mse,rmse,epsilon,total_reward`, one row per epoch.
std::string FormatTrainingLog(const std::vector<EpochLog>& log);

}  // namespace imitate

#endif  // IMITATE_DQN_H_
