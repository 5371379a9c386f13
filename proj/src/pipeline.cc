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

#include "imitate/pipeline.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "imitate/error.h"
#include "json.hpp"

namespace imitate {
namespace {

using Json = nlohmann::ordered_json;

std::string ReadText(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowData("cannot open " + std::string(what) + ": " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowData("cannot write " + path.string());
  out << text;
  if (!out) ThrowData("write failed: " + path.string());
}

// Reads fields out of a JSON object, recording every problem instead of
// stopping at the first.
class FieldReader {
 public:
  FieldReader(const Json& object, std::string path,
              std::vector<std::string>& problems)
      : object_(object), path_(std::move(path)), problems_(problems) {
    if (!object_.is_object()) {
      problems_.push_back(path_ + ": expected an object");
      valid_ = false;
    }
  }

  template <typename T>
  void Read(const char* key, T& out) {
    seen_.insert(key);
    if (!valid_ || !object_.contains(key)) return;
    const Json& value = object_[key];
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!value.is_boolean()) throw std::invalid_argument("bool");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!value.is_number()) throw std::invalid_argument("number");
        if constexpr (std::is_integral_v<T>) {
          if (!value.is_number_integer() && !value.is_number_unsigned()) {
            throw std::invalid_argument("integer");
          }
          if constexpr (std::is_unsigned_v<T>) {
            if (value.is_number_integer() && value.get<std::int64_t>() < 0) {
              throw std::invalid_argument("non-negative integer");
            }
          }
        }
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!value.is_string()) throw std::invalid_argument("string");
      }
      out = value.get<T>();
    } catch (const std::exception& e) {
      problems_.push_back(path_ + "." + key + ": expected " + e.what());
    }
  }

  // Runs `parse` on a string field, recording a kUsage failure as a problem.
  template <typename T, typename Parse>
  void ReadEnum(const char* key, T& out, Parse parse) {
    std::string text;
    const std::size_t before = problems_.size();
    Read(key, text);
    if (problems_.size() != before || !valid_ || !object_.contains(key)) return;
    try {
      out = parse(text);
    } catch (const Error& e) {
      problems_.push_back(path_ + "." + key + ": " + e.what());
    }
  }

  const Json* Child(const char* key) {
    seen_.insert(key);
    if (!valid_ || !object_.contains(key)) return nullptr;
    return &object_[key];
  }

  std::string Path(const char* key) const { return path_ + "." + key; }

  ~FieldReader() {
    if (!valid_) return;
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.count(key)) problems_.push_back(path_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const Json& object_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
  bool valid_ = true;
};

void ReadEnvObject(const Json& object, const std::string& path, EnvConfig& env,
                   std::vector<std::string>& problems) {
  FieldReader r(object, path, problems);
  if (const Json* skel = r.Child("skeleton")) {
    FieldReader s(*skel, r.Path("skeleton"), problems);
    s.Read("upper_arm", env.skeleton.upper_arm);
    s.Read("forearm", env.skeleton.forearm);
    s.Read("thigh", env.skeleton.thigh);
    s.Read("shank", env.skeleton.shank);
    s.Read("torso", env.skeleton.torso);
  }
  if (const Json* limits = r.Child("limits_deg")) {
    const std::string lpath = r.Path("limits_deg");
    if (!limits->is_object()) {
      problems.push_back(lpath + ": expected an object");
    } else {
      for (const auto& [name, range] : limits->items()) {
        const auto joint = JointFromName(name);
        if (!joint) {
          problems.push_back(lpath + ": unknown joint '" + name + "'");
          continue;
        }
        if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
            !range[1].is_number()) {
          problems.push_back(lpath + "." + name + ": expected [min_deg, max_deg]");
          continue;
        }
        const int j = static_cast<int>(*joint);
        env.limits.min[j] = DegToRad(range[0].get<double>());
        env.limits.max[j] = DegToRad(range[1].get<double>());
      }
    }
  }
  double step_deg = RadToDeg(env.step_size);
  r.Read("step_deg", step_deg);
  env.step_size = DegToRad(step_deg);
  double noise_deg = RadToDeg(env.reset_noise);
  r.Read("reset_noise_deg", noise_deg);
  env.reset_noise = DegToRad(noise_deg);
  r.ReadEnum("reset_pose", env.reset_pose, ParseResetPose);
  r.Read("state_dim", env.state_dim);
  if (const Json* active = r.Child("active_joints")) {
    if (!active->is_array()) {
      problems.push_back(r.Path("active_joints") + ": expected an array");
    } else {
      env.active_joints.clear();
      for (const auto& name : *active) {
        const auto joint = name.is_string()
                               ? JointFromName(name.get<std::string>())
                               : std::nullopt;
        if (!joint) {
          problems.push_back(r.Path("active_joints") + ": unknown joint " +
                             name.dump());
          continue;
        }
        env.active_joints.push_back(*joint);
      }
    }
  }
  if (const Json* slots = r.Child("position_slots")) {
    if (!slots->is_array()) {
      problems.push_back(r.Path("position_slots") + ": expected an array");
    } else {
      env.position_slots.clear();
      for (const auto& slot : *slots) {
        try {
          if (!slot.is_array() || slot.size() != 2) throw Error(ErrorKind::kUsage, "");
          const std::string axis = slot[1].get<std::string>();
          if (axis != "x" && axis != "y") throw Error(ErrorKind::kUsage, "");
          env.position_slots.push_back(PositionSlot{
              ParseBodyPoint(slot[0].get<std::string>()), axis == "x" ? 0 : 1});
        } catch (const std::exception&) {
          problems.push_back(r.Path("position_slots") +
                             ": expected [\"<body point>\", \"x\"|\"y\"], got " +
                             slot.dump());
        }
      }
    }
  }
}

// Shortest decimal degree value that converts back to the same radians.
double DegreesForJson(double radians) {
  const double degrees = RadToDeg(radians);
  for (double scale : {1e3, 1e6, 1e9, 1e12}) {
    const double rounded = std::round(degrees * scale) / scale;
    if (DegToRad(rounded) == radians) return rounded;
  }
  return degrees;
}

Json EnvToJson(const EnvConfig& env) {
  Json out;
  out["skeleton"] = {{"upper_arm", env.skeleton.upper_arm},
                     {"forearm", env.skeleton.forearm},
                     {"thigh", env.skeleton.thigh},
                     {"shank", env.skeleton.shank},
                     {"torso", env.skeleton.torso}};
  Json limits = Json::object();
  for (int j = 0; j < kJointCount; ++j) {
    limits[std::string(JointName(static_cast<Joint>(j)))] =
        Json::array({DegreesForJson(env.limits.min[j]),
                     DegreesForJson(env.limits.max[j])});
  }
  out["limits_deg"] = limits;
  out["step_deg"] = DegreesForJson(env.step_size);
  out["reset_noise_deg"] = DegreesForJson(env.reset_noise);
  out["reset_pose"] = std::string(ResetPoseName(env.reset_pose));
  out["state_dim"] = env.state_dim;
  Json active = Json::array();
  for (Joint j : env.active_joints) active.push_back(std::string(JointName(j)));
  out["active_joints"] = active;
  Json slots = Json::array();
  for (const auto& s : env.position_slots) {
    slots.push_back(Json::array({std::string(BodyPointName(s.point)),
                                 s.axis == 0 ? "x" : "y"}));
  }
  out["position_slots"] = slots;
  return out;
}

Json ParseJsonText(std::string_view text, const char* what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    ThrowUsage(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> PipelineConfig::Problems() const {
  std::vector<std::string> problems;
  auto capture = [&](auto&& check) {
    try {
      check();
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  };
  if (!(ingest.confidence_threshold >= 0.0 && ingest.confidence_threshold <= 1.0)) {
    problems.push_back("ingest.confidence_threshold must lie in [0, 1]");
  }
  if (!(ingest.frame_rate > 0.0)) problems.push_back("ingest.frame_rate must be > 0");
  if (ingest.max_gap < 0) problems.push_back("ingest.max_gap must be >= 0");
  if (!(ingest.vertical_drop > 0.0)) {
    problems.push_back("ingest.vertical_drop must be > 0");
  }
  capture([&] { SgCoefficients(smoothing.window, smoothing.order, smoothing.edge); });
  capture([&] { env.Validate(); });
  capture([&] { network.Validate(); });
  capture([&] { trainer.Validate(); });
  if (network.input_dim != env.state_dim) {
    problems.push_back("network.input_dim (" + std::to_string(network.input_dim) +
                       ") must equal env.state_dim (" +
                       std::to_string(env.state_dim) + ")");
  }
  if (network.output_dim < env.ActionCount()) {
    problems.push_back("network.output_dim (" + std::to_string(network.output_dim) +
                       ") is smaller than the action count (" +
                       std::to_string(env.ActionCount()) + ")");
  }
  if (checkpoint_every < 0) problems.push_back("checkpoint_every must be >= 0");
  return problems;
}

void PipelineConfig::Validate() const {
  const auto problems = Problems();
  if (problems.empty()) return;
  std::string message = "invalid config:";
  for (const auto& p : problems) message += "\n  - " + p;
  ThrowUsage(message);
}

PipelineConfig ParsePipelineConfig(std::string_view json_text) {
  const Json doc = ParseJsonText(json_text, "config");
  PipelineConfig cfg;
  std::vector<std::string> problems;
  {
    FieldReader r(doc, "config", problems);
    r.Read("seed", cfg.seed);
    r.Read("case", cfg.case_name);
    r.Read("checkpoint_every", cfg.checkpoint_every);
    if (const Json* ingest = r.Child("ingest")) {
      FieldReader i(*ingest, "ingest", problems);
      i.Read("confidence_threshold", cfg.ingest.confidence_threshold);
      i.Read("frame_rate", cfg.ingest.frame_rate);
      i.Read("max_gap", cfg.ingest.max_gap);
      i.Read("vertical_drop", cfg.ingest.vertical_drop);
    }
    if (const Json* sg = r.Child("smoothing")) {
      FieldReader s(*sg, "smoothing", problems);
      s.Read("window", cfg.smoothing.window);
      s.Read("order", cfg.smoothing.order);
      s.ReadEnum("edge", cfg.smoothing.edge, ParseEdgeMode);
    }
    if (const Json* env = r.Child("env")) {
      ReadEnvObject(*env, "env", cfg.env, problems);
    }
    if (const Json* net = r.Child("network")) {
      FieldReader n(*net, "network", problems);
      n.Read("input_dim", cfg.network.input_dim);
      n.Read("hidden", cfg.network.hidden);
      n.Read("output_dim", cfg.network.output_dim);
      n.ReadEnum("activation", cfg.network.activation, ParseActivation);
      n.ReadEnum("variant", cfg.network.variant, ParseVariant);
      n.Read("conv_channels", cfg.network.conv_channels);
    }
    if (const Json* tr = r.Child("trainer")) {
      FieldReader t(*tr, "trainer", problems);
      t.Read("epochs", cfg.trainer.epochs);
      t.Read("gamma", cfg.trainer.gamma);
      t.Read("batch_size", cfg.trainer.batch_size);
      t.Read("sync_period", cfg.trainer.sync_period);
      t.Read("replay_capacity", cfg.trainer.replay_capacity);
      t.Read("epsilon_start", cfg.trainer.epsilon_start);
      t.Read("epsilon_end", cfg.trainer.epsilon_end);
      t.Read("epsilon_decay_fraction", cfg.trainer.epsilon_decay_fraction);
      t.Read("learning_rate", cfg.trainer.adam.learning_rate);
      t.Read("beta1", cfg.trainer.adam.beta1);
      t.Read("beta2", cfg.trainer.adam.beta2);
      t.Read("adam_epsilon", cfg.trainer.adam.epsilon);
    }
  }
  cfg.trainer.seed = cfg.seed;
  if (problems.empty()) {
    for (auto& p : cfg.Problems()) problems.push_back(std::move(p));
  }
  if (!problems.empty()) {
    std::string message = "invalid config:";
    for (const auto& p : problems) message += "\n  - " + p;
    ThrowUsage(message);
  }
  return cfg;
}

PipelineConfig LoadPipelineConfig(const std::filesystem::path& path) {
  const std::string text = ReadText(path, "config");
  try {
    return ParsePipelineConfig(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string SerializePipelineConfig(const PipelineConfig& cfg) {
  Json doc;
  doc["seed"] = cfg.seed;
  doc["case"] = cfg.case_name;
  doc["checkpoint_every"] = cfg.checkpoint_every;
  doc["ingest"] = {{"confidence_threshold", cfg.ingest.confidence_threshold},
                   {"frame_rate", cfg.ingest.frame_rate},
                   {"max_gap", cfg.ingest.max_gap},
                   {"vertical_drop", cfg.ingest.vertical_drop}};
  doc["smoothing"] = {{"window", cfg.smoothing.window},
                      {"order", cfg.smoothing.order},
                      {"edge", std::string(EdgeModeName(cfg.smoothing.edge))}};
  doc["env"] = EnvToJson(cfg.env);
  doc["network"] = {{"input_dim", cfg.network.input_dim},
                    {"hidden", cfg.network.hidden},
                    {"output_dim", cfg.network.output_dim},
                    {"activation", std::string(ActivationName(cfg.network.activation))},
                    {"variant", std::string(VariantName(cfg.network.variant))},
                    {"conv_channels", cfg.network.conv_channels}};
  const TrainerConfig& t = cfg.trainer;
  doc["trainer"] = {{"epochs", t.epochs},
                    {"gamma", t.gamma},
                    {"batch_size", t.batch_size},
                    {"sync_period", t.sync_period},
                    {"replay_capacity", t.replay_capacity},
                    {"epsilon_start", t.epsilon_start},
                    {"epsilon_end", t.epsilon_end},
                    {"epsilon_decay_fraction", t.epsilon_decay_fraction},
                    {"learning_rate", t.adam.learning_rate},
                    {"beta1", t.adam.beta1},
                    {"beta2", t.adam.beta2},
                    {"adam_epsilon", t.adam.epsilon}};
  return doc.dump(2) + "\n";
}

EnvConfig ParseEnvFile(std::string_view json_text, EnvConfig base) {
  const Json doc = ParseJsonText(json_text, "env file");
  std::vector<std::string> problems;
  ReadEnvObject(doc, "env", base, problems);
  if (problems.empty()) {
    try {
      base.Validate();
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) {
    std::string message = "invalid env file:";
    for (const auto& p : problems) message += "\n  - " + p;
    ThrowUsage(message);
  }
  return base;
}

AngleTrajectory RunExtract(const std::filesystem::path& keypoints,
                           const PipelineConfig& config) {
  IngestOptions options;
  options.confidence_threshold = config.ingest.confidence_threshold;
  options.default_frame_rate = config.ingest.frame_rate;
  const KeypointSequence raw = ParseKeypointFile(keypoints, options);

  // Only the keypoints the joint definitions use must be recoverable.
  std::vector<KeypointId> tracks;
  for (const auto& def : DefaultJointDefinitions()) {
    for (KeypointId id : {def.vertex, def.end}) {
      if (std::find(tracks.begin(), tracks.end(), id) == tracks.end()) {
        tracks.push_back(id);
      }
    }
  }
  const KeypointSequence filled = FillGaps(raw, config.ingest.max_gap, tracks);
  return ExtractTrajectory(filled, DefaultJointDefinitions(),
                           config.ingest.vertical_drop);
}

AngleTrajectory RunSmooth(const AngleTrajectory& angles,
                          const PipelineConfig& config) {
  const SgFilterSpec spec = SgCoefficients(
      config.smoothing.window, config.smoothing.order, config.smoothing.edge);
  return SmoothTrajectory(angles, spec);
}

TrainArtifacts RunTrain(const AngleTrajectory& demo,
                        const PipelineConfig& config,
                        const std::filesystem::path& out_dir) {
  config.Validate();
  std::filesystem::create_directories(out_dir);
  const ImitationEnv env(config.env, demo);
  TrainerConfig trainer = config.trainer;
  trainer.seed = config.seed;

  TrainHooks hooks;
  if (config.checkpoint_every > 0) {
    hooks.on_epoch = [&](const EpochLog& entry, const NetworkParams& params,
                         const AdamState& adam) {
      if ((entry.epoch + 1) % config.checkpoint_every != 0) return;
      SaveCheckpoint(out_dir / ("checkpoint_epoch_" +
                                std::to_string(entry.epoch + 1) + ".bin"),
                     Checkpoint{params, adam});
    };
  }

  TrainArtifacts artifacts{Train(env, config.network, trainer, hooks),
                           out_dir / "checkpoint.bin",
                           out_dir / "training_log.csv"};
  SaveCheckpoint(artifacts.checkpoint,
                 Checkpoint{artifacts.result.params, artifacts.result.adam});
  WriteText(artifacts.log, FormatTrainingLog(artifacts.result.log));
  return artifacts;
}

ComparisonReport RunEvaluate(const std::vector<std::filesystem::path>& checkpoints,
                             const AngleTrajectory& demo,
                             const PipelineConfig& config,
                             const std::filesystem::path& out_dir,
                             const std::vector<EpochLog>& loss_curve) {
  config.Validate();
  if (checkpoints.empty()) ThrowUsage("evaluate needs at least one checkpoint");
  const ImitationEnv env(config.env, demo);

  ComparisonReport report;
  report.case_name = config.case_name;
  report.original = demo;
  report.loss_curve = loss_curve;
  for (const auto& path : checkpoints) {
    const Checkpoint ck = LoadCheckpoint(path);
    const NetworkSpec& spec = ck.params.spec();
    NetworkSpec expected = config.network;
    expected.variant = spec.variant;
    expected.conv_channels = spec.conv_channels;
    if (!(spec == expected)) {
      ThrowData(path.string() + ": checkpoint network does not match the config");
    }
    std::optional<TagMetrics>& slot =
        spec.variant == Variant::kDense ? report.dense : report.conv;
    if (slot) {
      ThrowUsage("two checkpoints with the " +
                 std::string(VariantName(spec.variant)) + " variant");
    }
    const RolloutResult rollout = GreedyRollout(ck.params, env);
    TagMetrics m = ComputeMetrics(rollout.executed, demo);
    m.within_limits = rollout.within_limits;
    m.total_reward = rollout.total_reward;
    slot = std::move(m);
  }
  EmitReport(report, out_dir);
  return report;
}

std::vector<EpochLog> ParseTrainingLog(std::string_view text) {
  std::vector<EpochLog> log;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "epoch,mse,rmse,epsilon,total_reward") {
    ThrowData("training log: unexpected header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    EpochLog e;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf%c", &e.epoch, &e.mse,
                    &e.rmse, &e.epsilon, &e.total_reward, &tail) != 5) {
      ThrowData("training log line " + std::to_string(line_no) + ": malformed");
    }
    log.push_back(e);
  }
  return log;
}

}  // namespace imitate
