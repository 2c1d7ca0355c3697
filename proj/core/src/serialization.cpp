// Copyright 2026 The gpskill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gpskill/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "gpskill/errors.hpp"
#include "json.hpp"

namespace gpskill {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ParseError(e.what(), line);
  }
}

// Wraps nlohmann type and key errors as InvalidArgument.
template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string(what) + ": " + e.what());
  }
}

void expect_format(const json& j, const char* format) {
  if (!j.is_object() || j.value("format", std::string()) != format) {
    throw InvalidArgument(std::string("expected a '") + format + "' document");
  }
  if (j.value("version", 0) != kFormatVersion) {
    throw InvalidArgument(std::string("unsupported ") + format + " version");
  }
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vector(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json network_json(const Network& net) {
  json layers = json::array();
  for (const auto& l : net.layers()) {
    std::vector<float> w;
    w.reserve(static_cast<std::size_t>(l.weights.size()));
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) w.push_back(l.weights(r, c));
    }
    layers.push_back({{"inputs", l.weights.cols()},
                      {"outputs", l.weights.rows()},
                      {"activation", std::string(to_string(l.activation))},
                      {"weights", w},
                      {"bias", std::vector<float>(l.bias.data(), l.bias.data() + l.bias.size())}});
  }
  return {{"format", "gpskill-network"}, {"version", kFormatVersion}, {"layers", layers}};
}

Network network_from(const json& j) {
  expect_format(j, "gpskill-network");
  return guarded("network", [&] {
    std::vector<Network::Layer> layers;
    for (const auto& lj : j.at("layers")) {
      const auto in = lj.at("inputs").get<int>();
      const auto out = lj.at("outputs").get<int>();
      const auto w = lj.at("weights").get<std::vector<float>>();
      const auto b = lj.at("bias").get<std::vector<float>>();
      if (in <= 0 || out <= 0 || w.size() != static_cast<std::size_t>(in) * static_cast<std::size_t>(out) ||
          b.size() != static_cast<std::size_t>(out)) {
        throw InvalidArgument("network layer shape is inconsistent");
      }
      Network::Layer layer;
      layer.weights.resize(out, in);
      for (int r = 0; r < out; ++r) {
        for (int c = 0; c < in; ++c) layer.weights(r, c) = w[static_cast<std::size_t>(r * in + c)];
      }
      layer.bias = Eigen::Map<const Eigen::VectorXf>(b.data(), out);
      layer.activation = parse_activation(lj.at("activation").get<std::string>());
      if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
        throw InvalidArgument("network parameters must be finite");
      }
      layers.push_back(std::move(layer));
    }
    return Network(std::move(layers));
  });
}

void check_stats(const Eigen::VectorXd& mean, const Eigen::VectorXd& scale, Eigen::Index dim,
                 const char* what) {
  if (mean.size() != dim || scale.size() != dim || !(scale.array() > 0.0).all()) {
    throw InvalidArgument(std::string(what) + " statistics do not match the network");
  }
}

// Field visitors shared by reading and writing configuration objects.
template <typename Config, typename Fn>
void visit_env_config(Config& c, Fn&& f) {
  f("control_step", c.control_step);
  f("max_offset", c.max_offset);
  f("contact_via", c.contact_via);
  f("goal_via", c.goal_via);
  f("cube_position", c.cube_position);
  f("cube_half_size", c.cube_half_size);
  f("contact_radius", c.contact_radius);
  f("contact_height", c.contact_height);
  f("goal_tolerance", c.goal_tolerance);
  f("obstacle_center", c.obstacle_center);
  f("obstacle_radius", c.obstacle_radius);
  f("obstacle_height", c.obstacle_height);
  f("jitter", c.jitter);
  f("max_jumps", c.max_jumps);
  f("jump_distance", c.jump_distance);
  f("jump_window_begin", c.jump_window_begin);
  f("jump_window_end", c.jump_window_end);
  f("handle_position", c.handle_position);
  f("handle_half_extents", c.handle_half_extents);
  f("drawer_success_travel", c.drawer_success_travel);
  f("drawer_max_travel", c.drawer_max_travel);
  f("bar_position", c.bar_position);
  f("grasp_height", c.grasp_height);
  f("grasp_half_extents", c.grasp_half_extents);
  f("bar_body_center_z", c.bar_body_center_z);
  f("bar_body_half_extents", c.bar_body_half_extents);
  f("second_bar_separation", c.second_bar_separation);
  f("second_bar_center_z", c.second_bar_center_z);
  f("second_bar_half_extents", c.second_bar_half_extents);
  f("alignment_tolerance_deg", c.alignment_tolerance_deg);
  f("lift_clearance", c.lift_clearance);
}

template <typename Config, typename Fn>
void visit_gprl_config(Config& c, Fn&& f) {
  f("episodes", c.episodes);
  f("warmup_episodes", c.warmup_episodes);
  f("checkpoint_interval", c.checkpoint_interval);
  f("best_window", c.best_window);
  f("alpha", c.weights.alpha);
  f("beta", c.weights.beta);
  f("eta", c.weights.eta);
  f("initial_temperature", c.initial_temperature);
  f("temperature_decay", c.temperature_decay);
  f("temperature_floor", c.temperature_floor);
  f("batch_size", c.batch_size);
  f("buffer_capacity", c.buffer_capacity);
  f("updates_per_episode", c.updates_per_episode);
  f("hidden", c.sac.hidden);
  f("actor_lr", c.sac.actor_lr);
  f("critic_lr", c.sac.critic_lr);
  f("gamma", c.sac.gamma);
  f("tau", c.sac.tau);
  f("initial_log_std", c.sac.initial_log_std);
  f("output_init_scale", c.sac.output_init_scale);
  f("normalisation_samples", c.normalisation_samples);
  f("seed", c.seed);
}

template <typename Config, typename Fn>
void visit_bc_config(Config& c, Fn&& f) {
  f("epochs", c.epochs);
  f("batch_size", c.batch_size);
  f("learning_rate", c.learning_rate);
  f("hidden", c.hidden);
  f("heldout_fraction", c.heldout_fraction);
}

template <typename T>
json field_to_json(const T& v) {
  if constexpr (std::is_base_of_v<Eigen::MatrixBase<T>, T>) {
    return std::vector<double>(v.data(), v.data() + v.size());
  } else {
    return v;
  }
}

template <typename T>
void field_from_json(const json& j, T& v) {
  if constexpr (std::is_base_of_v<Eigen::MatrixBase<T>, T>) {
    const auto x = j.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(x.size()) != v.size()) throw InvalidArgument("wrong vector length");
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = x[static_cast<std::size_t>(i)];
  } else {
    v = j.get<T>();
  }
}

template <typename Config, typename Visitor>
Config config_from_json(const std::string& text, Config c, Visitor visit, const char* what) {
  const json j = parse(text);
  if (!j.is_object()) throw InvalidArgument(std::string(what) + " must be a JSON object");
  std::set<std::string> known;
  visit(c, [&](const char* name, auto& field) {
    known.insert(name);
    if (!j.contains(name)) return;
    guarded(what, [&] {
      field_from_json(j.at(name), field);
      return 0;
    });
  });
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw InvalidArgument(std::string(what) + ": unknown key '" + key + "'");
  }
  return c;
}

template <typename Config, typename Visitor>
std::string config_to_json(const Config& c, Visitor visit) {
  json j = json::object();
  Config copy = c;
  visit(copy, [&](const char* name, auto& field) { j[name] = field_to_json(field); });
  return j.dump(2);
}

}  // namespace

std::string skill_to_json(const SkillModel& skill) {
  const ViaPointSet& via = skill.via();
  json columns = json::object();
  for (int a = 0; a < kNumAxes; ++a) {
    columns[std::string(kAxisNames[static_cast<std::size_t>(a)])] = to_vector(via.values.col(a));
  }
  const json j = {{"format", "gpskill-skill"},
                  {"version", kFormatVersion},
                  {"kernel",
                   {{"lengthscale", skill.params().lengthscale},
                    {"noise_variance", skill.params().noise_variance},
                    {"signal_variance", skill.params().signal_variance}}},
                  {"via", {{"times", to_vector(via.times)}, {"columns", columns}}}};
  return j.dump(2);
}

SkillModel skill_from_json(const std::string& text) {
  const json j = parse(text);
  expect_format(j, "gpskill-skill");
  return guarded("skill", [&] {
    KernelParams params;
    const json& k = j.at("kernel");
    params.lengthscale = k.at("lengthscale").get<double>();
    params.noise_variance = k.at("noise_variance").get<double>();
    params.signal_variance = k.at("signal_variance").get<double>();
    ViaPointSet via;
    via.times = from_vector(j.at("via").at("times"));
    via.values.resize(via.times.size(), kNumAxes);
    for (int a = 0; a < kNumAxes; ++a) {
      const Eigen::VectorXd col =
          from_vector(j.at("via").at("columns").at(std::string(kAxisNames[static_cast<std::size_t>(a)])));
      if (col.size() != via.times.size()) throw InvalidArgument("via column length differs from times");
      via.values.col(a) = col;
    }
    return SkillModel(via, params);
  });
}

void save_skill_file(const std::string& path, const SkillModel& skill) {
  write_text_file(path, skill_to_json(skill) + "\n");
}

SkillModel load_skill_file(const std::string& path) { return skill_from_json(read_text_file(path)); }

std::string network_to_json(const Network& net) { return network_json(net).dump(); }

Network network_from_json(const std::string& text) { return network_from(parse(text)); }

std::string bc_policy_to_json(const BcPolicy& p) {
  const json j = {{"format", "gpskill-bc-policy"},
                  {"version", kFormatVersion},
                  {"n_via", p.n_via},
                  {"state_mean", to_vector(p.state_mean)},
                  {"state_scale", to_vector(p.state_scale)},
                  {"action_mean", to_vector(p.action_mean)},
                  {"action_scale", to_vector(p.action_scale)},
                  {"network", network_json(p.net)}};
  return j.dump();
}

BcPolicy bc_policy_from_json(const std::string& text) {
  const json j = parse(text);
  expect_format(j, "gpskill-bc-policy");
  BcPolicy p = guarded("bc policy", [&] {
    BcPolicy q;
    q.n_via = j.at("n_via").get<int>();
    q.state_mean = from_vector(j.at("state_mean"));
    q.state_scale = from_vector(j.at("state_scale"));
    q.action_mean = from_vector(j.at("action_mean"));
    q.action_scale = from_vector(j.at("action_scale"));
    q.net = network_from(j.at("network"));
    return q;
  });
  if (p.n_via <= 0) throw InvalidArgument("bc policy: n_via must be positive");
  check_stats(p.state_mean, p.state_scale, p.net.input_size(), "state");
  check_stats(p.action_mean, p.action_scale, position_action_dim(p.n_via), "action");
  if (p.net.input_size() != 6 || p.net.output_size() != position_action_dim(p.n_via)) {
    throw InvalidArgument("bc policy: network shape does not match the via count");
  }
  return p;
}

std::string gprl_policy_to_json(const GprlPolicy& p) {
  const json j = {{"format", "gpskill-gprl-policy"},
                  {"version", kFormatVersion},
                  {"n_via", p.n_via},
                  {"state_mean", to_vector(p.state_mean)},
                  {"state_scale", to_vector(p.state_scale)},
                  {"actor", network_json(p.actor)}};
  return j.dump();
}

GprlPolicy gprl_policy_from_json(const std::string& text) {
  const json j = parse(text);
  expect_format(j, "gpskill-gprl-policy");
  GprlPolicy p = guarded("gprl policy", [&] {
    GprlPolicy q;
    q.n_via = j.at("n_via").get<int>();
    q.state_mean = from_vector(j.at("state_mean"));
    q.state_scale = from_vector(j.at("state_scale"));
    q.actor = network_from(j.at("actor"));
    return q;
  });
  if (p.n_via <= 0) throw InvalidArgument("gprl policy: n_via must be positive");
  check_stats(p.state_mean, p.state_scale, kRlStateDim, "state");
  if (p.actor.input_size() != kRlStateDim || p.actor.output_size() != 2 * position_action_dim(p.n_via)) {
    throw InvalidArgument("gprl policy: actor shape does not match the via count");
  }
  return p;
}

EnvConfig env_config_from_json(const std::string& text, EnvConfig defaults) {
  return config_from_json(text, std::move(defaults),
                          [](auto& c, auto&& f) { visit_env_config(c, f); }, "env config");
}

std::string env_config_to_json(const EnvConfig& config) {
  return config_to_json(config, [](auto& c, auto&& f) { visit_env_config(c, f); });
}

GprlConfig gprl_config_from_json(const std::string& text, GprlConfig defaults) {
  return config_from_json(text, std::move(defaults),
                          [](auto& c, auto&& f) { visit_gprl_config(c, f); }, "gprl config");
}

std::string gprl_config_to_json(const GprlConfig& config) {
  return config_to_json(config, [](auto& c, auto&& f) { visit_gprl_config(c, f); });
}

BcTrainConfig bc_config_from_json(const std::string& text, BcTrainConfig defaults) {
  return config_from_json(text, std::move(defaults),
                          [](auto& c, auto&& f) { visit_bc_config(c, f); }, "bc config");
}

std::string adapt_result_to_json(const AdaptResult& result) {
  json axes = json::object();
  for (int a = 0; a < kNumAxes; ++a) {
    axes[std::string(kAxisNames[static_cast<std::size_t>(a)])] =
        result.axis_objective_history[static_cast<std::size_t>(a)];
  }
  const json j = {{"converged", result.converged},
                  {"iterations", result.iterations},
                  {"objective_history", result.objective_history},
                  {"axis_objective_history", axes}};
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

}  // namespace gpskill
