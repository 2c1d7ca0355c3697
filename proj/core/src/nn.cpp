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

#include "gpskill/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gpskill/errors.hpp"

namespace gpskill {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kLinear:
      return "linear";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "linear") return Activation::kLinear;
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

namespace {

template <typename Mat>
void apply_activation(Mat& z, Activation a) {
  switch (a) {
    case Activation::kRelu:
      z = z.cwiseMax(typename Mat::Scalar(0));
      break;
    case Activation::kTanh:
      z = z.array().tanh().matrix();
      break;
    case Activation::kLinear:
      break;
  }
}

// Multiplies d by the activation derivative expressed through the output.
template <typename Mat>
void apply_activation_grad(Mat& d, const Mat& out, Activation a) {
  using S = typename Mat::Scalar;
  switch (a) {
    case Activation::kRelu:
      d = (out.array() > S(0)).select(d, S(0));
      break;
    case Activation::kTanh:
      d = (d.array() * (S(1) - out.array().square())).matrix();
      break;
    case Activation::kLinear:
      break;
  }
}

}  // namespace

template <typename Scalar>
BasicNetwork<Scalar>::BasicNetwork(const std::vector<int>& sizes, Activation hidden,
                                   Activation output, std::mt19937_64& rng) {
  if (sizes.size() < 2) throw InvalidArgument("network needs input and output sizes");
  for (int s : sizes) {
    if (s <= 0) throw InvalidArgument("layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    Layer layer;
    layer.weights.resize(out, in);
    layer.bias.resize(out);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weights(r, c) = static_cast<Scalar>(u(rng));
    }
    for (int r = 0; r < out; ++r) layer.bias[r] = static_cast<Scalar>(u(rng));
    layer.activation = (l + 2 == sizes.size()) ? output : hidden;
    layers_.push_back(std::move(layer));
  }
}

template <typename Scalar>
BasicNetwork<Scalar>::BasicNetwork(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw InvalidArgument("network needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].bias.size() != layers_[l].weights.rows()) {
      throw InvalidArgument("layer bias does not match weight rows");
    }
    if (l > 0 && layers_[l].weights.cols() != layers_[l - 1].weights.rows()) {
      throw InvalidArgument("adjacent layer dimensions are incompatible");
    }
  }
}

template <typename Scalar>
int BasicNetwork<Scalar>::input_size() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().weights.cols());
}

template <typename Scalar>
int BasicNetwork<Scalar>::output_size() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weights.rows());
}

template <typename Scalar>
std::size_t BasicNetwork<Scalar>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
  return n;
}

template <typename Scalar>
typename BasicNetwork<Scalar>::Vec BasicNetwork<Scalar>::forward(const Vec& x) const {
  if (x.size() != input_size()) throw InvalidArgument("network input has the wrong dimension");
  Vec h = x;
  for (const auto& l : layers_) {
    Vec z = l.weights * h + l.bias;
    apply_activation(z, l.activation);
    h = std::move(z);
  }
  return h;
}

template <typename Scalar>
typename BasicNetwork<Scalar>::Mat BasicNetwork<Scalar>::forward_batch(const Mat& x) const {
  if (x.rows() != input_size()) throw InvalidArgument("network input has the wrong dimension");
  Mat h = x;
  for (const auto& l : layers_) {
    Mat z = l.weights * h;
    z.colwise() += l.bias;
    apply_activation(z, l.activation);
    h = std::move(z);
  }
  return h;
}

template <typename Scalar>
typename BasicNetwork<Scalar>::Mat BasicNetwork<Scalar>::forward_batch(const Mat& x,
                                                                        Cache& cache) const {
  if (x.rows() != input_size()) throw InvalidArgument("network input has the wrong dimension");
  cache.inputs.clear();
  cache.outputs.clear();
  Mat h = x;
  for (const auto& l : layers_) {
    cache.inputs.push_back(h);
    Mat z = l.weights * h;
    z.colwise() += l.bias;
    apply_activation(z, l.activation);
    cache.outputs.push_back(z);
    h = std::move(z);
  }
  return h;
}

template <typename Scalar>
typename BasicNetwork<Scalar>::Gradients BasicNetwork<Scalar>::backward(const Cache& cache,
                                                                         const Mat& d_output,
                                                                         Mat* d_input) const {
  if (cache.inputs.size() != layers_.size()) throw InvalidArgument("backward: cache mismatch");
  Gradients g;
  g.d_weights.resize(layers_.size());
  g.d_bias.resize(layers_.size());
  Mat d = d_output;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    const auto& l = layers_[k];
    apply_activation_grad(d, cache.outputs[k], l.activation);
    g.d_weights[k] = d * cache.inputs[k].transpose();
    g.d_bias[k] = d.rowwise().sum();
    if (k > 0 || d_input) d = l.weights.transpose() * d;
  }
  if (d_input) *d_input = std::move(d);
  return g;
}

template <typename Scalar>
typename BasicNetwork<Scalar>::Vec BasicNetwork<Scalar>::flat_parameters() const {
  Vec v(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index o = 0;
  for (const auto& l : layers_) {
    v.segment(o, l.weights.size()) = Eigen::Map<const Vec>(l.weights.data(), l.weights.size());
    o += l.weights.size();
    v.segment(o, l.bias.size()) = l.bias;
    o += l.bias.size();
  }
  return v;
}

template <typename Scalar>
void BasicNetwork<Scalar>::set_flat_parameters(const Vec& flat) {
  if (flat.size() != static_cast<Eigen::Index>(parameter_count())) {
    throw InvalidArgument("flat parameter vector has the wrong length");
  }
  Eigen::Index o = 0;
  for (auto& l : layers_) {
    Eigen::Map<Vec>(l.weights.data(), l.weights.size()) = flat.segment(o, l.weights.size());
    o += l.weights.size();
    l.bias = flat.segment(o, l.bias.size());
    o += l.bias.size();
  }
}

template <typename Scalar>
typename BasicNetwork<Scalar>::Vec BasicNetwork<Scalar>::flatten(const Gradients& g) const {
  Vec v(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index o = 0;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    v.segment(o, g.d_weights[k].size()) =
        Eigen::Map<const Vec>(g.d_weights[k].data(), g.d_weights[k].size());
    o += g.d_weights[k].size();
    v.segment(o, g.d_bias[k].size()) = g.d_bias[k];
    o += g.d_bias[k].size();
  }
  return v;
}

template <typename Scalar>
typename BasicNetwork<Scalar>::Gradients BasicNetwork<Scalar>::zero_gradients() const {
  Gradients g;
  for (const auto& l : layers_) {
    g.d_weights.push_back(Mat::Zero(l.weights.rows(), l.weights.cols()));
    g.d_bias.push_back(Vec::Zero(l.bias.size()));
  }
  return g;
}

template <typename Scalar>
BasicAdam<Scalar>::BasicAdam(const BasicNetwork<Scalar>& net, double learning_rate, double beta1,
                             double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  m_ = net.zero_gradients();
  v_ = net.zero_gradients();
}

template <typename Scalar>
void BasicAdam<Scalar>::step(BasicNetwork<Scalar>& net, const BasicGradients<Scalar>& grads) {
  auto& layers = net.mutable_layers();
  if (m_.d_weights.size() != layers.size()) {
    m_ = net.zero_gradients();
    v_ = net.zero_gradients();
  }
  ++t_;
  const Scalar b1 = static_cast<Scalar>(beta1_);
  const Scalar b2 = static_cast<Scalar>(beta2_);
  const Scalar c1 = static_cast<Scalar>(1.0 - std::pow(beta1_, static_cast<double>(t_)));
  const Scalar c2 = static_cast<Scalar>(1.0 - std::pow(beta2_, static_cast<double>(t_)));
  const Scalar lr = static_cast<Scalar>(lr_);
  const Scalar eps = static_cast<Scalar>(eps_);
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = b1 * m + (Scalar(1) - b1) * g;
    v = (b2 * v.array() + (Scalar(1) - b2) * g.array().square()).matrix();
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (std::size_t k = 0; k < layers.size(); ++k) {
    update(layers[k].weights, m_.d_weights[k], v_.d_weights[k], grads.d_weights[k]);
    update(layers[k].bias, m_.d_bias[k], v_.d_bias[k], grads.d_bias[k]);
  }
}

template <typename Scalar>
Scalar mse_loss(const BasicNetwork<Scalar>& net, const typename BasicNetwork<Scalar>::Mat& x,
                const typename BasicNetwork<Scalar>::Mat& target) {
  const auto y = net.forward_batch(x);
  if (y.rows() != target.rows() || y.cols() != target.cols()) {
    throw InvalidArgument("mse_loss: target shape mismatch");
  }
  return (y - target).squaredNorm() / static_cast<Scalar>(y.size());
}

template <typename Scalar>
Scalar train_step(BasicNetwork<Scalar>& net, const typename BasicNetwork<Scalar>::Mat& x,
                  const typename BasicNetwork<Scalar>::Mat& target, BasicAdam<Scalar>& opt) {
  if (x.cols() == 0) throw InvalidArgument("train_step: empty batch");
  typename BasicNetwork<Scalar>::Cache cache;
  const auto y = net.forward_batch(x, cache);
  if (y.rows() != target.rows() || y.cols() != target.cols()) {
    throw InvalidArgument("train_step: target shape mismatch");
  }
  const auto diff = (y - target).eval();
  const Scalar loss = diff.squaredNorm() / static_cast<Scalar>(diff.size());
  if (!std::isfinite(static_cast<double>(loss))) throw NumericFailure("non-finite training loss");
  const auto d_out = (diff * (Scalar(2) / static_cast<Scalar>(diff.size()))).eval();
  opt.step(net, net.backward(cache, d_out));
  return loss;
}

template <typename Scalar>
Scalar log1m_tanh_sq(Scalar u) {
  // log(1 - tanh(u)^2) = 2 (log 2 - u - softplus(-2u)), written for |u|.
  const Scalar a = std::abs(u);
  return Scalar(2) * (static_cast<Scalar>(std::numbers::ln2) - a - std::log1p(std::exp(Scalar(-2) * a)));
}

float squashed_log_prob(const Eigen::VectorXf& mean, const Eigen::VectorXf& log_std,
                        const Eigen::VectorXf& pre_tanh) {
  double lp = 0.0;
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double ls = std::clamp(static_cast<double>(log_std[i]), static_cast<double>(kLogStdMin),
                                 static_cast<double>(kLogStdMax));
    const double eps = (pre_tanh[i] - mean[i]) / std::exp(ls);
    lp += -0.5 * eps * eps - ls - 0.5 * std::log(2.0 * std::numbers::pi);
    lp -= log1m_tanh_sq(static_cast<double>(pre_tanh[i]));
  }
  return static_cast<float>(lp);
}

SquashedGaussianSample gaussian_policy_sample(const Eigen::VectorXf& mean,
                                              const Eigen::VectorXf& log_std,
                                              std::mt19937_64& rng) {
  if (mean.size() != log_std.size()) throw InvalidArgument("mean and log_std differ in size");
  std::normal_distribution<float> normal(0.0f, 1.0f);
  SquashedGaussianSample s;
  const Eigen::Index d = mean.size();
  s.noise.resize(d);
  s.pre_tanh.resize(d);
  s.action.resize(d);
  const float bound = std::nextafter(1.0f, 0.0f);
  double lp = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const float ls = std::clamp(log_std[i], kLogStdMin, kLogStdMax);
    const float eps = normal(rng);
    const float u = mean[i] + std::exp(ls) * eps;
    s.noise[i] = eps;
    s.pre_tanh[i] = u;
    s.action[i] = std::clamp(std::tanh(u), -bound, bound);
    lp += -0.5 * static_cast<double>(eps) * eps - ls - 0.5 * std::log(2.0 * std::numbers::pi);
    lp -= log1m_tanh_sq(static_cast<double>(u));
  }
  s.log_prob = static_cast<float>(lp);
  return s;
}

template class BasicNetwork<float>;
template class BasicNetwork<double>;
template class BasicAdam<float>;
template class BasicAdam<double>;
template float train_step<float>(Network&, const Network::Mat&, const Network::Mat&, Adam&);
template double train_step<double>(NetworkD&, const NetworkD::Mat&, const NetworkD::Mat&,
                                   BasicAdam<double>&);
template float mse_loss<float>(const Network&, const Network::Mat&, const Network::Mat&);
template double mse_loss<double>(const NetworkD&, const NetworkD::Mat&, const NetworkD::Mat&);
template float log1m_tanh_sq<float>(float);
template double log1m_tanh_sq<double>(double);

}  // namespace gpskill
