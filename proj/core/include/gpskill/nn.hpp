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

#ifndef GPSKILL_NN_HPP_
#define GPSKILL_NN_HPP_

#include <cstddef>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace gpskill {

enum class Activation { kRelu, kTanh, kLinear };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

template <typename Scalar>
struct BasicDenseLayer {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Mat weights;  // out x in
  Vec bias;     // out
  Activation activation = Activation::kLinear;
};

template <typename Scalar>
struct BasicGradients {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  std::vector<Mat> d_weights;
  std::vector<Vec> d_bias;
};

// Activations recorded by a forward pass for use in backward().
template <typename Scalar>
struct BasicForwardCache {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<Mat> inputs;  // input to each layer
  std::vector<Mat> outputs; // post-activation output of each layer
};

// Fully connected feed-forward network. Batches are column-major: one
// sample per column.
template <typename Scalar>
class BasicNetwork {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Layer = BasicDenseLayer<Scalar>;
  using Gradients = BasicGradients<Scalar>;
  using Cache = BasicForwardCache<Scalar>;

  BasicNetwork() = default;
  // sizes = {input, hidden..., output}. Weights and biases are drawn
  // uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  BasicNetwork(const std::vector<int>& sizes, Activation hidden, Activation output,
               std::mt19937_64& rng);
  // Throws InvalidArgument when adjacent layer shapes do not chain.
  explicit BasicNetwork(std::vector<Layer> layers);

  int input_size() const;
  int output_size() const;
  std::size_t parameter_count() const;
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }

  Vec forward(const Vec& x) const;
  Mat forward_batch(const Mat& x) const;
  Mat forward_batch(const Mat& x, Cache& cache) const;

  // Gradients of a scalar loss given dL/d(output) for the cached batch.
  // When d_input is non-null it receives dL/d(input).
  Gradients backward(const Cache& cache, const Mat& d_output, Mat* d_input = nullptr) const;

  Vec flat_parameters() const;
  void set_flat_parameters(const Vec& flat);
  Vec flatten(const Gradients& g) const;
  Gradients zero_gradients() const;

  template <typename Other>
  BasicNetwork<Other> cast() const {
    std::vector<BasicDenseLayer<Other>> out;
    out.reserve(layers_.size());
    for (const auto& l : layers_) {
      out.push_back({l.weights.template cast<Other>(), l.bias.template cast<Other>(), l.activation});
    }
    return BasicNetwork<Other>(std::move(out));
  }

 private:
  std::vector<Layer> layers_;
};

using Network = BasicNetwork<float>;
using NetworkD = BasicNetwork<double>;

// Adam optimizer state.
template <typename Scalar>
class BasicAdam {
 public:
  BasicAdam() = default;
  BasicAdam(const BasicNetwork<Scalar>& net, double learning_rate, double beta1 = 0.9,
            double beta2 = 0.999, double epsilon = 1e-8);

  void step(BasicNetwork<Scalar>& net, const BasicGradients<Scalar>& grads);
  long long step_count() const { return t_; }
  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long long t_ = 0;
  BasicGradients<Scalar> m_;
  BasicGradients<Scalar> v_;
};

using Adam = BasicAdam<float>;

// One mean-squared-error step on a batch (columns are samples). Returns the
// loss before the update. Throws NumericFailure on a non-finite loss.
template <typename Scalar>
Scalar train_step(BasicNetwork<Scalar>& net, const typename BasicNetwork<Scalar>::Mat& x,
                  const typename BasicNetwork<Scalar>::Mat& target, BasicAdam<Scalar>& opt);

// Mean-squared error averaged over all output elements.
template <typename Scalar>
Scalar mse_loss(const BasicNetwork<Scalar>& net, const typename BasicNetwork<Scalar>::Mat& x,
                const typename BasicNetwork<Scalar>::Mat& target);

inline constexpr float kLogStdMin = -5.0f;
inline constexpr float kLogStdMax = 2.0f;

struct SquashedGaussianSample {
  Eigen::VectorXf action;    // tanh(pre_tanh), strictly inside (-1, 1)
  Eigen::VectorXf pre_tanh;  // mean + std * noise
  Eigen::VectorXf noise;     // standard normal draw
  float log_prob = 0.0f;     // log density of action
};

// log(1 - tanh(u)^2), evaluated stably.
template <typename Scalar>
Scalar log1m_tanh_sq(Scalar u);

// Log density of the tanh-squashed diagonal Gaussian at pre-tanh value u.
float squashed_log_prob(const Eigen::VectorXf& mean, const Eigen::VectorXf& log_std,
                        const Eigen::VectorXf& pre_tanh);

// Samples a tanh-squashed Gaussian action. log_std is clamped to
// [kLogStdMin, kLogStdMax] first.
SquashedGaussianSample gaussian_policy_sample(const Eigen::VectorXf& mean,
                                              const Eigen::VectorXf& log_std,
                                              std::mt19937_64& rng);

}  // namespace gpskill

#endif  // GPSKILL_NN_HPP_
