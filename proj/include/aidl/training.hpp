// Copyright 2026 The aidl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AIDL_TRAINING_HPP
#define AIDL_TRAINING_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aidl/dataset.hpp"
#include "aidl/lstm.hpp"
#include "aidl/numerics.hpp"

namespace aidl {

/// Optimizer and loop settings. Defaults are lr 0.001, rho 0.9, decay 0.0.
struct TrainConfig {
  double learning_rate = 0.001;
  double rho = 0.9;
  double decay = 0.0;
  double epsilon = 1e-7;
  int epochs = 20;
  int batch_size = 128;
  std::uint64_t seed = 1;
  /// Global-norm gradient clip; 0 disables clipping.
  double clip_norm = 5.0;
  /// Stratified fraction of the training data held out for validation.
  double validation_fraction = 0.1;
  /// Stop after this many epochs without validation-loss improvement and
  /// restore the best parameters. 0 disables early stopping.
  int early_stopping_patience = 0;

  void validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
    if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("rho must lie in [0, 1)");
    if (!(decay >= 0.0)) throw ConfigError("decay must be >= 0");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (!(clip_norm >= 0.0)) throw ConfigError("clip norm must be >= 0");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
      throw ConfigError("validation fraction must lie in [0, 1)");
    if (early_stopping_patience < 0) throw ConfigError("patience must be >= 0");
    if (early_stopping_patience > 0 && validation_fraction == 0.0)
      throw ConfigError("early stopping needs a validation fraction > 0");
  }
};

inline constexpr double kProbabilityClip = 1e-12;

/// -[y ln p + (1-y) ln(1-p)] with p clipped to [1e-12, 1-1e-12].
template <typename Scalar>
Scalar bce_loss(Scalar p, int y) {
  using std::log;
  const Scalar lo = Scalar(kProbabilityClip);
  p = std::clamp(p, lo, Scalar(1) - lo);
  return y ? -log(p) : -log(Scalar(1) - p);
}

/// d(bce)/dp, valid inside the clip interval.
template <typename Scalar>
Scalar bce_loss_grad(Scalar p, int y) {
  return y ? -Scalar(1) / p : Scalar(1) / (Scalar(1) - p);
}

template <typename Scalar>
struct RmspropState {
  LstmParams<Scalar> mean_square;
  std::uint64_t step = 0;

  static RmspropState for_params(const LstmParams<Scalar>& params) {
    return {LstmParams<Scalar>::zeros(params.input_size(), params.hidden_size()), 0};
  }
};

/// Elementwise update on flat storage:
///   E <- rho E + (1 - rho) g^2,   theta <- theta - lr g / sqrt(E + eps).
template <typename Scalar>
void rmsprop_update(std::span<Scalar> theta, std::span<const Scalar> grad,
                    std::span<Scalar> mean_square, Scalar lr, Scalar rho, Scalar eps) {
  if (theta.size() != grad.size() || theta.size() != mean_square.size())
    throw ShapeMismatch("rmsprop_update: block sizes differ");
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const Scalar g = grad[i];
    mean_square[i] = rho * mean_square[i] + (Scalar(1) - rho) * g * g;
    theta[i] -= lr * g / std::sqrt(mean_square[i] + eps);
  }
}

/// One optimizer step over every parameter block. The step size is
/// lr / (1 + decay * t) with t the number of steps already taken.
template <typename Scalar>
void rmsprop_step(LstmParams<Scalar>& params, const LstmParams<Scalar>& grads,
                  RmspropState<Scalar>& state, const TrainConfig& cfg) {
  if (!params.same_shape(grads) || !params.same_shape(state.mean_square))
    throw ShapeMismatch("rmsprop_step: parameter, gradient and state shapes differ");
  const Scalar lr = Scalar(cfg.learning_rate / (1.0 + cfg.decay * static_cast<double>(state.step)));
  auto theta = params.blocks();
  auto g = grads.blocks();
  auto e = state.mean_square.blocks();
  for (std::size_t k = 0; k < theta.size(); ++k)
    rmsprop_update<Scalar>(theta[k], g[k], e[k], lr, Scalar(cfg.rho), Scalar(cfg.epsilon));
  ++state.step;
}

template <typename Scalar>
Scalar global_norm(const LstmParams<Scalar>& grads) {
  Scalar sq(0);
  for (auto block : grads.blocks())
    for (Scalar v : block) sq += v * v;
  return std::sqrt(sq);
}

/// Rescales in place when the global norm exceeds `max_norm`; returns the
/// norm before clipping.
template <typename Scalar>
Scalar clip_global_norm(LstmParams<Scalar>& grads, Scalar max_norm) {
  const Scalar norm = global_norm(grads);
  if (max_norm > Scalar(0) && norm > max_norm) {
    const Scalar factor = max_norm / norm;
    for (auto block : grads.blocks())
      for (Scalar& v : block) v *= factor;
  }
  return norm;
}

template <typename Scalar>
void accumulate(LstmParams<Scalar>& into, const LstmParams<Scalar>& g) {
  auto a = into.blocks();
  auto b = g.blocks();
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < a[k].size(); ++i) a[k][i] += b[k][i];
}

template <typename Scalar>
void scale_in_place(LstmParams<Scalar>& p, Scalar s) {
  for (auto block : p.blocks())
    for (Scalar& v : block) v *= s;
}

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> val_loss;
  std::optional<double> val_accuracy;
  std::uint64_t steps = 0;
  double seconds = 0.0;
};

struct TrainTrace {
  std::vector<EpochStats> epochs;
  std::uint64_t total_steps = 0;
  bool stopped_early = false;
};

template <typename Scalar>
struct TrainResult {
  LstmParams<Scalar> params;
  TrainTrace trace;
};

/// Training/validation partition, stratified by target. Indices are returned
/// in ascending order.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

inline Split stratified_split(std::span<const FeatureVector> data, double holdout, Rng& rng) {
  Split split;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data[i].y == cls) idx.push_back(i);
    shuffle(idx.begin(), idx.end(), rng);
    const auto n_hold = static_cast<std::size_t>(std::floor(holdout * static_cast<double>(idx.size())));
    split.validation.insert(split.validation.end(), idx.begin(), idx.begin() + n_hold);
    split.train.insert(split.train.end(), idx.begin() + n_hold, idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

namespace detail {

template <typename Scalar>
std::pair<double, double> mean_loss_accuracy(const LstmParams<Scalar>& params,
                                             const NetConfig& net,
                                             std::span<const FeatureVector> data,
                                             std::span<const std::size_t> indices) {
  double loss = 0.0;
  std::size_t correct = 0;
  for (auto i : indices) {
    const Vector<Scalar> x = data[i].x.template cast<Scalar>();
    const Scalar p = forward(params, net, x).probability;
    loss += static_cast<double>(bce_loss(p, data[i].y));
    correct += static_cast<std::size_t>((p > Scalar(0.5) ? 1 : 0) == data[i].y);
  }
  const double n = static_cast<double>(indices.size());
  return {loss / n, static_cast<double>(correct) / n};
}

}  // namespace detail

/// Minibatch RMSprop on averaged BCE gradients with global-norm clipping.
/// Each record is a length-1 sequence, so `net.seq_len` must be 1.
/// Every random draw (split, shuffles, dropout masks) comes from one Rng
/// seeded with `cfg.seed`.
template <typename Scalar = double>
TrainResult<Scalar> train(std::span<const FeatureVector> dataset, const NetConfig& net,
                          const TrainConfig& cfg) {
  net.validate();
  cfg.validate();
  if (dataset.empty()) throw EmptyDatasetError();
  if (net.seq_len != 1)
    throw ConfigError("record-level training uses sequences of length 1");

  Rng rng(cfg.seed);
  const auto dim = dataset.front().x.size();
  for (const auto& fv : dataset)
    detail::require_same(dim, fv.x.size(), "train: input width");

  Split split;
  if (cfg.validation_fraction > 0.0) {
    split = stratified_split(dataset, cfg.validation_fraction, rng);
  } else {
    split.train.resize(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) split.train[i] = i;
  }
  if (split.train.empty()) throw EmptyDatasetError();

  TrainResult<Scalar> result{init_params<Scalar>(rng, dim, net.hidden), {}};
  auto& params = result.params;
  auto state = RmspropState<Scalar>::for_params(params);

  std::optional<LstmParams<Scalar>> best;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;

  std::vector<std::size_t> order = split.train;
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::uint64_t steps = 0;

    for (std::size_t begin = 0; begin < order.size(); begin += batch) {
      const std::size_t end = std::min(order.size(), begin + batch);
      auto grad = LstmParams<Scalar>::zeros(dim, net.hidden);
      for (std::size_t k = begin; k < end; ++k) {
        const auto& sample = dataset[order[k]];
        const Vector<Scalar> x = sample.x.template cast<Scalar>();
        ForwardResult<Scalar> fwd;
        try {
          if (net.dropout > 0.0) {
            const auto mask = dropout_mask<Scalar>(rng, net.hidden, net.dropout);
            fwd = forward(params, net, x, &mask);
          } else {
            fwd = forward(params, net, x);
          }
        } catch (const NonFiniteState& e) {
          throw DivergenceError(std::string("epoch ") + std::to_string(epoch) + ": " + e.what());
        }
        loss_sum += static_cast<double>(bce_loss(fwd.probability, sample.y));
        accumulate(grad, backward(params, net, fwd.cache, sample.y));
      }
      scale_in_place(grad, Scalar(1) / Scalar(end - begin));
      clip_global_norm(grad, Scalar(cfg.clip_norm));
      rmsprop_step(params, grad, state, cfg);
      ++steps;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = loss_sum / static_cast<double>(order.size());
    stats.steps = steps;
    if (!std::isfinite(stats.loss) || !params.all_finite())
      throw DivergenceError("epoch " + std::to_string(epoch) + ": training loss is not finite");
    try {
      stats.train_accuracy = detail::mean_loss_accuracy(params, net, dataset, split.train).second;
      if (!split.validation.empty()) {
        auto [vl, va] = detail::mean_loss_accuracy(params, net, dataset, split.validation);
        stats.val_loss = vl;
        stats.val_accuracy = va;
      }
    } catch (const NonFiniteState& e) {
      throw DivergenceError(std::string("epoch ") + std::to_string(epoch) + ": " + e.what());
    }
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.total_steps += steps;
    result.trace.epochs.push_back(stats);

    if (cfg.early_stopping_patience > 0 && stats.val_loss) {
      if (*stats.val_loss < best_val) {
        best_val = *stats.val_loss;
        best = params;
        since_best = 0;
      } else if (++since_best >= cfg.early_stopping_patience) {
        result.trace.stopped_early = true;
        break;
      }
    }
  }
  if (best) params = *best;
  return result;
}

// Gradient checking ----------------------------------------------------------

struct GradCheckOptions {
  std::uint64_t seed = 1;
  int input = 8;
  int hidden = 5;
  int seq_len = 3;
  CellActivation activation = CellActivation::tanh;
  double dropout = 0.5;
  double step = 1e-5;
  /// Test hook: perturb one analytic gradient entry to exercise the failure path.
  bool corrupt_backward = false;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_block;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates = 0;
  int attempts = 1;

  bool passed(double tolerance = 1e-4) const { return max_relative_error < tolerance; }
};

/// |a - n| / max(|a|, |n|, 1e-8); zero when both sides are zero.
inline double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

namespace detail {

// True when every relu pre-activation sits at least `margin` away from the kink.
template <typename Scalar>
bool away_from_kink(const ForwardCache<Scalar>& cache, Scalar margin) {
  for (const auto& s : cache.steps) {
    if ((s.gates.candidate_pre.array().abs() <= margin).any()) return false;
    if ((s.next.c.array().abs() <= margin).any()) return false;
  }
  return true;
}

}  // namespace detail

/// Compares backward() against central differences on one random instance.
///
/// Instances are redrawn until they are resolvable by central differences at
/// the configured step: for relu cells every candidate pre-activation and cell
/// state must be more than 1e-3 from the kink, and no finite-difference
/// derivative may fall in (0, 1e-6), where roundoff of the loss (about 1e-11
/// after division by 2h) exceeds the 1e-4 relative tolerance. Both conditions
/// depend on the forward pass only.
inline GradCheckReport grad_check(const GradCheckOptions& opt) {
  if (opt.input < 1 || opt.hidden < 1 || opt.seq_len < 1)
    throw ConfigError("grad_check: sizes must be >= 1");
  if (static_cast<long>(opt.input) * opt.hidden > 10000)
    throw ConfigError("grad_check: D*H must not exceed 10^4");
  constexpr double kKinkMargin = 1e-3;
  constexpr double kResolvable = 1e-6;
  constexpr int kMaxAttempts = 1000;

  NetConfig net;
  net.hidden = opt.hidden;
  net.activation = opt.activation;
  net.dropout = opt.dropout;
  net.seq_len = opt.seq_len;
  net.validate();

  Rng rng(opt.seed);
  GradCheckReport report;
  LstmParams<double> params;
  std::vector<VectorXd> seq;
  std::optional<VectorXd> mask;
  int y = 0;

  auto loss_at = [&](const LstmParams<double>& p) {
    return bce_loss(forward<double>(p, net, seq, mask ? &*mask : nullptr).probability, y);
  };
  // Numeric derivatives, flattened in blocks() order.
  auto numeric_gradient = [&] {
    std::vector<double> out;
    auto perturbed = params;
    for (auto block : perturbed.blocks()) {
      for (auto& v : block) {
        const double orig = v;
        v = orig + opt.step;
        const double up = loss_at(perturbed);
        v = orig - opt.step;
        const double down = loss_at(perturbed);
        v = orig;
        out.push_back((up - down) / (2.0 * opt.step));
      }
    }
    return out;
  };

  std::vector<double> numeric;
  for (int attempt = 1;; ++attempt) {
    if (attempt > kMaxAttempts)
      throw Error("grad_check: no resolvable instance in " + std::to_string(kMaxAttempts) +
                  " draws");
    params = init_params<double>(rng, opt.input, opt.hidden);
    // Random (not constant) biases so every gate path carries gradient.
    for (auto& g : params.gates) g.b = rand_matrix<double>(rng, opt.hidden, 1, 0.5);
    params.b_out = rng.symmetric(0.5);
    seq.clear();
    for (int t = 0; t < opt.seq_len; ++t)
      seq.push_back(rand_matrix<double>(rng, opt.input, 1, 1.0));
    mask.reset();
    if (opt.dropout > 0.0) mask = dropout_mask<double>(rng, opt.hidden, opt.dropout);
    y = rng.uniform() < 0.5 ? 0 : 1;
    report.attempts = attempt;

    if (opt.activation == CellActivation::relu) {
      auto fwd = forward<double>(params, net, seq, mask ? &*mask : nullptr);
      if (!detail::away_from_kink(fwd.cache, kKinkMargin)) continue;
    }
    numeric = numeric_gradient();
    const bool resolvable = std::none_of(numeric.begin(), numeric.end(), [](double n) {
      return n != 0.0 && std::abs(n) < kResolvable;
    });
    if (resolvable) break;
  }

  auto fwd = forward<double>(params, net, seq, mask ? &*mask : nullptr);
  auto analytic = backward(params, net, fwd.cache, y);
  if (opt.corrupt_backward) analytic.gates[kInputGate].wx(0, 0) += 1e-2;

  const auto& names = LstmParams<double>::block_names();
  auto ab = analytic.blocks();
  std::size_t flat = 0;
  for (std::size_t k = 0; k < ab.size(); ++k) {
    for (std::size_t i = 0; i < ab[k].size(); ++i, ++flat) {
      const double err = relative_error(ab[k][i], numeric[flat]);
      ++report.coordinates;
      if (report.worst_block.empty() || err > report.max_relative_error) {
        report.max_relative_error = err;
        report.worst_block = std::string(names[k]);
        report.worst_index = i;
        report.worst_analytic = ab[k][i];
        report.worst_numeric = numeric[flat];
      }
    }
  }
  return report;
}

}  // namespace aidl

#endif  // AIDL_TRAINING_HPP
