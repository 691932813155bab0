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

#ifndef AIDL_LSTM_HPP
#define AIDL_LSTM_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aidl/numerics.hpp"

namespace aidl {

enum class CellActivation { tanh, relu };

/// Architecture of the single-layer network.
struct NetConfig {
  int hidden = 64;
  CellActivation activation = CellActivation::relu;
  /// Inverted-dropout rate on the final hidden state.
  double dropout = 0.5;
  int seq_len = 1;

  void validate() const {
    if (hidden < 1) throw ConfigError("hidden size must be >= 1");
    if (seq_len < 1) throw ConfigError("sequence length must be >= 1");
    if (!(dropout >= 0.0 && dropout < 1.0))
      throw ConfigError("dropout must lie in [0, 1)");
  }
};

inline std::string_view to_string(CellActivation act) {
  return act == CellActivation::tanh ? "tanh" : "relu";
}

inline std::optional<CellActivation> activation_from_string(std::string_view name) {
  if (name == "tanh") return CellActivation::tanh;
  if (name == "relu") return CellActivation::relu;
  return std::nullopt;
}

enum Gate : std::size_t { kInputGate = 0, kForgetGate = 1, kCandidate = 2, kOutputGate = 3 };
inline constexpr std::size_t kGateCount = 4;

template <typename Scalar>
struct GateParams {
  Matrix<Scalar> wx;  // H x D
  Matrix<Scalar> wh;  // H x H
  Vector<Scalar> b;   // H
};

/// Gate weights and biases for i, f, candidate and o, plus the sigmoid head.
/// Gradients use the same type.
template <typename Scalar>
struct LstmParams {
  std::array<GateParams<Scalar>, kGateCount> gates;
  Vector<Scalar> w_out;
  Scalar b_out = Scalar(0);

  static LstmParams zeros(Eigen::Index input, Eigen::Index hidden) {
    LstmParams p;
    for (auto& g : p.gates) {
      g.wx = Matrix<Scalar>::Zero(hidden, input);
      g.wh = Matrix<Scalar>::Zero(hidden, hidden);
      g.b = Vector<Scalar>::Zero(hidden);
    }
    p.w_out = Vector<Scalar>::Zero(hidden);
    p.b_out = Scalar(0);
    return p;
  }

  Eigen::Index input_size() const { return gates[0].wx.cols(); }
  Eigen::Index hidden_size() const { return gates[0].wx.rows(); }

  /// Every tensor as a flat span, in a fixed order matching block_names().
  std::vector<std::span<Scalar>> blocks() {
    std::vector<std::span<Scalar>> out;
    for (auto& g : gates) {
      out.emplace_back(g.wx.data(), static_cast<std::size_t>(g.wx.size()));
      out.emplace_back(g.wh.data(), static_cast<std::size_t>(g.wh.size()));
      out.emplace_back(g.b.data(), static_cast<std::size_t>(g.b.size()));
    }
    out.emplace_back(w_out.data(), static_cast<std::size_t>(w_out.size()));
    out.emplace_back(&b_out, 1);
    return out;
  }

  std::vector<std::span<const Scalar>> blocks() const {
    std::vector<std::span<const Scalar>> out;
    for (auto s : const_cast<LstmParams*>(this)->blocks()) out.emplace_back(s);
    return out;
  }

  static const std::array<std::string_view, 14>& block_names() {
    static const std::array<std::string_view, 14> names = {
        "W_xi", "W_hi", "b_i", "W_xf", "W_hf", "b_f", "W_xc", "W_hc",
        "b_c",  "W_xo", "W_ho", "b_o", "w_out", "b_out"};
    return names;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (auto s : blocks()) n += s.size();
    return n;
  }

  bool same_shape(const LstmParams& other) const {
    return input_size() == other.input_size() && hidden_size() == other.hidden_size() &&
           w_out.size() == other.w_out.size();
  }

  bool all_finite() const {
    for (auto s : blocks())
      for (Scalar v : s)
        if (!std::isfinite(v)) return false;
    return true;
  }

  bool operator==(const LstmParams& other) const {
    if (!same_shape(other)) return false;
    auto a = blocks();
    auto b = other.blocks();
    for (std::size_t k = 0; k < a.size(); ++k)
      for (std::size_t i = 0; i < a[k].size(); ++i)
        if (a[k][i] != b[k][i]) return false;
    return true;
  }
};

template <typename Scalar>
struct LstmState {
  Vector<Scalar> h;
  Vector<Scalar> c;

  static LstmState zeros(Eigen::Index hidden) {
    return {Vector<Scalar>::Zero(hidden), Vector<Scalar>::Zero(hidden)};
  }
};

template <typename Scalar>
struct GateActivations {
  Vector<Scalar> input;
  Vector<Scalar> forget;
  Vector<Scalar> output;
  Vector<Scalar> candidate;
  /// Pre-activation of the candidate, kept for the activation derivative.
  Vector<Scalar> candidate_pre;
};

template <typename Scalar>
struct CellOutput {
  LstmState<Scalar> state;
  GateActivations<Scalar> gates;
};

namespace detail {

template <typename Scalar>
Vector<Scalar> cell_activation(const Vector<Scalar>& v, CellActivation act) {
  return act == CellActivation::tanh ? Vector<Scalar>(tanh_(v)) : Vector<Scalar>(relu(v));
}

// Derivative expressed through the pre-activation z and its image a = act(z).
template <typename Scalar>
Vector<Scalar> cell_activation_grad(const Vector<Scalar>& z, const Vector<Scalar>& a,
                                    CellActivation act) {
  if (act == CellActivation::tanh) return (Scalar(1) - a.array().square()).matrix();
  return (z.array() > Scalar(0)).template cast<Scalar>().matrix();
}

template <typename Scalar>
Vector<Scalar> preactivation(const GateParams<Scalar>& g, const Vector<Scalar>& x,
                             const Vector<Scalar>& h) {
  Vector<Scalar> z = matvec(g.wx, x);
  z += matvec(g.wh, h);
  z += g.b;
  return z;
}

}  // namespace detail

/// One LSTM step:
///   i = sig(W_xi x + W_hi h + b_i),  f, o likewise,
///   g = act(W_xc x + W_hc h + b_c),
///   c' = f * c + i * g,  h' = o * act(c').
template <typename Scalar>
CellOutput<Scalar> cell_forward(const LstmParams<Scalar>& params, CellActivation act,
                                const Vector<Scalar>& x, const LstmState<Scalar>& prev) {
  detail::require_same(params.input_size(), x.size(), "cell_forward input");
  detail::require_same(params.hidden_size(), prev.h.size(), "cell_forward hidden");
  detail::require_same(params.hidden_size(), prev.c.size(), "cell_forward cell");

  CellOutput<Scalar> out;
  auto& g = out.gates;
  g.input = sigmoid(detail::preactivation(params.gates[kInputGate], x, prev.h));
  g.forget = sigmoid(detail::preactivation(params.gates[kForgetGate], x, prev.h));
  g.output = sigmoid(detail::preactivation(params.gates[kOutputGate], x, prev.h));
  g.candidate_pre = detail::preactivation(params.gates[kCandidate], x, prev.h);
  g.candidate = detail::cell_activation(g.candidate_pre, act);

  out.state.c = g.forget.cwiseProduct(prev.c) + g.input.cwiseProduct(g.candidate);
  out.state.h = g.output.cwiseProduct(detail::cell_activation(out.state.c, act));
  if (!out.state.c.allFinite() || !out.state.h.allFinite() || !g.candidate.allFinite())
    throw NonFiniteState("cell_forward produced a non-finite state");
  return out;
}

template <typename Scalar>
struct StepCache {
  Vector<Scalar> x;
  LstmState<Scalar> prev;
  GateActivations<Scalar> gates;
  LstmState<Scalar> next;
  Vector<Scalar> cell_out;  // act(c_t)
};

template <typename Scalar>
struct ForwardCache {
  CellActivation activation = CellActivation::relu;
  std::vector<StepCache<Scalar>> steps;
  std::optional<Vector<Scalar>> mask;
  Vector<Scalar> h_dropped;
  Scalar logit = Scalar(0);
};

template <typename Scalar>
struct ForwardResult {
  Scalar probability;
  ForwardCache<Scalar> cache;
};

/// Runs the sequence from a zero state, applies the dropout mask (if any) to
/// h_T and returns sig(w_out . h + b_out). A mask is passed only when training.
template <typename Scalar>
ForwardResult<Scalar> forward(const LstmParams<Scalar>& params, const NetConfig& config,
                              std::span<const Vector<Scalar>> sequence,
                              const Vector<Scalar>* dropout_mask = nullptr) {
  if (static_cast<int>(sequence.size()) != config.seq_len)
    throw DimensionMismatch("forward: sequence length " + std::to_string(sequence.size()) +
                            " vs configured " + std::to_string(config.seq_len));
  ForwardResult<Scalar> result;
  auto& cache = result.cache;
  cache.activation = config.activation;
  cache.steps.reserve(sequence.size());

  auto state = LstmState<Scalar>::zeros(params.hidden_size());
  for (const auto& x : sequence) {
    auto cell = cell_forward(params, config.activation, x, state);
    StepCache<Scalar> step;
    step.x = x;
    step.prev = std::move(state);
    step.cell_out = detail::cell_activation(cell.state.c, config.activation);
    step.gates = std::move(cell.gates);
    step.next = cell.state;
    state = std::move(cell.state);
    cache.steps.push_back(std::move(step));
  }

  if (dropout_mask) {
    detail::require_same(params.hidden_size(), dropout_mask->size(), "dropout mask");
    cache.mask = *dropout_mask;
    cache.h_dropped = state.h.cwiseProduct(*dropout_mask);
  } else {
    cache.h_dropped = state.h;
  }
  cache.logit = params.w_out.dot(cache.h_dropped) + params.b_out;
  result.probability = sigmoid(cache.logit);
  return result;
}

/// Single-record convenience: a length-1 sequence.
template <typename Scalar>
ForwardResult<Scalar> forward(const LstmParams<Scalar>& params, const NetConfig& config,
                              const Vector<Scalar>& x,
                              const Vector<Scalar>* dropout_mask = nullptr) {
  return forward(params, config, std::span<const Vector<Scalar>>(&x, 1), dropout_mask);
}

/// Inference probability (no dropout).
template <typename Scalar>
Scalar predict_proba(const LstmParams<Scalar>& params, const NetConfig& config,
                     std::span<const Vector<Scalar>> sequence) {
  return forward(params, config, sequence).probability;
}

/// Mask entries are 0 with probability p, otherwise 1/(1-p).
template <typename Scalar = double>
Vector<Scalar> dropout_mask(Rng& rng, Eigen::Index hidden, double rate) {
  Vector<Scalar> mask(hidden);
  const Scalar keep = Scalar(1) / Scalar(1 - rate);
  for (Eigen::Index k = 0; k < hidden; ++k)
    mask[k] = rng.uniform() < rate ? Scalar(0) : keep;
  return mask;
}

/// Exact gradient of the binary cross-entropy at (p, y) with respect to every
/// parameter, back-propagated through the mask and all timesteps.
template <typename Scalar>
LstmParams<Scalar> backward(const LstmParams<Scalar>& params, const NetConfig& config,
                            const ForwardCache<Scalar>& cache, int y) {
  const Eigen::Index H = params.hidden_size();
  const Eigen::Index D = params.input_size();
  if (static_cast<int>(cache.steps.size()) != config.seq_len || cache.steps.empty() ||
      cache.activation != config.activation || cache.h_dropped.size() != H)
    throw CacheMismatch("backward: cache does not match the network configuration");
  for (const auto& s : cache.steps)
    if (s.x.size() != D || s.next.h.size() != H)
      throw CacheMismatch("backward: cached step shapes do not match params");

  auto grad = LstmParams<Scalar>::zeros(D, H);
  const Scalar dlogit = sigmoid(cache.logit) - Scalar(y);
  grad.w_out = dlogit * cache.h_dropped;
  grad.b_out = dlogit;

  Vector<Scalar> dh = dlogit * params.w_out;
  if (cache.mask) dh = dh.cwiseProduct(*cache.mask);
  Vector<Scalar> dc_next = Vector<Scalar>::Zero(H);

  std::array<Vector<Scalar>, kGateCount> dz;
  for (auto step = cache.steps.rbegin(); step != cache.steps.rend(); ++step) {
    const auto& g = step->gates;
    const auto act_grad_c =
        detail::cell_activation_grad(step->next.c, step->cell_out, cache.activation);
    const auto act_grad_g =
        detail::cell_activation_grad(g.candidate_pre, g.candidate, cache.activation);

    Vector<Scalar> dc =
        dc_next + dh.cwiseProduct(g.output).cwiseProduct(act_grad_c);
    auto sig_grad = [](const Vector<Scalar>& s) {
      return (s.array() * (Scalar(1) - s.array())).matrix();
    };
    dz[kOutputGate] = dh.cwiseProduct(step->cell_out).cwiseProduct(sig_grad(g.output));
    dz[kForgetGate] = dc.cwiseProduct(step->prev.c).cwiseProduct(sig_grad(g.forget));
    dz[kInputGate] = dc.cwiseProduct(g.candidate).cwiseProduct(sig_grad(g.input));
    dz[kCandidate] = dc.cwiseProduct(g.input).cwiseProduct(act_grad_g);

    Vector<Scalar> dh_prev = Vector<Scalar>::Zero(H);
    for (std::size_t k = 0; k < kGateCount; ++k) {
      grad.gates[k].wx.noalias() += dz[k] * step->x.transpose();
      grad.gates[k].wh.noalias() += dz[k] * step->prev.h.transpose();
      grad.gates[k].b += dz[k];
      dh_prev.noalias() += params.gates[k].wh.transpose() * dz[k];
    }
    dh = std::move(dh_prev);
    dc_next = dc.cwiseProduct(g.forget);
  }
  return grad;
}

/// Uniform init in (-1/sqrt(fan_in), 1/sqrt(fan_in)) per weight matrix, where
/// fan_in is the matrix's column count; drawn gate by gate (i, f, c, o), W_x
/// before W_h, then w_out. Biases are zero except the forget gate's, which
/// starts at 1.
template <typename Scalar = double>
LstmParams<Scalar> init_params(Rng& rng, Eigen::Index input, Eigen::Index hidden) {
  if (input < 1 || hidden < 1) throw ConfigError("init_params: D and H must be >= 1");
  auto p = LstmParams<Scalar>::zeros(input, hidden);
  const Scalar sx = Scalar(1) / std::sqrt(Scalar(input));
  const Scalar sh = Scalar(1) / std::sqrt(Scalar(hidden));
  for (auto& g : p.gates) {
    g.wx = rand_matrix<Scalar>(rng, hidden, input, sx);
    g.wh = rand_matrix<Scalar>(rng, hidden, hidden, sh);
  }
  p.gates[kForgetGate].b.setOnes();
  p.w_out = rand_matrix<Scalar>(rng, hidden, 1, sh);
  return p;
}

}  // namespace aidl

#endif  // AIDL_LSTM_HPP
