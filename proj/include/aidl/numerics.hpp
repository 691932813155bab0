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

#ifndef AIDL_NUMERICS_HPP
#define AIDL_NUMERICS_HPP

#include <Eigen/Core>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <string>

#include "aidl/errors.hpp"

namespace aidl {

template <typename Scalar>
using Matrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

namespace detail {
inline void require_same(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}
}  // namespace detail

/// Seedable uniform source backed by the standard 64-bit Mersenne Twister
/// (mt19937_64), whose output sequence is fixed by the C++ standard. Reals are
/// formed from the top 53 bits, so streams agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (-scale, scale); rejects the endpoint -scale.
  double symmetric(double scale) {
    for (;;) {
      double u = 2.0 * uniform() - 1.0;
      if (u != -1.0) return u * scale;
    }
  }

  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t x = engine_();
      if (x < limit) return x % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Fisher-Yates using Rng::below, so orderings are portable.
template <typename RandomIt>
void shuffle(RandomIt first, RandomIt last, Rng& rng) {
  auto n = last - first;
  for (auto i = n - 1; i > 0; --i) {
    auto j = static_cast<decltype(i)>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(first[i], first[j]);
  }
}

/// y = m * v, each output accumulated left to right over the columns.
template <typename Scalar>
Vector<Scalar> matvec(const Matrix<Scalar>& m, const Vector<Scalar>& v) {
  detail::require_same(m.cols(), v.size(), "matvec");
  Vector<Scalar> out(m.rows());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Scalar* row = m.data() + r * m.cols();
    Scalar acc(0);
    for (Eigen::Index c = 0; c < m.cols(); ++c) acc += row[c] * v[c];
    out[r] = acc;
  }
  return out;
}

template <std::floating_point Scalar>
Scalar sigmoid(Scalar x) {
  using std::exp;
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-x));
  Scalar e = exp(x);
  return e / (Scalar(1) + e);
}

template <std::floating_point Scalar>
Scalar tanh_(Scalar x) {
  using std::tanh;
  return tanh(x);
}

template <std::floating_point Scalar>
Scalar relu(Scalar x) {
  return x > Scalar(0) ? x : Scalar(0);
}

template <typename Derived>
auto sigmoid(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  return v.unaryExpr([](Scalar x) { return sigmoid(x); });
}

template <typename Derived>
auto tanh_(const Eigen::MatrixBase<Derived>& v) {
  return v.array().tanh().matrix();
}

template <typename Derived>
auto relu(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  return v.array().max(Scalar(0)).matrix();
}

template <typename Scalar>
Vector<Scalar> add(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  detail::require_same(a.size(), b.size(), "add");
  return a + b;
}

template <typename Scalar>
Vector<Scalar> sub(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  detail::require_same(a.size(), b.size(), "sub");
  return a - b;
}

template <typename Scalar>
Vector<Scalar> hadamard(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  detail::require_same(a.size(), b.size(), "hadamard");
  return a.cwiseProduct(b);
}

template <typename Scalar>
Vector<Scalar> scale(const Vector<Scalar>& a, Scalar s) {
  return a * s;
}

template <typename Scalar>
Matrix<Scalar> outer(const Vector<Scalar>& u, const Vector<Scalar>& v) {
  return u * v.transpose();
}

/// Entries uniform in (-scale, scale), drawn in row-major order.
template <typename Scalar = double>
Matrix<Scalar> rand_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                           Scalar scale) {
  if (!(scale > Scalar(0))) throw ConfigError("rand_matrix: scale must be > 0");
  Matrix<Scalar> m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = static_cast<Scalar>(rng.symmetric(static_cast<double>(scale)));
  return m;
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace aidl

#endif  // AIDL_NUMERICS_HPP
