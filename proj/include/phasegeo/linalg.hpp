#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "phasegeo/dual.hpp"

namespace phasegeo {

template <class S> using Vec3 = std::array<S, 3>;
template <class S> using Vec4 = std::array<S, 4>;
template <class S> using Mat4 = std::array<std::array<S, 4>, 4>;
template <class S> using Mat3 = std::array<std::array<S, 3>, 3>;
template <class S> using Mat43 = std::array<std::array<S, 3>, 4>;   // Gamma_lambda^i
template <class S> using Rank3 = std::array<Mat4<S>, 4>;            // K_lambda^nu_mu

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class S, size_t N>
std::array<std::array<S, N>, N> inverse(std::array<std::array<S, N>, N> a) {
  std::array<std::array<S, N>, N> inv{};
  for (size_t i = 0; i < N; ++i) inv[i][i] = S(1.0);
  for (size_t col = 0; col < N; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < N; ++r)
      if (std::abs(value(a[r][col])) > std::abs(value(a[piv][col]))) piv = r;
    if (std::abs(value(a[piv][col])) < 1e-300) throw SingularMatrix("singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    S p = S(1.0) / a[col][col];
    for (size_t k = 0; k < N; ++k) {
      a[col][k] = a[col][k] * p;
      inv[col][k] = inv[col][k] * p;
    }
    for (size_t r = 0; r < N; ++r) {
      if (r == col) continue;
      S f = a[r][col];
      if (value(f) == 0.0 && !is_dual<S>::value) continue;
      for (size_t k = 0; k < N; ++k) {
        a[r][k] = a[r][k] - f * a[col][k];
        inv[r][k] = inv[r][k] - f * inv[col][k];
      }
    }
  }
  return inv;
}

template <class S, size_t N>
S determinant(std::array<std::array<S, N>, N> a) {
  S det = S(1.0);
  for (size_t col = 0; col < N; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < N; ++r)
      if (std::abs(value(a[r][col])) > std::abs(value(a[piv][col]))) piv = r;
    if (value(a[piv][col]) == 0.0) return S(0.0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det = det * a[col][col];
    for (size_t r = col + 1; r < N; ++r) {
      S f = a[r][col] / a[col][col];
      for (size_t k = col; k < N; ++k) a[r][k] = a[r][k] - f * a[col][k];
    }
  }
  return det;
}

template <class S> Vec4<double> values(const Vec4<S>& v) {
  Vec4<double> r;
  for (int i = 0; i < 4; ++i) r[i] = value(v[i]);
  return r;
}

}  // namespace phasegeo
