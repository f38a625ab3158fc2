#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "phasegeo/dual.hpp"

namespace phasegeo {

// Sorted-index tables for antisymmetric arrays on charts of dimension <= 8.
struct BladeTable {
  std::vector<uint16_t> masks;        // masks of popcount p, increasing
  std::array<int16_t, 256> index{};   // mask -> position, -1 if not of degree p
  static const BladeTable& get(int n, int p);
};

inline int parity_above(unsigned mask, int a) {  // bits of mask strictly above a
  return std::popcount(mask >> (a + 1));
}
inline int parity_below(unsigned mask, int a) { return std::popcount(mask & ((1u << a) - 1u)); }

// Sign of e_I ^ e_J relative to the sorted blade e_{I|J}; 0 when I and J overlap.
inline int merge_sign(unsigned I, unsigned J) {
  if (I & J) return 0;
  int inv = 0;
  for (unsigned j = J; j; j &= j - 1) inv += parity_above(I, std::countr_zero(j));
  return (inv & 1) ? -1 : 1;
}

// Antisymmetric array of degree p on an n-dimensional chart, stored by its
// independent (sorted-index) components. The stored value is the full
// component at the sorted index tuple. `up` marks multivectors.
template <class S>
struct Blade {
  int n = 0, p = 0;
  bool up = false;
  std::vector<S> c;

  Blade() = default;
  Blade(int n_, int p_, bool up_ = false) : n(n_), p(p_), up(up_) {
    if (p < 0 || p > n) {
      p = -1;  // degree overflow yields the zero array
      return;
    }
    c.assign(BladeTable::get(n, p).masks.size(), S(0.0));
  }
  bool zero_degree_overflow() const { return p < 0; }
  const BladeTable& table() const { return BladeTable::get(n, p); }
  size_t size() const { return c.size(); }
  unsigned mask_at(size_t k) const { return table().masks[k]; }

  S get(unsigned mask) const {
    if (p < 0) return S(0.0);
    int k = table().index[mask];
    return k < 0 ? S(0.0) : c[k];
  }
  S& at(unsigned mask) {
    int k = table().index[mask];
    if (k < 0) throw std::out_of_range("blade mask");
    return c[k];
  }
  // Full component at an arbitrary index tuple.
  S operator()(std::initializer_list<int> idx) const {
    unsigned m = 0;
    int s = 1;
    for (int a : idx) {
      if (m & (1u << a)) return S(0.0);
      if (parity_above(m, a) & 1) s = -s;
      m |= 1u << a;
    }
    return s > 0 ? get(m) : -get(m);
  }
  // Accumulate coefficient * e_{i1} ^ ... ^ e_{ip} (any order, repeats vanish).
  void add(std::initializer_list<int> idx, const S& coef) {
    unsigned m = 0;
    int s = 1;
    for (int a : idx) {
      if (m & (1u << a)) return;
      if (parity_above(m, a) & 1) s = -s;
      m |= 1u << a;
    }
    if (s > 0) at(m) += coef;
    else at(m) -= coef;
  }

  Blade& operator+=(const Blade& o) {
    for (size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
    return *this;
  }
  Blade& operator-=(const Blade& o) {
    for (size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
    return *this;
  }
  Blade& operator*=(const S& s) {
    for (auto& x : c) x = x * s;
    return *this;
  }
  friend Blade operator+(Blade a, const Blade& b) { return a += b; }
  friend Blade operator-(Blade a, const Blade& b) { return a -= b; }
  friend Blade operator*(Blade a, const S& s) { return a *= s; }
  friend Blade operator*(const S& s, Blade a) { return a *= s; }
};

template <class S>
Blade<S> wedge(const Blade<S>& a, const Blade<S>& b) {
  Blade<S> r(a.n, a.p + b.p, a.up);
  if (r.p < 0) return r;
  for (size_t i = 0; i < a.size(); ++i) {
    unsigned I = a.mask_at(i);
    for (size_t j = 0; j < b.size(); ++j) {
      unsigned J = b.mask_at(j);
      int s = merge_sign(I, J);
      if (!s) continue;
      S t = a.c[i] * b.c[j];
      if (s > 0) r.at(I | J) += t;
      else r.at(I | J) -= t;
    }
  }
  return r;
}

// Insertion of a vector into the first slot of a form (or of a covector
// into the first slot of a multivector).
template <class S>
Blade<S> interior(const std::vector<S>& v, const Blade<S>& f) {
  Blade<S> r(f.n, f.p - 1, f.up);
  for (size_t k = 0; k < f.size(); ++k) {
    unsigned I = f.mask_at(k);
    for (unsigned t = I; t; t &= t - 1) {
      int a = std::countr_zero(t);
      S term = v[a] * f.c[k];
      if (parity_below(I, a) & 1) r.at(I & ~(1u << a)) -= term;
      else r.at(I & ~(1u << a)) += term;
    }
  }
  return r;
}

// Full pairing of a p-vector with a p-form: sum over sorted tuples.
template <class S>
S pairing(const Blade<S>& P, const Blade<S>& F) {
  S s(0.0);
  for (size_t k = 0; k < P.size(); ++k) s += P.c[k] * F.c[k];
  return s;
}

// Coordinate exterior derivative of a form whose coefficients carry first
// partials in the dual slots (slot a = chart coordinate a).
template <class T, int N>
Blade<T> exterior_derivative(const Blade<Dual<T, N>>& f) {
  Blade<T> r(f.n, f.p + 1, false);
  if (r.p < 0) return r;
  for (size_t k = 0; k < f.size(); ++k) {
    unsigned I = f.mask_at(k);
    for (int a = 0; a < f.n; ++a) {
      if (I & (1u << a)) continue;
      const T& d = f.c[k].d[a];
      if (parity_below(I, a) & 1) r.at(I | (1u << a)) -= d;
      else r.at(I | (1u << a)) += d;
    }
  }
  return r;
}

template <class T, int N>
Blade<T> values_of(const Blade<Dual<T, N>>& f) {
  Blade<T> r(f.n, f.p, f.up);
  for (size_t k = 0; k < f.size(); ++k) r.c[k] = f.c[k].v;
  return r;
}

template <class T, int N>
Blade<T> partial_of(const Blade<Dual<T, N>>& f, int a) {
  Blade<T> r(f.n, f.p, f.up);
  for (size_t k = 0; k < f.size(); ++k) r.c[k] = f.c[k].d[a];
  return r;
}

// Removes index c from the right of each blade.
template <class S>
Blade<S> strip_right(const Blade<S>& f, int c) {
  Blade<S> r(f.n, f.p - 1, f.up);
  for (size_t k = 0; k < f.size(); ++k) {
    unsigned I = f.mask_at(k);
    if (!(I & (1u << c))) continue;
    if (parity_above(I, c) & 1) r.at(I & ~(1u << c)) -= f.c[k];
    else r.at(I & ~(1u << c)) += f.c[k];
  }
  return r;
}

// Schouten-Nijenhuis bracket of multivector fields carrying first partials.
// Sign fixed so that [X,Y] is the Lie bracket and the metric Jacobi relation
// [Lambda,Lambda] = (2/c^2) gamma ^ Lambda holds.
template <class T, int N>
Blade<T> schouten(const Blade<Dual<T, N>>& P, const Blade<Dual<T, N>>& Q) {
  const int p = P.p, q = Q.p;
  const int eps = (((p - 1) * (q - 1)) & 1) ? -1 : 1;
  Blade<T> r(P.n, p + q - 1, true);
  if (r.p < 0) return r;
  Blade<T> Pv = values_of(P), Qv = values_of(Q);
  for (int c = 0; c < P.n; ++c) {
    Blade<T> a = wedge(strip_right(Pv, c), partial_of(Q, c));
    Blade<T> b = wedge(strip_right(Qv, c), partial_of(P, c));
    for (size_t k = 0; k < r.size(); ++k) r.c[k] += T(double(eps)) * a.c[k] - b.c[k];
  }
  return r;
}

template <class S>
double max_abs(const Blade<S>& f) {
  double m = 0;
  for (const auto& x : f.c) m = std::max(m, std::abs(value(x)));
  return m;
}

}  // namespace phasegeo
