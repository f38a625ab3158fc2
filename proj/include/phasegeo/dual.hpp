#pragma once

#include <array>
#include <cmath>
#include <type_traits>

namespace phasegeo {

// Forward-mode dual number with N directional slots. Nesting Dual<Dual<double,N>,N>
// yields exact second partials.
template <class T, int N>
struct Dual {
  T v{};
  std::array<T, N> d{};

  Dual() = default;
  Dual(double x) : v(x) {}  // NOLINT: implicit promotion from constants is intended
  Dual(const T& x, const std::array<T, N>& dx) : v(x), d(dx) {}
  template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  Dual(const T& x) : v(x) {}  // NOLINT

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    T inv = T(1.0) / o.v;
    T q = v * inv;
    for (int i = 0; i < N; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
  Dual operator-() const {
    Dual r;
    r.v = -v;
    for (int i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }
};

template <class T, int N> Dual<T, N> operator+(Dual<T, N> a, const Dual<T, N>& b) { return a += b; }
template <class T, int N> Dual<T, N> operator-(Dual<T, N> a, const Dual<T, N>& b) { return a -= b; }
template <class T, int N> Dual<T, N> operator*(Dual<T, N> a, const Dual<T, N>& b) { return a *= b; }
template <class T, int N> Dual<T, N> operator/(Dual<T, N> a, const Dual<T, N>& b) { return a /= b; }

template <class T, int N> Dual<T, N> operator+(Dual<T, N> a, double b) { a.v += b; return a; }
template <class T, int N> Dual<T, N> operator+(double b, Dual<T, N> a) { a.v += b; return a; }
template <class T, int N> Dual<T, N> operator-(Dual<T, N> a, double b) { a.v -= b; return a; }
template <class T, int N> Dual<T, N> operator-(double b, const Dual<T, N>& a) { return Dual<T, N>(b) - a; }
template <class T, int N> Dual<T, N> operator*(Dual<T, N> a, double b) {
  a.v *= b;
  for (auto& x : a.d) x *= b;
  return a;
}
template <class T, int N> Dual<T, N> operator*(double b, Dual<T, N> a) { return a * b; }
template <class T, int N> Dual<T, N> operator/(Dual<T, N> a, double b) { return a * (1.0 / b); }
template <class T, int N> Dual<T, N> operator/(double b, const Dual<T, N>& a) { return Dual<T, N>(b) / a; }

template <class T> struct is_dual : std::false_type {};
template <class T, int N> struct is_dual<Dual<T, N>> : std::true_type {};

inline double value(double x) { return x; }
template <class T, int N> double value(const Dual<T, N>& x) { return value(x.v); }

template <class T, int N> bool operator<(const Dual<T, N>& a, const Dual<T, N>& b) { return value(a) < value(b); }
template <class T, int N> bool operator>(const Dual<T, N>& a, const Dual<T, N>& b) { return value(a) > value(b); }
template <class T, int N> bool operator<(const Dual<T, N>& a, double b) { return value(a) < b; }
template <class T, int N> bool operator>(const Dual<T, N>& a, double b) { return value(a) > b; }

using std::sqrt;
using std::sin;
using std::cos;
using std::abs;

template <class T, int N>
Dual<T, N> sqrt(const Dual<T, N>& a) {
  Dual<T, N> r;
  r.v = sqrt(a.v);
  T k = T(0.5) / r.v;
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * k;
  return r;
}
template <class T, int N>
Dual<T, N> sin(const Dual<T, N>& a) {
  Dual<T, N> r;
  r.v = sin(a.v);
  T k = cos(a.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * k;
  return r;
}
template <class T, int N>
Dual<T, N> cos(const Dual<T, N>& a) {
  Dual<T, N> r;
  r.v = cos(a.v);
  T k = -sin(a.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * k;
  return r;
}
template <class T, int N>
Dual<T, N> abs(const Dual<T, N>& a) {
  return value(a) < 0 ? -a : a;
}

// Number of differentiation slots shared by every chart (8 = tangent chart).
inline constexpr int kSlots = 8;
using D1 = Dual<double, kSlots>;
using D2 = Dual<D1, kSlots>;

// Independent variable x seeded in slot k.
template <class S> S variable(double x, int k);
template <> inline double variable<double>(double x, int) { return x; }
template <> inline D1 variable<D1>(double x, int k) {
  D1 r(x);
  r.d[k] = 1.0;
  return r;
}
template <> inline D2 variable<D2>(double x, int k) {
  D2 r(variable<D1>(x, k));
  r.d[k] = D1(1.0);
  return r;
}

// Partial derivative of a D1 in slot k, and of a D2 in slots (k, l).
inline double partial(const D1& a, int k) { return a.d[k]; }
inline double partial2(const D2& a, int k, int l) { return a.d[k].d[l]; }
inline D1 lower(const D2& a) { return a.v; }

// Strip one differentiation level.
template <class S> struct inner { using type = double; };
template <> struct inner<D2> { using type = D1; };

}  // namespace phasegeo
