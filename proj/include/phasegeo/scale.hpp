#pragma once

#include <boost/rational.hpp>
#include <stdexcept>
#include <string>

namespace phasegeo {

using Rational = boost::rational<int>;

// Physical dimension as exponents over (time, length, mass).
struct ScaleDim {
  Rational t{0}, l{0}, m{0};

  ScaleDim() = default;
  ScaleDim(Rational t_, Rational l_, Rational m_) : t(t_), l(l_), m(m_) {}

  ScaleDim operator+(const ScaleDim& o) const { return {t + o.t, l + o.l, m + o.m}; }
  ScaleDim operator-(const ScaleDim& o) const { return {t - o.t, l - o.l, m - o.m}; }
  ScaleDim operator-() const { return {-t, -l, -m}; }
  ScaleDim operator*(Rational k) const { return {t * k, l * k, m * k}; }
  bool operator==(const ScaleDim& o) const = default;
  bool dimensionless() const { return t.numerator() == 0 && l.numerator() == 0 && m.numerator() == 0; }
  std::string str() const;

  static ScaleDim none() { return {}; }
  static ScaleDim c() { return {-1, 1, 0}; }
  static ScaleDim hbar() { return {-1, 2, 1}; }
  static ScaleDim mass() { return {0, 0, 1}; }
  static ScaleDim charge() { return {-1, Rational(3, 2), Rational(1, 2)}; }
  static ScaleDim metric() { return {0, 2, 0}; }
  static ScaleDim time() { return {1, 0, 0}; }
};

// Exponents (a, b, k, l) of c, hbar, m and the metric unit that make up a quantity.
// Rescaling the constants c -> s_c c etc. multiplies the quantity by s_c^a s_hbar^b s_m^k.
struct ScaleLaw {
  Rational c{0}, hbar{0}, m{0}, g{0};

  ScaleDim dim() const {
    return ScaleDim::c() * c + ScaleDim::hbar() * hbar + ScaleDim::mass() * m + ScaleDim::metric() * g;
  }
  double factor(double sc, double shbar, double sm) const;
};

struct ScaleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Throws ScaleError unless a and b agree; disabled when checking is off.
void require_same_scale(const ScaleDim& a, const ScaleDim& b, const char* what);
void set_scale_checking(bool on);
bool scale_checking();

}  // namespace phasegeo
