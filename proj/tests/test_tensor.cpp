#include <doctest.h>

#include <cmath>

#include "phasegeo/linalg.hpp"
#include "phasegeo/tensor.hpp"

using namespace phasegeo;

TEST_CASE("dual numbers carry exact first and second partials") {
  const double x0 = 0.7, y0 = -1.3;
  D2 x = variable<D2>(x0, 0), y = variable<D2>(y0, 1);
  D2 f = sin(x) * y / (1.0 + x * x) + sqrt(2.0 + cos(y));
  // hand-derived: f = y s/(1+x^2) + sqrt(2 + cos y)
  double s = std::sin(x0), co = std::cos(x0), q = 1.0 + x0 * x0;
  double fx = y0 * (co * q - 2 * x0 * s) / (q * q);
  double fy = s / q - std::sin(y0) / (2 * std::sqrt(2 + std::cos(y0)));
  double fxy = (co * q - 2 * x0 * s) / (q * q);
  CHECK(value(f) == doctest::Approx(y0 * s / q + std::sqrt(2 + std::cos(y0))).epsilon(1e-14));
  CHECK(partial(lower(f), 0) == doctest::Approx(fx).epsilon(1e-14));
  CHECK(partial(lower(f), 1) == doctest::Approx(fy).epsilon(1e-14));
  CHECK(partial2(f, 0, 1) == doctest::Approx(fxy).epsilon(1e-13));
  CHECK(partial2(f, 1, 0) == doctest::Approx(fxy).epsilon(1e-13));
  CHECK(partial(lower(f), 5) == 0.0);
}

TEST_CASE("blades store the full component at the sorted tuple") {
  Blade<double> a(4, 1), b(4, 1);
  a.at(0b0001) = 2.0;  // 2 e^0
  b.at(0b0010) = 3.0;  // 3 e^1
  Blade<double> w = wedge(a, b);
  CHECK(w({0, 1}) == 6.0);
  CHECK(w({1, 0}) == -6.0);
  CHECK(wedge(b, a)({0, 1}) == -6.0);
  CHECK(wedge(a, a).c == Blade<double>(4, 2).c);

  Blade<double> f(4, 2);
  f.add({2, 0}, 5.0);
  CHECK(f({0, 2}) == -5.0);
  f.add({1, 1}, 9.0);
  CHECK(max_abs(f) == 5.0);

  // i_v (e^0 ^ e^2) = v^0 e^2 - v^2 e^0
  Blade<double> e02(4, 2);
  e02.add({0, 2}, 1.0);
  Blade<double> iv = interior(std::vector<double>{1.5, 0.0, -2.0, 0.0}, e02);
  CHECK(iv({2}) == 1.5);
  CHECK(iv({0}) == 2.0);
}

TEST_CASE("degree overflow and zero-size tables") {
  Blade<double> a(3, 2), b(3, 2);
  Blade<double> w = wedge(a, b);
  CHECK(w.zero_degree_overflow());
  CHECK(w.get(0b111) == 0.0);
  CHECK_THROWS_AS(BladeTable::get(9, 1), std::out_of_range);
}

TEST_CASE("pairing sums over sorted tuples") {
  Blade<double> P(4, 2, true), F(4, 2);
  P.add({0, 1}, 2.0);
  P.add({2, 3}, -1.0);
  F.add({0, 1}, 3.0);
  F.add({2, 3}, 4.0);
  F.add({0, 2}, 7.0);
  CHECK(pairing(P, F) == 2.0);
}

TEST_CASE("exterior derivative squares to zero and matches d(x^0 x^1 dx^2)") {
  using J = D2;
  auto x = [](int a, double v) { return variable<J>(v, a); };
  J x0 = x(0, 0.4), x1 = x(1, -0.9), x2 = x(2, 1.7);
  Blade<J> f(4, 1);
  f.at(0b0100) = x0 * x1;
  f.at(0b0001) = sin(x2) * x1;
  Blade<D1> df = exterior_derivative(f);
  // d(x0 x1 dx2) = x1 dx0^dx2 + x0 dx1^dx2 ; d(sin x2 x1 dx0) = x1 cos x2 dx2^dx0 + sin x2 dx1^dx0
  CHECK(value(df({0, 2})) == doctest::Approx(-0.9 - (-0.9) * std::cos(1.7)).epsilon(1e-14));
  CHECK(value(df({1, 2})) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(value(df({0, 1})) == doctest::Approx(-std::sin(1.7)).epsilon(1e-14));
  Blade<double> ddf = exterior_derivative(df);
  CHECK(max_abs(ddf) < 1e-14);
}

TEST_CASE("Schouten bracket of vector fields is the Lie bracket") {
  // X = x1 d0, Y = sin(x0) d1 ; [X,Y] = x1 cos(x0) d1 - sin(x0) d0
  const double a = 0.3, b = 1.1;
  D1 x0 = variable<D1>(a, 0), x1 = variable<D1>(b, 1);
  Blade<D1> X(4, 1, true), Y(4, 1, true);
  X.at(0b0001) = x1;
  Y.at(0b0010) = sin(x0);
  Blade<double> r = schouten(X, Y);
  CHECK(r({1}) == doctest::Approx(b * std::cos(a)).epsilon(1e-14));
  CHECK(r({0}) == doctest::Approx(-std::sin(a)).epsilon(1e-14));
  Blade<double> s = schouten(Y, X);
  CHECK(s({1}) == doctest::Approx(-b * std::cos(a)).epsilon(1e-14));
}

TEST_CASE("components: alt, sym, wedge, contraction and interior") {
  Components a = Components::covector({1, 2, 0}), b = Components::covector({0, 1, 3});
  Components w = wedge(a, b);
  // (a^b)(X,Y) = a(X)b(Y) - a(Y)b(X)
  CHECK(w({0, 1}) == 1.0);
  CHECK(w({1, 2}) == 6.0);
  CHECK(w({0, 2}) == 3.0);
  CHECK(w({2, 0}) == -3.0);
  CHECK(w.antisymmetric());
  Components t = tensor_product(a, b);
  CHECK(t({1, 2}) == 6.0);
  Components at = alt(t);
  CHECK(at({1, 2}) == doctest::Approx(3.0));
  CHECK((sym(t) + alt(t) - t).max_abs() < 1e-15);
  CHECK(alt(w).symmetric() == false);
  CHECK((alt(w) - w).max_abs() < 1e-15);

  Components X = Components::vector({1, -1, 2});
  Components aX = contract(X, a, {{0, 0}});
  CHECK(aX({}) == -1.0);
  // i_X (a^b) = a(X) b - b(X) a
  Components ix = interior(X, w);
  Components want = b * (-1.0) - a * 5.0;
  CHECK((ix - want).max_abs() < 1e-15);

  Components I = Components::identity(3);
  CHECK((contract(I, X, {{1, 0}}) - X).max_abs() == 0.0);
}

TEST_CASE("components round-trip through blades") {
  Blade<double> f(5, 3);
  f.add({0, 2, 4}, 1.5);
  f.add({1, 2, 3}, -0.5);
  Components t = from_blade(f);
  CHECK(t({4, 0, 2}) == 1.5);
  CHECK(t({2, 0, 4}) == -1.5);
  CHECK(t.antisymmetric(1e-15));
  Blade<double> back = to_blade(t);
  CHECK(back.c == f.c);
}

TEST_CASE("shape, contraction and scale errors") {
  Components a = Components::covector({1, 2, 3}), b = Components::covector({1, 2});
  CHECK_THROWS_AS(a + b, ShapeError);
  CHECK_THROWS_AS(wedge(a, b), ShapeError);
  CHECK_THROWS_AS(contract(a, a, {{0, 0}}), ContractError);
  CHECK_THROWS_AS(contract(a, Components::vector({1, 2, 3}), {{1, 0}}), ContractError);
  CHECK_THROWS_AS(Components({2, 2}, {Variance::co}), ShapeError);
  CHECK_THROWS_AS(Components::matrix({{1, 2}, {3}}, Variance::co, Variance::co), ShapeError);
  CHECK_THROWS_AS(alt(Components::matrix({{1, 2}, {3, 4}}, Variance::co, Variance::contra)), ShapeError);

  Components m1 = Components::covector({1, 2, 3}, ScaleDim::metric());
  Components m2 = Components::covector({1, 2, 3}, ScaleDim::time());
  CHECK_THROWS_AS(m1 + m2, ScaleError);
  set_scale_checking(false);
  CHECK_NOTHROW(m1 + m2);
  set_scale_checking(true);
}

TEST_CASE("scale dimensions are rational exponent triples") {
  ScaleDim c = ScaleDim::c();
  CHECK(c.t == Rational(-1));
  CHECK(c.l == Rational(1));
  CHECK((c * Rational(2) - c - c).dimensionless());
  CHECK(ScaleDim::charge().l == Rational(3, 2));
  // hbar / (m c^2) is a time
  ScaleDim t = ScaleDim::hbar() - ScaleDim::mass() - c * Rational(2);
  CHECK(t == ScaleDim::time());
  ScaleLaw law{Rational(2), Rational(-1), Rational(1), Rational(0)};
  CHECK(law.factor(2.0, 4.0, 3.0) == doctest::Approx(4.0 / 4.0 * 3.0));
  CHECK(law.dim() == c * Rational(2) - ScaleDim::hbar() + ScaleDim::mass());
}

TEST_CASE("small dense inverse and determinant") {
  Mat4<double> g{{{-1, 0.1, 0, 0}, {0.1, 1, 0.2, 0}, {0, 0.2, 2, 0}, {0, 0, 0, 3}}};
  Mat4<double> gi = inverse(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0;
      for (int k = 0; k < 4; ++k) s += g[i][k] * gi[k][j];
      CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }
  // cofactor expansion along the last row: 3 * det3
  double det3 = -1 * (1 * 2 - 0.04) - 0.1 * (0.1 * 2 - 0);
  CHECK(determinant(g) == doctest::Approx(3 * det3).epsilon(1e-14));
  Mat4<double> sing{};
  CHECK_THROWS_AS(inverse(sing), SingularMatrix);
}
