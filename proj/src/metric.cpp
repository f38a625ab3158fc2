#include "phasegeo/metric.hpp"

#include <numbers>

namespace phasegeo {

namespace {

struct Minkowski {
  template <class T>
  Mat4<T> operator()(const Vec4<T>&) const {
    Mat4<T> g{};
    g[0][0] = T(-1.0);
    for (int i = 1; i < 4; ++i) g[i][i] = T(1.0);
    return g;
  }
  bool in_domain(const Vec4<double>&) const { return true; }
};

struct Schwarzschild {
  double rs;
  template <class T>
  Mat4<T> operator()(const Vec4<T>& x) const {
    const T& r = x[1];
    T f = 1.0 - rs / r;
    T s = sin(x[2]);
    Mat4<T> g{};
    g[0][0] = -f;
    g[1][1] = 1.0 / f;
    g[2][2] = r * r;
    g[3][3] = r * r * s * s;
    return g;
  }
  bool in_domain(const Vec4<double>& x) const {
    return x[1] > rs && x[2] > 0 && x[2] < std::numbers::pi;
  }
};

struct Wavy {
  double eps;
  template <class T>
  Mat4<T> operator()(const Vec4<T>& x) const {
    Mat4<T> g{};
    g[0][0] = -1.0 - eps * sin(x[1]);
    g[1][1] = T(1.0);
    g[2][2] = T(1.0);
    g[3][3] = 1.0 + eps * cos(x[0]);
    return g;
  }
  bool in_domain(const Vec4<double>&) const { return std::abs(eps) < 1.0; }
};

struct Generic {
  double eps;
  template <class T>
  Mat4<T> operator()(const Vec4<T>& x) const {
    Mat4<T> g{};
    for (int l = 0; l < 4; ++l)
      for (int m = l; m < 4; ++m) {
        T h = sin(x[l] * (0.7 + 0.1 * m) + x[m] * (0.4 + 0.2 * l) + 0.3 * (l + 2 * m)) *
              cos(x[(l + m + 1) % 4] * 0.5 + 0.1 * l);
        T base = T(l == m ? (l == 0 ? -1.0 : 1.0) : 0.0);
        g[l][m] = base + eps * h;
        g[m][l] = g[l][m];
      }
    return g;
  }
  bool in_domain(const Vec4<double>&) const { return std::abs(eps) <= 0.2; }
};

Box unit_box() {
  Box b;
  b.lo = {-1, -1, -1, -1};
  b.hi = {1, 1, 1, 1};
  return b;
}

double param(const Params& p, const char* key, double def) {
  auto it = p.find(key);
  return it == p.end() ? def : it->second;
}

}  // namespace

MetricPtr make_minkowski() {
  return std::make_shared<MetricT<Minkowski>>(Minkowski{}, "minkowski", Params{}, unit_box());
}

MetricPtr make_schwarzschild(double rs) {
  Box b;
  b.lo = {-1.0, 2.5 * rs, 0.3, 0.0};
  b.hi = {1.0, 10.0 * rs, std::numbers::pi - 0.3, 2.0 * std::numbers::pi};
  return std::make_shared<MetricT<Schwarzschild>>(Schwarzschild{rs}, "schwarzschild", Params{{"rs", rs}}, b);
}

MetricPtr make_wavy(double eps) {
  return std::make_shared<MetricT<Wavy>>(Wavy{eps}, "wavy", Params{{"eps", eps}}, unit_box());
}

MetricPtr make_generic(double eps) {
  return std::make_shared<MetricT<Generic>>(Generic{eps}, "generic", Params{{"eps", eps}}, unit_box());
}

MetricPtr make_metric(const std::string& id, const Params& p) {
  if (id == "minkowski") return make_minkowski();
  if (id == "schwarzschild") {
    double rs = param(p, "rs", 1.0);
    if (!(rs > 0)) throw std::invalid_argument("schwarzschild: rs must be positive");
    return make_schwarzschild(rs);
  }
  if (id == "wavy") return make_wavy(param(p, "eps", 0.3));
  if (id == "generic") return make_generic(param(p, "eps", 0.15));
  throw UnknownId("unknown metric id: " + id);
}

std::vector<std::string> metric_catalog() { return {"minkowski", "schwarzschild", "wavy", "generic"}; }

}  // namespace phasegeo
