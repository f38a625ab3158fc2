#pragma once

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "phasegeo/linalg.hpp"

namespace phasegeo {

using Params = std::map<std::string, double>;

// Per-scalar evaluation contract of a metric: values, and values with first
// partials (dg[a][l][m] = d_a g_{lm}).
template <class S>
struct MetricEval {
  virtual ~MetricEval() = default;
  virtual Mat4<S> g(const Vec4<S>& x) const = 0;
  virtual Mat4<S> g(const Vec4<S>& x, Rank3<S>& dg) const = 0;
};

struct Box {
  std::array<double, 4> lo{}, hi{};
};

class Metric : public MetricEval<double>, public MetricEval<D1>, public MetricEval<D2> {
 public:
  using MetricEval<double>::g;
  using MetricEval<D1>::g;
  using MetricEval<D2>::g;

  virtual std::string id() const = 0;
  virtual Params params() const = 0;
  // Sampling box in chart coordinates.
  virtual Box box() const = 0;
  // Chart domain guard (e.g. r > r_s).
  virtual bool in_domain(const Vec4<double>& x) const = 0;
};

using MetricPtr = std::shared_ptr<const Metric>;

// Wraps a functor with a templated call operator Mat4<T>(const Vec4<T>&).
template <class F>
class MetricT : public Metric {
 public:
  MetricT(F f, std::string id, Params p, Box b) : f_(std::move(f)), id_(std::move(id)), p_(std::move(p)), b_(b) {}

  Mat4<double> g(const Vec4<double>& x) const override { return f_(x); }
  Mat4<D1> g(const Vec4<D1>& x) const override { return f_(x); }
  Mat4<D2> g(const Vec4<D2>& x) const override { return f_(x); }
  Mat4<double> g(const Vec4<double>& x, Rank3<double>& dg) const override { return jet(x, dg); }
  Mat4<D1> g(const Vec4<D1>& x, Rank3<D1>& dg) const override { return jet(x, dg); }
  Mat4<D2> g(const Vec4<D2>& x, Rank3<D2>& dg) const override { return jet(x, dg); }

  std::string id() const override { return id_; }
  Params params() const override { return p_; }
  Box box() const override { return b_; }
  bool in_domain(const Vec4<double>& x) const override { return f_.in_domain(x); }

 private:
  template <class S>
  Mat4<S> jet(const Vec4<S>& x, Rank3<S>& dg) const {
    using J = Dual<S, 4>;
    Vec4<J> xj;
    for (int a = 0; a < 4; ++a) {
      xj[a] = J(x[a]);
      xj[a].d[a] = S(1.0);
    }
    Mat4<J> gj = f_(xj);
    Mat4<S> out;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) {
        out[l][m] = gj[l][m].v;
        for (int a = 0; a < 4; ++a) dg[a][l][m] = gj[l][m].d[a];
      }
    return out;
  }

  F f_;
  std::string id_;
  Params p_;
  Box b_;
};

MetricPtr make_minkowski();
MetricPtr make_schwarzschild(double rs);
MetricPtr make_wavy(double eps);
// Smooth non-diagonal perturbation of Minkowski (all g_{lm} depend on x).
MetricPtr make_generic(double eps);

struct UnknownId : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Catalog lookup by identifier; missing params take defaults.
MetricPtr make_metric(const std::string& id, const Params& p = {});
std::vector<std::string> metric_catalog();

}  // namespace phasegeo
