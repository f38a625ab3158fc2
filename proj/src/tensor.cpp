#include "phasegeo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace phasegeo {

namespace {

int perm_sign(std::vector<int> p) {
  int s = 1;
  for (size_t i = 0; i < p.size(); ++i)
    while (p[i] != int(i)) {
      std::swap(p[i], p[p[i]]);
      s = -s;
    }
  return s;
}

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

Components symmetrize(const Components& t, const std::vector<int>& axes, bool anti) {
  if (axes.size() < 2) throw ShapeError("alt/sym: need at least two axes");
  for (int a : axes) {
    if (a < 0 || a >= t.rank()) throw ShapeError("alt/sym: axis out of range");
    if (t.shape()[a] != t.shape()[axes[0]]) throw ShapeError("alt/sym: mismatched axis lengths");
    if (t.variance()[a] != t.variance()[axes[0]]) throw ShapeError("alt/sym: mixed variance");
  }
  std::vector<int> perm(axes.size());
  std::iota(perm.begin(), perm.end(), 0);
  Components r(t.shape(), t.variance(), t.scale());
  double norm = 1.0 / factorial(int(axes.size()));
  do {
    double s = anti ? perm_sign(perm) : 1.0;
    for (size_t k = 0; k < t.size(); ++k) {
      std::vector<int> idx = t.unravel(k), src = idx;
      for (size_t j = 0; j < axes.size(); ++j) src[axes[j]] = idx[axes[perm[j]]];
      r[k] += s * norm * t(src);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return r;
}

std::vector<int> all_axes(const Components& t) {
  std::vector<int> a(t.rank());
  std::iota(a.begin(), a.end(), 0);
  return a;
}

}  // namespace

Components::Components(std::vector<int> shape, std::vector<Variance> variance, ScaleDim scale)
    : shape_(std::move(shape)), variance_(std::move(variance)), scale_(scale) {
  if (shape_.size() != variance_.size()) throw ShapeError("shape and variance lengths differ");
  size_t n = 1;
  for (int s : shape_) {
    if (s <= 0) throw ShapeError("axis length must be positive");
    n *= size_t(s);
  }
  data_.assign(n, 0.0);
}

Components Components::scalar(double v, ScaleDim scale) {
  Components c({}, {}, scale);
  c.data_[0] = v;
  return c;
}

Components Components::covector(const std::vector<double>& v, ScaleDim scale) {
  Components c({int(v.size())}, {Variance::co}, scale);
  c.data_ = v;
  return c;
}

Components Components::vector(const std::vector<double>& v, ScaleDim scale) {
  Components c({int(v.size())}, {Variance::contra}, scale);
  c.data_ = v;
  return c;
}

Components Components::matrix(const std::vector<std::vector<double>>& m, Variance a, Variance b, ScaleDim scale) {
  int r = int(m.size()), cl = r ? int(m[0].size()) : 0;
  Components c({r, cl}, {a, b}, scale);
  for (int i = 0; i < r; ++i) {
    if (int(m[i].size()) != cl) throw ShapeError("ragged matrix");
    for (int j = 0; j < cl; ++j) c({i, j}) = m[i][j];
  }
  return c;
}

Components Components::identity(int n) {
  Components c({n, n}, {Variance::contra, Variance::co});
  for (int i = 0; i < n; ++i) c({i, i}) = 1.0;
  return c;
}

size_t Components::offset(const std::vector<int>& idx) const {
  if (idx.size() != shape_.size()) throw ShapeError("index rank mismatch");
  size_t k = 0;
  for (size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= shape_[a]) throw std::out_of_range("component index");
    k = k * shape_[a] + idx[a];
  }
  return k;
}

std::vector<int> Components::unravel(size_t k) const {
  std::vector<int> idx(shape_.size());
  for (int a = int(shape_.size()) - 1; a >= 0; --a) {
    idx[a] = int(k % shape_[a]);
    k /= shape_[a];
  }
  return idx;
}

void Components::check_same_layout(const Components& o, const char* what) const {
  if (shape_ != o.shape_ || variance_ != o.variance_) throw ShapeError(std::string(what) + ": layout mismatch");
  require_same_scale(scale_, o.scale_, what);
}

Components& Components::operator+=(const Components& o) {
  check_same_layout(o, "add");
  for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Components& Components::operator-=(const Components& o) {
  check_same_layout(o, "subtract");
  for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Components& Components::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

double Components::max_abs() const {
  double m = 0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool Components::antisymmetric(double tol) const {
  if (rank() < 2) return true;
  return (*this - alt(*this)).max_abs() <= tol;
}

bool Components::symmetric(double tol) const {
  if (rank() < 2) return true;
  return (*this - sym(*this)).max_abs() <= tol;
}

Components alt(const Components& t) { return symmetrize(t, all_axes(t), true); }
Components alt(const Components& t, const std::vector<int>& axes) { return symmetrize(t, axes, true); }
Components sym(const Components& t) { return symmetrize(t, all_axes(t), false); }

Components tensor_product(const Components& a, const Components& b) {
  std::vector<int> sh = a.shape();
  sh.insert(sh.end(), b.shape().begin(), b.shape().end());
  std::vector<Variance> va = a.variance();
  va.insert(va.end(), b.variance().begin(), b.variance().end());
  Components r(sh, va, a.scale() + b.scale());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
  return r;
}

Components wedge(const Components& a, const Components& b) {
  int p = a.rank(), q = b.rank();
  if (p == 0 || q == 0) return tensor_product(a, b);
  int n = a.shape()[0];
  for (int s : a.shape())
    if (s != n) throw ShapeError("wedge: axis lengths differ");
  for (int s : b.shape())
    if (s != n) throw ShapeError("wedge: axis lengths differ");
  if (a.variance()[0] != b.variance()[0]) throw ShapeError("wedge: variance mismatch");
  if (p + q > n) {
    std::vector<int> sh(p + q, n);
    return Components(sh, std::vector<Variance>(p + q, a.variance()[0]), a.scale() + b.scale());
  }
  Components r = alt(tensor_product(a, b));
  return r * (factorial(p + q) / (factorial(p) * factorial(q)));
}

Components contract(const Components& a, const Components& b, const std::vector<std::pair<int, int>>& axes) {
  std::vector<bool> ua(a.rank(), false), ub(b.rank(), false);
  for (auto [i, j] : axes) {
    if (i < 0 || i >= a.rank() || j < 0 || j >= b.rank()) throw ContractError("contract: axis out of range");
    if (a.shape()[i] != b.shape()[j]) throw ContractError("contract: axis lengths differ");
    if (a.variance()[i] == b.variance()[j]) throw ContractError("contract: variance mismatch");
    ua[i] = ub[j] = true;
  }
  std::vector<int> sh, fa, fb;
  std::vector<Variance> va;
  for (int i = 0; i < a.rank(); ++i)
    if (!ua[i]) {
      sh.push_back(a.shape()[i]);
      va.push_back(a.variance()[i]);
      fa.push_back(i);
    }
  for (int j = 0; j < b.rank(); ++j)
    if (!ub[j]) {
      sh.push_back(b.shape()[j]);
      va.push_back(b.variance()[j]);
      fb.push_back(j);
    }
  Components r(sh, va, a.scale() + b.scale());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    std::vector<int> ia = a.unravel(i);
    for (size_t j = 0; j < b.size(); ++j) {
      std::vector<int> ib = b.unravel(j);
      bool match = true;
      for (auto [x, y] : axes)
        if (ia[x] != ib[y]) {
          match = false;
          break;
        }
      if (!match) continue;
      std::vector<int> out;
      for (int x : fa) out.push_back(ia[x]);
      for (int y : fb) out.push_back(ib[y]);
      r(out) += a[i] * b[j];
    }
  }
  return r;
}

Components interior(const Components& P, const Components& F) {
  int p = P.rank();
  if (p > F.rank()) throw ContractError("interior: degree exceeds form degree");
  std::vector<std::pair<int, int>> ax;
  for (int k = 0; k < p; ++k) ax.push_back({k, k});
  return contract(P, F, ax) * (1.0 / factorial(p));
}

Components from_blade(const Blade<double>& b, ScaleDim scale) {
  std::vector<int> sh(b.p, b.n);
  Components r(sh, std::vector<Variance>(b.p, b.up ? Variance::contra : Variance::co), scale);
  for (size_t k = 0; k < r.size(); ++k) {
    std::vector<int> idx = r.unravel(k);
    unsigned m = 0;
    int s = 1;
    bool rep = false;
    for (int a : idx) {
      if (m & (1u << a)) {
        rep = true;
        break;
      }
      if (parity_above(m, a) & 1) s = -s;
      m |= 1u << a;
    }
    r[k] = rep ? 0.0 : s * b.get(m);
  }
  return r;
}

Blade<double> to_blade(const Components& t) {
  int p = t.rank();
  int n = p ? t.shape()[0] : 0;
  Blade<double> b(n, p, p && t.variance()[0] == Variance::contra);
  for (size_t k = 0; k < b.size(); ++k) {
    unsigned m = b.mask_at(k);
    std::vector<int> idx;
    for (unsigned x = m; x; x &= x - 1) idx.push_back(std::countr_zero(x));
    b.c[k] = t(idx);
  }
  return b;
}

}  // namespace phasegeo
