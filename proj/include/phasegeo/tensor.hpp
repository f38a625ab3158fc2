#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "phasegeo/blade.hpp"
#include "phasegeo/scale.hpp"

namespace phasegeo {

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Variance { co, contra };

// Dense component array with per-axis variance and a physical dimension.
class Components {
 public:
  Components() = default;
  Components(std::vector<int> shape, std::vector<Variance> variance, ScaleDim scale = {});
  static Components scalar(double v, ScaleDim scale = {});
  static Components covector(const std::vector<double>& v, ScaleDim scale = {});
  static Components vector(const std::vector<double>& v, ScaleDim scale = {});
  static Components matrix(const std::vector<std::vector<double>>& m, Variance a, Variance b, ScaleDim scale = {});
  static Components identity(int n);  // delta^a_b, axes (contra, co)

  int rank() const { return int(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<Variance>& variance() const { return variance_; }
  const ScaleDim& scale() const { return scale_; }
  void set_scale(ScaleDim s) { scale_ = s; }
  const std::vector<double>& data() const { return data_; }
  size_t size() const { return data_.size(); }

  double& operator()(const std::vector<int>& idx) { return data_[offset(idx)]; }
  double operator()(const std::vector<int>& idx) const { return data_[offset(idx)]; }
  double& operator[](size_t k) { return data_[k]; }
  double operator[](size_t k) const { return data_[k]; }

  Components& operator+=(const Components& o);
  Components& operator-=(const Components& o);
  Components& operator*=(double s);
  friend Components operator+(Components a, const Components& b) { return a += b; }
  friend Components operator-(Components a, const Components& b) { return a -= b; }
  friend Components operator*(Components a, double s) { return a *= s; }
  friend Components operator*(double s, Components a) { return a *= s; }

  double max_abs() const;
  bool antisymmetric(double tol = 0.0) const;
  bool symmetric(double tol = 0.0) const;

  // Multi-index iteration helpers.
  std::vector<int> unravel(size_t k) const;
  size_t offset(const std::vector<int>& idx) const;

 private:
  void check_same_layout(const Components& o, const char* what) const;
  std::vector<int> shape_;
  std::vector<Variance> variance_;
  std::vector<double> data_;
  ScaleDim scale_;
};

// Full antisymmetrization with 1/p!: identity on antisymmetric arrays.
Components alt(const Components& t);
// Antisymmetrization over the listed axes only.
Components alt(const Components& t, const std::vector<int>& axes);
Components sym(const Components& t);
Components tensor_product(const Components& a, const Components& b);
// (a ^ b) = ((p+q)!/(p! q!)) alt(a (x) b): (a ^ b)(X,Y) = a(X) b(Y) - a(Y) b(X) for 1-forms.
Components wedge(const Components& a, const Components& b);
// Sum over paired axes (axis of a, axis of b); paired variances must be opposite.
Components contract(const Components& a, const Components& b, const std::vector<std::pair<int, int>>& axes);
// Interior product i_P F of a p-vector into the leading p slots of a form: raw contraction / p!.
Components interior(const Components& P, const Components& F);

Components from_blade(const Blade<double>& b, ScaleDim scale = {});
Blade<double> to_blade(const Components& t);

}  // namespace phasegeo
