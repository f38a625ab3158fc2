#include "phasegeo/scale.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace phasegeo {

namespace {
std::atomic<bool> g_check{true};

std::string rat(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

double rpow(double base, const Rational& e) {
  return std::pow(base, static_cast<double>(e.numerator()) / e.denominator());
}
}  // namespace

std::string ScaleDim::str() const { return "(" + rat(t) + "," + rat(l) + "," + rat(m) + ")"; }

double ScaleLaw::factor(double sc, double shbar, double sm) const {
  return rpow(sc, c) * rpow(shbar, hbar) * rpow(sm, m);
}

void require_same_scale(const ScaleDim& a, const ScaleDim& b, const char* what) {
  if (!g_check.load(std::memory_order_relaxed)) return;
  if (!(a == b)) throw ScaleError(std::string(what) + ": scale mismatch " + a.str() + " vs " + b.str());
}

void set_scale_checking(bool on) { g_check.store(on); }
bool scale_checking() { return g_check.load(); }

}  // namespace phasegeo
