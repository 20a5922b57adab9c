#include "halfspec/exact_s1.hpp"

#include <cmath>
#include <numbers>

namespace halfspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_circle(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  if (y >= kTwoPi) y -= kTwoPi;
  return y;
}

}  // namespace

double exact_s1_density(double x, double t) {
  const double s = std::sin(x), c = std::cos(x);
  return 1.0 / (std::exp(2.0 * t) * s * s + std::exp(-2.0 * t) * c * c);
}

double exact_s1_half_density(double x, double t) { return std::sqrt(exact_s1_density(x, t)); }

double exact_s1_flow(double x, double t) {
  const double y = wrap_circle(x);
  if (std::fmod(y, 0.5 * std::numbers::pi) == 0.0) return y;
  const double base = std::atan(std::exp(-2.0 * t) * std::tan(y));
  // Trajectories never cross the fixed points, so the image stays in the
  // half-period of y; atan only returns the representative in (-pi/2, pi/2).
  const double shift = std::numbers::pi * std::round((y - base) / std::numbers::pi);
  return wrap_circle(base + shift);
}

double exact_s1_functions(S1Function which, double x, double t) {
  const double s = std::sin(x), c = std::cos(x);
  const double e4 = std::exp(4.0 * t);
  switch (which) {
    case S1Function::F: return s / std::sqrt(s * s + c * c / e4);
    case S1Function::G: return c / std::sqrt(e4 * s * s + c * c);
    case S1Function::H: return std::exp(2.0 * t) * s * c / (c * c + e4 * s * s);
  }
  return 0.0;
}

}  // namespace halfspec
