#pragma once

namespace halfspec {

// Closed-form solutions for x' = -sin(2x) on the circle of period 2 pi.
// The flow has stable fixed points at 0 and pi and unstable ones at
// pi/2 and 3 pi/2.

/// Density at time t transported from the uniform density:
/// (e^{2t} sin^2 x + e^{-2t} cos^2 x)^{-1}.
double exact_s1_density(double x, double t);

/// Square root of exact_s1_density.
double exact_s1_half_density(double x, double t);

/// Forward flow map x(t) = atan(e^{-2t} tan x), shifted onto the
/// half-period that contains x and wrapped into [0, 2 pi). Fixed points
/// map to themselves. Evaluating at -t gives atan(e^{2t} tan x).
double exact_s1_flow(double x, double t);

enum class S1Function { F, G, H };

/// Transported functions with f(.,0) = sin, g(.,0) = cos and h = f g:
///   f = sin x (sin^2 x + e^{-4t} cos^2 x)^{-1/2}
///   g = cos x (e^{4t} sin^2 x + cos^2 x)^{-1/2}
///   h = e^{2t} sin x cos x (cos^2 x + e^{4t} sin^2 x)^{-1}
double exact_s1_functions(S1Function which, double x, double t);

}  // namespace halfspec
