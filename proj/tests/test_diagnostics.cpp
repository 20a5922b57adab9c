#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "halfspec/diagnostics.hpp"
#include "oracles.hpp"

using namespace halfspec;

namespace {

constexpr double kPi = std::numbers::pi;
const SchemeSpec kExpm{};

GridField circle_samples(double (*f)(double), int m) {
  return sample([f](std::span<const double> x) { return Complex(f(x[0]), 0.0); }, {m}, {2 * kPi});
}

SpectralField first_harmonic(double (*f)(double)) {
  return project_function([f](std::span<const double> x) { return Complex(f(x[0]), 0.0); },
                          TruncationSpec::uniform(1, 1, 2 * kPi));
}

double one(double) { return 1.0; }
double zero(double) { return 0.0; }
double sin_(double x) { return std::sin(x); }
double cos_(double x) { return std::cos(x); }

}  // namespace

TEST(L1Norm, SimpleFields) {
  EXPECT_NEAR(l1_norm_grid(circle_samples(one, 64)), 2 * kPi, 1e-13);
  EXPECT_EQ(l1_norm_grid(circle_samples(zero, 64)), 0.0);
  // |sin| has a kink, so the trapezoid rule converges slowly; compare with
  // the exact value 4 and with refinement.
  const double coarse = l1_norm_grid(circle_samples(sin_, 256));
  const double fine = l1_norm_grid(circle_samples(sin_, 4096));
  const double simpson = oracle::simpson([](double x) { return std::abs(std::sin(x)); }, 0.0, 2 * kPi, 4096);
  EXPECT_NEAR(simpson, 4.0, 1e-9);
  EXPECT_LT(std::abs(fine - 4.0), std::abs(coarse - 4.0));
  EXPECT_NEAR(fine, 4.0, 1e-5);
}

TEST(NuclearMass, SingleModeAndQuadratureIdentity) {
  const TruncationSpec tr = TruncationSpec::uniform(1, 3, 2 * kPi);
  SpectralField s = SpectralField::zeros(tr);
  s.coeffs[4] = 2.0;
  EXPECT_EQ(nuclear_mass(s), 4.0);

  const TruncationSpec t2({4, 3}, {1.0, 2.0});
  const SpectralField psi = analyze(
      sample([](std::span<const double> x) {
        return Complex(1.0 + 0.3 * std::sin(2 * kPi * x[0]) + 0.2 * std::cos(kPi * x[1] + 0.4), 0.0);
      }, default_grid(t2), t2.periods()),
      t2);
  GridField rho = synthesize(psi, evaluation_grid(t2));
  for (auto& v : rho.samples) v = v * v;
  EXPECT_NEAR(nuclear_mass(psi), l1_norm_grid(rho), 1e-10);
}

TEST(Negativity, SimpleFields) {
  EXPECT_EQ(negativity(circle_samples(one, 32)), 0.0);
  EXPECT_NEAR(negativity(circle_samples(sin_, 4096)), 2.0, 1e-5);
}

TEST(OperatorNorm, SmallMatrices) {
  const TruncationSpec tr = TruncationSpec::uniform(1, 0, 1.0);
  const TruncationSpec two({1}, {1.0});
  EXPECT_EQ(operator_norm({tr, CMatrix::Identity(1, 1)}), 1.0);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -5.0;
  EXPECT_NEAR(operator_norm({two, d}), 5.0, 1e-14);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(operator_norm({two, bad}), std::invalid_argument);
}

TEST(OperatorNorm, SineMultiplicationApproachesSupNorm) {
  const TruncationSpec tr = TruncationSpec::uniform(1, 16, 2 * kPi);
  const auto h = assemble_multiplication_operator(first_harmonic(sin_), tr);
  EXPECT_NEAR(operator_norm(h), 1.0, 5e-2);
  EXPECT_LE(operator_norm(h), 1.0 + 1e-12);
}

TEST(Pairing, IdentityAndBasisModes) {
  const TruncationSpec tr = TruncationSpec::uniform(1, 2, 2 * kPi);
  const auto n = static_cast<Eigen::Index>(tr.size());
  SpectralField psi = SpectralField::zeros(tr);
  psi.coeffs << Complex(1, 2), Complex(0, -1), 3.0, Complex(0.5, 0.5), -1.0;
  EXPECT_NEAR(std::abs(pairing({tr, CMatrix::Identity(n, n)}, psi) - psi.coeffs.squaredNorm()), 0.0, 1e-14);
  const auto h = assemble_multiplication_operator(first_harmonic(cos_), tr);
  SpectralField e = SpectralField::zeros(tr);
  e.coeffs[1] = 1.0;
  EXPECT_EQ(pairing(h, e), h.matrix(1, 1));
  EXPECT_THROW(pairing(h, SpectralField::zeros(TruncationSpec::uniform(1, 1, 2 * kPi))), std::invalid_argument);
}

TEST(ProductDiscrepancy, ZeroAtInitialTime) {
  const TruncationSpec tr = TruncationSpec::uniform(1, 16, 2 * kPi);
  const auto f = first_harmonic(sin_), g = first_harmonic(cos_);
  EXPECT_EQ(product_discrepancy(f, g, s1_benchmark_field(), 0.0, tr, kExpm, ProductMethod::HalfDensity), 0.0);
  EXPECT_LE(product_discrepancy(f, g, s1_benchmark_field(), 0.0, tr, kExpm, ProductMethod::Standard), 1e-14);
}

TEST(ProductDiscrepancy, HalfDensityBeatsStandardTransport) {
  const TruncationSpec tr = TruncationSpec::uniform(1, 16, 2 * kPi);
  const auto f = first_harmonic(sin_), g = first_harmonic(cos_);
  const double a = product_discrepancy(f, g, s1_benchmark_field(), 1.0, tr, kExpm, ProductMethod::HalfDensity);
  const double s = product_discrepancy(f, g, s1_benchmark_field(), 1.0, tr, kExpm, ProductMethod::Standard);
  EXPECT_LE(a, 1e-7);
  EXPECT_GE(s, 10.0 * a);
}

TEST(ProductDiscrepancy, RejectsTooWideFactors) {
  const TruncationSpec tr = TruncationSpec::uniform(1, 2, 2 * kPi);
  const SpectralField wide = SpectralField::zeros(TruncationSpec::uniform(1, 2, 2 * kPi));
  EXPECT_THROW(product_discrepancy(wide, first_harmonic(cos_), s1_benchmark_field(), 1.0, tr, kExpm,
                                   ProductMethod::HalfDensity),
               std::invalid_argument);
}

TEST(FitConvergence, PlantedSlopes) {
  std::vector<std::pair<double, double>> power, expo;
  for (double n : {4.0, 8.0, 16.0, 32.0}) power.emplace_back(n, 7.0 * std::pow(n, -3.0));
  EXPECT_NEAR(fit_convergence(power), -3.0, 0.01);
  double prev = 0.0;
  for (int hi : {8, 16, 32}) {
    expo.clear();
    for (int n = 2; n <= hi; n += 2) expo.emplace_back(n, std::exp(-double(n)));
    const double slope = fit_convergence(expo);
    EXPECT_LT(slope, prev);
    prev = slope;
  }
  EXPECT_THROW(fit_convergence({{1, 1}, {2, 0.5}}), std::invalid_argument);
  EXPECT_THROW(fit_convergence({{1, 1}, {2, 0.0}, {3, 0.1}}), std::invalid_argument);
}

TEST(Diagnostics, RepeatedCallsAgreeBitwise) {
  const TruncationSpec tr = TruncationSpec::uniform(1, 8, 2 * kPi);
  const auto f = first_harmonic(sin_), g = first_harmonic(cos_);
  for (auto m : {ProductMethod::HalfDensity, ProductMethod::Standard})
    EXPECT_EQ(product_discrepancy(f, g, s1_benchmark_field(), 0.7, tr, kExpm, m),
              product_discrepancy(f, g, s1_benchmark_field(), 0.7, tr, kExpm, m));
}
