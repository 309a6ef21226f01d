#pragma once

#include <string>
#include <vector>

#include "polyfreq/fem.hpp"
#include "polyfreq/geometry.hpp"

namespace polyfreq {

struct TriangleDeficits {
  double delta_lambda = 0.0;  // |T| lambda(T) - |P3| lambda(P3)
  double delta_p = 0.0;       // L^2 / (12 sqrt(3) |T|) - 1
  double lambda = 0.0;
  double area = 0.0;
};

enum class Reference {
  ClosedForm,  // |P3| lambda(P3) = 4 pi^2 / sqrt(3)
  Matched      // FEM eigenvalue of the equilateral triangle at the same level
};

TriangleDeficits deficits(const Polygon& t, int refine, Reference ref = Reference::ClosedForm);

struct StabilitySample {
  double delta_lambda = 0.0;
  double delta_p = 0.0;
  double asymmetry = 0.0;
  double ratio = 0.0;       // delta_lambda / delta_p
  bool ratio_defined = true;
};

struct StabilityExperiment {
  std::string family;
  std::vector<double> parameters;
  std::vector<StabilitySample> samples;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double exponent = 0.0;
};

/// delta_lambda / delta_p over a sample of triangles; equilateral samples
/// (delta_p below 1e-12) are flagged and excluded from the envelope.
StabilityExperiment equivalence_ratio_scan(const std::vector<Polygon>& samples, int refine,
                                           bool with_asymmetry = false);

struct FamilyPoint {
  double a = 0.0;
  double lambda = 0.0;
  double ratio = 0.0;        // (lambda - 4 pi^2/sqrt 3) / (L^2 - 12 sqrt 3)
  double bracket_lo = 0.0;   // (1 - eps) pi^2 / 16
  double bracket_hi = 0.0;   // pi^2 / 16 / (1 - eps)^2
  double lambda_outer = 0.0; // circumscribed 2a x (1/a) rectangle
  double lambda_inner = 0.0; // inscribed 2a eps x (1 - eps)/a rectangle
  bool in_bracket = false;
  bool sandwich = false;     // lambda_outer < lambda < lambda_inner
  std::size_t nodes = 0;
};

/// Isosceles triangle of area 1 with base 2a and height 1/a.
Polygon thin_isosceles(double a);

std::vector<FamilyPoint> pi2_over_16_family(const std::vector<double>& a_values, double eps, int refine);

struct SharpnessFit {
  std::vector<double> t;
  std::vector<double> asymmetry;
  std::vector<double> delta_lambda;
  double exponent = 0.0;      // slope of log delta_lambda against log asymmetry
  double asym_slope = 0.0;    // slope of log asymmetry against log t
  double lambda_slope = 0.0;  // slope of log delta_lambda against log t
};

/// Equilateral triangle of area 1 with vertex 0 moved by t parallel to the
/// opposite side (area is unchanged).
Polygon perturbed_equilateral(double t);

SharpnessFit sharpness_exponent_fit(const std::vector<double>& t_values, int refine);

}  // namespace polyfreq
