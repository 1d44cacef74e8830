#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nhs/lattice.hpp"

namespace nhs {

struct ParamPoint {
  double x;  // detuning-like coordinate
  double y;  // gain-like coordinate
};

struct ParamBox {
  double x_min, x_max, y_min, y_max;
  bool contains(ParamPoint p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
};

struct ParamFamily {
  std::string label;
  std::function<LatticeSpec(ParamPoint)> spec;
  ParamBox box;
};

// Ready-made families over the (x, y) plane.
ParamFamily qubit_family(ParamBox box);  // (omega, t)
// Uniform hopping t with z_m = x + iy and z_{n-m+1} = x - iy.
ParamFamily mirrored_defect_family(int n, int m, double t, ParamBox box);
// (detuning, gain) of the central defect pair, other parameters from base.
ParamFamily nn_defect_family(NearestNeighbourDefect base, ParamBox box);

struct Discriminant {
  double re;
  double im;
};

// Disc of det(lambda I - H(point)); the diagonal is centered first, which
// leaves the value unchanged and keeps the coefficients small.
Discriminant discriminant_surface(const ParamFamily& family, ParamPoint point);

// Natural magnitude prod_{i<j} (|l_i - c| + |l_j - c|)^2 about the mean eigenvalue c.
double discriminant_scale(const ParamFamily& family, ParamPoint point);

enum class SingularClass { Cusp, Acnode, Crunode };

struct SingularPoint {
  ParamPoint point;
  SingularClass cls;
  int ep_order;     // Puiseux exponent from puiseux_fit, 0 if the fit was rejected
  int jump_order;   // largest algebraic multiplicity eig resolves at the point
};

struct EPContour {
  std::vector<std::vector<ParamPoint>> segments;
  std::vector<SingularPoint> singular_points;  // filled by singular_points()
  int grid_resolution = 0;
  int dropped_points = 0;
};

struct LocusOptions {
  int refinement_levels = 2;
  double residual_tol = 1e-9;
  double pair_gap_tol = 1e-4;
};

EPContour ep_locus(const ParamFamily& family, int resolution = 256, LocusOptions opts = {});

// Sign changes of Re D between consecutive y samples on the line x = const,
// each refined by bisection.
std::vector<double> crossings_along_y(const ParamFamily& family, double x, const std::vector<double>& ys);

std::vector<SingularPoint> singular_points(const ParamFamily& family, const EPContour& contour);

struct PuiseuxFit {
  int exponent;
  double leading_coeff;
  double slope;
};

PuiseuxFit puiseux_fit(const ParamFamily& family, ParamPoint point, ParamPoint direction);

double ep_asymptote(int n, double detuning, double t);

}  // namespace nhs
