#pragma once

#include "pdpore/box.hpp"
#include "pdpore/common.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace pdpore {

// ---------------------------------------------------------------------------
// Time functions

struct ConstantScale
{
  double value = 1.0;
  bool operator==(const ConstantScale&) const = default;
};

/// Affine between (t0, v0) and (t1, v1), clamped to the end values outside.
struct LinearScale
{
  double t0 = 0.0, v0 = 0.0, t1 = 1.0, v1 = 1.0;
  bool operator==(const LinearScale&) const = default;
};

/// amplitude * (1 - cos(omega t))
struct OneMinusCosScale
{
  double amplitude = 1.0;
  double omega = 1.0;
  bool operator==(const OneMinusCosScale&) const = default;
};

/// Piecewise-linear through (times[k], values[k]), clamped outside.
struct TableScale
{
  std::vector<double> times;
  std::vector<double> values;
  bool operator==(const TableScale&) const = default;
};

struct ProductScale;

using ScaleFunction = std::variant<ConstantScale, LinearScale, OneMinusCosScale, TableScale, ProductScale>;

struct ProductScale
{
  std::vector<ScaleFunction> factors;
  bool operator==(const ProductScale&) const;
};

double evaluate_scale(const ScaleFunction& f, double t);
void validate_scale(const ScaleFunction& f, const std::string& key);

// ---------------------------------------------------------------------------
// Pore pressure

struct UniformPressure
{
  double value = 0.0;
  bool operator==(const UniformPressure&) const = default;
};

/// Affine in x[axis] from (x_lo, p_lo) to (x_hi, p_hi), clamped outside.
struct AxialRamp
{
  int axis = 0;
  double x_lo = 0.0, p_lo = 0.0, x_hi = 1.0, p_hi = 0.0;
  bool operator==(const AxialRamp&) const = default;
};

struct Interval
{
  double lo = 0.0, hi = 0.0;
  bool operator==(const Interval&) const = default;
};

/// Affine in the distance r from a line parallel to `axis` through
/// `origin`, clamped outside [r_in, r_out]. With `layer`, the field is zero
/// where x[axis] lies outside the interval.
struct RadialRamp
{
  int axis = 2;
  Vec3 origin = Vec3::Zero();
  double r_in = 0.0, p_in = 0.0, r_out = 1.0, p_out = 0.0;
  std::optional<Interval> layer;
  bool operator==(const RadialRamp&) const = default;
};

/// p = specific_weight * (datum - x[axis]); `axis` points up. Negative above
/// the datum.
struct Hydrostatic
{
  int axis = 2;
  double datum = 0.0;
  double specific_weight = 0.0;
  bool operator==(const Hydrostatic&) const = default;
};

struct TimeScaled;

using PorePressureField = std::variant<UniformPressure, AxialRamp, RadialRamp, Hydrostatic, TimeScaled>;

/// scale(t) * base(x)
struct TimeScaled
{
  Box<PorePressureField> base{UniformPressure{}};
  ScaleFunction scale = ConstantScale{};
  bool operator==(const TimeScaled&) const = default;
};

double evaluate_pressure(const PorePressureField& field, const Vec3& x, double t);
void validate_pressure(const PorePressureField& field, const std::string& key);

// ---------------------------------------------------------------------------
// Body force (force per unit volume)

struct ConstantBodyForce
{
  Vec3 value = Vec3::Zero();
  bool operator==(const ConstantBodyForce&) const = default;
};

/// Weight acting along -axis with magnitude `specific_weight`.
struct SpecificWeight
{
  int axis = 2;
  double specific_weight = 0.0;
  bool operator==(const SpecificWeight&) const = default;
};

using BodyForceField = std::variant<ConstantBodyForce, SpecificWeight>;

Vec3 evaluate_body_force(const BodyForceField& field, const Vec3& x, double t);
void validate_body_force(const BodyForceField& field, const std::string& key);

// ---------------------------------------------------------------------------

/// Quasi-static load-step times. An empty schedule is a single static
/// solve at t = 0.
struct LoadSchedule
{
  std::vector<double> times;

  static LoadSchedule uniform(double t_begin, double t_end, int steps);
  void validate() const;
  std::vector<double> steps() const { return times.empty() ? std::vector<double>{0.0} : times; }

  bool operator==(const LoadSchedule&) const = default;
};

/// Darcy velocity from the fluid momentum balance alpha v + grad p = rho b.
Vec3 darcy_velocity(const Vec3& pressure_gradient, double drag_coefficient, const Vec3& fluid_body_force);

} // namespace pdpore
