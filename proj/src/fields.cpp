#include "pdpore/fields.hpp"

#include <algorithm>
#include <cmath>

namespace pdpore {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};

double clamped_affine(double x, double x0, double v0, double x1, double v1)
{
  double s = (x - x0) / (x1 - x0);
  s = std::clamp(s, 0.0, 1.0);
  return v0 + s * (v1 - v0);
}

void require_axis(int axis, const std::string& key)
{
  if (axis < 0 || axis > 2)
    throw ConfigError(key + ".axis", "axis must be 0, 1 or 2");
}

void require_finite(double v, const std::string& key)
{
  if (!std::isfinite(v))
    throw ConfigError(key, "value must be finite");
}

} // namespace

bool ProductScale::operator==(const ProductScale& other) const { return factors == other.factors; }

double evaluate_scale(const ScaleFunction& f, double t)
{
  return std::visit(overloaded{
                      [](const ConstantScale& c) { return c.value; },
                      [t](const LinearScale& l) { return clamped_affine(t, l.t0, l.v0, l.t1, l.v1); },
                      [t](const OneMinusCosScale& c) { return c.amplitude * (1.0 - std::cos(c.omega * t)); },
                      [t](const TableScale& tab) {
                        if (t <= tab.times.front())
                          return tab.values.front();
                        if (t >= tab.times.back())
                          return tab.values.back();
                        auto it = std::upper_bound(tab.times.begin(), tab.times.end(), t);
                        const auto k = static_cast<std::size_t>(it - tab.times.begin());
                        return clamped_affine(t, tab.times[k - 1], tab.values[k - 1], tab.times[k], tab.values[k]);
                      },
                      [t](const ProductScale& p) {
                        double v = 1.0;
                        for (const auto& factor : p.factors)
                          v *= evaluate_scale(factor, t);
                        return v;
                      },
                    },
                    f);
}

void validate_scale(const ScaleFunction& f, const std::string& key)
{
  std::visit(overloaded{
               [&](const ConstantScale& c) { require_finite(c.value, key + ".value"); },
               [&](const LinearScale& l) {
                 if (!(l.t1 != l.t0))
                   throw ConfigError(key, "linear scale needs t0 != t1");
               },
               [&](const OneMinusCosScale& c) {
                 require_finite(c.amplitude, key + ".amplitude");
                 require_finite(c.omega, key + ".omega");
               },
               [&](const TableScale& tab) {
                 if (tab.times.empty() || tab.times.size() != tab.values.size())
                   throw ConfigError(key, "table needs equally many (non-zero) times and values");
                 for (std::size_t k = 1; k < tab.times.size(); ++k)
                   if (!(tab.times[k] > tab.times[k - 1]))
                     throw ConfigError(key + ".times", "times must be strictly increasing");
               },
               [&](const ProductScale& p) {
                 for (std::size_t k = 0; k < p.factors.size(); ++k)
                   validate_scale(p.factors[k], key + ".factors[" + std::to_string(k) + "]");
               },
             },
             f);
}

double evaluate_pressure(const PorePressureField& field, const Vec3& x, double t)
{
  return std::visit(overloaded{
                      [](const UniformPressure& u) { return u.value; },
                      [&](const AxialRamp& r) { return clamped_affine(x[r.axis], r.x_lo, r.p_lo, r.x_hi, r.p_hi); },
                      [&](const RadialRamp& r) {
                        if (r.layer && (x[r.axis] < r.layer->lo || x[r.axis] > r.layer->hi))
                          return 0.0;
                        Vec3 d = x - r.origin;
                        d[r.axis] = 0.0;
                        return clamped_affine(d.norm(), r.r_in, r.p_in, r.r_out, r.p_out);
                      },
                      [&](const Hydrostatic& h) { return h.specific_weight * (h.datum - x[h.axis]); },
                      [&](const TimeScaled& s) { return evaluate_scale(s.scale, t) * evaluate_pressure(*s.base, x, t); },
                    },
                    field);
}

void validate_pressure(const PorePressureField& field, const std::string& key)
{
  std::visit(overloaded{
               [&](const UniformPressure& u) { require_finite(u.value, key + ".value"); },
               [&](const AxialRamp& r) {
                 require_axis(r.axis, key);
                 if (!(r.x_lo != r.x_hi))
                   throw ConfigError(key, "axial ramp needs x_lo != x_hi");
               },
               [&](const RadialRamp& r) {
                 require_axis(r.axis, key);
                 if (!(r.r_in != r.r_out))
                   throw ConfigError(key, "radial ramp needs r_in != r_out");
                 if (r.layer && !(r.layer->hi >= r.layer->lo))
                   throw ConfigError(key + ".layer", "layer interval is empty");
               },
               [&](const Hydrostatic& h) {
                 require_axis(h.axis, key);
                 require_finite(h.specific_weight, key + ".specific_weight");
               },
               [&](const TimeScaled& s) {
                 validate_pressure(*s.base, key + ".base");
                 validate_scale(s.scale, key + ".scale");
               },
             },
             field);
}

Vec3 evaluate_body_force(const BodyForceField& field, const Vec3& /*x*/, double /*t*/)
{
  return std::visit(overloaded{
                      [](const ConstantBodyForce& c) -> Vec3 { return c.value; },
                      [](const SpecificWeight& w) -> Vec3 { return -w.specific_weight * Vec3::Unit(w.axis); },
                    },
                    field);
}

void validate_body_force(const BodyForceField& field, const std::string& key)
{
  std::visit(overloaded{
               [&](const ConstantBodyForce& c) {
                 if (!c.value.allFinite())
                   throw ConfigError(key + ".value", "body force must be finite");
               },
               [&](const SpecificWeight& w) {
                 require_axis(w.axis, key);
                 require_finite(w.specific_weight, key + ".specific_weight");
               },
             },
             field);
}

LoadSchedule LoadSchedule::uniform(double t_begin, double t_end, int steps)
{
  if (steps < 1)
    throw ConfigError("schedule.steps", "at least one step is required");
  LoadSchedule s;
  s.times.reserve(static_cast<std::size_t>(steps));
  for (int k = 1; k <= steps; ++k)
    s.times.push_back(t_begin + (t_end - t_begin) * k / steps);
  return s;
}

void LoadSchedule::validate() const
{
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] < 0.0)
      throw ConfigError("schedule.times", "times must be finite and non-negative");
    if (k > 0 && !(times[k] > times[k - 1]))
      throw ConfigError("schedule.times", "times must be strictly increasing");
  }
}

Vec3 darcy_velocity(const Vec3& pressure_gradient, double drag_coefficient, const Vec3& fluid_body_force)
{
  if (!(drag_coefficient > 0.0))
    throw ConfigError("drag_coefficient", "drag coefficient must be positive");
  return (fluid_body_force - pressure_gradient) / drag_coefficient;
}

} // namespace pdpore
