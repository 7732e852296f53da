#include "pdpore/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace pdpore {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};

struct Unit
{
  Dimension dimension;
  double factor;
};

constexpr double foot = 0.3048;
constexpr double pound_force = 4.4482216152605;
constexpr double psi = pound_force / (0.0254 * 0.0254);

const std::map<std::string, Unit, std::less<>>& unit_table()
{
  static const std::map<std::string, Unit, std::less<>> table{
    {"m", {Dimension::length, 1.0}},
    {"cm", {Dimension::length, 1e-2}},
    {"mm", {Dimension::length, 1e-3}},
    {"km", {Dimension::length, 1e3}},
    {"ft", {Dimension::length, foot}},
    {"in", {Dimension::length, 0.0254}},
    {"Pa", {Dimension::stress, 1.0}},
    {"kPa", {Dimension::stress, 1e3}},
    {"MPa", {Dimension::stress, 1e6}},
    {"GPa", {Dimension::stress, 1e9}},
    {"psi", {Dimension::stress, psi}},
    {"ksi", {Dimension::stress, 1e3 * psi}},
    {"N", {Dimension::force, 1.0}},
    {"kN", {Dimension::force, 1e3}},
    {"MN", {Dimension::force, 1e6}},
    {"lbf", {Dimension::force, pound_force}},
    {"kip", {Dimension::force, 1e3 * pound_force}},
    {"N/m^3", {Dimension::force_per_volume, 1.0}},
    {"kN/m^3", {Dimension::force_per_volume, 1e3}},
    {"MN/m^3", {Dimension::force_per_volume, 1e6}},
    {"lbf/ft^3", {Dimension::force_per_volume, pound_force / (foot * foot * foot)}},
    {"s", {Dimension::time, 1.0}},
    {"min", {Dimension::time, 60.0}},
    {"h", {Dimension::time, 3600.0}},
    {"day", {Dimension::time, 86400.0}},
    {"1/s", {Dimension::frequency, 1.0}},
    {"rad/s", {Dimension::frequency, 1.0}},
  };
  return table;
}

std::string_view dimension_name(Dimension d)
{
  switch (d) {
  case Dimension::none:
    return "dimensionless number";
  case Dimension::length:
    return "length";
  case Dimension::stress:
    return "stress";
  case Dimension::force:
    return "force";
  case Dimension::force_per_volume:
    return "force per volume";
  case Dimension::time:
    return "time";
  case Dimension::frequency:
    return "frequency";
  }
  return "";
}

std::string units_of(Dimension d)
{
  std::string out;
  for (const auto& [name, unit] : unit_table())
    if (unit.dimension == d)
      out += (out.empty() ? "" : ", ") + name;
  return out.empty() ? "no unit" : out;
}

// ---------------------------------------------------------------------------
// Reading

std::string join(const std::string& path, std::string_view key)
{
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string item(const std::string& path, std::size_t k)
{
  return path + "[" + std::to_string(k) + "]";
}

/// An object whose keys are restricted to `allowed`.
class Object
{
public:
  Object(const json& value, std::string path, std::initializer_list<std::string_view> allowed)
    : value_(value), path_(std::move(path))
  {
    if (!value.is_object())
      throw ConfigError(path_, "expected an object");
    for (const auto& [key, v] : value.items()) {
      bool known = false;
      for (auto a : allowed)
        known = known || key == a;
      if (!known)
        throw ConfigError(join(path_, key), "unknown key");
    }
  }

  bool has(std::string_view key) const { return value_.contains(std::string(key)); }
  std::string key(std::string_view k) const { return join(path_, k); }
  const json& at(std::string_view k) const
  {
    if (!has(k))
      throw ConfigError(key(k), "missing required key");
    return value_.at(std::string(k));
  }
  const std::string& path() const { return path_; }

private:
  const json& value_;
  std::string path_;
};

double quantity(const json& v, const std::string& key, Dimension d)
{
  if (v.is_number())
    return v.get<double>();
  if (v.is_string())
    return parse_quantity(v.get<std::string>(), d, key);
  throw ConfigError(key, "expected a number or a quantity string");
}

double quantity(const Object& o, std::string_view k, Dimension d, double fallback)
{
  return o.has(k) ? quantity(o.at(k), o.key(k), d) : fallback;
}

int integer(const json& v, const std::string& key)
{
  if (!v.is_number_integer())
    throw ConfigError(key, "expected an integer");
  const auto n = v.get<long long>();
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
    throw ConfigError(key, "integer out of range");
  return static_cast<int>(n);
}

int integer(const Object& o, std::string_view k, int fallback)
{
  return o.has(k) ? integer(o.at(k), o.key(k)) : fallback;
}

std::string text(const json& v, const std::string& key)
{
  if (!v.is_string())
    throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

bool flag(const Object& o, std::string_view k, bool fallback)
{
  if (!o.has(k))
    return fallback;
  if (!o.at(k).is_boolean())
    throw ConfigError(o.key(k), "expected true or false");
  return o.at(k).get<bool>();
}

Vec3 vec3(const json& v, const std::string& key, Dimension d)
{
  if (!v.is_array() || v.size() != 3)
    throw ConfigError(key, "expected an array of three values");
  Vec3 out;
  for (int a = 0; a < 3; ++a)
    out[a] = quantity(v[static_cast<std::size_t>(a)], item(key, static_cast<std::size_t>(a)), d);
  return out;
}

Vec3 vec3(const Object& o, std::string_view k, Dimension d, const Vec3& fallback)
{
  return o.has(k) ? vec3(o.at(k), o.key(k), d) : fallback;
}

std::vector<double> numbers(const json& v, const std::string& key, Dimension d)
{
  if (!v.is_array())
    throw ConfigError(key, "expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out.push_back(quantity(v[k], item(key, k), d));
  return out;
}

std::vector<std::string> names(const json& v, const std::string& key)
{
  if (!v.is_array())
    throw ConfigError(key, "expected an array of tag names");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out.push_back(text(v[k], item(key, k)));
  return out;
}

std::string type_of(const json& v, const std::string& key)
{
  if (!v.is_object() || !v.contains("type"))
    throw ConfigError(join(key, "type"), "missing required key");
  return text(v.at("type"), join(key, "type"));
}

ScaleFunction read_scale(const json& v, const std::string& key)
{
  const std::string type = type_of(v, key);
  if (type == "constant") {
    Object o(v, key, {"type", "value"});
    return ConstantScale{quantity(o, "value", Dimension::none, 1.0)};
  }
  if (type == "linear") {
    Object o(v, key, {"type", "t0", "v0", "t1", "v1"});
    LinearScale s;
    s.t0 = quantity(o, "t0", Dimension::time, s.t0);
    s.v0 = quantity(o, "v0", Dimension::none, s.v0);
    s.t1 = quantity(o, "t1", Dimension::time, s.t1);
    s.v1 = quantity(o, "v1", Dimension::none, s.v1);
    return s;
  }
  if (type == "one_minus_cos") {
    Object o(v, key, {"type", "amplitude", "omega"});
    OneMinusCosScale s;
    s.amplitude = quantity(o, "amplitude", Dimension::none, s.amplitude);
    s.omega = quantity(o, "omega", Dimension::frequency, s.omega);
    return s;
  }
  if (type == "table") {
    Object o(v, key, {"type", "times", "values"});
    return TableScale{numbers(o.at("times"), o.key("times"), Dimension::time),
                      numbers(o.at("values"), o.key("values"), Dimension::none)};
  }
  if (type == "product") {
    Object o(v, key, {"type", "factors"});
    const json& f = o.at("factors");
    if (!f.is_array())
      throw ConfigError(o.key("factors"), "expected an array");
    ProductScale s;
    for (std::size_t k = 0; k < f.size(); ++k)
      s.factors.push_back(read_scale(f[k], item(o.key("factors"), k)));
    return s;
  }
  throw ConfigError(join(key, "type"),
                    "unknown scale '" + type + "' (expected constant, linear, one_minus_cos, table or product)");
}

PorePressureField read_pressure(const json& v, const std::string& key)
{
  const std::string type = type_of(v, key);
  if (type == "uniform") {
    Object o(v, key, {"type", "value"});
    return UniformPressure{quantity(o.at("value"), o.key("value"), Dimension::stress)};
  }
  if (type == "axial_ramp") {
    Object o(v, key, {"type", "axis", "x_lo", "p_lo", "x_hi", "p_hi"});
    AxialRamp f;
    f.axis = integer(o, "axis", f.axis);
    f.x_lo = quantity(o.at("x_lo"), o.key("x_lo"), Dimension::length);
    f.p_lo = quantity(o.at("p_lo"), o.key("p_lo"), Dimension::stress);
    f.x_hi = quantity(o.at("x_hi"), o.key("x_hi"), Dimension::length);
    f.p_hi = quantity(o.at("p_hi"), o.key("p_hi"), Dimension::stress);
    return f;
  }
  if (type == "radial_ramp") {
    Object o(v, key, {"type", "axis", "origin", "r_in", "p_in", "r_out", "p_out", "layer"});
    RadialRamp f;
    f.axis = integer(o, "axis", f.axis);
    f.origin = vec3(o, "origin", Dimension::length, f.origin);
    f.r_in = quantity(o.at("r_in"), o.key("r_in"), Dimension::length);
    f.p_in = quantity(o.at("p_in"), o.key("p_in"), Dimension::stress);
    f.r_out = quantity(o.at("r_out"), o.key("r_out"), Dimension::length);
    f.p_out = quantity(o.at("p_out"), o.key("p_out"), Dimension::stress);
    if (o.has("layer")) {
      Object l(o.at("layer"), o.key("layer"), {"lo", "hi"});
      f.layer = Interval{quantity(l.at("lo"), l.key("lo"), Dimension::length),
                         quantity(l.at("hi"), l.key("hi"), Dimension::length)};
    }
    return f;
  }
  if (type == "hydrostatic") {
    Object o(v, key, {"type", "axis", "datum", "specific_weight"});
    Hydrostatic f;
    f.axis = integer(o, "axis", f.axis);
    f.datum = quantity(o, "datum", Dimension::length, f.datum);
    f.specific_weight = quantity(o.at("specific_weight"), o.key("specific_weight"), Dimension::force_per_volume);
    return f;
  }
  if (type == "time_scaled") {
    Object o(v, key, {"type", "base", "scale"});
    TimeScaled f;
    f.base = read_pressure(o.at("base"), o.key("base"));
    f.scale = read_scale(o.at("scale"), o.key("scale"));
    return f;
  }
  throw ConfigError(join(key, "type"),
                    "unknown pressure field '" + type +
                      "' (expected uniform, axial_ramp, radial_ramp, hydrostatic or time_scaled)");
}

BodyForceField read_body_force(const json& v, const std::string& key)
{
  const std::string type = type_of(v, key);
  if (type == "constant") {
    Object o(v, key, {"type", "value"});
    return ConstantBodyForce{vec3(o.at("value"), o.key("value"), Dimension::force_per_volume)};
  }
  if (type == "specific_weight") {
    Object o(v, key, {"type", "axis", "specific_weight"});
    SpecificWeight w;
    w.axis = integer(o, "axis", w.axis);
    w.specific_weight = quantity(o.at("specific_weight"), o.key("specific_weight"), Dimension::force_per_volume);
    return w;
  }
  throw ConfigError(join(key, "type"), "unknown body force '" + type + "' (expected constant or specific_weight)");
}

SelectLayer::Side side_from(const json& v, const std::string& key)
{
  const auto s = text(v, key);
  if (s == "low")
    return SelectLayer::Side::low;
  if (s == "high")
    return SelectLayer::Side::high;
  throw ConfigError(key, "expected 'low' or 'high', got '" + s + "'");
}

TagSelector read_selector(const json& v, const std::string& key)
{
  const std::string type = type_of(v, key);
  if (type == "all") {
    Object o(v, key, {"type"});
    return SelectAll{};
  }
  if (type == "box") {
    Object o(v, key, {"type", "lo", "hi"});
    return SelectBox{vec3(o.at("lo"), o.key("lo"), Dimension::length),
                     vec3(o.at("hi"), o.key("hi"), Dimension::length)};
  }
  if (type == "layer") {
    Object o(v, key, {"type", "axis", "side", "layers"});
    SelectLayer s;
    s.axis = integer(o.at("axis"), o.key("axis"));
    s.side = side_from(o.at("side"), o.key("side"));
    s.layers = integer(o, "layers", s.layers);
    return s;
  }
  if (type == "nearest") {
    Object o(v, key, {"type", "point", "count"});
    SelectNearest s;
    s.point = vec3(o.at("point"), o.key("point"), Dimension::length);
    s.count = integer(o, "count", s.count);
    return s;
  }
  if (type == "shell") {
    Object o(v, key, {"type", "axis", "origin", "r_min", "r_max"});
    SelectShell s;
    s.axis = integer(o, "axis", s.axis);
    s.origin = vec3(o, "origin", Dimension::length, s.origin);
    s.r_min = quantity(o, "r_min", Dimension::length, s.r_min);
    s.r_max = quantity(o.at("r_max"), o.key("r_max"), Dimension::length);
    return s;
  }
  throw ConfigError(join(key, "type"), "unknown selector '" + type + "' (expected all, box, layer, nearest or shell)");
}

const json& array_at(const Object& o, std::string_view k)
{
  const json& v = o.at(k);
  if (!v.is_array())
    throw ConfigError(o.key(k), "expected an array");
  return v;
}

ProblemSpec read_spec(const json& root)
{
  Object top(root, "",
             {"lattice", "horizon", "influence", "material", "effective_stress", "pressure_field", "body_force", "tags",
              "boundary_conditions", "schedule", "solver", "output"});
  ProblemSpec spec;

  {
    Object o(top.at("lattice"), "lattice", {"lo", "hi", "spacing", "exclusion"});
    spec.lattice.lo = vec3(o.at("lo"), o.key("lo"), Dimension::length);
    spec.lattice.hi = vec3(o.at("hi"), o.key("hi"), Dimension::length);
    const json& s = o.at("spacing");
    spec.lattice.spacing = s.is_array() ? vec3(s, o.key("spacing"), Dimension::length)
                                        : Vec3::Constant(quantity(s, o.key("spacing"), Dimension::length));
    if (o.has("exclusion")) {
      Object e(o.at("exclusion"), o.key("exclusion"), {"axis", "origin", "radius"});
      CylinderExclusion c;
      c.axis = integer(e, "axis", c.axis);
      c.origin = vec3(e, "origin", Dimension::length, c.origin);
      c.radius = quantity(e.at("radius"), e.key("radius"), Dimension::length);
      spec.lattice.exclusion = c;
    }
  }

  if (top.has("horizon")) {
    Object o(top.at("horizon"), "horizon", {"ratio", "length"});
    if (o.has("ratio") == o.has("length"))
      throw ConfigError("horizon", "give exactly one of 'ratio' and 'length'");
    if (o.has("ratio"))
      spec.horizon = HorizonSpec{HorizonSpec::Kind::ratio, quantity(o.at("ratio"), o.key("ratio"), Dimension::none)};
    else
      spec.horizon =
        HorizonSpec{HorizonSpec::Kind::absolute, quantity(o.at("length"), o.key("length"), Dimension::length)};
  }

  if (top.has("influence"))
    spec.influence = influence_kind_from_string(text(top.at("influence"), "influence"));

  {
    Object o(top.at("material"), "material", {"bulk_modulus", "shear_modulus"});
    spec.material.bulk_modulus = quantity(o.at("bulk_modulus"), o.key("bulk_modulus"), Dimension::stress);
    spec.material.shear_modulus = quantity(o.at("shear_modulus"), o.key("shear_modulus"), Dimension::stress);
  }

  if (top.has("effective_stress")) {
    Object o(top.at("effective_stress"), "effective_stress",
             {"mode", "drained_bulk_modulus", "solid_bulk_modulus", "gamma"});
    auto& es = spec.effective_stress;
    if (o.has("mode")) {
      const auto mode = text(o.at("mode"), o.key("mode"));
      if (mode == "unit")
        es.mode = EffectiveStressParams::Mode::unit;
      else if (mode == "biot")
        es.mode = EffectiveStressParams::Mode::biot;
      else if (mode == "explicit")
        es.mode = EffectiveStressParams::Mode::explicit_;
      else
        throw ConfigError(o.key("mode"), "expected 'unit', 'biot' or 'explicit', got '" + mode + "'");
    }
    es.drained_bulk_modulus = quantity(o, "drained_bulk_modulus", Dimension::stress, es.drained_bulk_modulus);
    es.solid_bulk_modulus = quantity(o, "solid_bulk_modulus", Dimension::stress, es.solid_bulk_modulus);
    es.gamma = quantity(o, "gamma", Dimension::none, es.gamma);
  }

  if (top.has("pressure_field") && !top.at("pressure_field").is_null())
    spec.pressure_field = read_pressure(top.at("pressure_field"), "pressure_field");
  if (top.has("body_force"))
    spec.body_force = read_body_force(top.at("body_force"), "body_force");

  if (top.has("tags")) {
    const json& tags = array_at(top, "tags");
    for (std::size_t k = 0; k < tags.size(); ++k) {
      const std::string key = item("tags", k);
      Object o(tags[k], key, {"name", "select", "within", "exclude"});
      TagDefinition tag;
      tag.name = text(o.at("name"), o.key("name"));
      if (o.has("select"))
        tag.selector = read_selector(o.at("select"), o.key("select"));
      if (o.has("within"))
        tag.within = names(o.at("within"), o.key("within"));
      if (o.has("exclude"))
        tag.exclude = names(o.at("exclude"), o.key("exclude"));
      spec.tags.push_back(std::move(tag));
    }
  }

  if (top.has("boundary_conditions")) {
    Object bc(top.at("boundary_conditions"), "boundary_conditions", {"fixed", "loads"});
    if (bc.has("fixed")) {
      const json& fixed = array_at(bc, "fixed");
      for (std::size_t k = 0; k < fixed.size(); ++k) {
        Object o(fixed[k], item(bc.key("fixed"), k), {"tag", "axis", "value"});
        FixedDisplacement fd;
        fd.tag = text(o.at("tag"), o.key("tag"));
        fd.axis = integer(o.at("axis"), o.key("axis"));
        fd.value = quantity(o, "value", Dimension::length, 0.0);
        spec.bcs.fixed.push_back(std::move(fd));
      }
    }
    if (bc.has("loads")) {
      const json& loads = array_at(bc, "loads");
      for (std::size_t k = 0; k < loads.size(); ++k) {
        const std::string key = item(bc.key("loads"), k);
        Object o(loads[k], key, {"tag", "kind", "total", "magnitude", "axis", "origin", "scale"});
        PointLoad load;
        load.tag = text(o.at("tag"), o.key("tag"));
        const std::string kind = o.has("kind") ? text(o.at("kind"), o.key("kind")) : "directional";
        if (kind == "directional") {
          load.kind = PointLoad::Kind::directional;
          for (auto k2 : {"magnitude", "axis", "origin"})
            if (o.has(k2))
              throw ConfigError(o.key(k2), "only radial loads take this key");
          load.total = vec3(o.at("total"), o.key("total"), Dimension::force);
        }
        else if (kind == "radial") {
          load.kind = PointLoad::Kind::radial;
          if (o.has("total"))
            throw ConfigError(o.key("total"), "radial loads take 'magnitude', not 'total'");
          load.magnitude = quantity(o.at("magnitude"), o.key("magnitude"), Dimension::force);
          load.axis = integer(o, "axis", load.axis);
          load.origin = vec3(o, "origin", Dimension::length, load.origin);
        }
        else
          throw ConfigError(o.key("kind"), "expected 'directional' or 'radial', got '" + kind + "'");
        if (o.has("scale"))
          load.scale = read_scale(o.at("scale"), o.key("scale"));
        spec.bcs.loads.push_back(std::move(load));
      }
    }
  }

  if (top.has("schedule")) {
    Object o(top.at("schedule"), "schedule", {"times", "uniform"});
    if (o.has("times") && o.has("uniform"))
      throw ConfigError("schedule", "give either 'times' or 'uniform', not both");
    if (o.has("times"))
      spec.schedule.times = numbers(o.at("times"), o.key("times"), Dimension::time);
    if (o.has("uniform")) {
      Object u(o.at("uniform"), o.key("uniform"), {"start", "end", "steps"});
      spec.schedule = LoadSchedule::uniform(quantity(u, "start", Dimension::time, 0.0),
                                            quantity(u.at("end"), u.key("end"), Dimension::time),
                                            integer(u.at("steps"), u.key("steps")));
    }
  }

  if (top.has("solver")) {
    Object o(top.at("solver"), "solver",
             {"residual_tolerance", "max_iterations", "max_fixed_point_iterations", "linearization"});
    auto& s = spec.solver;
    s.residual_tolerance = quantity(o, "residual_tolerance", Dimension::none, s.residual_tolerance);
    s.max_iterations = integer(o, "max_iterations", s.max_iterations);
    s.max_fixed_point_iterations = integer(o, "max_fixed_point_iterations", s.max_fixed_point_iterations);
    if (o.has("linearization"))
      s.linearization = linearization_from_string(text(o.at("linearization"), o.key("linearization")));
  }

  if (top.has("output")) {
    Object o(top.at("output"), "output", {"csv", "vtk"});
    spec.output.csv = flag(o, "csv", spec.output.csv);
    spec.output.vtk = flag(o, "vtk", spec.output.vtk);
  }

  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Writing

ojson vec_json(const Vec3& v)
{
  return ojson::array({v[0], v[1], v[2]});
}

ojson scale_json(const ScaleFunction& f)
{
  return std::visit(overloaded{
                      [](const ConstantScale& s) { return ojson{{"type", "constant"}, {"value", s.value}}; },
                      [](const LinearScale& s) {
                        return ojson{{"type", "linear"}, {"t0", s.t0}, {"v0", s.v0}, {"t1", s.t1}, {"v1", s.v1}};
                      },
                      [](const OneMinusCosScale& s) {
                        return ojson{{"type", "one_minus_cos"}, {"amplitude", s.amplitude}, {"omega", s.omega}};
                      },
                      [](const TableScale& s) {
                        return ojson{{"type", "table"}, {"times", s.times}, {"values", s.values}};
                      },
                      [](const ProductScale& s) {
                        ojson factors = ojson::array();
                        for (const auto& f : s.factors)
                          factors.push_back(scale_json(f));
                        return ojson{{"type", "product"}, {"factors", factors}};
                      },
                    },
                    f);
}

ojson pressure_json(const PorePressureField& field)
{
  return std::visit(overloaded{
                      [](const UniformPressure& f) { return ojson{{"type", "uniform"}, {"value", f.value}}; },
                      [](const AxialRamp& f) {
                        return ojson{{"type", "axial_ramp"}, {"axis", f.axis}, {"x_lo", f.x_lo},
                                     {"p_lo", f.p_lo},       {"x_hi", f.x_hi}, {"p_hi", f.p_hi}};
                      },
                      [](const RadialRamp& f) {
                        ojson out{{"type", "radial_ramp"}, {"axis", f.axis},   {"origin", vec_json(f.origin)},
                                  {"r_in", f.r_in},        {"p_in", f.p_in},   {"r_out", f.r_out},
                                  {"p_out", f.p_out}};
                        if (f.layer)
                          out["layer"] = ojson{{"lo", f.layer->lo}, {"hi", f.layer->hi}};
                        return out;
                      },
                      [](const Hydrostatic& f) {
                        return ojson{{"type", "hydrostatic"},
                                     {"axis", f.axis},
                                     {"datum", f.datum},
                                     {"specific_weight", f.specific_weight}};
                      },
                      [](const TimeScaled& f) {
                        return ojson{
                          {"type", "time_scaled"}, {"base", pressure_json(*f.base)}, {"scale", scale_json(f.scale)}};
                      },
                    },
                    field);
}

ojson selector_json(const TagSelector& selector)
{
  return std::visit(overloaded{
                      [](const SelectAll&) { return ojson{{"type", "all"}}; },
                      [](const SelectBox& s) {
                        return ojson{{"type", "box"}, {"lo", vec_json(s.lo)}, {"hi", vec_json(s.hi)}};
                      },
                      [](const SelectLayer& s) {
                        return ojson{{"type", "layer"},
                                     {"axis", s.axis},
                                     {"side", s.side == SelectLayer::Side::low ? "low" : "high"},
                                     {"layers", s.layers}};
                      },
                      [](const SelectNearest& s) {
                        return ojson{{"type", "nearest"}, {"point", vec_json(s.point)}, {"count", s.count}};
                      },
                      [](const SelectShell& s) {
                        return ojson{{"type", "shell"},   {"axis", s.axis},  {"origin", vec_json(s.origin)},
                                     {"r_min", s.r_min}, {"r_max", s.r_max}};
                      },
                    },
                    selector);
}

ojson spec_json(const ProblemSpec& spec)
{
  ojson out;
  ojson lattice{{"lo", vec_json(spec.lattice.lo)},
                {"hi", vec_json(spec.lattice.hi)},
                {"spacing", vec_json(spec.lattice.spacing)}};
  if (spec.lattice.exclusion)
    lattice["exclusion"] = ojson{{"axis", spec.lattice.exclusion->axis},
                                 {"origin", vec_json(spec.lattice.exclusion->origin)},
                                 {"radius", spec.lattice.exclusion->radius}};
  out["lattice"] = lattice;
  out["horizon"] = spec.horizon.kind == HorizonSpec::Kind::ratio ? ojson{{"ratio", spec.horizon.value}}
                                                                 : ojson{{"length", spec.horizon.value}};
  out["influence"] = to_string(spec.influence);
  out["material"] = ojson{{"bulk_modulus", spec.material.bulk_modulus},
                          {"shear_modulus", spec.material.shear_modulus}};
  out["effective_stress"] = ojson{{"mode", to_string(spec.effective_stress.mode)},
                                  {"drained_bulk_modulus", spec.effective_stress.drained_bulk_modulus},
                                  {"solid_bulk_modulus", spec.effective_stress.solid_bulk_modulus},
                                  {"gamma", spec.effective_stress.gamma}};
  out["pressure_field"] = spec.pressure_field ? pressure_json(*spec.pressure_field) : ojson(nullptr);
  out["body_force"] = std::visit(overloaded{
                                   [](const ConstantBodyForce& b) {
                                     return ojson{{"type", "constant"}, {"value", vec_json(b.value)}};
                                   },
                                   [](const SpecificWeight& w) {
                                     return ojson{{"type", "specific_weight"},
                                                  {"axis", w.axis},
                                                  {"specific_weight", w.specific_weight}};
                                   },
                                 },
                                 spec.body_force);

  ojson tags = ojson::array();
  for (const auto& tag : spec.tags) {
    ojson t{{"name", tag.name}, {"select", selector_json(tag.selector)}};
    if (!tag.within.empty())
      t["within"] = tag.within;
    if (!tag.exclude.empty())
      t["exclude"] = tag.exclude;
    tags.push_back(t);
  }
  out["tags"] = tags;

  ojson fixed = ojson::array();
  for (const auto& fd : spec.bcs.fixed)
    fixed.push_back(ojson{{"tag", fd.tag}, {"axis", fd.axis}, {"value", fd.value}});
  ojson loads = ojson::array();
  for (const auto& load : spec.bcs.loads) {
    ojson l{{"tag", load.tag}};
    if (load.kind == PointLoad::Kind::directional) {
      l["kind"] = "directional";
      l["total"] = vec_json(load.total);
    }
    else {
      l["kind"] = "radial";
      l["magnitude"] = load.magnitude;
      l["axis"] = load.axis;
      l["origin"] = vec_json(load.origin);
    }
    l["scale"] = scale_json(load.scale);
    loads.push_back(l);
  }
  out["boundary_conditions"] = ojson{{"fixed", fixed}, {"loads", loads}};
  out["schedule"] = ojson{{"times", spec.schedule.times}};
  out["solver"] = ojson{{"residual_tolerance", spec.solver.residual_tolerance},
                        {"max_iterations", spec.solver.max_iterations},
                        {"max_fixed_point_iterations", spec.solver.max_fixed_point_iterations},
                        {"linearization", to_string(spec.solver.linearization)}};
  out["output"] = ojson{{"csv", spec.output.csv}, {"vtk", spec.output.vtk}};
  return out;
}

void append_real(std::string& out, double v)
{
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

std::string real(double v)
{
  std::string s;
  append_real(s, v);
  return s;
}

template <class T>
T parse_field(std::string_view field, std::size_t line, const char* column)
{
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw IoError("line " + std::to_string(line) + ": bad value '" + std::string(field) + "' in column " + column);
  return value;
}

} // namespace

double parse_quantity(std::string_view text, Dimension dimension, const std::string& key)
{
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin)))
    ++begin;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc())
    throw ConfigError(key, "expected '<number> <unit>', got '" + std::string(text) + "'");
  while (ptr < end && std::isspace(static_cast<unsigned char>(*ptr)))
    ++ptr;
  while (end > ptr && std::isspace(static_cast<unsigned char>(end[-1])))
    --end;
  const std::string_view unit(ptr, static_cast<std::size_t>(end - ptr));
  if (unit.empty())
    return value;
  const auto it = unit_table().find(unit);
  if (it == unit_table().end())
    throw ConfigError(key, "unknown unit '" + std::string(unit) + "'; a " + std::string(dimension_name(dimension)) +
                             " takes " + units_of(dimension));
  if (it->second.dimension != dimension)
    throw ConfigError(key, "unit '" + std::string(unit) + "' is a " +
                             std::string(dimension_name(it->second.dimension)) + " but a " +
                             std::string(dimension_name(dimension)) + " is expected (" + units_of(dimension) + ")");
  return value * it->second.factor;
}

ProblemSpec parse_config(std::string_view document)
{
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  }
  catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object())
    throw ConfigError("config", "expected a JSON object at the top level");

  if (root.contains("benchmark")) {
    Object b(root.at("benchmark"), "benchmark", {"name", "resolution"});
    const auto name = text(b.at("name"), b.key("name"));
    BenchmarkName bench;
    try {
      bench = benchmark_from_string(name);
    }
    catch (const ConfigError&) {
      throw ConfigError(b.key("name"), "unknown benchmark '" + name +
                                         "' (expected lighthouse, harmonic_consolidation, subsidence or leakoff)");
    }
    const double resolution = quantity(b, "resolution", Dimension::none, 1.0);
    if (!(resolution > 0.0) || !std::isfinite(resolution))
      throw ConfigError(b.key("resolution"), "resolution must be positive");
    json base = json::parse(serialize_config(benchmark_problem(bench, resolution)));
    root.erase("benchmark");
    base.merge_patch(root);
    root = std::move(base);
  }
  return read_spec(root);
}

ProblemSpec load_config(const std::filesystem::path& path)
{
  return parse_config(read_file(path));
}

std::string serialize_config(const ProblemSpec& spec)
{
  return spec_json(spec).dump(2) + "\n";
}

// ---------------------------------------------------------------------------

void ResultFrame::check() const
{
  const std::size_t n = positions.size();
  if (displacements.size() != n || dilatation.size() != n || pressure.size() != n || pore_pressure.size() != n ||
      tags.size() != n)
    throw std::invalid_argument("result frame columns differ in length");
}

ResultFrame make_frame(const Model& model, const StepResult& step)
{
  ResultFrame frame;
  frame.time = step.time;
  frame.positions = model.particles.positions;
  frame.displacements = step.solution.displacements;
  frame.dilatation = step.dilatation;
  frame.pressure = step.pressure;
  frame.pore_pressure = step.pore_pressure;
  frame.tags = model.particles.tags;
  frame.check();
  return frame;
}

std::string format_csv(const ResultFrame& frame)
{
  frame.check();
  std::string out(csv_header);
  out += '\n';
  out.reserve(frame.size() * 220);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    out += std::to_string(i);
    for (int a = 0; a < 3; ++a) {
      out += ',';
      append_real(out, frame.positions[i][a]);
    }
    for (int a = 0; a < 3; ++a) {
      out += ',';
      append_real(out, frame.displacements[i][a]);
    }
    for (double v : {frame.dilatation[i], frame.pressure[i], frame.pore_pressure[i]}) {
      out += ',';
      append_real(out, v);
    }
    out += ',';
    out += std::to_string(frame.tags[i]);
    out += '\n';
  }
  return out;
}

ResultFrame parse_csv(std::string_view text)
{
  static constexpr const char* columns[] = {"id", "x0", "x1", "x2", "u0", "u1", "u2", "theta", "p", "pf", "tags"};
  ResultFrame frame;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find('\n', pos);
    if (next == std::string_view::npos)
      next = text.size();
    std::string_view row = text.substr(pos, next - pos);
    pos = next + 1;
    ++line;
    if (!row.empty() && row.back() == '\r')
      row.remove_suffix(1);
    if (line == 1) {
      if (row != csv_header)
        throw IoError("line 1: expected header '" + std::string(csv_header) + "'");
      continue;
    }
    if (row.empty())
      continue;
    std::string_view fields[11];
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = row.find(',', start);
      if (count == 11)
        throw IoError("line " + std::to_string(line) + ": too many fields");
      fields[count++] = row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (comma == std::string_view::npos)
        break;
      start = comma + 1;
    }
    if (count != 11)
      throw IoError("line " + std::to_string(line) + ": expected 11 fields, got " + std::to_string(count));
    const auto id = parse_field<std::size_t>(fields[0], line, columns[0]);
    if (id != frame.size())
      throw IoError("line " + std::to_string(line) + ": expected id " + std::to_string(frame.size()));
    Vec3 x, u;
    for (int a = 0; a < 3; ++a) {
      x[a] = parse_field<double>(fields[1 + a], line, columns[1 + a]);
      u[a] = parse_field<double>(fields[4 + a], line, columns[4 + a]);
    }
    frame.positions.push_back(x);
    frame.displacements.push_back(u);
    frame.dilatation.push_back(parse_field<double>(fields[7], line, columns[7]));
    frame.pressure.push_back(parse_field<double>(fields[8], line, columns[8]));
    frame.pore_pressure.push_back(parse_field<double>(fields[9], line, columns[9]));
    frame.tags.push_back(parse_field<TagMask>(fields[10], line, columns[10]));
  }
  if (line == 0)
    throw IoError("empty CSV");
  return frame;
}

ResultFrame read_csv(const std::filesystem::path& path)
{
  const std::string content = read_file(path);
  try {
    return parse_csv(content);
  }
  catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string format_vtk(const ResultFrame& frame)
{
  frame.check();
  const std::size_t n = frame.size();
  std::string out = "# vtk DataFile Version 3.0\npdpore frame t = " + real(frame.time) + "\nASCII\nDATASET POLYDATA\n";
  out += "POINTS " + std::to_string(n) + " double\n";
  auto vectors = [&](const std::vector<Vec3>& v) {
    for (const auto& p : v) {
      append_real(out, p[0]);
      out += ' ';
      append_real(out, p[1]);
      out += ' ';
      append_real(out, p[2]);
      out += '\n';
    }
  };
  auto scalars = [&](const char* name, const std::vector<double>& v) {
    out += std::string("SCALARS ") + name + " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) {
      append_real(out, x);
      out += '\n';
    }
  };
  vectors(frame.positions);
  out += "VERTICES " + std::to_string(n) + " " + std::to_string(2 * n) + "\n";
  for (std::size_t i = 0; i < n; ++i)
    out += "1 " + std::to_string(i) + "\n";
  out += "POINT_DATA " + std::to_string(n) + "\n";
  out += "VECTORS displacement double\n";
  vectors(frame.displacements);
  scalars("theta", frame.dilatation);
  scalars("p", frame.pressure);
  scalars("pf", frame.pore_pressure);
  out += "SCALARS tags unsigned_int 1\nLOOKUP_TABLE default\n";
  for (TagMask t : frame.tags)
    out += std::to_string(t) + "\n";
  return out;
}

std::vector<std::filesystem::path> write_frame(const ResultFrame& frame, std::size_t index,
                                               const std::filesystem::path& directory, const OutputOptions& options)
{
  char stem[32];
  std::snprintf(stem, sizeof stem, "frame_%05zu", index);
  std::vector<std::filesystem::path> written;
  if (options.csv) {
    written.push_back(directory / (std::string(stem) + ".csv"));
    write_file(written.back(), format_csv(frame));
  }
  if (options.vtk) {
    written.push_back(directory / (std::string(stem) + ".vtk"));
    write_file(written.back(), format_vtk(frame));
  }
  return written;
}

void make_directory(const std::filesystem::path& directory)
{
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec)
    throw IoError("cannot create directory '" + directory.string() + "': " + ec.message());
}

std::vector<std::filesystem::path> write_results(const std::vector<ResultFrame>& frames,
                                                 const std::filesystem::path& directory,
                                                 const OutputOptions& options)
{
  make_directory(directory);
  std::vector<std::filesystem::path> written;
  for (std::size_t k = 0; k < frames.size(); ++k)
    for (auto& path : write_frame(frames[k], k, directory, options))
      written.push_back(std::move(path));
  return written;
}

// ---------------------------------------------------------------------------

std::string format_report(const BenchmarkReport& report)
{
  std::ostringstream out;
  out << "benchmark " << report.name << " (resolution " << real(report.resolution) << ")\n";
  for (const auto& note : report.notes)
    out << "note: " << note << "\n";
  out << "\ncases\n";
  for (const auto& c : report.cases) {
    out << "  " << c.label << ": " << c.particles << " particles, " << c.bonds << " bonds, " << c.steps
        << " steps, " << (c.converged ? "converged" : "NOT converged") << ", " << c.iterations
        << " iterations, max residual " << c.residual_norm << "\n";
    if (!c.message.empty())
      out << "    " << c.message << "\n";
  }
  out << "\nmetrics\n";
  for (const auto& m : report.metrics)
    out << "  " << m.name << " = " << m.value << "\n";
  out << "\nchecks\n";
  for (const auto& c : report.checks)
    out << "  " << c.name << ": " << (c.holds ? "holds" : "FAILS") << (c.detail.empty() ? "" : " (" + c.detail + ")")
        << "\n";
  out << "\nprobes\n  series,position,computed,reference,source\n";
  for (const auto& p : report.probes)
    out << "  " << p.series << "," << real(p.position) << "," << real(p.computed) << ","
        << (p.reference ? real(*p.reference) : "") << "," << p.source << "\n";
  return out.str();
}

std::string report_json(const BenchmarkReport& report)
{
  ojson out;
  out["benchmark"] = report.name;
  out["resolution"] = report.resolution;
  out["notes"] = report.notes;
  ojson cases = ojson::array();
  for (const auto& c : report.cases)
    cases.push_back(ojson{{"label", c.label},
                          {"particles", c.particles},
                          {"bonds", c.bonds},
                          {"steps", c.steps},
                          {"converged", c.converged},
                          {"iterations", c.iterations},
                          {"residual_norm", c.residual_norm},
                          {"message", c.message}});
  out["cases"] = cases;
  ojson metrics = ojson::array();
  for (const auto& m : report.metrics)
    metrics.push_back(ojson{{"name", m.name}, {"value", m.value}});
  out["metrics"] = metrics;
  ojson checks = ojson::array();
  for (const auto& c : report.checks)
    checks.push_back(ojson{{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
  out["checks"] = checks;
  ojson probes = ojson::array();
  for (const auto& p : report.probes)
    probes.push_back(ojson{{"series", p.series},
                           {"position", p.position},
                           {"computed", p.computed},
                           {"reference", p.reference ? ojson(*p.reference) : ojson(nullptr)},
                           {"source", p.source}});
  out["probes"] = probes;
  return out.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_report(const BenchmarkReport& report, const std::filesystem::path& directory)
{
  make_directory(directory);
  std::vector<std::filesystem::path> written{directory / "report.txt", directory / "report.json"};
  write_file(written[0], format_report(report));
  write_file(written[1], report_json(report));
  return written;
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out)
    throw IoError("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad())
    throw IoError("failed reading '" + path.string() + "'");
  return buffer.str();
}

} // namespace pdpore
