#include <dnapl/scenario_io.hpp>

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dnapl
{

std::string Diagnostic::str() const
{
  std::ostringstream s;
  s << source;
  if (line > 0)
    s << ':' << line << ':' << column;
  s << ": " << message;
  return s.str();
}

namespace
{

std::string summarize(const std::vector<Diagnostic> &d)
{
  std::string s = "scenario has " + std::to_string(d.size()) + " error(s)";
  for (const auto &x : d)
    s += "\n  " + x.str();
  return s;
}

class Reader
{
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  void error(const YAML::Mark &m, const std::string &msg)
  {
    const bool known = m.line >= 0;
    diags.push_back({source_, known ? m.line + 1 : 0, known ? m.column + 1 : 0, msg});
  }
  void error(const YAML::Node &at, const std::string &msg) { error(at.Mark(), msg); }

  void anchor(const std::string &context, const YAML::Node &at) { anchors_[context] = at.Mark(); }

  /// Location of the longest registered context that prefixes `message`.
  YAML::Mark locate(const std::string &message) const
  {
    YAML::Mark best = YAML::Mark::null_mark();
    std::size_t best_len = 0;
    for (const auto &[ctx, mark] : anchors_)
      if (message.rfind(ctx, 0) == 0 && ctx.size() > best_len)
      {
        best = mark;
        best_len = ctx.size();
      }
    return best;
  }

  bool is_map(const YAML::Node &n, const std::string &what)
  {
    if (n.IsMap())
      return true;
    error(n, what + " must be a mapping");
    return false;
  }

  void allow(const YAML::Node &map, std::initializer_list<const char *> keys,
             const std::string &what)
  {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto &kv : map)
    {
      const auto key = kv.first.as<std::string>("");
      if (!allowed.count(key))
        error(kv.first, "unknown key '" + key + "' in " + what);
    }
  }

  template <class T>
  bool scalar(const YAML::Node &n, T &out, const std::string &what)
  {
    if (!n.IsScalar())
    {
      error(n, what + " must be a scalar");
      return false;
    }
    try
    {
      out = n.as<T>();
      return true;
    }
    catch (const YAML::BadConversion &)
    {
      error(n, what + ": cannot read '" + n.Scalar() + "' as " + type_name<T>());
      return false;
    }
  }

  template <class T>
  bool get(const YAML::Node &map, const char *key, T &out, bool required, const std::string &what)
  {
    const YAML::Node n = map[key];
    if (!n)
    {
      if (required)
        error(map, "missing required key '" + std::string(key) + "' in " + what);
      return false;
    }
    return scalar(n, out, what + "." + key);
  }

  template <class T>
  bool get_list(const YAML::Node &map, const char *key, std::vector<T> &out, bool required,
                const std::string &what)
  {
    const YAML::Node n = map[key];
    if (!n)
    {
      if (required)
        error(map, "missing required key '" + std::string(key) + "' in " + what);
      return false;
    }
    if (!n.IsSequence())
    {
      error(n, what + "." + key + " must be a list");
      return false;
    }
    out.clear();
    bool ok = true;
    for (const auto &item : n)
    {
      T v{};
      ok = scalar(item, v, what + "." + key) && ok;
      out.push_back(v);
    }
    return ok;
  }

  std::vector<Diagnostic> diags;

 private:
  template <class T>
  static const char *type_name()
  {
    if constexpr (std::is_same_v<T, bool>)
      return "a boolean";
    else if constexpr (std::is_integral_v<T>)
      return "an integer";
    else if constexpr (std::is_floating_point_v<T>)
      return "a number";
    else
      return "a string";
  }

  std::string source_;
  std::map<std::string, YAML::Mark> anchors_;
};

void read_material(Reader &r, const YAML::Node &n, Scenario &sc)
{
  if (!r.is_map(n, "material"))
    return;
  r.allow(n,
          {"name", "permeability_m2", "porosity", "residual_wetting_saturation",
           "residual_nonwetting_saturation", "entry_pressure_pa", "pore_size_index"},
          "material");
  NamedMaterial m;
  r.get(n, "name", m.name, true, "material");
  const std::string what = "material '" + m.name + "'";
  auto &p = m.properties;
  r.get(n, "permeability_m2", p.permeability, true, what);
  r.get(n, "porosity", p.porosity, true, what);
  r.get(n, "residual_wetting_saturation", p.residual_wetting, true, what);
  r.get(n, "residual_nonwetting_saturation", p.residual_nonwetting, true, what);
  r.get(n, "entry_pressure_pa", p.entry_pressure, true, what);
  r.get(n, "pore_size_index", p.pore_size_index, true, what);
  r.anchor(what, n);
  sc.materials.push_back(std::move(m));
}

void read_fluid(Reader &r, const YAML::Node &n, FluidProperties &f, const std::string &what)
{
  if (!r.is_map(n, what))
    return;
  r.allow(n, {"density_kg_per_m3", "viscosity_pa_s"}, what);
  r.get(n, "density_kg_per_m3", f.density, true, what);
  r.get(n, "viscosity_pa_s", f.viscosity, true, what);
  r.anchor(what, n);
}

void read_injection(Reader &r, const YAML::Node &n, Scenario &sc)
{
  if (!r.is_map(n, "injection"))
    return;
  r.allow(n, {"name", "phase", "min_m", "max_m", "schedule"}, "injection");
  InjectionSpec inj;
  r.get(n, "name", inj.name, true, "injection");
  const std::string what = "injection '" + inj.name + "'";
  std::string phase = "nonwetting";
  if (r.get(n, "phase", phase, false, what))
  {
    if (phase == "nonwetting")
      inj.phase = Phase::Nonwetting;
    else if (phase == "wetting")
      inj.phase = Phase::Wetting;
    else
      r.error(n["phase"], what + ": phase must be 'wetting' or 'nonwetting'");
  }
  r.get_list(n, "min_m", inj.min, true, what);
  r.get_list(n, "max_m", inj.max, true, what);
  const YAML::Node sched = n["schedule"];
  if (!sched)
    r.error(n, "missing required key 'schedule' in " + what);
  else if (!sched.IsSequence())
    r.error(sched, what + ".schedule must be a list");
  else
    for (const auto &iv : sched)
    {
      if (!r.is_map(iv, what + " schedule entry"))
        continue;
      r.allow(iv, {"start_s", "end_s", "rate_kg_per_s"}, what + " schedule entry");
      InjectionInterval v;
      r.get(iv, "start_s", v.start, true, what + " schedule entry");
      r.get(iv, "end_s", v.end, true, what + " schedule entry");
      r.get(iv, "rate_kg_per_s", v.rate, true, what + " schedule entry");
      inj.schedule.push_back(v);
    }
  r.anchor(what, n);
  sc.injections.push_back(std::move(inj));
}

void read_solver(Reader &r, const YAML::Node &n, SolverControls &s)
{
  if (!r.is_map(n, "solver"))
    return;
  r.allow(n,
          {"cfl", "pressure_tolerance", "max_pressure_iterations", "preconditioner",
           "initial_timestep_s", "max_timestep_growth", "max_timestep_s", "min_timestep_s",
           "pressure_update_interval", "pressure_update_max_change"},
          "solver");
  r.get(n, "cfl", s.cfl, false, "solver");
  r.get(n, "pressure_tolerance", s.pressure_tolerance, false, "solver");
  r.get(n, "max_pressure_iterations", s.max_pressure_iterations, false, "solver");
  std::string pc;
  if (r.get(n, "preconditioner", pc, false, "solver"))
  {
    if (pc == "incomplete_cholesky")
      s.preconditioner = Preconditioner::IncompleteCholesky;
    else if (pc == "jacobi")
      s.preconditioner = Preconditioner::Jacobi;
    else if (pc == "none")
      s.preconditioner = Preconditioner::None;
    else
      r.error(n["preconditioner"],
              "solver.preconditioner must be 'incomplete_cholesky', 'jacobi' or 'none'");
  }
  r.get(n, "initial_timestep_s", s.initial_timestep, false, "solver");
  r.get(n, "max_timestep_growth", s.max_timestep_growth, false, "solver");
  r.get(n, "max_timestep_s", s.max_timestep, false, "solver");
  r.get(n, "min_timestep_s", s.min_timestep, false, "solver");
  r.get(n, "pressure_update_interval", s.pressure_update_interval, false, "solver");
  r.get(n, "pressure_update_max_change", s.pressure_update_max_change, false, "solver");
  r.anchor("solver", n);
}

void read_time(Reader &r, const YAML::Node &n, Scenario &sc)
{
  if (!r.is_map(n, "time"))
    return;
  r.allow(n, {"end_s", "report_times_s", "report_every_s"}, "time");
  r.get(n, "end_s", sc.end_time, true, "time");
  r.anchor("end time", n);
  r.anchor("report time", n);
  const bool listed = r.get_list(n, "report_times_s", sc.report_times, false, "time");
  double every = 0.0;
  if (r.get(n, "report_every_s", every, false, "time"))
  {
    if (n["report_times_s"])
      r.error(n["report_every_s"], "time: give either report_times_s or report_every_s, not both");
    else if (!(every > 0.0))
      r.error(n["report_every_s"], "time.report_every_s must be > 0");
    else if (sc.end_time > 0.0 && std::isfinite(sc.end_time))
    {
      sc.report_times.clear();
      for (long k = 0;; ++k)
      {
        const double t = static_cast<double>(k) * every;
        if (t > sc.end_time * (1.0 + 1e-12))
          break;
        sc.report_times.push_back(std::min(t, sc.end_time));
      }
    }
  }
  (void)listed;
}

}  // namespace

ScenarioParseError::ScenarioParseError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics))
{
}

Scenario parse_scenario_text(const std::string &text, const std::string &source)
{
  Reader r(source);
  YAML::Node root;
  try
  {
    root = YAML::Load(text);
  }
  catch (const YAML::ParserException &e)
  {
    r.error(e.mark, "syntax error: " + e.msg);
    throw ScenarioParseError(std::move(r.diags));
  }

  Scenario sc;
  if (!root.IsMap())
  {
    if (!root.IsNull())
      r.error(root, "scenario must be a mapping of sections");
    for (const char *key : {"version", "grid", "materials", "background_material", "time"})
      r.error(YAML::Mark::null_mark(), "missing required section '" + std::string(key) + "'");
    throw ScenarioParseError(std::move(r.diags));
  }

  r.allow(root,
          {"version", "name", "grid", "materials", "background_material", "regions", "fluids",
           "physics", "boundaries", "initial", "injections", "solver", "time", "analysis",
           "output"},
          "scenario");
  for (const char *key : {"version", "grid", "materials", "background_material", "time"})
    if (!root[key])
      r.error(root, "missing required section '" + std::string(key) + "'");

  if (root["version"])
    r.scalar(root["version"], sc.version, "version");
  r.anchor("unsupported version", root["version"] ? root["version"] : root);
  r.get(root, "name", sc.name, false, "scenario");

  if (const YAML::Node g = root["grid"]; g && r.is_map(g, "grid"))
  {
    r.allow(g, {"extents_m", "resolution", "origin_m"}, "grid");
    r.get_list(g, "extents_m", sc.grid.extents, true, "grid");
    r.get_list(g, "resolution", sc.grid.resolution, true, "grid");
    r.get_list(g, "origin_m", sc.grid.origin, false, "grid");
    r.anchor("grid", g);
  }

  if (const YAML::Node m = root["materials"])
  {
    r.anchor("materials", m);
    r.anchor("material", m);
    if (!m.IsSequence())
      r.error(m, "materials must be a list");
    else
      for (const auto &item : m)
        read_material(r, item, sc);
  }
  if (root["background_material"])
  {
    r.scalar(root["background_material"], sc.background_material, "background_material");
    r.anchor("background material", root["background_material"]);
  }

  if (const YAML::Node regs = root["regions"])
  {
    if (!regs.IsSequence())
      r.error(regs, "regions must be a list");
    else
      for (const auto &n : regs)
      {
        if (!r.is_map(n, "region"))
          continue;
        r.allow(n, {"name", "material", "min_m", "max_m"}, "region");
        RegionSpec reg;
        r.get(n, "name", reg.name, true, "region");
        const std::string what = "region '" + reg.name + "'";
        r.get(n, "material", reg.material, true, what);
        r.get_list(n, "min_m", reg.min, true, what);
        r.get_list(n, "max_m", reg.max, true, what);
        r.anchor(what, n);
        sc.regions.push_back(std::move(reg));
      }
  }

  if (const YAML::Node f = root["fluids"]; f && r.is_map(f, "fluids"))
  {
    r.allow(f, {"wetting", "nonwetting"}, "fluids");
    if (f["wetting"])
      read_fluid(r, f["wetting"], sc.wetting, "wetting fluid");
    if (f["nonwetting"])
      read_fluid(r, f["nonwetting"], sc.nonwetting, "non-wetting fluid");
  }

  if (const YAML::Node p = root["physics"]; p && r.is_map(p, "physics"))
  {
    r.allow(p, {"gravity_m_per_s2", "capillarity", "interface_condition", "top_water_pressure_pa"},
            "physics");
    r.get(p, "gravity_m_per_s2", sc.physics.gravity, false, "physics");
    r.get(p, "capillarity", sc.physics.capillarity, false, "physics");
    r.get(p, "interface_condition", sc.physics.interface_condition, false, "physics");
    r.get(p, "top_water_pressure_pa", sc.physics.top_pressure, false, "physics");
    r.anchor("physics", p);
  }

  if (const YAML::Node b = root["boundaries"]; b && r.is_map(b, "boundaries"))
  {
    r.allow(b, {"hydrostatic"}, "boundaries");
    r.anchor("boundary", b);
    std::vector<std::string> sides;
    if (r.get_list(b, "hydrostatic", sides, false, "boundaries"))
      for (std::size_t i = 0; i < sides.size(); ++i)
      {
        try
        {
          sc.hydrostatic_boundaries.push_back(parse_boundary_side(sides[i]));
        }
        catch (const std::invalid_argument &e)
        {
          r.error(b["hydrostatic"][i], e.what());
        }
      }
  }

  if (const YAML::Node in = root["initial"]; in && r.is_map(in, "initial"))
  {
    r.allow(in, {"nonwetting_saturation"}, "initial");
    r.get(in, "nonwetting_saturation", sc.initial_nonwetting_saturation, false, "initial");
    r.anchor("initial", in);
  }

  if (const YAML::Node inj = root["injections"])
  {
    if (!inj.IsSequence())
      r.error(inj, "injections must be a list");
    else
      for (const auto &n : inj)
        read_injection(r, n, sc);
  }

  if (root["solver"])
    read_solver(r, root["solver"], sc.solver);
  if (root["time"])
    read_time(r, root["time"], sc);

  if (const YAML::Node a = root["analysis"]; a && r.is_map(a, "analysis"))
  {
    r.allow(a, {"pool_threshold", "ganglia_floor", "detection_threshold"}, "analysis");
    r.get(a, "pool_threshold", sc.analysis.pool_threshold, false, "analysis");
    r.get(a, "ganglia_floor", sc.analysis.ganglia_floor, false, "analysis");
    r.get(a, "detection_threshold", sc.analysis.detection_threshold, false, "analysis");
    r.anchor("analysis", a);
  }

  if (const YAML::Node o = root["output"]; o && r.is_map(o, "output"))
  {
    r.allow(o, {"vtk_binary"}, "output");
    r.get(o, "vtk_binary", sc.output.vtk_binary, false, "output");
  }

  // Semantic checks only make sense once the structure is sound.
  if (r.diags.empty())
    for (const auto &issue : validate_scenario(sc))
      r.error(r.locate(issue), issue);

  if (!r.diags.empty())
    throw ScenarioParseError(std::move(r.diags));
  return sc;
}

Scenario parse_scenario(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
    throw ScenarioParseError({Diagnostic{path.string(), 0, 0, "cannot open file"}});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario_text(text.str(), path.string());
}

namespace
{

const char *preconditioner_name(Preconditioner p)
{
  switch (p)
  {
    case Preconditioner::None:
      return "none";
    case Preconditioner::Jacobi:
      return "jacobi";
    case Preconditioner::IncompleteCholesky:
      break;
  }
  return "incomplete_cholesky";
}

template <class T>
void flow_list(YAML::Emitter &out, const char *key, const std::vector<T> &v)
{
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto &x : v)
    out << x;
  out << YAML::EndSeq;
}

}  // namespace

std::string serialize_scenario(const Scenario &sc)
{
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << sc.version;
  if (!sc.name.empty())
    out << YAML::Key << "name" << YAML::Value << sc.name;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  flow_list(out, "extents_m", sc.grid.extents);
  flow_list(out, "resolution", sc.grid.resolution);
  if (!sc.grid.origin.empty())
    flow_list(out, "origin_m", sc.grid.origin);
  out << YAML::EndMap;

  out << YAML::Key << "materials" << YAML::Value << YAML::BeginSeq;
  for (const auto &m : sc.materials)
  {
    const auto &p = m.properties;
    out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << m.name;
    out << YAML::Key << "permeability_m2" << YAML::Value << p.permeability;
    out << YAML::Key << "porosity" << YAML::Value << p.porosity;
    out << YAML::Key << "residual_wetting_saturation" << YAML::Value << p.residual_wetting;
    out << YAML::Key << "residual_nonwetting_saturation" << YAML::Value << p.residual_nonwetting;
    out << YAML::Key << "entry_pressure_pa" << YAML::Value << p.entry_pressure;
    out << YAML::Key << "pore_size_index" << YAML::Value << p.pore_size_index;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "background_material" << YAML::Value << sc.background_material;

  if (!sc.regions.empty())
  {
    out << YAML::Key << "regions" << YAML::Value << YAML::BeginSeq;
    for (const auto &reg : sc.regions)
    {
      out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << reg.name;
      out << YAML::Key << "material" << YAML::Value << reg.material;
      flow_list(out, "min_m", reg.min);
      flow_list(out, "max_m", reg.max);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  out << YAML::Key << "fluids" << YAML::Value << YAML::BeginMap;
  for (const auto &[key, f] : {std::pair{"wetting", sc.wetting}, std::pair{"nonwetting", sc.nonwetting}})
  {
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "density_kg_per_m3" << YAML::Value << f.density;
    out << YAML::Key << "viscosity_pa_s" << YAML::Value << f.viscosity;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "physics" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gravity_m_per_s2" << YAML::Value << sc.physics.gravity;
  out << YAML::Key << "capillarity" << YAML::Value << sc.physics.capillarity;
  out << YAML::Key << "interface_condition" << YAML::Value << sc.physics.interface_condition;
  out << YAML::Key << "top_water_pressure_pa" << YAML::Value << sc.physics.top_pressure;
  out << YAML::EndMap;

  out << YAML::Key << "boundaries" << YAML::Value << YAML::BeginMap;
  std::vector<std::string> sides;
  for (const auto &b : sc.hydrostatic_boundaries)
    sides.push_back(to_string(b));
  flow_list(out, "hydrostatic", sides);
  out << YAML::EndMap;

  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "nonwetting_saturation" << YAML::Value << sc.initial_nonwetting_saturation;
  out << YAML::EndMap;

  if (!sc.injections.empty())
  {
    out << YAML::Key << "injections" << YAML::Value << YAML::BeginSeq;
    for (const auto &inj : sc.injections)
    {
      out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << inj.name;
      out << YAML::Key << "phase" << YAML::Value
          << (inj.phase == Phase::Wetting ? "wetting" : "nonwetting");
      flow_list(out, "min_m", inj.min);
      flow_list(out, "max_m", inj.max);
      out << YAML::Key << "schedule" << YAML::Value << YAML::BeginSeq;
      for (const auto &iv : inj.schedule)
      {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "start_s" << YAML::Value << iv.start;
        out << YAML::Key << "end_s" << YAML::Value << iv.end;
        out << YAML::Key << "rate_kg_per_s" << YAML::Value << iv.rate;
        out << YAML::EndMap;
      }
      out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  const auto &s = sc.solver;
  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "cfl" << YAML::Value << s.cfl;
  out << YAML::Key << "pressure_tolerance" << YAML::Value << s.pressure_tolerance;
  out << YAML::Key << "max_pressure_iterations" << YAML::Value << s.max_pressure_iterations;
  out << YAML::Key << "preconditioner" << YAML::Value << preconditioner_name(s.preconditioner);
  out << YAML::Key << "initial_timestep_s" << YAML::Value << s.initial_timestep;
  out << YAML::Key << "max_timestep_growth" << YAML::Value << s.max_timestep_growth;
  out << YAML::Key << "max_timestep_s" << YAML::Value << s.max_timestep;
  out << YAML::Key << "min_timestep_s" << YAML::Value << s.min_timestep;
  out << YAML::Key << "pressure_update_interval" << YAML::Value << s.pressure_update_interval;
  out << YAML::Key << "pressure_update_max_change" << YAML::Value << s.pressure_update_max_change;
  out << YAML::EndMap;

  out << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "end_s" << YAML::Value << sc.end_time;
  flow_list(out, "report_times_s", sc.report_times);
  out << YAML::EndMap;

  out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "pool_threshold" << YAML::Value << sc.analysis.pool_threshold;
  out << YAML::Key << "ganglia_floor" << YAML::Value << sc.analysis.ganglia_floor;
  out << YAML::Key << "detection_threshold" << YAML::Value << sc.analysis.detection_threshold;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "vtk_binary" << YAML::Value << sc.output.vtk_binary;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void write_scenario(const Scenario &scenario, const std::filesystem::path &path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write scenario to " + path.string());
  out << serialize_scenario(scenario);
  if (!out)
    throw std::runtime_error("write failed: " + path.string());
}

}  // namespace dnapl
