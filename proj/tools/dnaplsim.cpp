// Command-line front end: run, validate, benchmark and probe.

#include <dnapl/buckley_leverett.hpp>
#include <dnapl/scenario_io.hpp>
#include <dnapl/simulation.hpp>
#include <dnapl/timeseries.hpp>
#include <dnapl/vtk.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dnapl;

namespace
{

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

void print_thresholds(const Scenario &sc)
{
  for (std::size_t a = 0; a < sc.materials.size(); ++a)
    for (std::size_t b = a + 1; b < sc.materials.size(); ++b)
    {
      const auto &ma = sc.materials[a];
      const auto &mb = sc.materials[b];
      if (ma.properties.entry_pressure == mb.properties.entry_pressure)
      {
        std::printf("  %s / %s: equal entry pressure, no barrier\n", ma.name.c_str(),
                    mb.name.c_str());
        continue;
      }
      const bool a_coarse = ma.properties.entry_pressure < mb.properties.entry_pressure;
      const auto &coarse = a_coarse ? ma : mb;
      const auto &fine = a_coarse ? mb : ma;
      std::printf("  %s -> %s: Se* = %.6e\n", coarse.name.c_str(), fine.name.c_str(),
                  threshold_saturation(coarse.properties, fine.properties));
    }
}

int cmd_validate(const std::string &path)
{
  const Scenario sc = parse_scenario(path);
  const PreparedScenario prep = prepare(sc);
  std::printf("%s: ok (%zu cells, %zu materials, %zu injections)\n", path.c_str(),
              prep.model.grid.cell_count(), sc.materials.size(), sc.injections.size());
  std::printf("threshold saturations:\n");
  print_thresholds(sc);
  return 0;
}

int cmd_run(const std::string &path, const fs::path &out_dir, bool snapshots)
{
  const Scenario sc = parse_scenario(path);
  Simulator sim(sc);
  fs::create_directories(out_dir);

  RunOptions opts;
  int index = 0;
  opts.on_report = [&](const Snapshot &snap) {
    std::printf("t = %.6g s  injected %.6g kg  in domain %.6g kg\n", snap.time,
                sim.injected_mass(), total_mass(snap.state, sim.model(), sim.baseline()));
    std::fflush(stdout);
    if (!snapshots)
      return;
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04d.vtk", index++);
    write_snapshot(snap.state, sim.model().grid, sim.model().map, out_dir / name,
                   sc.output.vtk_binary);
  };
  const SimulationResult result = sim.run(opts);
  write_timeseries(result, out_dir / "timeseries.csv");
  std::printf("done: %ld steps, %ld pressure iterations, %.2f s wall\n", result.steps,
              result.pressure_iterations, result.wall_seconds);
  return 0;
}

int cmd_benchmark(int cells)
{
  BuckleyLeverettOptions o;
  o.cells = cells;
  const auto r = run_buckley_leverett(o);
  std::printf("Buckley-Leverett waterflood, %d cells, %.4f pore volumes injected\n", cells,
              r.pore_volumes);
  std::printf("  shock saturation (Welge)   %.6f\n", r.shock_saturation);
  std::printf("  front position simulated   %.4f m\n", r.front_position);
  std::printf("  front position Welge       %.4f m\n", r.front_position_exact);
  std::printf("  L1 error / mobile range    %.4e\n", r.l1_error);
  std::printf("  %ld steps, %.2f s wall\n", r.steps, r.wall_seconds);
  return 0;
}

int cmd_probe(const std::string &path, const std::string &at)
{
  const VtkCellData data = read_snapshot(path);
  Vec3 p;
  for (int a = 0; a < 3; ++a)
    p[a] = data.origin[a] + 0.5 * data.spacing[a] * data.cell_dims()[a];
  std::stringstream ss(at);
  std::string item;
  int axis = 0;
  while (std::getline(ss, item, ','))
  {
    if (axis == 3)
      throw std::invalid_argument("--at takes at most three coordinates");
    p[axis++] = std::stod(item);
  }
  if (axis == 0)
    throw std::invalid_argument("--at needs at least one coordinate");
  const std::size_t cell = data.locate(p);
  std::printf("cell %zu\n", cell);
  for (const auto &[name, values] : data.arrays)
    std::printf("%s = %.17g\n", name.c_str(), values[cell]);
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Two-phase DNAPL/water flow simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  bool snapshots = false;
  int threads = 1;
  auto *run = app.add_subcommand("run", "Run a scenario and write the time series");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--snapshots", snapshots, "Write VTK snapshots at report times");
  run->add_option("--threads", threads, "Upper bound on worker threads")
      ->check(CLI::PositiveNumber);

  auto *validate = app.add_subcommand("validate", "Check a scenario and print Se* per pair");
  validate->add_option("scenario", scenario_path, "Scenario file")->required();

  std::string benchmark_name;
  int cells = 400;
  auto *bench = app.add_subcommand("benchmark", "Built-in benchmarks");
  bench->add_option("name", benchmark_name, "Benchmark name")
      ->required()
      ->check(CLI::IsMember({"buckley-leverett"}));
  bench->add_option("--cells", cells, "Number of cells")->check(CLI::Range(10, 100000));

  std::string vtk_path, at;
  auto *probe = app.add_subcommand("probe", "Print snapshot values at a point");
  probe->add_option("snapshot", vtk_path, "VTK snapshot")->required();
  probe->add_option("--at", at, "Coordinates x,y,z")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  // the solver runs on one thread, which satisfies any bound
  (void)threads;

  try
  {
    if (*run)
      return cmd_run(scenario_path, out_dir, snapshots);
    if (*validate)
      return cmd_validate(scenario_path);
    if (*bench)
      return cmd_benchmark(cells);
    if (*probe)
      return cmd_probe(vtk_path, at);
  }
  catch (const ScenarioParseError &e)
  {
    for (const auto &d : e.diagnostics())
      std::fprintf(stderr, "error: %s\n", d.str().c_str());
    return kExitValidation;
  }
  catch (const ScenarioError &e)
  {
    for (const auto &issue : e.issues())
      std::fprintf(stderr, "error: %s: %s\n", scenario_path.c_str(), issue.c_str());
    return kExitValidation;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
