#include <dnapl/timeseries.hpp>
#include <dnapl/vtk.hpp>

#include <charconv>
#include <fstream>

namespace dnapl
{

namespace
{
void put(std::string &s, double v)
{
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  s.append(buf, r.ptr);
}
}  // namespace

std::string format_timeseries(const SimulationResult &result)
{
  std::string s = kTimeseriesHeader;
  s += '\n';
  for (std::size_t i = 0; i < result.mass.size(); ++i)
  {
    const auto &m = result.mass[i];
    const auto &p = result.plume[i];
    const double values[] = {m.time,          m.total_mass,          m.pool_mass,
                             m.ganglia_mass,  m.injected_to_date,    p.front_depth,
                             p.max_lateral_extent(), p.max_sn,       result.mass_error[i]};
    for (std::size_t k = 0; k < std::size(values); ++k)
    {
      if (k)
        s += ',';
      put(s, values[k]);
    }
    s += '\n';
  }
  return s;
}

void write_timeseries(const SimulationResult &result, const std::filesystem::path &path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  out << format_timeseries(result);
  if (!out)
    throw IoError("write failed: " + path.string());
}

}  // namespace dnapl
