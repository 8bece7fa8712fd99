#include <dnapl/vtk.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dnapl
{

namespace
{

template <class U>
U to_big_endian(U v)
{
  if constexpr (std::endian::native == std::endian::little)
  {
    U r = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
    {
      r = static_cast<U>((r << 8) | (v & 0xffu));
      v >>= 8;
    }
    return r;
  }
  return v;
}

void put_doubles(std::ostream &out, const std::vector<double> &v, bool binary)
{
  if (binary)
  {
    for (double x : v)
    {
      const auto be = to_big_endian(std::bit_cast<std::uint64_t>(x));
      out.write(reinterpret_cast<const char *>(&be), sizeof be);
    }
    out << '\n';
    return;
  }
  char buf[32];
  for (double x : v)
  {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out << buf;
  }
}

void put_ints(std::ostream &out, const std::vector<MaterialId> &v, bool binary)
{
  if (binary)
  {
    for (auto x : v)
    {
      const auto be = to_big_endian(static_cast<std::uint32_t>(x));
      out.write(reinterpret_cast<const char *>(&be), sizeof be);
    }
    out << '\n';
    return;
  }
  for (auto x : v)
    out << x << '\n';
}

}  // namespace

void write_snapshot(const SimulationState &state, const Grid &grid, const MaterialMap &map,
                    const std::filesystem::path &path, bool binary)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  char title[96];
  std::snprintf(title, sizeof title, "dnaplsim snapshot t=%.17g s", state.time);
  out << "# vtk DataFile Version 3.0\n" << title << '\n' << (binary ? "BINARY" : "ASCII") << '\n';
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << grid.cells[0] + 1 << ' ' << grid.cells[1] + 1 << ' ' << grid.cells[2] + 1
      << '\n';
  char line[128];
  std::snprintf(line, sizeof line, "ORIGIN %.17g %.17g %.17g\n", grid.origin[0], grid.origin[1],
                grid.origin[2]);
  out << line;
  std::snprintf(line, sizeof line, "SPACING %.17g %.17g %.17g\n", grid.spacing[0],
                grid.spacing[1], grid.spacing[2]);
  out << line;
  out << "CELL_DATA " << grid.cell_count() << '\n';
  out << "SCALARS s_n double 1\nLOOKUP_TABLE default\n";
  put_doubles(out, state.s_n, binary);
  out << "SCALARS p_w double 1\nLOOKUP_TABLE default\n";
  put_doubles(out, state.p_w, binary);
  out << "SCALARS material_id int 1\nLOOKUP_TABLE default\n";
  put_ints(out, map.cell_material, binary);
  if (!out)
    throw IoError("write failed: " + path.string());
}

std::array<int, 3> VtkCellData::cell_dims() const
{
  std::array<int, 3> c;
  for (int a = 0; a < 3; ++a)
    c[a] = std::max(point_dims[a] - 1, 1);
  return c;
}

std::size_t VtkCellData::locate(const Vec3 &p) const
{
  const auto dims = cell_dims();
  std::array<std::size_t, 3> ijk{};
  for (int a = 0; a < 3; ++a)
  {
    const double u = (p[a] - origin[a]) / spacing[a];
    if (!(u >= 0.0 && u <= dims[a]))
      throw IoError("point is outside the snapshot domain on axis " + std::to_string(a));
    ijk[a] = static_cast<std::size_t>(std::min(std::floor(u), static_cast<double>(dims[a] - 1)));
  }
  return ijk[0] + static_cast<std::size_t>(dims[0]) * (ijk[1] + static_cast<std::size_t>(dims[1]) * ijk[2]);
}

VtkCellData read_snapshot(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  auto fail = [&](const std::string &msg) { return IoError(path.string() + ": " + msg); };

  VtkCellData d;
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile", 0) != 0)
    throw fail("not a legacy VTK file");
  std::getline(in, d.title);
  std::getline(in, line);
  const bool binary = line.rfind("BINARY", 0) == 0;
  if (!binary && line.rfind("ASCII", 0) != 0)
    throw fail("unknown encoding '" + line + "'");

  std::size_t count = 0;
  while (in >> line)
  {
    if (line == "DATASET")
    {
      in >> line;
      if (line != "STRUCTURED_POINTS")
        throw fail("dataset " + line + " is not supported");
    }
    else if (line == "DIMENSIONS")
      in >> d.point_dims[0] >> d.point_dims[1] >> d.point_dims[2];
    else if (line == "ORIGIN")
      in >> d.origin[0] >> d.origin[1] >> d.origin[2];
    else if (line == "SPACING" || line == "ASPECT_RATIO")
      in >> d.spacing[0] >> d.spacing[1] >> d.spacing[2];
    else if (line == "CELL_DATA")
      in >> count;
    else if (line == "SCALARS")
    {
      std::string name, type, rest;
      in >> name >> type;
      std::getline(in, rest);
      std::getline(in, rest);
      if (rest.rfind("LOOKUP_TABLE", 0) != 0)
        throw fail("expected LOOKUP_TABLE after SCALARS " + name);
      std::vector<double> values(count);
      for (auto &v : values)
      {
        if (binary && type == "double")
        {
          std::uint64_t raw;
          in.read(reinterpret_cast<char *>(&raw), sizeof raw);
          v = std::bit_cast<double>(to_big_endian(raw));
        }
        else if (binary && type == "int")
        {
          std::uint32_t raw;
          in.read(reinterpret_cast<char *>(&raw), sizeof raw);
          v = static_cast<double>(static_cast<std::int32_t>(to_big_endian(raw)));
        }
        else if (!binary)
          in >> v;
        else
          throw fail("unsupported scalar type " + type);
      }
      if (!in)
        throw fail("truncated data in array " + name);
      d.arrays[name] = std::move(values);
    }
    else
      throw fail("unexpected token '" + line + "'");
  }
  return d;
}

}  // namespace dnapl
