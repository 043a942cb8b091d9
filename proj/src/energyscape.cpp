#include "sonarnav/energyscape.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <istream>
#include <stdexcept>

#include "sonarnav/geometry.hpp"

namespace sonarnav {

double Grid::angle_rad(std::size_t j) const { return deg2rad(angle_deg(j)); }

Energyscape::Peak Energyscape::argmax() const {
  Peak best;
  best.value = -1.0f;
  for (std::size_t i = 0; i < grid.n_range; ++i)
    for (std::size_t j = 0; j < grid.n_angle; ++j) {
      const float v = energy[grid.index(i, j)];
      if (v > best.value) best = {i, j, v};
    }
  return best;
}

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T)))
    throw std::runtime_error("energyscape dump: truncated input");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_energyscape(std::ostream& out, const Energyscape& e) {
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.grid.n_range));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.grid.n_angle));
  put_le<double>(out, e.grid.r_max());
  put_le<double>(out, e.timestamp);
  for (float v : e.energy) put_le<float>(out, v);
}

void write_energyscape(const std::filesystem::path& path, const Energyscape& e) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_energyscape(out, e);
}

Energyscape read_energyscape(std::istream& in) {
  const auto n_range = get_le<std::uint32_t>(in);
  const auto n_angle = get_le<std::uint32_t>(in);
  const auto r_max = get_le<double>(in);
  const auto timestamp = get_le<double>(in);
  if (n_range == 0 || n_angle < 2) throw std::runtime_error("energyscape dump: bad dimensions");
  Grid g;
  g.n_range = n_range;
  g.n_angle = n_angle;
  g.range_bin = r_max / n_range;
  g.angle_min_deg = -90.0;
  g.angle_step_deg = 180.0 / static_cast<double>(n_angle - 1);
  Energyscape e(g, 0, timestamp);
  for (auto& v : e.energy) v = get_le<float>(in);
  return e;
}

Energyscape read_energyscape(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_energyscape(in);
}

void write_energyscape_csv(std::ostream& out, const Energyscape& e) {
  out << "range_m";
  for (std::size_t j = 0; j < e.grid.n_angle; ++j) out << ',' << e.grid.angle_deg(j);
  out << '\n' << std::setprecision(9);
  for (std::size_t i = 0; i < e.grid.n_range; ++i) {
    out << e.grid.range_center(i);
    for (std::size_t j = 0; j < e.grid.n_angle; ++j) out << ',' << e.at(i, j);
    out << '\n';
  }
}

}  // namespace sonarnav
