#include "sonarnav/world.hpp"

#include <algorithm>
#include <limits>

namespace sonarnav {

Vec2 DynamicObstacle::position() const {
  if (path.empty()) return {};
  if (path.size() == 1) return path.front();
  const Vec2 a = path[leg];
  const Vec2 b = path[(leg + 1) % path.size()];
  const double len = norm(b - a);
  if (len == 0.0) return a;
  return a + (b - a) * (along / len);
}

void DynamicObstacle::advance(double distance) {
  if (path.size() < 2 || distance <= 0.0) return;
  double total = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) total += norm(path[(i + 1) % path.size()] - path[i]);
  if (total == 0.0) return;
  // Full loops do not change the position.
  distance = std::fmod(distance, total);
  along += distance;
  for (std::size_t guard = 0; guard <= path.size(); ++guard) {
    const double len = norm(path[(leg + 1) % path.size()] - path[leg]);
    if (along < len) return;
    along -= len;
    leg = (leg + 1) % path.size();
  }
}

std::vector<CircleObstacle> EnvironmentModel::circle_snapshot() const {
  std::vector<CircleObstacle> out = circles;
  out.reserve(circles.size() + dynamic.size());
  for (const auto& d : dynamic) out.push_back({d.position(), d.radius, d.reflectivity});
  return out;
}

void EnvironmentModel::advance(double dt) {
  for (auto& d : dynamic) d.advance(d.speed * dt);
}

EnvironmentModel::Bounds EnvironmentModel::bounds() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Bounds b{{inf, inf}, {-inf, -inf}};
  auto grow = [&](Vec2 p, double pad) {
    b.min.x = std::min(b.min.x, p.x - pad);
    b.min.y = std::min(b.min.y, p.y - pad);
    b.max.x = std::max(b.max.x, p.x + pad);
    b.max.y = std::max(b.max.y, p.y + pad);
  };
  for (const auto& s : segments) {
    grow(s.a, 0.0);
    grow(s.b, 0.0);
  }
  for (const auto& c : circles) grow(c.center, c.radius);
  for (const auto& d : dynamic)
    for (const auto& p : d.path) grow(p, d.radius);
  if (b.min.x > b.max.x) b = {{-1.0, -1.0}, {1.0, 1.0}};
  return b;
}

}  // namespace sonarnav
