// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "radiogrid/error.hpp"
#include "radiogrid/rng.hpp"

namespace radiogrid::synthetic {

using geometry::Vec2;

namespace {

std::vector<Vec2> local_rectangle(double w, double h) {
  return {{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}};
}

// L-shape inside a w x h box, notch removed from the top-right corner.
std::vector<Vec2> local_l_shape(double w, double h, double notch_w, double notch_h) {
  const double x0 = -w / 2, y0 = -h / 2, x1 = w / 2, y1 = h / 2;
  return {{x0, y0}, {x1, y0}, {x1, y1 - notch_h}, {x1 - notch_w, y1 - notch_h},
          {x1 - notch_w, y1}, {x0, y1}};
}

}  // namespace

geometry::Environment generate_scene(const SceneOptions& o, std::uint64_t seed,
                                     std::string name) {
  const double width = o.extent.max_x - o.extent.min_x;
  const double height = o.extent.max_y - o.extent.min_y;
  if (!(width > 0.0) || !(height > 0.0)) throw GeometryError("scene extent is empty");
  if (!(o.min_height > 0.0) || o.max_height < o.min_height) {
    throw GeometryError("scene building heights need 0 < min <= max");
  }
  if (!(o.fill > 0.0 && o.fill <= 0.7)) throw GeometryError("scene fill must be in (0, 0.7]");
  if (o.buildings == 0) return geometry::Environment(std::move(name), {});

  // Smallest lattice with roughly square cells and enough cells.
  std::size_t nx = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::round(std::sqrt(o.buildings * width / height))));
  std::size_t ny = (o.buildings + nx - 1) / nx;
  while (nx * ny < o.buildings) ++nx;
  const double cw = width / static_cast<double>(nx);
  const double ch = height / static_cast<double>(ny);

  auto engine = keyed_engine(stream_key(seed, stable_hash("synthetic_scene")));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::size_t> cells(nx * ny);
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
  std::vector<std::size_t> chosen;
  std::sample(cells.begin(), cells.end(), std::back_inserter(chosen), o.buildings, engine);

  std::vector<geometry::Building> buildings;
  buildings.reserve(o.buildings);
  for (std::size_t cell : chosen) {
    const double cx = o.extent.min_x + (static_cast<double>(cell % nx) + 0.5) * cw;
    const double cy = o.extent.min_y + (static_cast<double>(cell / nx) + 0.5) * ch;
    // Any rotation of a box whose half-diagonal is below half the smaller
    // cell side stays inside the cell.
    const double radius = 0.5 * o.fill * std::min(cw, ch);
    const double aspect = 0.5 + unit(engine);
    const double diag = 2.0 * radius * (0.7 + 0.3 * unit(engine));
    const double bw = diag / std::sqrt(1.0 + 1.0 / (aspect * aspect));
    const double bh = bw / aspect;
    const bool l_shape = unit(engine) < o.l_shape_fraction;
    std::vector<Vec2> local =
        l_shape ? local_l_shape(bw, bh, bw * (0.3 + 0.3 * unit(engine)),
                                bh * (0.3 + 0.3 * unit(engine)))
                : local_rectangle(bw, bh);
    const double slack = 0.5 * std::min(cw, ch) - radius;
    const double jx = (2.0 * unit(engine) - 1.0) * slack;
    const double jy = (2.0 * unit(engine) - 1.0) * slack;
    const double theta =
        (2.0 * unit(engine) - 1.0) * o.max_rotation_deg * std::numbers::pi / 180.0;
    const double cs = std::cos(theta), sn = std::sin(theta);
    geometry::Building b;
    b.name = "b" + std::to_string(buildings.size());
    for (const Vec2& p : local) {
      b.footprint.push_back({cx + jx + cs * p.x - sn * p.y, cy + jy + sn * p.x + cs * p.y});
    }
    if (unit(engine) < o.clockwise_fraction) {
      std::reverse(b.footprint.begin(), b.footprint.end());
    }
    b.height = o.min_height + (o.max_height - o.min_height) * unit(engine);
    buildings.push_back(std::move(b));
  }
  return geometry::Environment(std::move(name), std::move(buildings));
}

geometry::Point3 open_position(const geometry::Environment& env,
                               const geometry::Box2& extent, double altitude,
                               std::uint64_t seed) {
  auto engine = keyed_engine(stream_key(seed, stable_hash("open_position")));
  std::uniform_real_distribution<double> ux(extent.min_x, extent.max_x);
  std::uniform_real_distribution<double> uy(extent.min_y, extent.max_y);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const Vec2 p{ux(engine), uy(engine)};
    if (!geometry::point_in_building(p, env)) return {p.x, p.y, altitude};
  }
  throw GeometryError("no open transmitter position found in scene '" + env.name() + "'");
}

}  // namespace radiogrid::synthetic
