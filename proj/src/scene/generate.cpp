// Copyright 2026 The fieldnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "fieldnav/errors.hpp"
#include "fieldnav/scene/random.hpp"
#include "fieldnav/scene/scene.hpp"
#include "fieldnav/voxel/ops.hpp"

namespace fieldnav::scene {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double lerp(double a, double b, double t) { return a + (b - a) * t; }

Range lerp(const Range& a, const Range& b, double t) {
  return {lerp(a.lo, b.lo, t), lerp(a.hi, b.hi, t)};
}

double draw(StreamRng& rng, const Range& r) { return rng.uniform(r.lo, r.hi); }

void check_range(const Range& r, const char* what, bool positive = true) {
  if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi) ||
      (positive && !(r.lo > 0.0))) {
    throw ValidationError(std::string("scene config: bad range for ") + what);
  }
}

// Vertical half-extent of a rotated box.
double vertical_extent(const OrientedBox& b) {
  return b.rotation.row(2).cwiseAbs().dot(b.half_extents);
}

// Support function h(u) = max over the box of u . (p - center).
double support(const OrientedBox& b, const Eigen::Vector3d& u) {
  return (b.rotation.transpose() * u).cwiseAbs().dot(b.half_extents);
}

OrientedBox random_box(StreamRng& rng, const DifficultySchedule& s, Anchor anchor) {
  OrientedBox b;
  b.anchor = anchor;
  for (int a = 0; a < 3; ++a) b.half_extents[a] = draw(rng, s.half_extent);
  b.rotation = uniform_rotation(rng);
  return b;
}

Eigen::Vector3d place_xy(StreamRng& rng, const SceneConfig& cfg) {
  const double x = rng.uniform(cfg.placement_margin, cfg.room.x() - cfg.placement_margin);
  const double y = rng.uniform(cfg.placement_margin, cfg.room.y() - cfg.placement_margin);
  return {x, y, 0.0};
}

// Grows from below the floor up to a sampled hurdle height.
OrientedBox floor_box(StreamRng& rng, const DifficultySchedule& s, const SceneConfig& cfg) {
  OrientedBox b = random_box(rng, s, Anchor::kFloor);
  const double top = draw(rng, s.hurdle_height);
  double ez = vertical_extent(b);
  // The bottom must end below the floor.
  if (2.0 * ez < 1.1 * top) {
    b.half_extents *= 1.1 * top / (2.0 * ez);
    ez = vertical_extent(b);
  }
  b.center = place_xy(rng, cfg);
  b.center.z() = top - ez;
  return b;
}

// Hangs from above the ceiling down to a sampled clearance.
OrientedBox ceiling_box(StreamRng& rng, const DifficultySchedule& s, const SceneConfig& cfg) {
  OrientedBox b = random_box(rng, s, Anchor::kCeiling);
  const double clearance = draw(rng, s.overhead_clearance);
  const double height = cfg.room.z();
  double ez = vertical_extent(b);
  if (clearance + 2.0 * ez < height + 0.1) {
    b.half_extents *= (height + 0.1 - clearance) / (2.0 * ez);
    ez = vertical_extent(b);
  }
  b.center = place_xy(rng, cfg);
  b.center.z() = clearance + ez;
  return b;
}

OrientedBox mid_box(StreamRng& rng, const DifficultySchedule& s, const SceneConfig& cfg) {
  OrientedBox b = random_box(rng, s, Anchor::kMid);
  b.center = place_xy(rng, cfg);
  b.center.z() = draw(rng, cfg.mid_center_z);
  return b;
}

// Two free boxes on either side of a straight passage. The slab
// |u . (x - c)| < w / 2 is clear of both boxes.
void lateral_pair(StreamRng& rng, const DifficultySchedule& s, const SceneConfig& cfg,
                  std::vector<OrientedBox>& out) {
  const double width = draw(rng, s.passage_width);
  const double angle = kTwoPi * rng.uniform();
  const Eigen::Vector3d u(std::cos(angle), std::sin(angle), 0.0);
  const Eigen::Vector3d c = place_xy(rng, cfg);
  OrientedBox a = random_box(rng, s, Anchor::kMid);
  OrientedBox b = random_box(rng, s, Anchor::kMid);
  a.center = c + u * (0.5 * width + support(a, u));
  b.center = c - u * (0.5 * width + support(b, -u));
  a.center.z() = draw(rng, cfg.mid_center_z);
  b.center.z() = draw(rng, cfg.mid_center_z);
  out.push_back(a);
  out.push_back(b);
}

enum class Kind { kFloor, kCeiling, kMid, kPair };

voxel::OccupancyGrid dilate_metric(const voxel::OccupancyGrid& grid, double radius) {
  if (radius <= 0.0) return grid;
  const double r = radius / grid.spec.resolution;
  const double limit = r * r + 1e-9;
  const auto d2 = voxel::squared_distance_to(grid, true);
  voxel::OccupancyGrid out(grid.spec);
  for (std::size_t i = 0; i < d2.size(); ++i) {
    out.occupied[i] = (d2[i] >= 0 && static_cast<double>(d2[i]) <= limit) ? 1 : 0;
  }
  return out;
}

bool mask_reachable(const GroundMask& m, const Eigen::Vector2d& from,
                    const Eigen::Vector2d& to) {
  if (!m.free_at(from) || !m.free_at(to)) return false;
  const auto s = m.cell_of(from);
  const auto t = m.cell_of(to);
  std::vector<std::uint8_t> seen(m.blocked.size(), 0);
  std::deque<std::array<int, 2>> open{s};
  seen[s[0] + static_cast<std::size_t>(m.nx) * s[1]] = 1;
  while (!open.empty()) {
    const auto c = open.front();
    open.pop_front();
    if (c == t) return true;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int i = c[0] + di, j = c[1] + dj;
        if (!m.in_bounds(i, j) || m.at(i, j)) continue;
        const std::size_t idx = i + static_cast<std::size_t>(m.nx) * j;
        if (seen[idx]) continue;
        seen[idx] = 1;
        open.push_back({i, j});
      }
  }
  return false;
}

}  // namespace

void SceneConfig::validate() const {
  if (!(resolution > 0.0)) throw ValidationError("scene config: resolution must be > 0");
  for (int a = 0; a < 3; ++a) {
    if (!(room[a] > 0.0)) throw ValidationError("scene config: room extents must be > 0");
  }
  if (n_min < 0 || n_max < n_min) throw ValidationError("scene config: need 0 <= n_min <= n_max");
  check_range(passage_width_easy, "passage_width_easy");
  check_range(passage_width_hard, "passage_width_hard");
  check_range(overhead_clearance_easy, "overhead_clearance_easy");
  check_range(overhead_clearance_hard, "overhead_clearance_hard");
  check_range(hurdle_height_easy, "hurdle_height_easy");
  check_range(hurdle_height_hard, "hurdle_height_hard");
  check_range(half_extent_easy, "half_extent_easy");
  check_range(half_extent_hard, "half_extent_hard");
  check_range(mid_center_z, "mid_center_z");
  check_range(height_band, "height_band", false);
  check_range(body_band, "body_band", false);
  if (!(placement_margin >= 0.0) || 2.0 * placement_margin >= std::min(room.x(), room.y())) {
    throw ValidationError("scene config: placement_margin does not fit the room");
  }
  PerlinConfig{perlin_amplitude_easy, perlin_cell_size, perlin_octaves}.validate();
  PerlinConfig{perlin_amplitude_hard, perlin_cell_size, perlin_octaves}.validate();
  if (morph_radius_vox < 0) throw ValidationError("scene config: morph_radius_vox must be >= 0");
  if (!(walkable_radius >= 0.0) || !(start_clearance >= 0.0) || !(agent_radius >= 0.0)) {
    throw ValidationError("scene config: radii must be >= 0");
  }
  if (!(goal_distance > 0.0)) throw ValidationError("scene config: goal_distance must be > 0");
  if (!(anchor_height > 0.0 && anchor_height < room.z())) {
    throw ValidationError("scene config: anchor_height must lie inside the room");
  }
  if (max_attempts < 1) throw ValidationError("scene config: max_attempts must be >= 1");
}

DifficultySchedule schedule_for(double difficulty, const SceneConfig& cfg) {
  if (!(difficulty >= 0.0 && difficulty <= 1.0)) {
    throw ValidationError("difficulty must be in [0, 1], got " + std::to_string(difficulty));
  }
  const double t = difficulty;
  DifficultySchedule s;
  s.count = static_cast<int>(std::lround(cfg.n_min + t * (cfg.n_max - cfg.n_min)));
  s.passage_width = lerp(cfg.passage_width_easy, cfg.passage_width_hard, t);
  s.overhead_clearance = lerp(cfg.overhead_clearance_easy, cfg.overhead_clearance_hard, t);
  s.hurdle_height = lerp(cfg.hurdle_height_easy, cfg.hurdle_height_hard, t);
  s.half_extent = lerp(cfg.half_extent_easy, cfg.half_extent_hard, t);
  s.perlin_amplitude = lerp(cfg.perlin_amplitude_easy, cfg.perlin_amplitude_hard, t);
  return s;
}

std::vector<OrientedBox> generate_boxes(std::uint64_t seed, double difficulty,
                                        const SceneConfig& cfg, std::uint64_t attempt) {
  cfg.validate();
  const DifficultySchedule s = schedule_for(difficulty, cfg);
  StreamRng rng(seed, Stream::kBoxes, attempt);

  std::vector<Kind> plan;
  int remaining = s.count;
  if (difficulty >= 0.5 && remaining >= 4) {
    plan = {Kind::kFloor, Kind::kCeiling, Kind::kPair};
    remaining -= 4;
  }
  while (remaining > 0) {
    Kind k = static_cast<Kind>(rng.below(3));
    if (k == Kind::kMid && remaining >= 2 && rng.uniform() < 0.5) k = Kind::kPair;
    plan.push_back(k);
    remaining -= (k == Kind::kPair) ? 2 : 1;
  }

  std::vector<OrientedBox> boxes;
  for (Kind k : plan) {
    switch (k) {
      case Kind::kFloor: boxes.push_back(floor_box(rng, s, cfg)); break;
      case Kind::kCeiling: boxes.push_back(ceiling_box(rng, s, cfg)); break;
      case Kind::kMid: boxes.push_back(mid_box(rng, s, cfg)); break;
      case Kind::kPair: lateral_pair(rng, s, cfg, boxes); break;
    }
  }
  return boxes;
}

voxel::OccupancyGrid deform_and_rasterize(std::span<const OrientedBox> boxes,
                                          const PerlinConfig& perlin,
                                          const voxel::GridSpec& spec,
                                          std::uint64_t seed) {
  perlin.validate();
  if (perlin.amplitude == 0.0) return voxel::rasterize_boxes(spec, boxes);
  spec.validate();
  if (spec.size() > voxel::kDefaultVoxelBudget) {
    throw CapacityError("grid exceeds the voxel budget");
  }
  voxel::OccupancyGrid grid(spec);
  const double amp = perlin.amplitude;
  for (std::size_t n = 0; n < boxes.size(); ++n) {
    const OrientedBox& box = boxes[n];
    box.validate();
    std::vector<Perlin2> faces;
    faces.reserve(6);
    for (int f = 0; f < 6; ++f) faces.emplace_back(seed, 6 * n + f);

    const Eigen::Vector3d half = box.aabb_half_extents() + Eigen::Vector3d::Constant(amp);
    const voxel::Index3 lo = spec.cell_of(box.center - half);
    const voxel::Index3 hi = spec.cell_of(box.center + half);
    for (int k = std::max(lo[2], 0); k <= std::min(hi[2], spec.dims[2] - 1); ++k)
      for (int j = std::max(lo[1], 0); j <= std::min(hi[1], spec.dims[1] - 1); ++j)
        for (int i = std::max(lo[0], 0); i <= std::min(hi[0], spec.dims[0] - 1); ++i) {
          if (grid.at(i, j, k)) continue;
          const Eigen::Vector3d p = spec.cell_center(i, j, k);
          const Eigen::Vector3d q = box.to_local(p);
          // The face the point is closest to (or furthest outside of).
          int axis = 0;
          double best = std::abs(q[0]) - box.half_extents[0];
          for (int a = 1; a < 3; ++a) {
            const double e = std::abs(q[a]) - box.half_extents[a];
            if (e > best) {
              best = e;
              axis = a;
            }
          }
          const int face = 2 * axis + (q[axis] < 0.0 ? 1 : 0);
          const int ua = (axis + 1) % 3, va = (axis + 2) % 3;
          const double disp = amp * faces[face].fractal(q[std::min(ua, va)], q[std::max(ua, va)],
                                                        perlin.cell_size, perlin.octaves);
          if (box.signed_distance(p) <= disp) grid.set(i, j, k, true);
        }
  }
  return grid;
}

voxel::OccupancyGrid cleanup(const voxel::OccupancyGrid& grid, int radius_vox) {
  return voxel::morph_open(voxel::morph_close(grid, radius_vox), radius_vox);
}

void add_walls(voxel::OccupancyGrid& grid) {
  const auto& d = grid.spec.dims;
  for (int k = 0; k < d[2]; ++k)
    for (int j = 0; j < d[1]; ++j)
      for (int i = 0; i < d[0]; ++i) {
        if (i == 0 || j == 0 || i == d[0] - 1 || j == d[1] - 1) grid.set(i, j, k, true);
      }
}

voxel::OccupancyGrid scene_grid(const SceneManifest& m) {
  m.validate();
  auto grid = deform_and_rasterize(m.boxes, m.perlin, m.grid_spec(), m.seed);
  if (m.morph_radius_vox > 0) grid = cleanup(grid, m.morph_radius_vox);
  if (m.walls) add_walls(grid);
  return grid;
}

std::array<int, 2> GroundMask::cell_of(const Eigen::Vector2d& xy) const {
  const Eigen::Vector2d c = (xy - origin) / resolution;
  return {static_cast<int>(std::floor(c.x())), static_cast<int>(std::floor(c.y()))};
}

bool GroundMask::free_at(const Eigen::Vector2d& xy) const {
  const auto c = cell_of(xy);
  return in_bounds(c[0], c[1]) && !at(c[0], c[1]);
}

std::size_t GroundMask::free_count() const {
  return static_cast<std::size_t>(std::count(blocked.begin(), blocked.end(), 0));
}

GroundMask project_ground(const voxel::OccupancyGrid& grid, const Range& band) {
  const auto& s = grid.spec;
  GroundMask m;
  m.origin = s.origin.head<2>();
  m.resolution = s.resolution;
  m.nx = s.dims[0];
  m.ny = s.dims[1];
  m.blocked.assign(static_cast<std::size_t>(m.nx) * m.ny, 0);
  for (int k = 0; k < s.dims[2]; ++k) {
    const double z = s.cell_center(0, 0, k).z();
    if (z < band.lo || z > band.hi) continue;
    for (int j = 0; j < s.dims[1]; ++j)
      for (int i = 0; i < s.dims[0]; ++i) {
        if (grid.at(i, j, k)) m.blocked[i + static_cast<std::size_t>(m.nx) * j] = 1;
      }
  }
  return m;
}

GroundMask erode_walkable(const voxel::OccupancyGrid& grid, double radius,
                          const Range& band) {
  if (!(radius >= 0.0)) throw ValidationError("walkable radius must be >= 0");
  GroundMask m = project_ground(grid, band);
  if (radius == 0.0) return m;
  const double r = radius / m.resolution;
  const int pad = static_cast<int>(std::ceil(r)) + 1;
  // Blocked border around the mask so the outside counts as an obstacle.
  voxel::OccupancyGrid padded(voxel::GridSpec(Eigen::Vector3d::Zero(), 1.0,
                                              {m.nx + 2 * pad, m.ny + 2 * pad, 1}));
  for (int j = 0; j < m.ny + 2 * pad; ++j)
    for (int i = 0; i < m.nx + 2 * pad; ++i) {
      const int mi = i - pad, mj = j - pad;
      padded.set(i, j, 0, !m.in_bounds(mi, mj) || m.at(mi, mj));
    }
  const auto d2 = voxel::squared_distance_to(padded, true);
  const double limit = r * r + 1e-9;
  for (int j = 0; j < m.ny; ++j)
    for (int i = 0; i < m.nx; ++i) {
      const auto d = d2[padded.spec.index(i + pad, j + pad, 0)];
      if (static_cast<double>(d) <= limit) m.blocked[i + static_cast<std::size_t>(m.nx) * j] = 1;
    }
  return m;
}

StartGoal sample_start_goal(const GroundMask& mask, std::uint64_t seed, double distance,
                            double z, std::uint64_t attempt) {
  std::vector<std::array<int, 2>> free;
  for (int j = 0; j < mask.ny; ++j)
    for (int i = 0; i < mask.nx; ++i)
      if (!mask.at(i, j)) free.push_back({i, j});
  if (free.empty()) throw SceneRejectedError("walkable mask has no free cell");

  StreamRng rng(seed, Stream::kStartGoal, attempt);
  constexpr int kStartDraws = 1024;
  constexpr int kCircleDraws = 128;
  for (int s = 0; s < kStartDraws; ++s) {
    const auto c = free[rng.below(free.size())];
    const Eigen::Vector2d start = mask.cell_center(c[0], c[1]);
    for (int t = 0; t < kCircleDraws; ++t) {
      const double angle = kTwoPi * rng.uniform();
      const Eigen::Vector2d p = start + distance * Eigen::Vector2d(std::cos(angle), std::sin(angle));
      if (!mask.free_at(p)) continue;
      const auto g = mask.cell_of(p);
      const Eigen::Vector2d goal = mask.cell_center(g[0], g[1]);
      return {{start.x(), start.y(), z}, {goal.x(), goal.y(), z}};
    }
  }
  throw SceneRejectedError("no start/goal pair after " + std::to_string(kStartDraws) +
                           " start draws");
}

bool certify_traversable(const voxel::OccupancyGrid& grid, const Eigen::Vector3d& start,
                         const Eigen::Vector3d& goal, double agent_radius) {
  const auto& s = grid.spec;
  const voxel::Index3 a = s.cell_of(start), b = s.cell_of(goal);
  if (!s.in_bounds(a) || !s.in_bounds(b)) return false;
  const auto eroded = dilate_metric(grid, agent_radius);
  if (eroded.at(a) || eroded.at(b)) return false;

  std::vector<std::uint8_t> seen(s.size(), 0);
  std::deque<std::size_t> open{s.index(b)};
  seen[s.index(b)] = 1;
  const std::size_t target = s.index(a);
  while (!open.empty()) {
    const std::size_t idx = open.front();
    open.pop_front();
    if (idx == target) return true;
    const auto c = s.coords(idx);
    for (int dk = -1; dk <= 1; ++dk)
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int i = c[0] + di, j = c[1] + dj, k = c[2] + dk;
          if (!s.in_bounds(i, j, k)) continue;
          const std::size_t n = s.index(i, j, k);
          if (seen[n] || eroded.occupied[n]) continue;
          seen[n] = 1;
          open.push_back(n);
        }
  }
  return false;
}

bool certify_walkable(const voxel::OccupancyGrid& grid, const Eigen::Vector3d& start,
                      const Eigen::Vector3d& goal, double radius, const Range& body_band) {
  const GroundMask m = erode_walkable(grid, radius, body_band);
  return mask_reachable(m, start.head<2>(), goal.head<2>());
}

GeneratedScene generate_scene(std::uint64_t seed, double difficulty, const SceneConfig& cfg) {
  cfg.validate();
  const DifficultySchedule sched = schedule_for(difficulty, cfg);
  const double clearance = std::max(cfg.walkable_radius, cfg.start_clearance);
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    SceneManifest m;
    m.seed = seed;
    m.difficulty = difficulty;
    m.room = cfg.room;
    m.resolution = cfg.resolution;
    m.walls = cfg.walls;
    m.boxes = generate_boxes(seed, difficulty, cfg, attempt);
    m.perlin = {sched.perlin_amplitude, cfg.perlin_cell_size, cfg.perlin_octaves};
    m.morph_radius_vox = cfg.morph_radius_vox;
    auto grid = scene_grid(m);

    const GroundMask mask = erode_walkable(grid, clearance, cfg.height_band);
    StartGoal sg;
    try {
      sg = sample_start_goal(mask, seed, cfg.goal_distance, cfg.anchor_height, attempt);
    } catch (const SceneRejectedError&) {
      continue;
    }
    if (!certify_traversable(grid, sg.start, sg.goal, cfg.agent_radius)) continue;
    if (!certify_walkable(grid, sg.start, sg.goal, cfg.agent_radius, cfg.body_band)) continue;
    m.start = sg.start;
    m.goal = sg.goal;
    return {std::move(m), std::move(grid), attempt + 1};
  }
  throw SceneRejectedError("seed " + std::to_string(seed) + ": no certifiable layout in " +
                           std::to_string(cfg.max_attempts) + " attempts");
}

GeneratedScene crop_scene(const SceneManifest& source, std::uint64_t seed,
                          const SceneConfig& cfg) {
  cfg.validate();
  source.validate();
  const voxel::GridSpec src_spec = source.grid_spec();
  const double res = source.resolution;
  const int cx = static_cast<int>(std::lround(cfg.room.x() / res));
  const int cy = static_cast<int>(std::lround(cfg.room.y() / res));
  if (cx > src_spec.dims[0] || cy > src_spec.dims[1]) {
    throw ValidationError("source scene is smaller than the crop");
  }
  const double clearance = std::max(cfg.walkable_radius, cfg.start_clearance);
  const GroundMask src_mask =
      erode_walkable(scene_grid(source), clearance, cfg.height_band);
  std::vector<std::array<int, 2>> free;
  for (int j = 0; j < src_mask.ny; ++j)
    for (int i = 0; i < src_mask.nx; ++i)
      if (!src_mask.at(i, j)) free.push_back({i, j});
  if (free.empty()) throw SceneRejectedError("source scene has no walkable cell");

  StreamRng rng(seed, Stream::kCrop);
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    const auto c = free[rng.below(free.size())];
    // Crop window in whole cells, centered on the start where possible.
    const int oi = std::clamp(c[0] - cx / 2, 0, src_spec.dims[0] - cx);
    const int oj = std::clamp(c[1] - cy / 2, 0, src_spec.dims[1] - cy);
    const Eigen::Vector3d shift(oi * res, oj * res, 0.0);

    SceneManifest m;
    m.seed = seed;
    m.difficulty = source.difficulty;
    m.room = Eigen::Vector3d(cx * res, cy * res, source.room.z());
    m.resolution = res;
    m.walls = true;
    m.perlin = source.perlin;
    m.morph_radius_vox = source.morph_radius_vox;
    const Eigen::Vector3d lo = shift, hi = shift + m.room;
    for (const auto& b : source.boxes) {
      const Eigen::Vector3d half =
          b.aabb_half_extents() + Eigen::Vector3d::Constant(source.perlin.amplitude);
      if (((b.center + half).array() < lo.array()).any() ||
          ((b.center - half).array() > hi.array()).any()) {
        continue;
      }
      OrientedBox moved = b;
      moved.center -= shift;
      m.boxes.push_back(moved);
    }
    auto grid = scene_grid(m);
    const GroundMask mask = erode_walkable(grid, clearance, cfg.height_band);
    const Eigen::Vector2d start = src_mask.cell_center(c[0], c[1]) - shift.head<2>();
    if (!mask.free_at(start)) continue;
    for (int t = 0; t < 128; ++t) {
      const double angle = kTwoPi * rng.uniform();
      const Eigen::Vector2d p =
          start + cfg.goal_distance * Eigen::Vector2d(std::cos(angle), std::sin(angle));
      if (!mask.free_at(p)) continue;
      const auto g = mask.cell_of(p);
      const Eigen::Vector2d goal = mask.cell_center(g[0], g[1]);
      m.start = Eigen::Vector3d(start.x(), start.y(), cfg.anchor_height);
      m.goal = Eigen::Vector3d(goal.x(), goal.y(), cfg.anchor_height);
      if (!certify_traversable(grid, m.start, m.goal, cfg.agent_radius)) break;
      if (!certify_walkable(grid, m.start, m.goal, cfg.agent_radius, cfg.body_band)) break;
      return {std::move(m), std::move(grid), attempt + 1};
    }
  }
  throw SceneRejectedError("no certifiable crop in " + std::to_string(cfg.max_attempts) +
                           " attempts");
}

}  // namespace fieldnav::scene
