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

// Procedural and cropped scenes: box layouts, their voxelization, the
// walkable ground mask, start/goal sampling and traversability checks.

#ifndef FIELDNAV_SCENE_SCENE_HPP_
#define FIELDNAV_SCENE_SCENE_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fieldnav/scene/perlin.hpp"
#include "fieldnav/voxel/box.hpp"
#include "fieldnav/voxel/grid.hpp"
#include "json.hpp"

namespace fieldnav::scene {

inline constexpr int kSceneSchema = 1;

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Everything the generator needs besides (seed, difficulty). Ranges are
// given at difficulty 0 and 1 and interpolated linearly in between.
struct SceneConfig {
  Eigen::Vector3d room = Eigen::Vector3d(5.0, 5.0, 2.0);
  double resolution = 0.05;
  bool walls = true;

  int n_min = 2;
  int n_max = 14;
  Range passage_width_easy{0.9, 1.4};
  Range passage_width_hard{0.45, 0.8};
  Range overhead_clearance_easy{1.6, 1.9};
  Range overhead_clearance_hard{1.1, 1.4};
  Range hurdle_height_easy{0.05, 0.15};
  Range hurdle_height_hard{0.2, 0.4};
  Range half_extent_easy{0.1, 0.25};
  Range half_extent_hard{0.2, 0.45};
  Range mid_center_z{0.6, 1.2};
  double placement_margin = 0.3;  // box centers stay this far inside the walls

  double perlin_amplitude_easy = 0.02;
  double perlin_amplitude_hard = 0.05;
  double perlin_cell_size = 0.4;
  int perlin_octaves = 2;
  int morph_radius_vox = 1;

  double walkable_radius = 0.1;   // erosion of the projected ground mask
  double start_clearance = 0.3;   // extra footprint clearance for start/goal
  Range height_band{0.0, 1.9};    // ground projection band
  double goal_distance = 2.0;
  double anchor_height = 0.6;     // z of start and goal points

  double agent_radius = 0.25;     // 3D certification erosion
  // Obstacles between these heights can be neither stepped over nor
  // crouched under by the walking agent.
  Range body_band{0.45, 1.1};
  int max_attempts = 64;

  // Throws ValidationError on inconsistent values.
  void validate() const;
};

struct DifficultySchedule {
  int count = 0;
  Range passage_width;
  Range overhead_clearance;
  Range hurdle_height;
  Range half_extent;
  double perlin_amplitude = 0.0;
};

// Throws ValidationError unless difficulty is in [0, 1].
DifficultySchedule schedule_for(double difficulty, const SceneConfig& cfg);

struct SceneManifest {
  std::uint64_t seed = 0;
  double difficulty = 0.0;
  Eigen::Vector3d room = Eigen::Vector3d(5.0, 5.0, 2.0);
  double resolution = 0.05;
  bool walls = true;
  std::vector<OrientedBox> boxes;
  PerlinConfig perlin;
  int morph_radius_vox = 0;
  Eigen::Vector3d start = Eigen::Vector3d::Zero();
  Eigen::Vector3d goal = Eigen::Vector3d::Zero();

  // Lattice covering the room from the origin.
  voxel::GridSpec grid_spec() const;
  // Throws ValidationError when a documented invariant fails.
  void validate() const;
};

nlohmann::json to_json(const SceneManifest& m);
// Throws ValidationError on a missing field, unknown key or wrong schema.
SceneManifest manifest_from_json(const nlohmann::json& j);
// Canonical text form (two-space indent, trailing newline).
std::string dump_manifest(const SceneManifest& m);
SceneManifest load_manifest(const std::string& path);

std::vector<OrientedBox> generate_boxes(std::uint64_t seed, double difficulty,
                                        const SceneConfig& cfg,
                                        std::uint64_t attempt = 0);

// Box membership with each face displaced along its normal by
// amplitude * noise over the face's own coordinates. Every face of every
// box has its own noise lane, keyed by `seed`.
voxel::OccupancyGrid deform_and_rasterize(std::span<const OrientedBox> boxes,
                                          const PerlinConfig& perlin,
                                          const voxel::GridSpec& spec,
                                          std::uint64_t seed);

// Closing then opening with the same ball radius.
voxel::OccupancyGrid cleanup(const voxel::OccupancyGrid& grid, int radius_vox);

// Occupies the outermost ring of voxels in x and y.
void add_walls(voxel::OccupancyGrid& grid);

// deform_and_rasterize -> cleanup -> walls, as described by the manifest.
voxel::OccupancyGrid scene_grid(const SceneManifest& m);

// 2D ground-plane mask with the x/y lattice of the 3D grid it came from.
struct GroundMask {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double resolution = 0.05;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> blocked;

  bool at(int i, int j) const { return blocked[i + static_cast<std::size_t>(nx) * j]; }
  bool in_bounds(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  Eigen::Vector2d cell_center(int i, int j) const {
    return origin + resolution * Eigen::Vector2d(i + 0.5, j + 0.5);
  }
  std::array<int, 2> cell_of(const Eigen::Vector2d& xy) const;
  // False for out-of-bounds points.
  bool free_at(const Eigen::Vector2d& xy) const;
  std::size_t free_count() const;
};

// A ground cell is blocked when any voxel whose center lies in the height
// band above it is occupied.
GroundMask project_ground(const voxel::OccupancyGrid& grid, const Range& band);

// Projects, then erodes the free region by a disc of `radius` meters.
// Space outside the grid counts as blocked.
GroundMask erode_walkable(const voxel::OccupancyGrid& grid, double radius,
                          const Range& band = {0.0, 1.9});

struct StartGoal {
  Eigen::Vector3d start;
  Eigen::Vector3d goal;
};

// Start uniform over free cells; goal at the center of a free cell hit by a
// uniform angle on the circle of radius `distance` around the start.
// Throws SceneRejectedError when the mask is fully blocked or no pair is
// found within the retry budget.
StartGoal sample_start_goal(const GroundMask& mask, std::uint64_t seed,
                            double distance, double z,
                            std::uint64_t attempt = 0);

// True iff the goal is reachable from the start in the grid dilated by
// `agent_radius` (26-connected free voxels). Equivalent to the geodesic
// field of the dilated grid being finite at the start.
bool certify_traversable(const voxel::OccupancyGrid& grid,
                         const Eigen::Vector3d& start,
                         const Eigen::Vector3d& goal, double agent_radius);

// Ground-level variant for a walking agent: 8-connected reachability in the
// body-band projection eroded by `radius`.
bool certify_walkable(const voxel::OccupancyGrid& grid,
                      const Eigen::Vector3d& start, const Eigen::Vector3d& goal,
                      double radius, const Range& body_band);

struct GeneratedScene {
  SceneManifest manifest;
  voxel::OccupancyGrid grid;
  int attempts = 0;
};

// Resamples layouts until one admits a start/goal pair and passes both
// certifications. Throws SceneRejectedError after cfg.max_attempts.
GeneratedScene generate_scene(std::uint64_t seed, double difficulty,
                              const SceneConfig& cfg);

// Crops a room-sized block around a sampled start from a larger box scene
// (user-supplied manifest) and samples a goal inside it. The crop keeps the
// source lattice and gets its own walls.
GeneratedScene crop_scene(const SceneManifest& source, std::uint64_t seed,
                          const SceneConfig& cfg);

}  // namespace fieldnav::scene

#endif  // FIELDNAV_SCENE_SCENE_HPP_
