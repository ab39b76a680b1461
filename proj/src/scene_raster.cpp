#include <algorithm>
#include <cmath>

#include "random.hpp"
#include "rtk/distance_map.hpp"
#include "rtk/error.hpp"
#include "rtk/scene.hpp"

namespace rtk {

bool MassFunction::valid(double tolerance) const {
  auto in01 = [tolerance](double v) { return v >= -tolerance && v <= 1.0 + tolerance; };
  return in01(occupied) && in01(free) && in01(unknown) &&
         std::fabs(occupied + free + unknown - 1.0) <= tolerance;
}

MassFunction ds_combine(const MassFunction& a, const MassFunction& b) {
  const double conflict = a.occupied * b.free + a.free * b.occupied;
  if (conflict >= 1.0 - 1e-12) throw Error(ErrorCode::TotalConflict, "masses are in total conflict");
  const double norm = 1.0 - conflict;
  return {(a.occupied * b.occupied + a.occupied * b.unknown + a.unknown * b.occupied) / norm,
          (a.free * b.free + a.free * b.unknown + a.unknown * b.free) / norm,
          a.unknown * b.unknown / norm};
}

float occupancy_value(const MassFunction& m) {
  if (m.unknown >= 1.0) return 0.0f;
  return static_cast<float>(std::clamp(m.occupied + 0.5 * m.unknown, 0.0, 1.0));
}

BevGrid::BevGrid(const GridSpec& spec)
    : grid(spec),
      occupancy(spec.height, spec.width, 1),
      ground_semantics(spec.height, spec.width, 3),
      ground_markings(spec.height, spec.width, 1),
      lidar_intensity(spec.height, spec.width, 1),
      occupancy_mass(static_cast<std::size_t>(spec.height) * spec.width, MassFunction::vacuous()) {}

namespace {

constexpr double kSidewalkMeters = 1.5;
constexpr double kObstacleBandMeters = 2.0;

const MassFunction kFreeEvidence{0.05, 0.85, 0.10};
const MassFunction kObstacleEvidence{0.85, 0.05, 0.10};
const MassFunction kOccluderEvidence{0.90, 0.05, 0.05};

enum : std::uint8_t { kObserved = 0, kDropped = 1, kOccluded = 2 };

// Deterministic noise realization; shared by rasterization and the mask.
std::vector<std::uint8_t> realize_noise(const SceneSpec& spec) {
  const GridSpec& g = spec.grid;
  std::vector<std::uint8_t> state(static_cast<std::size_t>(g.height) * g.width, kObserved);
  detail::SceneRng rng(detail::mix_seed(spec.seed, 0x5e5eULL));
  for (int k = 0; k < spec.noise.occlusion_boxes; ++k) {
    const int bh = rng.uniform_int(g.height / 16, g.height / 5);
    const int bw = rng.uniform_int(g.width / 16, g.width / 5);
    const int r0 = rng.uniform_int(0, g.height - bh);
    const int c0 = rng.uniform_int(0, g.width - bw);
    for (int r = r0; r < r0 + bh; ++r) {
      for (int c = c0; c < c0 + bw; ++c) state[static_cast<std::size_t>(r) * g.width + c] = kOccluded;
    }
  }
  for (auto& s : state) {
    if (rng.uniform01() < spec.noise.dropout_prob) s = kDropped;
  }
  return state;
}

}  // namespace

Raster observation_mask(const SceneSpec& spec) {
  spec.validate();
  const auto state = realize_noise(spec);
  Raster mask(spec.grid.height, spec.grid.width, 1);
  auto values = mask.values();
  for (std::size_t i = 0; i < state.size(); ++i) values[i] = state[i] == kObserved ? 1.0f : 0.0f;
  return mask;
}

BevGrid rasterize_channels(const LaneGraph& graph, const SceneSpec& spec) {
  spec.validate();
  const GridSpec& g = spec.grid;
  const double half_lane = spec.lane_width / g.resolution / 2.0;
  const double sidewalk = half_lane + kSidewalkMeters / g.resolution;
  const double obstacle = sidewalk + kObstacleBandMeters / g.resolution;

  LaneGraph placed = graph;
  placed.grid = g;
  const DistanceMap dist = compute_distance_map(placed, obstacle);
  const auto state = realize_noise(spec);
  detail::SceneRng intensity_rng(detail::mix_seed(spec.seed, 0x1a7eULL));

  BevGrid bev(g);
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * g.width + c;
      const double d = dist.at(r, c);
      const double noise = intensity_rng.normal() * spec.noise.intensity_sigma;
      if (state[idx] == kDropped) continue;
      if (state[idx] == kOccluded) {
        bev.occupancy_mass[idx] = kOccluderEvidence;
        bev.occupancy.at(r, c) = occupancy_value(kOccluderEvidence);
        continue;
      }

      const bool road = d <= half_lane;
      const bool walk = !road && d <= sidewalk;
      const bool marking = std::fabs(d - half_lane) <= 0.5;
      bev.ground_semantics.at(r, c, 0) = road ? 1.0f : 0.0f;
      bev.ground_semantics.at(r, c, 1) = walk ? 1.0f : 0.0f;
      bev.ground_semantics.at(r, c, 2) = (!road && !walk) ? 1.0f : 0.0f;
      bev.ground_markings.at(r, c) = marking ? 1.0f : 0.0f;

      MassFunction m = MassFunction::vacuous();
      if (road || walk) {
        m = kFreeEvidence;
      } else if (d <= obstacle) {
        m = kObstacleEvidence;
      }
      bev.occupancy_mass[idx] = m;
      bev.occupancy.at(r, c) = occupancy_value(m);

      const double base = marking ? 0.9 : road ? 0.35 : walk ? 0.2 : 0.1;
      bev.lidar_intensity.at(r, c) = static_cast<float>(std::clamp(base + noise, 0.0, 1.0));
    }
  }
  return bev;
}

BevGrid accumulate_temporal(const std::vector<std::pair<BevGrid, Pose2>>& frames) {
  if (frames.empty()) throw Error(ErrorCode::InvalidArgument, "accumulation needs at least one frame");
  const GridSpec g = frames.back().first.grid;
  for (const auto& [bev, pose] : frames) {
    if (!(bev.grid == g)) throw Error(ErrorCode::ShapeMismatch, "frames use different grids");
  }

  BevGrid out(g);
  std::vector<MassFunction> mass(out.occupancy_mass.size(), MassFunction::vacuous());
  for (const auto& [bev, pose] : frames) {
    const double cs = std::cos(pose.yaw);
    const double sn = std::sin(pose.yaw);
    for (int r = 0; r < g.height; ++r) {
      for (int c = 0; c < g.width; ++c) {
        // Final-frame metric point, mapped back into frame k.
        const Point q = pixel_center(r, c);
        const double fx = (q.x - g.ego_col()) * g.resolution - pose.x;
        const double fy = (g.ego_row - q.y) * g.resolution - pose.y;
        const double kx = cs * fx + sn * fy;
        const double ky = -sn * fx + cs * fy;
        const int sc = static_cast<int>(std::floor(g.ego_col() + kx / g.resolution));
        const int sr = static_cast<int>(std::floor(g.ego_row - ky / g.resolution));
        if (sr < 0 || sc < 0 || sr >= g.height || sc >= g.width) continue;

        const std::size_t dst = static_cast<std::size_t>(r) * g.width + c;
        const std::size_t src = static_cast<std::size_t>(sr) * g.width + sc;
        const MassFunction& m = bev.occupancy_mass[src];
        try {
          mass[dst] = ds_combine(mass[dst], m);
        } catch (const Error&) {
          mass[dst] = m;  // total conflict: newest evidence wins
        }
        for (int ch = 0; ch < 3; ++ch) {
          auto& v = out.ground_semantics.at(r, c, ch);
          v = std::max(v, bev.ground_semantics.at(sr, sc, ch));
        }
        out.ground_markings.at(r, c) = std::max(out.ground_markings.at(r, c), bev.ground_markings.at(sr, sc));
        out.lidar_intensity.at(r, c) = std::max(out.lidar_intensity.at(r, c), bev.lidar_intensity.at(sr, sc));
      }
    }
  }
  for (std::size_t i = 0; i < mass.size(); ++i) {
    out.occupancy_mass[i] = mass[i];
    out.occupancy.values()[i] = occupancy_value(mass[i]);
  }
  return out;
}

}  // namespace rtk
