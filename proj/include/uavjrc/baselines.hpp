#pragma once

#include <cstddef>
#include <vector>

#include "uavjrc/solver.hpp"

namespace uavjrc {

// Movement below which a FROC placement round counts as settled (meters).
inline constexpr double kFrocSettleTolerance = 0.1;

struct RayPlacement {
  Position3D pos;
  double distance = 0.0;  // from the target
  bool clamped = false;   // off the radar-range boundary (box clamp or back-off)
};

/// Point on the radar-range sphere around `target` closest to the FBS: on
/// the ray toward (or past) the FBS at `range` meters, or, when that is
/// higher than h_max - d_h, on the sphere at that ceiling in the FBS
/// direction. Flight-box clamping marks the placement as clamped.
RayPlacement place_on_ray(const Position3D& target, const Position3D& fbs, double range,
                          const ScenarioConfig& cfg);

/// Places every UAV on its ray; later-indexed UAVs back off toward their
/// target in delta_r steps until they clear every earlier UAV by d_g.
std::vector<RayPlacement> froc_placements(const SwarmState& s, const ScenarioConfig& cfg);

/// Fixed radar, optimized communication: UAVs sit on the radar-range
/// boundary toward the FBS, the FBS is re-optimized, repeat until settled.
RunResult froc_solve(const ScenarioConfig& cfg);

/// Optimized radar, fixed communication: UAVs start above their targets and
/// step toward the FBS only while their rate is below R_min.
RunResult orfc_solve(const ScenarioConfig& cfg);

}  // namespace uavjrc
