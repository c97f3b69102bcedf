#pragma once

#include <string>

#include "json.hpp"

#include "depthsim/camera.hpp"
#include "depthsim/geometry.hpp"

namespace depthsim {

/// Box-limbed biped: torso, two legs, two feet (5 bodies). Vertices are in
/// body frames that coincide with the base frame at rest, feet touching
/// z = -0.9.
KinematicTemplate builtin_biped_template();

/// {"body_count": N, "vertices": [[x,y,z],...], "faces": [[i,j,k],...],
///  "body_index": [b,...]}
KinematicTemplate template_from_json(const nlohmann::json& j);
nlohmann::json template_to_json(const KinematicTemplate& tmpl);

/// World body poses for a robot whose bodies sit at `rest` relative to the base.
BodyPoseSet world_body_poses(const BasePose& base, const BodyPoseSet& rest);

BodyPose base_body_pose(const BasePose& base);

}  // namespace depthsim
