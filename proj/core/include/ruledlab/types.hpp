#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ruledlab {

using Vec3 = Eigen::Vector3d;

} // namespace ruledlab
