#include "utpp/error.hpp"

namespace utpp {

std::string_view to_string(Fault f) noexcept {
  switch (f) {
    case Fault::perpendicular_line: return "perpendicular_line";
    case Fault::path_out_of_reach: return "path_out_of_reach";
    case Fault::no_forward_intersection: return "no_forward_intersection";
    case Fault::no_intersection: return "no_intersection";
    case Fault::degenerate_center: return "degenerate_center";
    case Fault::degenerate_scaling: return "degenerate_scaling";
    case Fault::non_positive_speed: return "non_positive_speed";
    case Fault::too_few_waypoints: return "too_few_waypoints";
    case Fault::coincident_points: return "coincident_points";
  }
  return "unknown";
}

}  // namespace utpp
