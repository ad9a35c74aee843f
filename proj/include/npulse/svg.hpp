#pragma once

#include <string>

#include "npulse/majorana.hpp"

namespace npulse {

/// Orthographic view of the Bloch sphere with one polyline per track. Track
/// pieces on the visible hemisphere are solid, hidden ones dashed.
std::string render_tracks_svg(const PointTracks& tracks);

}  // namespace npulse
