#pragma once

// Ten contraction systems (‖A‖ + sum‖B(n)‖ <= 0.9) used by the stability and
// forced-response checks, each with a decaying and a single-mode harmonic
// forcing. `volterra gallery --out DIR` writes them as scenario files.

#include "volterra/model.hpp"
#include "volterra/scenario.hpp"

#include <string>
#include <vector>

namespace volterra {

struct GalleryEntry {
  std::string name;
  VolterraSystem system;
  Forcing decaying;
  Forcing harmonic;
  Vector x0;
};

const std::vector<GalleryEntry>& gallery();

/// Scenario for an entry with the given forcing.
Scenario gallery_scenario(const GalleryEntry& entry, const Forcing& forcing, std::size_t horizon);

/// Constant forcing y(n) = (1, ..., 1).
Forcing unit_constant_forcing(Index dim);

}  // namespace volterra
