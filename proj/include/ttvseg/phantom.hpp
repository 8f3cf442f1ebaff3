#pragma once

#include <cstddef>

#include "ttvseg/image.hpp"

namespace ttvseg {

/// Synthetic retina-like image: a branching tree of curved vessels of
/// varying width (intensity 191) on a flat background (intensity 104).
ImageGrid vessel_phantom(std::size_t rows = 128, std::size_t cols = 128);

/// Synthetic axial brain slice with four levels: background 10, CSF 48,
/// grey matter 106 (a folded cortical ribbon), white matter 154, plus CSF
/// ventricles inside the white matter.
ImageGrid brain_phantom(std::size_t rows = 104, std::size_t cols = 87);

}  // namespace ttvseg
