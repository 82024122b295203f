#pragma once

#include "amfc/numeric.hpp"
#include "amfc/probability_sequence.hpp"
#include "amfc/spectrum.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace amfc {

enum class Coordinates { E, K };

std::string_view to_string(Coordinates c);

struct Window {
  double center_re = 0.0;
  double center_im = 0.0;
  double width = 3.0;
  double height = 3.0;
};

struct RenderConfig {
  Window window;
  unsigned pixels_x = 512;
  unsigned pixels_y = 512;
  unsigned max_levels = kRenderBudget;
  Coordinates coordinates = Coordinates::E;
};

/// The disk D(1 - p_1, p_1) (E) or the closed unit disk (K), padded 20%.
Window default_window(const ProbabilitySequence& probs, Coordinates coordinates);

/// Widens the window along one axis so that pixels are square.
Window letterbox(const Window& window, unsigned pixels_x, unsigned pixels_y);

/// Complex point at the center of pixel (i, j); row 0 is the top edge.
Complex pixel_center(const RenderConfig& config, unsigned i, unsigned j);

/// Per-pixel escape level: 0 = inside at budget, otherwise max(1, level).
struct Raster {
  unsigned width = 0;
  unsigned height = 0;
  std::vector<std::uint16_t> levels; // row-major
  // metadata
  std::string probs_digest;
  unsigned max_levels = 0;
  Window window;
  Coordinates coordinates = Coordinates::E;

  std::uint16_t at(unsigned i, unsigned j) const { return levels[std::size_t(j) * width + i]; }
  bool inside(unsigned i, unsigned j) const { return at(i, j) == 0; }
};

/// Escape level of one point in the chosen coordinates (0 = inside).
std::uint16_t escape_level(Complex point, const ProbabilitySequence& probs, unsigned max_levels,
                           Coordinates coordinates);

/// Row-parallel rasterization. Validates the config and letterboxes the window.
Raster render(const RenderConfig& config, const ProbabilitySequence& probs);
Raster render_serial(const RenderConfig& config, const ProbabilitySequence& probs);

/// Binary PGM: "P5\n<w> <h>\n255\n" then one byte per pixel, min(level, 255).
void write_pgm(const Raster& raster, const std::filesystem::path& path);
std::string pgm_bytes(const Raster& raster);

/// CSV "i,j,re,im,level" with the exact escape levels.
void write_levels_csv(const Raster& raster, const std::filesystem::path& path);

/// Number of 4-connected components of the inside pixels.
std::size_t count_components(const Raster& raster);

/// True when the complement of the inside set, padded by a one-pixel outside
/// border, is 4-connected (the inside set has no holes).
bool inside_has_no_holes(const Raster& raster);

/// Green function values in E-coordinates at the pixel centers.
struct GreenGrid {
  unsigned width = 0;
  unsigned height = 0;
  std::vector<double> values; // row-major
  Window window;
};

GreenGrid green_grid(const RenderConfig& config, const ProbabilitySequence& probs, unsigned n_max);
GreenGrid green_grid_serial(const RenderConfig& config, const ProbabilitySequence& probs,
                            unsigned n_max);

} // namespace amfc
