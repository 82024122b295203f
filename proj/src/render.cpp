#include "amfc/render.hpp"

#include "amfc/julia_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace amfc {

namespace {

void validate(const RenderConfig& c)
{
  if (c.pixels_x < 1 || c.pixels_y < 1)
    throw std::invalid_argument("render: resolution must be at least 1x1");
  if (!(c.window.width > 0.0 && c.window.height > 0.0) || !std::isfinite(c.window.width) ||
      !std::isfinite(c.window.height))
    throw std::invalid_argument("render: zero-area window");
  if (c.max_levels < 1 || c.max_levels > 65535)
    throw std::invalid_argument("render: max_levels must be in [1, 65535]");
}

std::string digest(const ProbabilitySequence& probs)
{
  // FNV-1a over the canonical JSON form
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(probs)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Raster blank_raster(const RenderConfig& config, const ProbabilitySequence& probs)
{
  Raster r;
  r.width = config.pixels_x;
  r.height = config.pixels_y;
  r.levels.assign(std::size_t(r.width) * r.height, 0);
  r.probs_digest = digest(probs);
  r.max_levels = config.max_levels;
  r.window = config.window;
  r.coordinates = config.coordinates;
  return r;
}

RenderConfig prepared(const RenderConfig& config)
{
  validate(config);
  RenderConfig c = config;
  c.window = letterbox(config.window, config.pixels_x, config.pixels_y);
  return c;
}

} // namespace

std::string_view to_string(Coordinates c)
{
  return c == Coordinates::E ? "E" : "K";
}

Window default_window(const ProbabilitySequence& probs, Coordinates coordinates)
{
  constexpr double kPadding = 1.2;
  if (coordinates == Coordinates::K)
    return {0.0, 0.0, 2.0 * kPadding, 2.0 * kPadding};
  const double p1 = probs(1);
  return {1.0 - p1, 0.0, 2.0 * p1 * kPadding, 2.0 * p1 * kPadding};
}

Window letterbox(const Window& window, unsigned pixels_x, unsigned pixels_y)
{
  Window w = window;
  const double pixel_aspect = double(pixels_x) / double(pixels_y);
  if (w.width / w.height > pixel_aspect)
    w.height = w.width / pixel_aspect;
  else
    w.width = w.height * pixel_aspect;
  return w;
}

Complex pixel_center(const RenderConfig& config, unsigned i, unsigned j)
{
  const Window& w = config.window;
  const double dx = w.width / config.pixels_x;
  const double dy = w.height / config.pixels_y;
  const double re = w.center_re - 0.5 * w.width + (i + 0.5) * dx;
  const double im = w.center_im + 0.5 * w.height - (j + 0.5) * dy;
  return {re, im};
}

std::uint16_t escape_level(Complex point, const ProbabilitySequence& probs, unsigned max_levels,
                           Coordinates coordinates)
{
  if (coordinates == Coordinates::E) {
    const auto r = iterate_f(point, probs, max_levels);
    return r.escaped() ? static_cast<std::uint16_t>(std::max(1u, r.level)) : 0;
  }
  // y_0 = point, y_j = g_{j+1}(y_{j-1})
  const FiberedMaps maps(probs);
  const double bound = 1.0 + kEscapeTolerance;
  Complex y = point;
  if (std::abs(y) > bound)
    return 1;
  for (unsigned j = 1; j <= max_levels; ++j) {
    y = maps.g(j + 1, y);
    if (std::abs(y) > bound)
      return static_cast<std::uint16_t>(j);
  }
  return 0;
}

Raster render(const RenderConfig& config, const ProbabilitySequence& probs)
{
  const RenderConfig c = prepared(config);
  Raster r = blank_raster(c, probs);
  const auto rows = static_cast<std::int64_t>(c.pixels_y);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t j = 0; j < rows; ++j)
    for (unsigned i = 0; i < c.pixels_x; ++i)
      r.levels[std::size_t(j) * c.pixels_x + i] =
          escape_level(pixel_center(c, i, static_cast<unsigned>(j)), probs, c.max_levels,
                       c.coordinates);
  return r;
}

Raster render_serial(const RenderConfig& config, const ProbabilitySequence& probs)
{
  const RenderConfig c = prepared(config);
  Raster r = blank_raster(c, probs);
  for (unsigned j = 0; j < c.pixels_y; ++j)
    for (unsigned i = 0; i < c.pixels_x; ++i)
      r.levels[std::size_t(j) * c.pixels_x + i] =
          escape_level(pixel_center(c, i, j), probs, c.max_levels, c.coordinates);
  return r;
}

std::string pgm_bytes(const Raster& raster)
{
  std::string out = "P5\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) +
                    "\n255\n";
  out.reserve(out.size() + raster.levels.size());
  for (std::uint16_t level : raster.levels)
    out.push_back(static_cast<char>(std::min<std::uint16_t>(level, 255)));
  return out;
}

void write_pgm(const Raster& raster, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  const std::string bytes = pgm_bytes(raster);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw std::runtime_error("write failed for " + path.string());
}

void write_levels_csv(const Raster& raster, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  RenderConfig c;
  c.window = raster.window;
  c.pixels_x = raster.width;
  c.pixels_y = raster.height;
  out << "i,j,re,im,level\n";
  char buf[128];
  for (unsigned j = 0; j < raster.height; ++j) {
    for (unsigned i = 0; i < raster.width; ++i) {
      const Complex z = pixel_center(c, i, j);
      std::snprintf(buf, sizeof buf, "%u,%u,%.17g,%.17g,%u\n", i, j, z.real(), z.imag(),
                    unsigned(raster.at(i, j)));
      out << buf;
    }
  }
  if (!out)
    throw std::runtime_error("write failed for " + path.string());
}

namespace {

// Labels 4-connected regions of cells where member(idx) holds; returns the
// number of regions. Grid is w x h, row-major.
template <typename Member>
std::size_t flood_regions(unsigned w, unsigned h, Member member)
{
  std::vector<char> seen(std::size_t(w) * h, 0);
  std::vector<std::size_t> stack;
  std::size_t regions = 0;
  for (std::size_t start = 0; start < seen.size(); ++start) {
    if (seen[start] || !member(start))
      continue;
    ++regions;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const unsigned x = static_cast<unsigned>(idx % w);
      const unsigned y = static_cast<unsigned>(idx / w);
      const auto visit = [&](std::size_t n) {
        if (!seen[n] && member(n)) {
          seen[n] = 1;
          stack.push_back(n);
        }
      };
      if (x > 0)
        visit(idx - 1);
      if (x + 1 < w)
        visit(idx + 1);
      if (y > 0)
        visit(idx - w);
      if (y + 1 < h)
        visit(idx + w);
    }
  }
  return regions;
}

} // namespace

std::size_t count_components(const Raster& raster)
{
  return flood_regions(raster.width, raster.height,
                       [&](std::size_t idx) { return raster.levels[idx] == 0; });
}

bool inside_has_no_holes(const Raster& raster)
{
  const unsigned w = raster.width + 2;
  const unsigned h = raster.height + 2;
  const auto outside = [&](std::size_t idx) {
    const unsigned x = static_cast<unsigned>(idx % w);
    const unsigned y = static_cast<unsigned>(idx / w);
    if (x == 0 || y == 0 || x == w - 1 || y == h - 1)
      return true;
    return raster.at(x - 1, y - 1) != 0;
  };
  return flood_regions(w, h, outside) == 1;
}

namespace {

struct GreenKernel {
  MonicFamily family;
  double lambda;
  double p1;

  GreenKernel(const ProbabilitySequence& probs, unsigned n_max)
      : family(probs.dropped(1), n_max), lambda(conjugacy_lambda(probs.dropped(1))), p1(probs(1))
  {
  }

  double operator()(Complex z) const { return family.green(lambda * ((z - 1.0) / p1 + 1.0)); }
};

GreenGrid blank_grid(const RenderConfig& c)
{
  GreenGrid g;
  g.width = c.pixels_x;
  g.height = c.pixels_y;
  g.values.assign(std::size_t(g.width) * g.height, 0.0);
  g.window = c.window;
  return g;
}

} // namespace

GreenGrid green_grid(const RenderConfig& config, const ProbabilitySequence& probs, unsigned n_max)
{
  const RenderConfig c = prepared(config);
  const GreenKernel kernel(probs, n_max);
  GreenGrid g = blank_grid(c);
  const auto rows = static_cast<std::int64_t>(c.pixels_y);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t j = 0; j < rows; ++j)
    for (unsigned i = 0; i < c.pixels_x; ++i)
      g.values[std::size_t(j) * c.pixels_x + i] =
          kernel(pixel_center(c, i, static_cast<unsigned>(j)));
  return g;
}

GreenGrid green_grid_serial(const RenderConfig& config, const ProbabilitySequence& probs,
                            unsigned n_max)
{
  const RenderConfig c = prepared(config);
  const GreenKernel kernel(probs, n_max);
  GreenGrid g = blank_grid(c);
  for (unsigned j = 0; j < c.pixels_y; ++j)
    for (unsigned i = 0; i < c.pixels_x; ++i)
      g.values[std::size_t(j) * c.pixels_x + i] = kernel(pixel_center(c, i, j));
  return g;
}

} // namespace amfc
