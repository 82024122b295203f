#include "amfc/spectrum.hpp"

#include "amfc/adding_machine.hpp"

#include <cmath>
#include <stdexcept>

namespace amfc {

std::string_view to_string(OrbitStatus s)
{
  return s == OrbitStatus::Bounded ? "Inside" : "Escaped";
}

EscapeResult iterate_f(Complex z, const ProbabilitySequence& probs, unsigned max_levels,
                       const IterateOptions& options)
{
  if (max_levels < 1)
    throw std::invalid_argument("iterate_f: max_levels must be >= 1");
  const double bound = 1.0 + options.tolerance;
  const FiberedMaps maps(probs);

  EscapeResult result;
  const Complex u1 = maps.h(1, z);
  if (std::abs(u1) > bound) {
    result.status = OrbitStatus::Escaped;
    result.level = 0;
    result.modulus = std::abs(u1);
    return result;
  }

  Complex w = ipow(u1, maps.degree());
  for (unsigned j = 1; j <= max_levels; ++j) {
    if (j > 1)
      w = maps.f(j, w);
    const double m = std::abs(w);
    if (options.keep_trace)
      result.trace.push_back(m);
    if (m > bound) {
      result.status = OrbitStatus::Escaped;
      result.level = j;
      result.modulus = m;
      if (options.keep_trace) {
        for (unsigned k = j + 1; k <= std::min(max_levels, j + options.trace_after_escape); ++k) {
          w = maps.f(k, w);
          if (!std::isfinite(std::abs(w)))
            break;
          result.trace.push_back(std::abs(w));
        }
      }
      return result;
    }
  }
  result.status = OrbitStatus::Bounded;
  result.level = max_levels;
  result.modulus = std::abs(w);
  return result;
}

QMembership membership_via_q(Complex lambda, const ProbabilitySequence& probs, unsigned max_levels,
                             double tolerance)
{
  if (max_levels < 1)
    throw std::invalid_argument("membership_via_q: max_levels must be >= 1");
  const FiberedMaps maps(probs);
  QMembership result;
  result.q.reserve(max_levels);
  Complex w = lambda; // f~_{r-1}(lambda)
  for (unsigned r = 1; r <= max_levels; ++r) {
    const Complex q = maps.h(r, w);
    result.q.push_back(q);
    if (std::abs(q) > 1.0 + tolerance) {
      result.inside = false;
      result.level = r;
      return result;
    }
    w = ipow(q, maps.degree());
  }
  return result;
}

bool contradicts(const EscapeResult& by_f, const QMembership& by_q, unsigned q_budget)
{
  // f escaping at level j forces |q(j + 1)| > 1; q escaping at r forces
  // f to escape by level r.
  if (by_f.escaped() && by_q.inside)
    return by_f.level + 1 <= q_budget;
  if (!by_f.escaped() && !by_q.inside)
    return by_q.level <= by_f.level;
  return false;
}

EigenvectorSlice eigenvector(Complex lambda, const ProbabilitySequence& probs, std::size_t size,
                             Complex v0)
{
  if (size < 2)
    throw std::invalid_argument("eigenvector: size must be >= 2");
  if (v0 == Complex(0.0))
    throw std::invalid_argument("eigenvector: v0 must be non-zero");

  const unsigned d = probs.base();
  const unsigned digits = static_cast<unsigned>(to_digits(size - 1, d).digits.size());
  const unsigned levels = std::max(1u, digits);

  const FiberedMaps maps(probs);
  EigenvectorSlice slice;
  slice.lambda = lambda;
  slice.q.reserve(levels);
  Complex w = lambda;
  for (unsigned r = 1; r <= levels; ++r) {
    const Complex q = maps.h(r, w);
    slice.q.push_back(q);
    w = ipow(q, d);
  }
  slice.inside = membership_via_q(lambda, probs).inside;

  slice.v.resize(size);
  for (std::size_t n = 0; n < size; ++n) {
    const auto e = to_digits(n, d);
    Complex v = v0;
    for (std::size_t r = 0; r < e.digits.size(); ++r)
      if (e.digits[r] != 0)
        v *= ipow(slice.q[r], e.digits[r]);
    slice.v[n] = v;
    if (!(std::abs(v) <= kEigenvectorOverflow))
      slice.overflow = true;
  }
  return slice;
}

double eigen_residual(const EigenvectorSlice& slice, const SparseTruncatedOperator& op)
{
  if (slice.v.size() < op.size())
    throw std::invalid_argument("eigen_residual: eigenvector shorter than the operator");
  const auto sv = op.apply(slice.v);
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < op.size(); ++n) {
    const double r = std::abs(sv[n] - slice.lambda * slice.v[n]);
    if (!(r <= worst))
      worst = std::isnan(r) ? INFINITY : r;
  }
  return worst;
}

bool spectral_mapping_check(Complex z, const ProbabilitySequence& probs, unsigned levels)
{
  const auto full = iterate_f(z, probs, levels + 1);
  const auto image = iterate_f(FiberedMaps(probs).f(1, z), probs.dropped(1), levels);
  if (full.escaped() != image.escaped())
    return false;
  if (!full.escaped())
    return true;
  // level j + 1 of the full orbit is level j of the shifted one; the disk test
  // at level 0 of the shifted orbit may fire one level before |w| > 1.
  if (image.level == 0)
    return full.level <= 2;
  return full.level == image.level + 1;
}

} // namespace amfc
