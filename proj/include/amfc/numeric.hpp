#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace amfc {

using Complex = std::complex<double>;

/// SplitMix64 finalizer. Used both as a counter-based hash and to derive
/// independent generator seeds from (seed, stream) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Top 53 bits of a 64-bit word as a double in [0, 1).
constexpr double unit_interval(std::uint64_t bits) noexcept
{
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Integer power by repeated squaring. 1^n == 1 exactly.
template <typename T>
T ipow(T base, unsigned exponent)
{
  T result(1);
  while (exponent != 0) {
    if (exponent & 1u)
      result *= base;
    exponent >>= 1;
    if (exponent != 0)
      base *= base;
  }
  return result;
}

/// Bisection for a continuous f with a sign change on [lo, hi]. Runs until the
/// bracket is narrower than tol or cannot be split further in double precision.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 0.0)
{
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw std::domain_error("bisect: root is not bracketed");

  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi)
      break;
    const double fmid = f(mid);
    if (fmid == 0.0)
      return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

} // namespace amfc
