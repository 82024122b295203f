#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's formulas; they re-derive results from first principles.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

namespace oracle {

/// Runs the digit-by-digit fallible increment on an explicit digit vector
/// and enumerates every stopping point. p(j) is 1-based.
inline std::map<std::uint64_t, double> step_law(std::uint64_t n, unsigned d,
                                                const std::function<double(unsigned)>& p)
{
  std::vector<unsigned> digits;
  for (std::uint64_t x = n; x != 0; x /= d)
    digits.push_back(static_cast<unsigned>(x % d));
  digits.push_back(0);

  const auto value = [&](const std::vector<unsigned>& a) {
    std::uint64_t v = 0;
    for (std::size_t i = a.size(); i-- > 0;)
      v = v * d + a[i];
    return v;
  };

  std::map<std::uint64_t, double> law;
  std::vector<unsigned> a = digits;
  double survive = 1.0;
  for (unsigned j = 1;; ++j) {
    // fail at step j: digits as they stand
    const double fail = (1.0 - p(j)) * survive;
    if (fail > 0.0)
      law[value(a)] += fail;
    survive = j == 1 ? p(1) : survive * p(j);
    if (a[j - 1] == d - 1) {
      a[j - 1] = 0; // carry
      continue;
    }
    a[j - 1] += 1;
    if (survive > 0.0)
      law[value(a)] += survive;
    break;
  }
  return law;
}

/// The 8x8 upper-left block of S for d = 2, written entry by entry.
inline std::vector<std::vector<double>> s2_block(double p1, double p2, double p3, double p4)
{
  const double a = 1 - p1;
  std::vector<std::vector<double>> s(8, std::vector<double>(8, 0.0));
  s[0][0] = a;                   s[0][1] = p1;
  s[1][0] = p1 * (1 - p2);       s[1][1] = a;  s[1][2] = p1 * p2;
  s[2][2] = a;                   s[2][3] = p1;
  s[3][0] = p1 * p2 * (1 - p3);  s[3][2] = p1 * (1 - p2); s[3][3] = a; s[3][4] = p1 * p2 * p3;
  s[4][4] = a;                   s[4][5] = p1;
  s[5][4] = p1 * (1 - p2);       s[5][5] = a;  s[5][6] = p1 * p2;
  s[6][6] = a;                   s[6][7] = p1;
  s[7][0] = p1 * p2 * p3 * (1 - p4);
  s[7][4] = p1 * p2 * (1 - p3);
  s[7][6] = p1 * (1 - p2);
  s[7][7] = a;
  // s[7][8] = p1 p2 p3 p4 lies outside the block
  return s;
}

/// The 9x9 upper-left block of S for d = 3, written entry by entry.
inline std::vector<std::vector<double>> s3_block(double p1, double p2, double p3)
{
  const double a = 1 - p1;
  std::vector<std::vector<double>> s(9, std::vector<double>(9, 0.0));
  s[0][0] = a; s[0][1] = p1;
  s[1][1] = a; s[1][2] = p1;
  s[2][0] = p1 * (1 - p2); s[2][2] = a; s[2][3] = p1 * p2;
  s[3][3] = a; s[3][4] = p1;
  s[4][4] = a; s[4][5] = p1;
  s[5][3] = p1 * (1 - p2); s[5][5] = a; s[5][6] = p1 * p2;
  s[6][6] = a; s[6][7] = p1;
  s[7][7] = a; s[7][8] = p1;
  s[8][0] = p1 * p2 * (1 - p3); s[8][6] = p1 * (1 - p2); s[8][8] = a;
  // s[8][9] = p1 p2 p3 lies outside the block
  return s;
}

/// Newton iteration in long double for d x^{d-1} + (d-1) x^d - 1 = 0, started
/// at x = 1 where the increasing convex function makes it monotone.
inline long double theta_newton(unsigned d)
{
  long double x = 1.0L;
  for (int it = 0; it < 200; ++it) {
    const long double f = d * std::pow(x, d - 1.0L) + (d - 1.0L) * std::pow(x, (long double)d) - 1.0L;
    const long double df =
        d * (d - 1.0L) * std::pow(x, d - 2.0L) + d * (d - 1.0L) * std::pow(x, d - 1.0L);
    x -= f / df;
  }
  return x;
}

/// Critical orbit in exact-ish long double: y <- (y^d - (1 - p)) / p.
inline long double g_step(long double y, long double p, unsigned d)
{
  return (std::pow(y, (long double)d) - (1.0L - p)) / p;
}

/// Escape-time test for f(z) = ((z - (1-p))/p)^d written directly from the
/// definition, with the orbit bound |w| <= 1.
inline bool bounded_direct(std::complex<long double> z, const std::function<long double(unsigned)>& p,
                           unsigned d, unsigned levels)
{
  std::complex<long double> w = z;
  for (unsigned j = 1; j <= levels; ++j) {
    const long double pj = p(j);
    std::complex<long double> u = (w - (1.0L - pj)) / pj;
    w = std::pow(u, (int)d);
    if (std::abs(w) > 1.0L + 1e-12L)
      return false;
  }
  return true;
}

/// Green function of z^2 + c by direct iteration in long double.
inline long double green_direct(std::complex<long double> x, long double c, unsigned d, unsigned n)
{
  long double scale = 1.0L;
  for (unsigned k = 0; k < n; ++k) {
    if (std::abs(x) > 1e30L)
      return scale * std::log(std::abs(x));
    x = std::pow(x, (int)d) + c;
    scale /= d;
  }
  return std::abs(x) > 1e30L ? scale * std::log(std::abs(x)) : 0.0L;
}

/// Uniform double in [lo, hi).
inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace oracle
