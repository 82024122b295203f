#include "amfc/julia_analysis.hpp"

#include "amfc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

namespace amfc {

namespace {

// Width allowed below -theta_d when testing the odd-degree invariant
// interval; covers rounding of orbits that sit on the parabolic point.
constexpr double kIntervalSlack = 1e-12;

std::uint64_t saturating_power(unsigned d, std::uint64_t e)
{
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / d)
      return std::numeric_limits<std::uint64_t>::max();
    r *= d;
  }
  return r;
}

} // namespace

ThetaPair theta_d(unsigned d)
{
  if (d < 3 || d % 2 == 0)
    throw std::domain_error("theta_d: d must be odd and >= 3");
  const double dd = d;
  const double theta = bisect(
      [&](double x) { return dd * ipow(x, d - 1) + (dd - 1.0) * ipow(x, d) - 1.0; }, 1e-9,
      1.0 - 1e-9);
  return {theta, dd * ipow(theta, d - 1)};
}

double connectedness_threshold(unsigned d)
{
  if (d < 2)
    throw std::domain_error("connectedness_threshold: d must be >= 2");
  return d % 2 == 0 ? 0.5 : theta_d(d).vartheta;
}

std::string_view to_string(CriticalStatus s)
{
  switch (s) {
  case CriticalStatus::Escaped:
    return "Escaped";
  case CriticalStatus::ProvenBounded:
    return "ProvenBounded";
  case CriticalStatus::Undecided:
    return "Undecided";
  }
  return "?";
}

CriticalOrbitReport critical_orbit(const ProbabilitySequence& probs, unsigned level, unsigned budget)
{
  if (level < 1)
    throw std::invalid_argument("critical_orbit: level must be >= 1");
  const unsigned d = probs.base();
  const double threshold = connectedness_threshold(d) - kThresholdSlack;
  const auto last_below = probs.last_index_below(threshold);
  // every g_j with j > last_below maps [floor, 1] into itself
  const double floor = d % 2 == 0 ? -1.0 : -theta_d(d).theta - kIntervalSlack;
  const auto proven = [&](std::uint64_t index, double y) {
    return last_below && index >= *last_below && y >= floor && y <= 1.0;
  };

  const FiberedMaps maps(probs);
  CriticalOrbitReport report;
  report.level = level;
  double y = 0.0;
  std::uint64_t index = level; // index of the last map applied, +1
  if (proven(index, y)) {
    report.status = CriticalStatus::ProvenBounded;
    report.last_index = level;
    return report;
  }
  for (unsigned step = 0; step < budget; ++step) {
    ++index;
    y = maps.g(index, y);
    report.trace.push_back(y);
    report.last_index = index;
    if (std::abs(y) > 1.0 + kEscapeTolerance) {
      report.status = CriticalStatus::Escaped;
      return report;
    }
    if (proven(index, y)) {
      report.status = CriticalStatus::ProvenBounded;
      return report;
    }
  }
  report.status = CriticalStatus::Undecided;
  return report;
}

std::string_view to_string(Connectedness c)
{
  switch (c) {
  case Connectedness::Connected:
    return "Connected";
  case Connectedness::ComponentsExactly:
    return "ComponentsExactly";
  case Connectedness::ComponentsAtLeast:
    return "ComponentsAtLeast";
  case Connectedness::InfinitelyMany:
    return "InfinitelyMany";
  case Connectedness::Cantor:
    return "Cantor";
  }
  return "?";
}

std::string ConnectednessVerdict::label() const
{
  std::string s(to_string(kind));
  if (kind == Connectedness::ComponentsExactly || kind == Connectedness::ComponentsAtLeast)
    s += "(" + std::to_string(count) + ")";
  return s;
}

ConnectednessVerdict classify_connectedness(const ProbabilitySequence& probs, unsigned budget)
{
  const unsigned d = probs.base();
  const bool even = d % 2 == 0;
  const double threshold = connectedness_threshold(d) - kThresholdSlack;
  const auto last_below = probs.last_index_below(threshold);

  ConnectednessVerdict v;

  if (last_below) {
    const std::uint64_t t = *last_below;
    if (t <= 1) {
      v.kind = Connectedness::Connected;
      v.count = 1;
      v.rule = even ? "s = 0: p_j >= 1/2 for all j >= 2"
                    : "p_j >= vartheta_d for all j >= 2";
      return v;
    }
    std::uint64_t escaped = 0;
    bool undecided = false;
    for (std::uint64_t k = 1; k < t; ++k) {
      auto r = critical_orbit(probs, static_cast<unsigned>(k), budget);
      escaped += r.status == CriticalStatus::Escaped;
      undecided = undecided || r.status == CriticalStatus::Undecided;
      v.evidence.push_back(std::move(r));
    }
    v.count = saturating_power(d, escaped);
    v.rule = "critical levels 1.." + std::to_string(t - 1) + " (last p_j below threshold at j = " +
             std::to_string(t) + "); components = d^#escaped";
    if (undecided) {
      v.kind = Connectedness::ComponentsAtLeast;
      v.undecided = true;
    } else {
      v.kind = escaped == 0 ? Connectedness::Connected : Connectedness::ComponentsExactly;
    }
    return v;
  }

  // infinitely many p_j below the threshold
  v.count = 0;
  v.kind = Connectedness::InfinitelyMany;
  v.evidence.push_back(critical_orbit(probs, 1, budget));

  const std::uint64_t local_prefix =
      probs.prefix().size() > probs.offset() ? probs.prefix().size() - probs.offset() : 0;

  if (const auto c = probs.eventual_constant(); c && *c < threshold) {
    bool constant_from_two = true;
    for (std::uint64_t j = 2; j <= local_prefix + 1; ++j)
      constant_from_two = constant_from_two && probs(j) == *c;
    if (constant_from_two) {
      if (v.evidence.front().status == CriticalStatus::Escaped) {
        v.kind = Connectedness::Cantor;
        v.rule = "p_j = p below threshold for all j >= 2: the critical orbit escapes";
      } else {
        v.kind = Connectedness::ComponentsAtLeast;
        v.count = 1;
        v.undecided = true;
        v.rule = "constant p below threshold but the critical orbit is undecided at budget";
      }
      return v;
    }
    v.rule = "eventually constant p below threshold: every deep critical level escapes";
    return v;
  }

  if (even) {
    v.rule = "s infinite: p_j < 1/2 for infinitely many j";
    return v;
  }
  if (!probs.last_index_below(0.5)) {
    v.rule = "p_j < 1/2 for infinitely many j";
    return v;
  }
  if (std::holds_alternative<IidUniformTail>(probs.tail())) {
    v.rule = "iid p_j with P(p_j < vartheta_d) > 0: infinitely many components almost surely";
    return v;
  }

  // periodic tail with entries in [1/2, vartheta_d): one period of levels
  // decides every level
  const std::uint64_t period = std::max<std::size_t>(probs.prefix().size(), 1);
  bool any_escaped = v.evidence.front().status == CriticalStatus::Escaped;
  for (std::uint64_t k = 2; k <= period; ++k) {
    v.evidence.push_back(critical_orbit(probs, static_cast<unsigned>(k), budget));
    any_escaped = any_escaped || v.evidence.back().status == CriticalStatus::Escaped;
  }
  if (any_escaped) {
    v.rule = "periodic p: a critical level escapes, hence every period repeats it";
    return v;
  }
  v.kind = Connectedness::ComponentsAtLeast;
  v.count = 1;
  v.undecided = true;
  v.rule = "periodic p in [1/2, vartheta_d): critical orbits undecided at budget";
  return v;
}

double conjugacy_lambda(const ProbabilitySequence& probs, double tol, std::uint64_t* terms,
                        double* bound)
{
  const double eps = probs.lower_bound(1);
  if (!(eps > 0.0))
    throw std::invalid_argument("conjugacy: p_j must stay bounded away from 0");
  const double d = probs.base();
  const double log_inv_eps = -std::log(eps);

  double log_lambda = 0.0;
  double weight = 1.0;
  double remaining = 0.0;
  std::uint64_t i = 0;
  constexpr std::uint64_t kMaxTerms = 4096;
  do {
    ++i;
    weight /= d;
    log_lambda -= weight * std::log(probs(i));
    // sum_{j > i} d^{-j} log(1/eps)
    remaining = weight / (d - 1.0) * log_inv_eps;
  } while (remaining >= tol && i < kMaxTerms);

  if (terms)
    *terms = i;
  if (bound)
    *bound = remaining;
  return std::exp(log_lambda);
}

double conjugacy_c(const ProbabilitySequence& probs, double tol)
{
  const double p1 = probs(1);
  return -((1.0 - p1) / p1) * conjugacy_lambda(probs.dropped(1), tol);
}

FiberedConjugacy conjugacy(const ProbabilitySequence& probs, unsigned shifts, double tol)
{
  FiberedConjugacy fc;
  fc.lambda_p = conjugacy_lambda(probs, tol, &fc.terms, &fc.truncation_bound);
  fc.c_values.reserve(shifts + 1);
  for (unsigned k = 0; k <= shifts; ++k)
    fc.c_values.push_back(conjugacy_c(probs.dropped(k), tol));
  return fc;
}

std::string_view to_string(Quasicircle q)
{
  return q == Quasicircle::GuaranteedQuasicircle ? "GuaranteedQuasicircle" : "CriterionFails";
}

namespace {

double c_bound(double rho, unsigned d)
{
  return (1.0 / rho - 1.0) * std::pow(1.0 / rho, 1.0 / (d - 1.0));
}

double c_limit(unsigned d)
{
  return std::pow(0.5, double(d) / (d - 1.0));
}

} // namespace

QuasicircleReport quasicircle_check(const ProbabilitySequence& probs, unsigned shifts)
{
  const unsigned d = probs.base();
  QuasicircleReport r;
  r.limit = c_limit(d);
  for (unsigned k = 1; k <= shifts; ++k)
    r.sup_c = std::max(r.sup_c, std::abs(conjugacy_c(probs.dropped(k))));
  r.tail_bound = c_bound(probs.lower_bound(shifts + 2), d);

  if (probs.lower_bound(2) >= kQuasicircleRho) {
    r.verdict = Quasicircle::GuaranteedQuasicircle;
    r.rule = "p_i >= 2(sqrt(2) - 1) for all i >= 2";
  } else if (std::max(r.sup_c, r.tail_bound) < r.limit) {
    r.verdict = Quasicircle::GuaranteedQuasicircle;
    r.rule = "sup |c| over computed shifts and tail bound below (1/2)^{d/(d-1)}";
  } else {
    r.verdict = Quasicircle::CriterionFails;
    r.rule = "sup |c| or its tail bound reaches (1/2)^{d/(d-1)}";
  }
  return r;
}

double rho_d(unsigned d)
{
  if (d < 2)
    throw std::domain_error("rho_d: d must be >= 2");
  const double limit = c_limit(d);
  return bisect([&](double rho) { return c_bound(rho, d) - limit; }, 0.5, 1.0);
}

MonicFamily::MonicFamily(const ProbabilitySequence& probs, unsigned depth) : degree_(probs.base())
{
  c_.reserve(depth);
  for (unsigned k = 0; k < depth; ++k)
    c_.push_back(conjugacy_c(probs.dropped(k)));
}

double MonicFamily::green(Complex x, unsigned start) const
{
  const double d = degree_;
  double scale = 1.0; // d^{-n}
  double previous_log = 0.0;
  for (unsigned k = start;; ++k) {
    const double m = std::abs(x);
    if (!std::isfinite(m))
      return scale * d * previous_log; // |x_{n-1}|^d overflowed
    if (m > kGreenRadius)
      return scale * std::log(m);
    if (k >= c_.size())
      return 0.0;
    previous_log = std::log(m);
    x = step(k, x);
    scale /= d;
  }
}

double green_function(Complex x, const ProbabilitySequence& probs, unsigned n_max)
{
  return MonicFamily(probs, n_max).green(x);
}

Complex monic_step(Complex x, const ProbabilitySequence& probs)
{
  return ipow(x, probs.base()) + conjugacy_c(probs);
}

Complex to_monic_coordinates(Complex z, const ProbabilitySequence& probs)
{
  return conjugacy_lambda(probs.dropped(1)) * FiberedMaps(probs).h(1, z);
}

double green_at(Complex z, const ProbabilitySequence& probs, unsigned n_max)
{
  return green_function(to_monic_coordinates(z, probs), probs.dropped(1), n_max);
}

} // namespace amfc
