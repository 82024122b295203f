#include "amfc/adding_machine.hpp"

#include "amfc/numeric.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace amfc {

std::uint64_t DigitExpansion::value() const
{
  std::uint64_t n = 0;
  std::uint64_t weight = 1;
  for (unsigned a : digits) {
    n += a * weight;
    weight *= base;
  }
  return n;
}

DigitExpansion to_digits(std::uint64_t n, unsigned base)
{
  if (base < 2)
    throw std::invalid_argument("to_digits: base must be >= 2");
  DigitExpansion e{base, {}};
  while (n != 0) {
    e.digits.push_back(static_cast<unsigned>(n % base));
    n /= base;
  }
  return e;
}

unsigned counter_zeta(std::uint64_t n, unsigned base)
{
  if (base < 2)
    throw std::invalid_argument("counter_zeta: base must be >= 2");
  unsigned zeta = 1;
  while (n % base == base - 1) {
    n /= base;
    ++zeta;
  }
  return zeta;
}

double prefix_product(const ProbabilitySequence& probs, std::uint64_t count)
{
  if (count <= 64) {
    double product = 1.0;
    for (std::uint64_t j = 1; j <= count; ++j)
      product *= probs(j);
    return product;
  }
  double log_sum = 0.0;
  for (std::uint64_t j = 1; j <= count; ++j)
    log_sum += std::log(probs(j));
  return std::exp(log_sum);
}

double StepDistribution::probability_of(std::uint64_t m) const
{
  for (const auto& o : outcomes)
    if (o.state == m)
      return o.probability;
  return 0.0;
}

double StepDistribution::total() const
{
  double sum = 0.0;
  for (const auto& o : outcomes)
    sum += o.probability;
  return sum;
}

StepDistribution step_distribution(std::uint64_t n, const ProbabilitySequence& probs)
{
  if (n == std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("step_distribution: n + 1 overflows");

  const unsigned d = probs.base();
  const unsigned zeta = counter_zeta(n, d);

  // running[r] = p_1 * ... * p_r, multiplied left to right
  std::vector<double> running(zeta + 1, 1.0);
  running[1] = probs(1);
  for (unsigned r = 2; r <= zeta; ++r)
    running[r] = running[r - 1] * probs(r);

  StepDistribution dist;
  dist.from = n;
  dist.outcomes.reserve(zeta + 1);

  // n - sum_{j<=r} (d-1) d^{j-1} = n - (d^r - 1); listed in ascending state order
  std::vector<std::uint64_t> drop(zeta, 0);
  std::uint64_t power = 1;
  for (unsigned r = 1; r < zeta; ++r) {
    power *= d;
    drop[r] = power - 1;
  }
  for (unsigned r = zeta - 1; r >= 1; --r) {
    const double pr = (1.0 - probs(r + 1)) * running[r];
    if (pr > 0.0)
      dist.outcomes.push_back({n - drop[r], pr});
  }
  if (const double stay = 1.0 - probs(1); stay > 0.0)
    dist.outcomes.push_back({n, stay});
  if (running[zeta] > 0.0)
    dist.outcomes.push_back({n + 1, running[zeta]});
  return dist;
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream)
{
  return Rng(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

std::uint64_t amfc_step(std::uint64_t n, const ProbabilitySequence& probs, Rng& rng)
{
  const unsigned d = probs.base();
  const unsigned zeta = counter_zeta(n, d);
  std::uint64_t power = 1;
  for (unsigned j = 1; j <= zeta; ++j) {
    const bool survives = unit_interval(rng()) < probs(j);
    if (!survives)
      return j == 1 ? n : n - (power - 1);
    if (j < zeta)
      power *= d;
  }
  return n + 1;
}

SimulationSummary simulate(std::uint64_t start, std::uint64_t steps, const ProbabilitySequence& probs,
                           std::uint64_t seed, unsigned hit_levels)
{
  if (steps == 0)
    throw std::invalid_argument("simulate: steps must be >= 1");

  const unsigned d = probs.base();
  std::vector<std::uint64_t> powers;
  {
    std::uint64_t p = 1;
    for (unsigned k = 0; k < hit_levels; ++k) {
      powers.push_back(p);
      if (p > std::numeric_limits<std::uint64_t>::max() / d)
        break;
      p *= d;
    }
  }

  SimulationSummary s;
  s.start = start;
  s.steps = steps;
  s.seed = seed;
  s.trajectory.reserve(steps + 1);
  s.first_hit.assign(powers.size(), std::nullopt);
  s.zero_visits_before_hit.assign(powers.size(), std::nullopt);

  Rng rng = make_rng(seed);
  std::uint64_t x = start;
  std::uint64_t zeros_so_far = 0;
  s.trajectory.push_back(x);
  ++s.visits[x];

  for (std::uint64_t t = 1; t <= steps; ++t) {
    if (x == 0)
      ++zeros_so_far;
    x = amfc_step(x, probs, rng);
    s.trajectory.push_back(x);
    ++s.visits[x];
    if (x == start)
      ++s.returns_to_start;
    for (std::size_t k = 0; k < powers.size(); ++k) {
      if (x == powers[k] && !s.first_hit[k]) {
        s.first_hit[k] = t;
        s.zero_visits_before_hit[k] = zeros_so_far;
      }
    }
  }
  return s;
}

HittingSample sample_hitting(unsigned level, const ProbabilitySequence& probs, Rng& rng)
{
  const std::uint64_t target = ipow<std::uint64_t>(probs.base(), level);
  HittingSample sample;
  std::uint64_t x = 0;
  do {
    if (x == 0)
      ++sample.zero_visits;
    x = amfc_step(x, probs, rng);
    ++sample.hitting_time;
  } while (x != target);
  return sample;
}

namespace {

HittingEstimate summarize(const std::vector<HittingSample>& samples)
{
  HittingEstimate e;
  e.runs = samples.size();
  if (samples.empty())
    return e;
  const double n = static_cast<double>(samples.size());
  double sum_v = 0.0;
  double sum_t = 0.0;
  for (const auto& s : samples) {
    sum_v += static_cast<double>(s.zero_visits);
    sum_t += static_cast<double>(s.hitting_time);
  }
  e.mean_visits = sum_v / n;
  e.mean_time = sum_t / n;
  if (samples.size() > 1) {
    double ss_v = 0.0;
    double ss_t = 0.0;
    for (const auto& s : samples) {
      const double dv = static_cast<double>(s.zero_visits) - e.mean_visits;
      const double dt = static_cast<double>(s.hitting_time) - e.mean_time;
      ss_v += dv * dv;
      ss_t += dt * dt;
    }
    e.stderr_visits = std::sqrt(ss_v / (n - 1.0) / n);
    e.stderr_time = std::sqrt(ss_t / (n - 1.0) / n);
  }
  return e;
}

} // namespace

HittingEstimate estimate_hitting(unsigned level, const ProbabilitySequence& probs, std::size_t runs,
                                 std::uint64_t seed)
{
  std::vector<HittingSample> samples(runs);
  const auto count = static_cast<std::int64_t>(runs);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t r = 0; r < count; ++r) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(r));
    samples[static_cast<std::size_t>(r)] = sample_hitting(level, probs, rng);
  }
  return summarize(samples);
}

HittingEstimate estimate_hitting_serial(unsigned level, const ProbabilitySequence& probs,
                                        std::size_t runs, std::uint64_t seed)
{
  std::vector<HittingSample> samples(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng = make_rng(seed, r);
    samples[r] = sample_hitting(level, probs, rng);
  }
  return summarize(samples);
}

} // namespace amfc
