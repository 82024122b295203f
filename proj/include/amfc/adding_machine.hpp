#pragma once

#include "amfc/probability_sequence.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace amfc {

/// Little-endian base-d digits a_1, a_2, ... of a non-negative integer, with
/// trailing zeros trimmed (0 has no digits).
struct DigitExpansion {
  unsigned base = 2;
  std::vector<unsigned> digits;

  std::uint64_t value() const;
  /// a_j for j >= 1; zero past the last stored digit.
  unsigned digit(std::size_t j) const { return j - 1 < digits.size() ? digits[j - 1] : 0u; }

  friend bool operator==(const DigitExpansion&, const DigitExpansion&) = default;
};

DigitExpansion to_digits(std::uint64_t n, unsigned base);

/// zeta_n: index of the first digit of n that is not d - 1. Number of digit
/// steps the exact adding machine needs to turn n into n + 1.
unsigned counter_zeta(std::uint64_t n, unsigned base);

/// p_1 * ... * p_count. Switches to a log-space sum past 64 factors.
double prefix_product(const ProbabilitySequence& probs, std::uint64_t count);

struct Outcome {
  std::uint64_t state;
  double probability;
};

/// One-step law of the fallible adding machine from a fixed state. Outcomes
/// are listed in decreasing distance below n, then n, then n + 1; zero-mass
/// outcomes (possible only when some p_j = 1) are omitted.
struct StepDistribution {
  std::uint64_t from = 0;
  std::vector<Outcome> outcomes;

  double probability_of(std::uint64_t m) const;
  double total() const;
};

StepDistribution step_distribution(std::uint64_t n, const ProbabilitySequence& probs);

using Rng = std::mt19937_64;

/// Independent generator for stream `stream` of a seeded family.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Runs the digit-by-digit increment of n, each step surviving with
/// probability p_j, and returns where it stopped.
std::uint64_t amfc_step(std::uint64_t n, const ProbabilitySequence& probs, Rng& rng);

struct SimulationSummary {
  std::uint64_t start = 0;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> trajectory; // X(0), ..., X(steps)
  std::map<std::uint64_t, std::uint64_t> visits;
  std::uint64_t returns_to_start = 0;
  /// tau_k = min{t >= 1 : X(t) = d^k} for k = 0 .. hit_levels - 1.
  std::vector<std::optional<std::uint64_t>> first_hit;
  /// N_k = number of t < tau_k with X(t) = 0, when tau_k was observed.
  std::vector<std::optional<std::uint64_t>> zero_visits_before_hit;
};

SimulationSummary simulate(std::uint64_t start, std::uint64_t steps, const ProbabilitySequence& probs,
                           std::uint64_t seed, unsigned hit_levels = 8);

/// One excursion from 0 until the first visit to d^level.
struct HittingSample {
  std::uint64_t zero_visits = 0; // N_level
  std::uint64_t hitting_time = 0; // tau_level
};

HittingSample sample_hitting(unsigned level, const ProbabilitySequence& probs, Rng& rng);

struct HittingEstimate {
  std::size_t runs = 0;
  double mean_visits = 0.0;
  double stderr_visits = 0.0;
  double mean_time = 0.0;
  double stderr_time = 0.0;
};

/// Monte Carlo estimate of E[N_level] and E[tau_level] over independent runs.
/// Run r uses make_rng(seed, r); OpenMP-parallel over runs with an in-order
/// reduction, so the result does not depend on the thread count.
HittingEstimate estimate_hitting(unsigned level, const ProbabilitySequence& probs, std::size_t runs,
                                 std::uint64_t seed);

/// Single-threaded reference for estimate_hitting.
HittingEstimate estimate_hitting_serial(unsigned level, const ProbabilitySequence& probs,
                                        std::size_t runs, std::uint64_t seed);

} // namespace amfc
