#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace amfc {

// Tail rules for the infinite parameter sequence. Indices are global
// (1-based, counted before any shift).

/// p_j = value for every j past the prefix.
struct ConstantTail {
  double value = 1.0;
};

/// p_j = prefix[(j - 1) mod L] for every j; the prefix is one period.
struct CycleTail {};

/// p_j = lo + (hi - lo) * U(seed, j) with U a counter-based uniform draw, so
/// repeated lookups of the same index agree.
struct IidUniformTail {
  double lo = 0.0;
  double hi = 1.0;
  std::uint64_t seed = 0;
};

/// p_j = 1 - alpha * beta^j. The only supported tail with sum(1 - p_j) finite,
/// i.e. the transient regime.
struct ConvergentDeficitTail {
  double alpha = 0.0;
  double beta = 0.5;
};

using TailRule = std::variant<ConstantTail, CycleTail, IidUniformTail, ConvergentDeficitTail>;

/// The parameter sequence (p_j), j >= 1, of a base-d fallible adding machine.
///
/// Immutable. All p_j lookups in the library go through operator(). A shifted
/// sequence keeps the same prefix and tail and only moves an index offset, so
/// it agrees bit-for-bit with the original on overlapping indices.
class ProbabilitySequence {
public:
  ProbabilitySequence(unsigned base, std::vector<double> prefix, TailRule tail,
                      std::uint64_t offset = 0);

  static ProbabilitySequence constant(unsigned base, double p);

  unsigned base() const noexcept { return base_; }
  std::span<const double> prefix() const noexcept { return prefix_; }
  const TailRule& tail() const noexcept { return tail_; }
  std::uint64_t offset() const noexcept { return offset_; }

  /// p_j for j >= 1.
  double operator()(std::uint64_t j) const;

  /// Drops the first k entries: the result's p_j is this p_{j+k}. This is the
  /// shift map on parameter sequences.
  ProbabilitySequence dropped(std::uint64_t k) const;

  /// The sequence (p_n, p_{n+1}, ...), i.e. drops n - 1 entries. n >= 1.
  ProbabilitySequence shifted(std::uint64_t n) const;

  /// p_j < 1 for infinitely many j.
  bool irreducible() const;

  /// A lower bound for p_j over all j >= from (exact infimum for every rule
  /// except iid, where lo is used).
  double lower_bound(std::uint64_t from = 1) const;

  /// Largest j with p_j < threshold, 0 if there is none, nullopt if there are
  /// infinitely many (almost surely, for iid tails).
  std::optional<std::uint64_t> last_index_below(double threshold) const;

  /// Value c if p_j = c for all j past the prefix.
  std::optional<double> eventual_constant() const;

  /// Short human-readable description, stable across runs.
  std::string describe() const;

private:
  double tail_value(std::uint64_t global_index) const;

  unsigned base_;
  std::vector<double> prefix_;
  TailRule tail_;
  std::uint64_t offset_;
};

/// Parses the JSON configuration
///   {"d": int, "prefix": [..], "tail": {"kind": "constant"|"cycle"|"iid_uniform"|"convergent_deficit", ...}}
/// Missing iid "seed" falls back to default_seed. Throws std::invalid_argument.
ProbabilitySequence parse_probability_sequence(std::string_view json_text,
                                               std::uint64_t default_seed = 0);

ProbabilitySequence load_probability_sequence(const std::filesystem::path& path,
                                              std::uint64_t default_seed = 0);

std::string to_json(const ProbabilitySequence& probs);

} // namespace amfc
