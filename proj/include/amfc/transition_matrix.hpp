#pragma once

#include "amfc/numeric.hpp"
#include "amfc/probability_sequence.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace amfc {

/// s(n, m): probability that one fallible increment takes n to m.
double transition_prob(std::uint64_t n, std::uint64_t m, const ProbabilitySequence& probs);

struct MatrixEntry {
  std::uint64_t row;
  std::uint64_t col;
  double value;
};

class CapacityError : public std::length_error {
public:
  using std::length_error::length_error;
};

/// Upper-left M x M block of the transition matrix, stored row-major as
/// (row, col, value) triples with value > 0.
///
/// Row M - 1 is a boundary row: its n -> n + 1 entry falls outside the block,
/// so it is kept but excluded from stochasticity checks.
class SparseTruncatedOperator {
public:
  SparseTruncatedOperator(std::size_t size, std::vector<MatrixEntry> entries);

  std::size_t size() const noexcept { return size_; }
  std::span<const MatrixEntry> entries() const noexcept { return entries_; }
  std::span<const MatrixEntry> row(std::size_t n) const;

  bool boundary_row(std::size_t n) const noexcept { return n + 1 >= size_; }
  double value(std::size_t n, std::size_t m) const;
  double row_sum(std::size_t n) const;
  double column_sum(std::size_t m) const;

  /// Copy with entry (n, m) shifted by delta; the entry must exist.
  SparseTruncatedOperator perturbed(std::size_t n, std::size_t m, double delta) const;

  /// (S v) over the block, row-parallel.
  std::vector<Complex> apply(std::span<const Complex> v) const;
  std::vector<Complex> apply_serial(std::span<const Complex> v) const;

private:
  std::size_t size_;
  std::vector<MatrixEntry> entries_;
  std::vector<std::size_t> row_offsets_;
};

/// Assembles every (n, m) with s(n, m) > 0 and n, m < size. Throws
/// CapacityError when the block would exceed max_entries triples.
SparseTruncatedOperator build_truncated(const ProbabilitySequence& probs, std::size_t size,
                                        std::size_t max_entries = std::size_t{1} << 27);

struct SelfSimilarityViolation {
  std::uint64_t row;
  std::uint64_t col;
  double actual;
  double expected;
};

/// Checks s(n, m) = s(n - a_j(n) d^{j-1}, m - a_j(n) d^{j-1}) for
/// d^{j-1} <= n <= d^j - 2, d^{j-1} <= m <= d^j - 1, and s(n, m) = 0 for the
/// other columns of those rows. Needs d^j <= op.size().
std::vector<SelfSimilarityViolation> check_self_similarity(const SparseTruncatedOperator& op,
                                                           unsigned base, unsigned level,
                                                           double tolerance = 0.0);

std::vector<SelfSimilarityViolation> check_self_similarity(const ProbabilitySequence& probs,
                                                           unsigned level, std::size_t size);

enum class Recurrence { NullRecurrent, Transient, NotIrreducible };

std::string_view to_string(Recurrence r);

struct RecurrenceVerdict {
  Recurrence verdict;
  /// prod_{j <= J} p_j for J = 1 .. report depth
  std::vector<double> partial_products;
  /// Limit of the partial products when it is positive and computable.
  std::optional<double> product_limit;
  std::string reason;
};

/// Decides from the tail rule whether prod p_j vanishes.
RecurrenceVerdict classify_recurrence(const ProbabilitySequence& probs, unsigned report_depth = 16);

struct VisitsAndHitting {
  double expected_visits;       // E[N_n]: visits to 0 before reaching d^n
  double expected_hitting_time; // E[tau_n]
};

VisitsAndHitting expected_visits_and_hitting(unsigned n, const ProbabilitySequence& probs);

} // namespace amfc
