#include "amfc/transition_matrix.hpp"

#include "amfc/adding_machine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <variant>

namespace amfc {

double transition_prob(std::uint64_t n, std::uint64_t m, const ProbabilitySequence& probs)
{
  const unsigned d = probs.base();
  const unsigned zeta = counter_zeta(n, d);

  if (m == n)
    return 1.0 - probs(1);

  double running = probs(1);
  if (n != std::numeric_limits<std::uint64_t>::max() && m == n + 1) {
    for (unsigned j = 2; j <= zeta; ++j)
      running *= probs(j);
    return running;
  }
  if (m > n)
    return 0.0;

  const std::uint64_t diff = n - m;
  std::uint64_t power = 1;
  for (unsigned r = 1; r < zeta; ++r) {
    power *= d;
    if (r > 1)
      running *= probs(r);
    if (power - 1 == diff)
      return (1.0 - probs(r + 1)) * running;
    if (power - 1 > diff)
      break;
  }
  return 0.0;
}

SparseTruncatedOperator::SparseTruncatedOperator(std::size_t size, std::vector<MatrixEntry> entries)
    : size_(size), entries_(std::move(entries)), row_offsets_(size + 1, 0)
{
  std::sort(entries_.begin(), entries_.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (const auto& e : entries_) {
    if (e.row >= size_ || e.col >= size_)
      throw std::out_of_range("matrix entry outside the truncation");
    ++row_offsets_[e.row + 1];
  }
  for (std::size_t n = 0; n < size_; ++n)
    row_offsets_[n + 1] += row_offsets_[n];
}

std::span<const MatrixEntry> SparseTruncatedOperator::row(std::size_t n) const
{
  if (n >= size_)
    throw std::out_of_range("row outside the truncation");
  return std::span<const MatrixEntry>(entries_).subspan(row_offsets_[n],
                                                        row_offsets_[n + 1] - row_offsets_[n]);
}

double SparseTruncatedOperator::value(std::size_t n, std::size_t m) const
{
  const auto r = row(n);
  const auto it = std::lower_bound(r.begin(), r.end(), m,
                                   [](const MatrixEntry& e, std::size_t col) { return e.col < col; });
  return (it != r.end() && it->col == m) ? it->value : 0.0;
}

double SparseTruncatedOperator::row_sum(std::size_t n) const
{
  double sum = 0.0;
  for (const auto& e : row(n))
    sum += e.value;
  return sum;
}

double SparseTruncatedOperator::column_sum(std::size_t m) const
{
  double sum = 0.0;
  for (const auto& e : entries_)
    if (e.col == m)
      sum += e.value;
  return sum;
}

SparseTruncatedOperator SparseTruncatedOperator::perturbed(std::size_t n, std::size_t m,
                                                           double delta) const
{
  auto entries = entries_;
  for (auto& e : entries) {
    if (e.row == n && e.col == m) {
      e.value += delta;
      return SparseTruncatedOperator(size_, std::move(entries));
    }
  }
  throw std::out_of_range("perturbed: no such entry");
}

std::vector<Complex> SparseTruncatedOperator::apply(std::span<const Complex> v) const
{
  if (v.size() < size_)
    throw std::invalid_argument("apply: vector shorter than the operator");
  std::vector<Complex> out(size_);
  const auto rows = static_cast<std::int64_t>(size_);
#pragma omp parallel for schedule(static)
  for (std::int64_t n = 0; n < rows; ++n) {
    Complex acc = 0.0;
    for (std::size_t k = row_offsets_[n]; k < row_offsets_[n + 1]; ++k)
      acc += entries_[k].value * v[entries_[k].col];
    out[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

std::vector<Complex> SparseTruncatedOperator::apply_serial(std::span<const Complex> v) const
{
  if (v.size() < size_)
    throw std::invalid_argument("apply: vector shorter than the operator");
  std::vector<Complex> out(size_);
  for (std::size_t n = 0; n < size_; ++n) {
    Complex acc = 0.0;
    for (std::size_t k = row_offsets_[n]; k < row_offsets_[n + 1]; ++k)
      acc += entries_[k].value * v[entries_[k].col];
    out[n] = acc;
  }
  return out;
}

SparseTruncatedOperator build_truncated(const ProbabilitySequence& probs, std::size_t size,
                                        std::size_t max_entries)
{
  if (size < 2)
    throw std::invalid_argument("build_truncated: size must be >= 2");
  // each row has at most zeta_n + 1 entries and zeta averages d/(d-1) <= 2
  if (size > max_entries / 3)
    throw CapacityError("build_truncated: " + std::to_string(size) +
                        " rows exceed the entry budget of " + std::to_string(max_entries));

  std::vector<MatrixEntry> entries;
  entries.reserve(size * 3);
  for (std::size_t n = 0; n < size; ++n) {
    for (const auto& o : step_distribution(n, probs).outcomes)
      if (o.state < size)
        entries.push_back({n, o.state, o.probability});
  }
  return SparseTruncatedOperator(size, std::move(entries));
}

std::vector<SelfSimilarityViolation> check_self_similarity(const SparseTruncatedOperator& op,
                                                           unsigned base, unsigned level,
                                                           double tolerance)
{
  if (level < 1)
    throw std::invalid_argument("check_self_similarity: level must be >= 1");
  const std::uint64_t lo = ipow<std::uint64_t>(base, level - 1);
  const std::uint64_t hi = lo * base; // d^j
  if (hi > op.size())
    throw std::invalid_argument("check_self_similarity: d^j exceeds the truncation");

  std::vector<SelfSimilarityViolation> violations;
  for (std::uint64_t n = lo; n + 2 <= hi; ++n) {
    const std::uint64_t shift = (n / lo) % base * lo; // a_j(n) d^{j-1}
    for (std::uint64_t m = 0; m < op.size(); ++m) {
      const double actual = op.value(n, m);
      double expected = 0.0;
      if (m >= lo && m < hi && m >= shift)
        expected = op.value(n - shift, m - shift);
      if (std::abs(actual - expected) > tolerance)
        violations.push_back({n, m, actual, expected});
    }
  }
  return violations;
}

std::vector<SelfSimilarityViolation> check_self_similarity(const ProbabilitySequence& probs,
                                                           unsigned level, std::size_t size)
{
  return check_self_similarity(build_truncated(probs, size), probs.base(), level);
}

std::string_view to_string(Recurrence r)
{
  switch (r) {
  case Recurrence::NullRecurrent:
    return "NullRecurrent";
  case Recurrence::Transient:
    return "Transient";
  case Recurrence::NotIrreducible:
    return "NotIrreducible";
  }
  return "?";
}

RecurrenceVerdict classify_recurrence(const ProbabilitySequence& probs, unsigned report_depth)
{
  RecurrenceVerdict v{Recurrence::NullRecurrent, {}, std::nullopt, {}};
  double product = 1.0;
  for (unsigned j = 1; j <= report_depth; ++j) {
    product *= probs(j);
    v.partial_products.push_back(product);
  }

  if (!probs.irreducible()) {
    v.verdict = Recurrence::NotIrreducible;
    v.reason = "p_j = 1 for all but finitely many j";
    return v;
  }

  const auto& tail = probs.tail();
  if (const auto* c = std::get_if<ConstantTail>(&tail)) {
    char value[32];
    std::snprintf(value, sizeof value, "%.15g", c->value);
    v.reason = std::string("constant tail ") + value + " < 1: product vanishes";
  } else if (std::holds_alternative<CycleTail>(tail)) {
    v.reason = "periodic tail with an entry < 1: product vanishes";
  } else if (std::holds_alternative<IidUniformTail>(tail)) {
    v.reason = "iid tail with lo < 1: sum(1 - p_j) diverges almost surely";
  } else {
    const auto& t = std::get<ConvergentDeficitTail>(tail);
    v.verdict = Recurrence::Transient;
    v.reason = "sum(1 - p_j) = sum alpha beta^j converges: product is positive";
    // sum log p_j until the remaining deficit is below double resolution
    double log_sum = 0.0;
    for (std::uint64_t j = 1;; ++j) {
      const double p = probs(j);
      log_sum += std::log(p);
      if (j + probs.offset() > probs.prefix().size() &&
          t.alpha * std::pow(t.beta, double(j + probs.offset())) < 1e-18)
        break;
    }
    v.product_limit = std::exp(log_sum);
    v.verdict = Recurrence::Transient;
    return v;
  }
  v.product_limit = 0.0;
  return v;
}

VisitsAndHitting expected_visits_and_hitting(unsigned n, const ProbabilitySequence& probs)
{
  const double product = prefix_product(probs, std::uint64_t{n} + 1);
  const double visits = 1.0 / product;
  return {visits, std::pow(double(probs.base()), double(n)) * visits};
}

} // namespace amfc
