#pragma once

#include "amfc/numeric.hpp"
#include "amfc/probability_sequence.hpp"
#include "amfc/transition_matrix.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace amfc {

/// Modulus above 1 at which an orbit is declared escaped.
inline constexpr double kEscapeTolerance = 1e-12;

inline constexpr unsigned kMembershipBudget = 64;
inline constexpr unsigned kRenderBudget = 256;

/// The affine maps h_j and the fibered maps f_j, g_j of a parameter sequence.
///
///   h_j(z) = (z - 1) / p_j + 1      (h_j(1) = 1 exactly)
///   f_j(z) = h_j(z)^d
///   g_j(y) = h_j(y^d)
///
/// so that g_{j+1} = h_{j+1} o f_j o h_j^{-1}.
class FiberedMaps {
public:
  explicit FiberedMaps(ProbabilitySequence probs) : probs_(std::move(probs)) {}

  const ProbabilitySequence& probs() const noexcept { return probs_; }
  unsigned degree() const noexcept { return probs_.base(); }

  Complex h(std::uint64_t j, Complex z) const { return (z - 1.0) / probs_(j) + 1.0; }
  Complex h_inverse(std::uint64_t j, Complex w) const { return (w - 1.0) * probs_(j) + 1.0; }
  Complex f(std::uint64_t j, Complex z) const { return ipow(h(j, z), degree()); }
  Complex g(std::uint64_t j, Complex y) const { return h(j, ipow(y, degree())); }

  double h(std::uint64_t j, double x) const { return (x - 1.0) / probs_(j) + 1.0; }
  double g(std::uint64_t j, double y) const { return h(j, ipow(y, degree())); }

private:
  ProbabilitySequence probs_;
};

enum class OrbitStatus { Bounded, Escaped };

std::string_view to_string(OrbitStatus s);

/// Outcome of the fibered iteration w_j = f_j(w_{j-1}), w_0 = z.
///
/// Escaped at level 0 means |h_1(z)| > 1 + tolerance, i.e. z lies outside the
/// disk D(1 - p_1, p_1) that contains E. Escaped at level j >= 1 means
/// |w_j| > 1 + tolerance, after which the moduli grow at least like a d-th power.
struct EscapeResult {
  OrbitStatus status = OrbitStatus::Bounded;
  unsigned level = 0;   // escape level, or levels run when bounded
  double modulus = 0.0; // |h_1(z)| at level 0, |w_level| otherwise
  std::vector<double> trace; // |w_1|, |w_2|, ... when requested

  bool escaped() const noexcept { return status == OrbitStatus::Escaped; }
};

struct IterateOptions {
  bool keep_trace = false;
  /// Extra levels traced after an escape, bounded by the budget and by
  /// overflow. Used to check the super-exponential growth.
  unsigned trace_after_escape = 0;
  double tolerance = kEscapeTolerance;
};

EscapeResult iterate_f(Complex z, const ProbabilitySequence& probs,
                       unsigned max_levels = kMembershipBudget, const IterateOptions& options = {});

/// Classification through the eigenvector ratios q_lambda(r) = h_r(w_{r-1}).
struct QMembership {
  bool inside = true;
  unsigned level = 0; // first r with |q(r)| > 1 + tolerance, 0 when inside
  std::vector<Complex> q;
};

QMembership membership_via_q(Complex lambda, const ProbabilitySequence& probs,
                             unsigned max_levels = kMembershipBudget,
                             double tolerance = kEscapeTolerance);

/// True when two classifications of the same point contradict each other.
/// An escape reported at the last budget level of either side is not a
/// decision the other side could have reached, so it never conflicts.
bool contradicts(const EscapeResult& by_f, const QMembership& by_q, unsigned q_budget);

inline constexpr double kEigenvectorOverflow = 1e12;

/// v_n = v_0 * prod_r q_lambda(r)^{a_r(n)} for n < size.
struct EigenvectorSlice {
  Complex lambda;
  std::vector<Complex> v;
  std::vector<Complex> q; // q(1) .. q(R), R = number of base-d digits of size - 1
  bool inside = false;    // membership_via_q at the default budget
  bool overflow = false;  // some |v_n| > kEigenvectorOverflow
};

EigenvectorSlice eigenvector(Complex lambda, const ProbabilitySequence& probs, std::size_t size,
                             Complex v0 = 1.0);

/// max |(S v)_n - lambda v_n| over rows n with n + 1 < op.size().
double eigen_residual(const EigenvectorSlice& slice, const SparseTruncatedOperator& op);

/// Orbit of z under (p_1, p_2, ...) against the orbit of f_1(z) under
/// (p_2, p_3, ...): the second is the first shifted by one level.
bool spectral_mapping_check(Complex z, const ProbabilitySequence& probs,
                            unsigned levels = kMembershipBudget);

} // namespace amfc
