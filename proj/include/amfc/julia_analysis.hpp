#pragma once

#include "amfc/numeric.hpp"
#include "amfc/probability_sequence.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amfc {

/// Root in (0, 1) of d x^{d-1} + (d - 1) x^d - 1 and the connectedness
/// threshold vartheta_d = d theta_d^{d-1}, for odd d >= 3.
struct ThetaPair {
  double theta;
  double vartheta;
};

ThetaPair theta_d(unsigned d);

/// Threshold below which p_j can disconnect E: 1/2 for even d, vartheta_d
/// for odd d.
double connectedness_threshold(unsigned d);

/// Comparisons against the threshold allow this much rounding in the
/// computed vartheta_d.
inline constexpr double kThresholdSlack = 1e-12;

enum class CriticalStatus { Escaped, ProvenBounded, Undecided };

std::string_view to_string(CriticalStatus s);

/// Orbit of the critical value at level k: y = 0 at index k - 1, then
/// y <- g_{k+1}(y), g_{k+2}(y), ... Level 1 is the critical point 1 - p_1 of
/// E; level k is a point z with f~_{k-1}(z) = 1 - p_k.
struct CriticalOrbitReport {
  unsigned level = 1;
  CriticalStatus status = CriticalStatus::Undecided;
  /// Index j of the last map g_j applied (escape or proof point).
  std::uint64_t last_index = 0;
  std::vector<double> trace; // y after each map
};

/// Iterates until |y| > 1 + tolerance (Escaped), until y sits in an interval
/// that every remaining g_j maps into itself (ProvenBounded), or until the
/// budget of maps is spent (Undecided).
CriticalOrbitReport critical_orbit(const ProbabilitySequence& probs, unsigned level,
                                   unsigned budget = 4096);

enum class Connectedness { Connected, ComponentsExactly, ComponentsAtLeast, InfinitelyMany, Cantor };

std::string_view to_string(Connectedness c);

struct ConnectednessVerdict {
  Connectedness kind = Connectedness::Connected;
  /// Number of components for ComponentsExactly / ComponentsAtLeast (a power
  /// of d); 1 for Connected; 0 otherwise.
  std::uint64_t count = 1;
  std::vector<CriticalOrbitReport> evidence;
  std::string rule;
  bool undecided = false;

  /// "Connected", "ComponentsExactly(9)", ...
  std::string label() const;
};

ConnectednessVerdict classify_connectedness(const ProbabilitySequence& probs,
                                            unsigned budget = 4096);

/// Conjugacy of (p, z) -> (tau p, z^d / p_1 - (1 - p_1)/p_1) to the monic
/// family (p, x) -> (tau p, x^d + c(p)) via x = lambda(p) z.
struct FiberedConjugacy {
  double lambda_p = 1.0;
  /// c(tau^k p) for k = 0 .. shifts.
  std::vector<double> c_values;
  /// Bound on |log lambda(p) - log of the truncated product|.
  double truncation_bound = 0.0;
  std::uint64_t terms = 0;
};

/// lambda(p) = prod_{i >= 1} (1/p_i)^{1/d^i}, truncated once the remaining
/// log-mass is below tol. Also reports the number of terms and the bound.
double conjugacy_lambda(const ProbabilitySequence& probs, double tol = 1e-15,
                        std::uint64_t* terms = nullptr, double* bound = nullptr);

/// c(p) = -((1 - p_1)/p_1) lambda(tau p).
double conjugacy_c(const ProbabilitySequence& probs, double tol = 1e-15);

FiberedConjugacy conjugacy(const ProbabilitySequence& probs, unsigned shifts = 16,
                           double tol = 1e-15);

enum class Quasicircle { GuaranteedQuasicircle, CriterionFails };

std::string_view to_string(Quasicircle q);

struct QuasicircleReport {
  Quasicircle verdict = Quasicircle::CriterionFails;
  double sup_c = 0.0;      // max over the computed shifts k = 1 .. shifts
  double tail_bound = 0.0; // bound on |c(tau^k p)| for k > shifts
  double limit = 0.0;      // (1/2)^{d/(d-1)}
  std::string rule;
};

/// sup_{k >= 1} |c(tau^k p)| < (1/2)^{d/(d-1)}, the fibers of K_{tau p}.
QuasicircleReport quasicircle_check(const ProbabilitySequence& probs, unsigned shifts = 64);

/// Root in (0, 1) of (1/rho - 1)(1/rho)^{1/(d-1)} = (1/2)^{d/(d-1)}.
double rho_d(unsigned d);

/// 2 (sqrt 2 - 1): the uniform threshold for every d.
inline constexpr double kQuasicircleRho = 0.82842712474619009760;

inline constexpr double kGreenRadius = 1e8;

/// The monic family over the orbit p, tau p, tau^2 p, ... with c(tau^k p)
/// precomputed for k < depth.
class MonicFamily {
public:
  MonicFamily(const ProbabilitySequence& probs, unsigned depth);

  unsigned degree() const noexcept { return degree_; }
  unsigned depth() const noexcept { return static_cast<unsigned>(c_.size()); }
  double c(unsigned k) const { return c_.at(k); }

  /// P^k step: x^d + c(tau^k p).
  Complex step(unsigned k, Complex x) const { return ipow(x, degree_) + c_[k]; }

  /// Green function at x in the fiber over tau^start p, iterating at most
  /// depth - start steps.
  double green(Complex x, unsigned start = 0) const;

private:
  unsigned degree_;
  std::vector<double> c_;
};

/// G_p(x) = lim d^{-n} log+ |P_p^n(x)| for the monic family over p. Returns
/// d^{-n} log |x_n| at the first n with |x_n| > kGreenRadius, 0 if the orbit
/// stays below it for n_max steps.
double green_function(Complex x, const ProbabilitySequence& probs, unsigned n_max = 256);

/// One step of the monic family: x^d + c(p).
Complex monic_step(Complex x, const ProbabilitySequence& probs);

/// Point of the monic fiber over tau p corresponding to z in E:
/// x = lambda(tau p) h_1(z).
Complex to_monic_coordinates(Complex z, const ProbabilitySequence& probs);

/// G in E-coordinates: green_function(to_monic_coordinates(z), tau p).
double green_at(Complex z, const ProbabilitySequence& probs, unsigned n_max = 256);

} // namespace amfc
