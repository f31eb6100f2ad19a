#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdkit/series.hpp"

namespace bdkit {

enum class TailRule { RepeatLast, AffineExtrapolate };
enum class RateSetKind { Family, Table, Dual };

std::string_view to_string(TailRule tail);
std::string_view to_string(RateSetKind kind);

using FamilyParams = std::map<std::string, double>;

struct FamilySpec {
  std::string name;
  FamilyParams params;  // excludes mu0
};

/// Explicit prefix of rates. mu[0] is a placeholder superseded by mu0.
struct RateTable {
  std::vector<double> lambda;
  std::vector<double> mu;
  TailRule tail = TailRule::RepeatLast;
};

namespace detail {
class RateRule;
}

/// Birth rates lambda_n (n >= 0) and death rates mu_n (n >= 1) plus the
/// killing rate mu_0 >= 0. Immutable; copies share the underlying rule.
class RateSet {
 public:
  static RateSet from_table(RateTable table, double mu0);

  double mu0() const noexcept { return mu0_; }
  double lambda(std::size_t n) const;
  /// mu(0) == mu0().
  double mu(std::size_t n) const;

  /// lambda_0..lambda_{count-1}
  std::vector<double> lambda_prefix(std::size_t count) const;
  /// mu_0..mu_{count-1}
  std::vector<double> mu_prefix(std::size_t count) const;

  RateSetKind kind() const noexcept;
  /// Set when kind() == Family.
  const FamilySpec* family() const noexcept;
  /// Set when kind() == Table.
  const RateTable* table() const noexcept;
  /// Set when kind() == Dual: the rate set this one is the dual of.
  const RateSet* dual_of() const noexcept;

  RateSet(std::shared_ptr<const detail::RateRule> rule, double mu0);

 private:
  std::shared_ptr<const detail::RateRule> rule_;
  double mu0_;
};

/// Monic Jacobi parameters: c_1, c_2, ... and d_2, d_3, ...
class RecurrenceCoefficients {
 public:
  RecurrenceCoefficients() = default;
  /// c[k] holds c_{k+1}, d[k] holds d_{k+2}. Entries must be positive.
  RecurrenceCoefficients(std::vector<double> c, std::vector<double> d);

  /// 1-based: c(1) is the first diagonal coefficient.
  double c(std::size_t n) const;
  /// d(2) is the first off-diagonal coefficient.
  double d(std::size_t n) const;

  std::size_t c_count() const noexcept { return c_.size(); }
  std::size_t d_count() const noexcept { return d_.size(); }
  /// Largest index n with c_n available.
  std::size_t size() const noexcept { return c_.size(); }
  /// Largest index n with d_n available (1 when none).
  std::size_t d_last() const noexcept { return d_.size() + 1; }

  const std::vector<double>& c_values() const noexcept { return c_; }
  const std::vector<double>& d_values() const noexcept { return d_; }

  /// Leading c_1..c_n, d_2..d_{n_d}.
  RecurrenceCoefficients prefix(std::size_t n_c, std::size_t n_d_last) const;

  friend bool operator==(const RecurrenceCoefficients&,
                         const RecurrenceCoefficients&) = default;

 private:
  std::vector<double> c_;
  std::vector<double> d_;
};

struct PiSequence {
  std::vector<double> values;  ///< pi_0..pi_N
};

enum class Uniqueness { Unique, NonUnique, Inconclusive };
enum class UniqueReason { None, SeriesDiverges, Mu0Saturates };
enum class Determinacy { DetS, IndetS, Inconclusive };

std::string_view to_string(Uniqueness u);
std::string_view to_string(UniqueReason r);
std::string_view to_string(Determinacy d);

struct Verdict {
  Uniqueness uniqueness = Uniqueness::Inconclusive;
  UniqueReason reason = UniqueReason::None;
  Determinacy determinacy = Determinacy::Inconclusive;
  SeriesReport pi_series;       ///< sum of pi_n
  SeriesReport inverse_series;  ///< sum of 1/(lambda_n pi_n)
  /// Series of the mu_0 = 0 member of the same coefficient family; only
  /// computed when mu0 > 0.
  std::optional<SeriesReport> representative_series;
  std::optional<double> m_minus_one;
  std::size_t depth = 0;
};

struct ClassifyOptions {
  SeriesOptions series;
};

// --- rate algebra --------------------------------------------------------

/// pi_0 = 1, pi_n = (lambda_0...lambda_{n-1})/(mu_1...mu_n). Throws
/// RangeError when a value is not a normal double.
PiSequence pi_coefficients(const RateSet& rates, std::size_t n);

/// log pi_0..log pi_n; never overflows.
std::vector<double> log_pi_coefficients(const RateSet& rates, std::size_t n);

/// c_1..c_n and d_2..d_n.
RecurrenceCoefficients recurrence_from_rates(const RateSet& rates,
                                             std::size_t n);

/// Forward recursion lambda_0 = c_1 - mu0, mu_n = d_{n+1}/lambda_{n-1},
/// lambda_n = c_{n+1} - mu_n. The result is a table of lambda_0..lambda_{N-1}
/// with a repeat-last tail. Throws PositivityViolation.
RateSet rates_from_recurrence(const RecurrenceCoefficients& coeffs, double mu0);

/// Same coefficients as `rates` but with killing rate mu0, to depth rates
/// lambda_0..lambda_{depth-1}.
RateSet coefficient_family_member(const RateSet& rates, double mu0,
                                  std::size_t depth);

/// lambda^d_n = mu_n, mu^d_{n+1} = lambda_n, mu^d_0 = 0 when mu0 > 0, and the
/// inverse map when mu0 = 0. An involution.
RateSet dual_rates(const RateSet& rates);

/// Monic shell recurrence: c^S_1 = mu_0, c^S_n = mu_{n-1} + lambda_{n-2},
/// d^S_{n+1} = lambda_{n-1} mu_{n-1}. Requires mu0 > 0.
RecurrenceCoefficients shell_coefficients(const RateSet& rates, std::size_t n);

/// sum of 1/(lambda_n pi_n); requires mu0 = 0. `terms` is the initial depth.
SeriesReport m_minus_one(const RateSet& rates, std::size_t terms, double tol,
                         const SeriesOptions& options = {});

/// mu_0 = 1/((a+1) m_{-1}); a may be +infinity.
double mu0_from_a(double a, double m_minus_one);
/// a = 1/(mu_0 m_{-1}) - 1. Throws AtomParameterInfinite for mu0 = 0 and
/// Mu0ExceedsBound for mu0 > 1/m_{-1}.
double a_from_mu0(double mu0, double m_minus_one);

Verdict classify(const RateSet& rates, std::size_t n, double tol,
                 const ClassifyOptions& options = {});

// --- builtin catalog -----------------------------------------------------

struct FamilyInfo {
  std::string name;
  std::vector<std::string> params;
  std::string rule;
};

/// mm1(lambda, mu), mminf(lambda, mu), linear(alpha, beta), quartic().
/// `params` may carry "mu0" (default 0).
RateSet builtin_family(std::string_view name, const FamilyParams& params);

const std::vector<FamilyInfo>& family_catalog();

RateSet mm1(double lambda, double mu, double mu0);
RateSet mminf(double lambda, double mu, double mu0);
RateSet linear(double alpha, double beta, double mu0);
RateSet quartic(double mu0 = 0.0);

}  // namespace bdkit
