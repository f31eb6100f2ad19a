#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "bdkit/rates.hpp"

namespace bdkit {

struct Atom {
  double x = 0.0;
  double w = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely supported measure on [0, inf): strictly increasing locations,
/// positive weights.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  /// Sorts, merges locations closer than 1e-12 relative, drops zero weights
  /// and scales to mass 1. Throws InvalidArgument for negative or
  /// non-finite entries and for zero total mass.
  static DiscreteMeasure normalized(std::vector<Atom> atoms);

  /// Same cleanup without rescaling.
  static DiscreteMeasure unnormalized(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double mass() const noexcept;
  /// Weight of the atom at exactly 0 (0 when absent).
  double mass_at_zero() const noexcept;
  bool has_atom_at_zero() const noexcept { return mass_at_zero() > 0.0; }

 private:
  explicit DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
  static DiscreteMeasure build(std::vector<Atom> atoms, bool normalize);

  std::vector<Atom> atoms_;
};

/// sum w_k x_k^k. Throws NegativeMomentWithAtomAtZero for k < 0 when the
/// measure has an atom at 0.
double moment(const DiscreteMeasure& m, int k);

/// Atom x_k reweighted to w_k/(x_k m_{-1}). Throws AtomAtZero.
DiscreteMeasure transform_phi0(const DiscreteMeasure& psi);

/// (a delta_0 + phi0)/(a + 1).
DiscreteMeasure transform_phia(const DiscreteMeasure& psi, double a);

/// Atom 1 - mu0 m_{-1} at 0 (dropped below 1e-14) plus mu0 w_k/x_k at x_k.
/// Throws Mu0ExceedsBound when mu0 m_{-1} > 1 and AtomAtZero.
DiscreteMeasure dual_measure(const DiscreteMeasure& psi, double mu0);

struct InverseTransform {
  DiscreteMeasure psi;
  double a = 0.0;
};

/// a = phi({0})/(1 - phi({0})); the remaining atoms reweighted by x_k w_k.
/// Throws AllMassAtZero.
InverseTransform inverse_transform(const DiscreteMeasure& phi);

/// Gauss quadrature of depth N from the Jacobi matrix with diagonal
/// c_1..c_N and off-diagonal sqrt(d_2..d_N). Locations within 1e-10 of 0
/// become exactly 0.
DiscreteMeasure spectral_approx(const RecurrenceCoefficients& coeffs, std::size_t n);

enum class SpectrumFlag { DiscreteToDepth, AccumulationSuspected };

std::string_view to_string(SpectrumFlag flag);

struct SpectralEstimate {
  std::vector<double> xi;        ///< lowest locations at depth 2N
  std::vector<double> coarse;    ///< the same locations at depth N
  std::vector<bool> converged;   ///< |xi - coarse| <= 1e-6 max(1, xi)
  SpectrumFlag flag = SpectrumFlag::DiscreteToDepth;
  std::size_t depth = 0;         ///< N
};

/// Lowest `count` spectral points compared across depths N and 2N; needs
/// coefficients through 2N and count <= N/4.
SpectralEstimate xi_estimates(const RecurrenceCoefficients& coeffs, std::size_t count,
                              std::size_t n);

}  // namespace bdkit
