#include "bdkit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bdkit/errors.hpp"
#include "bdkit/tridiagonal_eigen.hpp"

namespace bdkit {

namespace {

constexpr double kMergeRelative = 1e-12;
constexpr double kZeroClamp = 1e-10;
constexpr double kZeroAtomDrop = 1e-14;

}  // namespace

DiscreteMeasure DiscreteMeasure::build(std::vector<Atom> atoms, bool normalize) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.x) || !std::isfinite(a.w) || a.x < 0.0 || a.w < 0.0) {
      throw InvalidArgument("atoms need finite nonnegative location and weight");
    }
  }
  std::erase_if(atoms, [](const Atom& a) { return a.w == 0.0; });
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.x < r.x; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!merged.empty()) {
      Atom& last = merged.back();
      if (a.x - last.x <= kMergeRelative * std::max(std::abs(a.x), std::abs(last.x))) {
        const double w = last.w + a.w;
        // Keep 0 exact so atom-at-zero detection is unaffected by merging.
        last.x = last.x == 0.0 ? 0.0 : (last.x * last.w + a.x * a.w) / w;
        last.w = w;
        continue;
      }
    }
    merged.push_back(a);
  }
  if (normalize) {
    double total = 0.0;
    for (const Atom& a : merged) total += a.w;
    if (!(total > 0.0)) throw InvalidArgument("measure has zero total mass");
    for (Atom& a : merged) a.w /= total;
  }
  return DiscreteMeasure(std::move(merged));
}

DiscreteMeasure DiscreteMeasure::normalized(std::vector<Atom> atoms) {
  return build(std::move(atoms), true);
}

DiscreteMeasure DiscreteMeasure::unnormalized(std::vector<Atom> atoms) {
  return build(std::move(atoms), false);
}

double DiscreteMeasure::mass() const noexcept {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.w;
  return total;
}

double DiscreteMeasure::mass_at_zero() const noexcept {
  return !atoms_.empty() && atoms_.front().x == 0.0 ? atoms_.front().w : 0.0;
}

double moment(const DiscreteMeasure& m, int k) {
  if (k < 0 && m.has_atom_at_zero()) throw NegativeMomentWithAtomAtZero();
  double total = 0.0;
  for (const Atom& a : m.atoms()) total += a.w * std::pow(a.x, k);
  return total;
}

DiscreteMeasure transform_phi0(const DiscreteMeasure& psi) {
  if (psi.has_atom_at_zero()) throw AtomAtZero();
  const double m = moment(psi, -1);
  std::vector<Atom> atoms;
  atoms.reserve(psi.size());
  for (const Atom& a : psi.atoms()) atoms.push_back({a.x, a.w / (a.x * m)});
  return DiscreteMeasure::normalized(std::move(atoms));
}

DiscreteMeasure transform_phia(const DiscreteMeasure& psi, double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw InvalidArgument("a must be finite and nonnegative");
  }
  const DiscreteMeasure phi0 = transform_phi0(psi);
  std::vector<Atom> atoms;
  atoms.reserve(phi0.size() + 1);
  if (a > 0.0) atoms.push_back({0.0, a / (a + 1.0)});
  for (const Atom& atom : phi0.atoms()) atoms.push_back({atom.x, atom.w / (a + 1.0)});
  return DiscreteMeasure::normalized(std::move(atoms));
}

DiscreteMeasure dual_measure(const DiscreteMeasure& psi, double mu0) {
  if (!(mu0 > 0.0) || !std::isfinite(mu0)) {
    throw InvalidArgument("dual_measure needs mu0 > 0");
  }
  if (psi.has_atom_at_zero()) throw AtomAtZero();
  const double m = moment(psi, -1);
  const double product = mu0 * m;
  if (product > 1.0 + 1e-12) {
    throw Mu0ExceedsBound("mu0 m_{-1} = " + std::to_string(product) + " exceeds 1");
  }
  std::vector<Atom> atoms;
  atoms.reserve(psi.size() + 1);
  const double at_zero = 1.0 - product;
  if (at_zero > kZeroAtomDrop) atoms.push_back({0.0, at_zero});
  for (const Atom& a : psi.atoms()) atoms.push_back({a.x, mu0 * a.w / a.x});
  return DiscreteMeasure::normalized(std::move(atoms));
}

InverseTransform inverse_transform(const DiscreteMeasure& phi) {
  const double total = phi.mass();
  const double zero = phi.mass_at_zero() / total;
  std::vector<Atom> atoms;
  atoms.reserve(phi.size());
  for (const Atom& a : phi.atoms()) {
    if (a.x > 0.0) atoms.push_back({a.x, a.x * a.w});
  }
  if (atoms.empty()) throw AllMassAtZero();
  return {DiscreteMeasure::normalized(std::move(atoms)), zero / (1.0 - zero)};
}

DiscreteMeasure spectral_approx(const RecurrenceCoefficients& coeffs, std::size_t n) {
  if (n == 0) throw InvalidArgument("spectral_approx needs depth >= 1");
  if (coeffs.size() < n || coeffs.d_last() < n) {
    throw InsufficientCoefficients("spectral_approx of depth " + std::to_string(n) +
                                   " needs c_1..c_N and d_2..d_N");
  }
  std::vector<double> diag(coeffs.c_values().begin(), coeffs.c_values().begin() + n);
  std::vector<double> off(n - 1);
  double scale = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) off[k] = std::sqrt(coeffs.d_values()[k]);
  for (std::size_t k = 0; k < n; ++k) {
    scale = std::max(scale, diag[k] + (k > 0 ? off[k - 1] : 0.0) + (k + 1 < n ? off[k] : 0.0));
  }
  const TridiagonalEigen eig = tridiagonal_eigen(std::move(diag), std::move(off));
  // Rounding in the eigensolver is relative to the matrix norm.
  const double negative_limit =
      std::max(kZeroClamp, 64.0 * std::numeric_limits<double>::epsilon() * scale);
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double x = eig.values[k];
    if (x < -negative_limit) {
      throw RangeError("Jacobi matrix has a negative eigenvalue " + std::to_string(x));
    }
    if (x <= kZeroClamp) x = 0.0;
    const double v = eig.first_components[k];
    atoms.push_back({x, v * v});
  }
  return DiscreteMeasure::normalized(std::move(atoms));
}

std::string_view to_string(SpectrumFlag flag) {
  switch (flag) {
    case SpectrumFlag::DiscreteToDepth: return "discrete-to-depth";
    case SpectrumFlag::AccumulationSuspected: return "accumulation-suspected";
  }
  return "unknown";
}

SpectralEstimate xi_estimates(const RecurrenceCoefficients& coeffs, std::size_t count,
                              std::size_t n) {
  if (count == 0 || count > n / 4) {
    throw InvalidArgument("xi_estimates needs 1 <= count <= N/4");
  }
  // Locations carry their own atoms; merged duplicates are not expected at
  // the bottom of a Jacobi spectrum.
  const DiscreteMeasure coarse = spectral_approx(coeffs, n);
  const DiscreteMeasure fine = spectral_approx(coeffs, 2 * n);
  SpectralEstimate out;
  out.depth = n;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = fine.atoms()[k].x;
    const double y = coarse.atoms()[k].x;
    out.xi.push_back(x);
    out.coarse.push_back(y);
    out.converged.push_back(std::abs(x - y) <= 1e-6 * std::max(1.0, std::abs(x)));
  }
  bool any_unconverged = false;
  for (bool c : out.converged) any_unconverged = any_unconverged || !c;
  bool shrinking = count >= 3;
  for (std::size_t k = 2; k < count && shrinking; ++k) {
    const double previous = out.xi[k - 1] - out.xi[k - 2];
    const double current = out.xi[k] - out.xi[k - 1];
    shrinking = current < previous * (1.0 - 1e-3);
  }
  out.flag = any_unconverged || shrinking ? SpectrumFlag::AccumulationSuspected
                                          : SpectrumFlag::DiscreteToDepth;
  return out;
}

}  // namespace bdkit
