#pragma once

#include <vector>

namespace bdkit {

struct TridiagonalEigen {
  std::vector<double> values;            ///< ascending
  std::vector<double> first_components;  ///< first entry of each unit eigenvector
};

/// Eigenvalues of the symmetric tridiagonal matrix with the given diagonal
/// and off-diagonal (off.size() == diag.size() - 1), plus the first row of
/// the eigenvector matrix. Implicit QL with Wilkinson shifts. Throws
/// EigenNonconvergence.
TridiagonalEigen tridiagonal_eigen(std::vector<double> diag, std::vector<double> off);

}  // namespace bdkit
