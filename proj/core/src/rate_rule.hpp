#pragma once

#include <cstddef>

#include "bdkit/rates.hpp"

namespace bdkit::detail {

// Total rule n -> (lambda_n, mu_n). mu is only queried for n >= 1.
class RateRule {
 public:
  virtual ~RateRule() = default;
  virtual double lambda(std::size_t n) const = 0;
  virtual double mu(std::size_t n) const = 0;
  virtual RateSetKind kind() const noexcept = 0;
  virtual const FamilySpec* family() const noexcept { return nullptr; }
  virtual const RateTable* table() const noexcept { return nullptr; }
  virtual const RateSet* dual_of() const noexcept { return nullptr; }
};

}  // namespace bdkit::detail
