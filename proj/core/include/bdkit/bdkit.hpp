#pragma once

#include "bdkit/chains.hpp"
#include "bdkit/errors.hpp"
#include "bdkit/measures.hpp"
#include "bdkit/polynomials.hpp"
#include "bdkit/process.hpp"
#include "bdkit/rates.hpp"
#include "bdkit/series.hpp"
#include "bdkit/tridiagonal_eigen.hpp"
