#ifndef SPARSE_RIPS_SPARSE_RIPS_HPP
#define SPARSE_RIPS_SPARSE_RIPS_HPP

#include "sparse_rips/compare.hpp"
#include "sparse_rips/error.hpp"
#include "sparse_rips/filtration.hpp"
#include "sparse_rips/generators.hpp"
#include "sparse_rips/greedy.hpp"
#include "sparse_rips/metric.hpp"
#include "sparse_rips/persistence.hpp"
#include "sparse_rips/relaxed.hpp"
#include "sparse_rips/verify.hpp"

#endif  // SPARSE_RIPS_SPARSE_RIPS_HPP
