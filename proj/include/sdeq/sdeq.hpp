#pragma once

#include "sdeq/clifford.hpp"
#include "sdeq/errors.hpp"
#include "sdeq/field_io.hpp"
#include "sdeq/grid.hpp"
#include "sdeq/landau.hpp"
#include "sdeq/metric.hpp"
#include "sdeq/operator.hpp"
#include "sdeq/parser.hpp"
#include "sdeq/poincare.hpp"
#include "sdeq/polynomial.hpp"
#include "sdeq/rational.hpp"
#include "sdeq/specfun.hpp"
#include "sdeq/spectral.hpp"
#include "sdeq/star.hpp"
#include "sdeq/symplectic.hpp"

namespace sdeq {

#ifdef SDEQ_VERSION
inline constexpr const char* kVersion = SDEQ_VERSION;
#else
inline constexpr const char* kVersion = "0.1.0";
#endif

}  // namespace sdeq
