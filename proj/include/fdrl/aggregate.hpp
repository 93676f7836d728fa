#pragma once

// Local aggregation of p-values over lattice neighborhoods (the p* field).

#include "fdrl/lattice.hpp"
#include "fdrl/neighborhood.hpp"

namespace fdrl {

enum class FilterKind { median, mean };

// p*(v) = filter({p(v') : v' in N_v}). For an even neighbor count the median
// is the midpoint of the two central order statistics.
Lattice aggregate(const Lattice& p, const NeighborhoodTable& nbrs, FilterKind filter);

}  // namespace fdrl
