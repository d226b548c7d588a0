#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dualwin/matrix.hpp"

namespace dualwin {

struct Assignment {
    std::vector<std::size_t> column_for_row;
    double total_cost = 0.0;
};

/// Minimum-cost perfect matching of a square cost matrix (Kuhn-Munkres with
/// potentials, O(n^3)).
Assignment solve_assignment(const Matrix<double>& cost);

/// A (range, velocity) point; squared distances mix m^2 and (m/s)^2.
struct RangeVelocity {
    double range_m = 0.0;
    double velocity_mps = 0.0;
};

inline double squared_distance(const RangeVelocity& a, const RangeVelocity& b) noexcept {
    const double dr = a.range_m - b.range_m;
    const double dv = a.velocity_mps - b.velocity_mps;
    return dr * dr + dv * dv;
}

/// pairing[i] is the index in b matched to a[i], minimizing the summed
/// squared distance. Throws Error(invalid_argument) on unequal lengths.
std::vector<std::size_t> assign_pairs(std::span<const RangeVelocity> a, std::span<const RangeVelocity> b);

}  // namespace dualwin
