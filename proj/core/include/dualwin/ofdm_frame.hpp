#pragma once

#include <cstdint>
#include <vector>

#include "dualwin/matrix.hpp"
#include "dualwin/ofdm_config.hpp"

namespace dualwin {

/// Gray-mapped square QAM constellation with unit mean power. Entry i is the
/// point carrying symbol index i.
std::vector<cdouble> qam_alphabet(int mod_order);

/// Transmitted N x M frame of independently, uniformly drawn alphabet points.
/// Rows are subcarriers, columns OFDM symbols.
ComplexFrame generate_frame(const OfdmConfig& config, std::uint64_t seed);

}  // namespace dualwin
