#pragma once

#include "vsw/fuzz.hpp"

namespace testing_support {

inline vsw::PrimitiveState<double> random_state(std::mt19937_64& rng) { return vsw::random_admissible_state(rng); }

}  // namespace testing_support
