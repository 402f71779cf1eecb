#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hklab {

using Complex = std::complex<double>;

/// Truncated coefficient sequence c_1..c_N of a formal series sum c_n e_n.
/// Entry i of the vector holds c_{i+1}. The sequence is understood to
/// continue with c_n = 0 for n > N, and c_n = 0 for n <= 0 wherever a
/// backward index appears.
using CoeffVec = std::vector<Complex>;

using RealVec = std::vector<double>;

} // namespace hklab
