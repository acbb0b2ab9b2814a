#pragma once

#include <cmath>

#include "dgsplat/types.hpp"

namespace dgs {

// NeRF-style positional encoding with 10 frequency octaves. The raw
// coordinate is prepended, giving 3 + 3*2*10 = 63 output dimensions.
inline constexpr int kPosEncFreqs = 10;
inline constexpr int kPosEncDim = 3 + 3 * 2 * kPosEncFreqs;

using PosEncoding = Eigen::Matrix<double, kPosEncDim, 1>;

// Layout: [x, y, z, then per octave l: sin(2^l pi x..z), cos(2^l pi x..z)].
inline PosEncoding positional_encoding(const Vec3& x) {
    PosEncoding out;
    out.segment<3>(0) = x;
    double freq = M_PI;
    for (int l = 0; l < kPosEncFreqs; ++l) {
        const int base = 3 + 6 * l;
        for (int c = 0; c < 3; ++c) {
            out[base + c] = std::sin(freq * x[c]);
            out[base + 3 + c] = std::cos(freq * x[c]);
        }
        freq *= 2.0;
    }
    return out;
}

inline Vec3 positional_encoding_backward(const Vec3& x, const PosEncoding& dL_dgamma) {
    Vec3 g = dL_dgamma.segment<3>(0);
    double freq = M_PI;
    for (int l = 0; l < kPosEncFreqs; ++l) {
        const int base = 3 + 6 * l;
        for (int c = 0; c < 3; ++c) {
            const double a = freq * x[c];
            g[c] += freq * (std::cos(a) * dL_dgamma[base + c] - std::sin(a) * dL_dgamma[base + 3 + c]);
        }
        freq *= 2.0;
    }
    return g;
}

}  // namespace dgs
