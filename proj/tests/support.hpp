// support.hpp — shared generators for tests (seeded, deterministic)

#pragma once

#include "lindlab/dynamics.hpp"
#include "lindlab/model.hpp"

namespace lindlab::testing {

inline Matrix random_complex(int n, std::uint64_t seed, std::uint64_t stream = 0) {
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            m(r, c) = Complex(num::gaussian(seed, stream, 2 * (r * n + c)),
                              num::gaussian(seed, stream, 2 * (r * n + c) + 1));
        }
    }
    return m;
}

inline Matrix random_hermitian(int n, std::uint64_t seed, std::uint64_t stream = 0) {
    const Matrix m = random_complex(n, seed, stream);
    return 0.5 * (m + m.adjoint());
}

inline Matrix random_psd(int n, std::uint64_t seed, std::uint64_t stream = 0) {
    const Matrix m = random_complex(n, seed, stream);
    return m * m.adjoint() / static_cast<double>(n);
}

// A = -iH - P, maximally dissipative by construction
inline Matrix random_dissipative(int n, std::uint64_t seed) {
    return Complex(0.0, -1.0) * random_hermitian(n, seed, 0) - random_psd(n, seed, 1);
}

inline RealVector random_potential(int n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    RealVector v(n);
    for (int i = 0; i < n; ++i) v(i) = lo + (hi - lo) * num::uniform01(seed, 0, i);
    return v;
}

inline Matrix random_pure_state(int n, std::uint64_t seed) {
    Vector psi(n);
    for (int i = 0; i < n; ++i) {
        psi(i) = Complex(num::gaussian(seed, 9, 2 * i), num::gaussian(seed, 9, 2 * i + 1));
    }
    return DensityMatrix::from_vector(psi).rho;
}

}  // namespace lindlab::testing
