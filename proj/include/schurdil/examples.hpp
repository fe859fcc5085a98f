#pragma once

#include <cstdint>
#include <string_view>

#include "schurdil/trace_representation.hpp"

namespace schurdil {

/// N = C, d = (1, omega). Induces [[1, omega], [conj(omega), 1]].
TraceRepresentation omega_representation(Complex omega);

/// n copies of the unit of C. Induces the all-ones table.
TraceRepresentation allones_representation(int n);

/// N = C^n with uniform weights, d_i = diag(w^(i*0), ..., w^(i*(n-1))),
/// w = exp(2 pi i / n). Induces the identity table.
TraceRepresentation identity_fourier_representation(int n);

/// N = M_2 with weight 1/2, d = (I, Pauli X). Induces I_2.
TraceRepresentation pauli_representation();

/// d_1 = 1 and Haar-random unitaries in every block for d_2..d_n.
TraceRepresentation planted_representation(int n, const TracialAlgebra& algebra,
                                           std::uint64_t seed);

/// Parses "i", "-0.5+0.25i", "1e-3-2i", "3". Throws ValidationError.
Complex parse_complex(std::string_view text);

}  // namespace schurdil
