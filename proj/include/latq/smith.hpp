// smith.hpp — exact integer matrix normal forms: Smith form with transforms,
// integer kernels, column-span bases and saturation. The workhorse behind
// discriminant groups, finite-subgroup structure and invariant sublattices.
#pragma once

#include "latq/matrix.hpp"

#include <optional>
#include <vector>

namespace latq {

// u * m * v = d with u, v unimodular; d diagonal, nonnegative, d1 | d2 | ...
// uinv is maintained alongside u (uinv * u = I).
struct SmithResult {
    MatZ d;
    MatZ u, uinv;
    MatZ v;
    int rank = 0;
};

SmithResult smith_form(const MatZ& m);

// Basis of { x in Z^cols : m x = 0 } as matrix columns. Always saturated.
MatZ kernel_basis(const MatZ& m);

// Basis (as columns) of the column-span lattice of m.
MatZ column_span_basis(const MatZ& m);

// Basis (as columns) of the saturation of the column span:
// (span_Q(columns) ∩ Z^rows).
MatZ saturation(const MatZ& m);

// One solution x of m x = b over Z, if any.
std::optional<VecZ> solve(const MatZ& m, const VecZ& b);

}  // namespace latq
