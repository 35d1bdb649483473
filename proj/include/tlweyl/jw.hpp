#pragma once

// Jones-Wenzl idempotents, ballot paths, unnormalized path vectors, Gram
// factors, matrix units and central idempotents.
//
// Paths p = (p_1, ..., p_n) have p_1 = 1, steps +-1, entries >= 0, with an
// implicit p_0 = 0.  Path vectors are stored unnormalized (no square roots):
// u_p is built with coefficient 1 on every descending cup.  With the Gram
// factor g_p = prod over descents of [p_k]/[p_k+1] (the square of the
// orthonormal normalization), the pairing satisfies
//   u_p o reflect(u_r) = delta_{p,r} g_p^{-1} f^(p_n),
// so the matrix units are e_{p,r} = g_r * reflect(u_p) o u_r.

#include "tlweyl/tl.hpp"

#include <vector>

namespace tlweyl {

using Path = std::vector<int>;

/// Jones-Wenzl idempotent f^(n) (cached).
const TLElement &jones_wenzl(int n);

/// All ballot paths of length n ending at m (empty when impossible).
std::vector<Path> enumerate_paths(int n, int m);
/// All ballot paths of length n.
std::vector<Path> enumerate_all_paths(int n);
/// |P^n_m|.
long path_count(int n, int m);

bool path_is_valid(const Path &p);

/// The unnormalized path vector u_p : n -> p_n.
TLElement path_vector(const Path &p);

/// g_p = product of [p_k]/[p_k+1] over descending steps k.
RatFun gram_factor(const Path &p);

/// e_{p,r} = g_r * reflect(u_p) o u_r  (p_n = r_n required).
TLElement matrix_unit(const Path &p, const Path &r);

/// z^n_m = sum_{p in P^n_m} e_{p,p}; the zero element when P^n_m is empty.
TLElement central_idempotent(int n, int m);

/// Coefficient of the identity diagram (equals a when x = a * f^(m)).
RatFun id_coeff(const TLElement &x);

/// The coefficient c_r of the coevaluation (left cup) formula, for r of
/// length n >= 1.  Two natural readings of the normalization count exist:
/// variant A uses |P^n_{r_{n-1}}|, variant B uses |P^{n-1}_{r_{n-1}}|.
/// The verification suite pins the correct one via the zigzag relations.
RatFun c_coeff(const Path &r, bool variant_a = false);

} // namespace tlweyl
