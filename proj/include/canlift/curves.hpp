#pragma once

#include <vector>

#include "canlift/galois_ring.hpp"
#include "canlift/hensel.hpp"
#include "canlift/poly.hpp"

namespace canlift {

// y^2 = x^3 + ax + b; isogeny machinery requires p >= 5
struct WeierstrassCurve {
    GaloisRing::Elem a, b;
};

// Monic distinguished factor of the reversed p-division polynomial.  Roots
// are the reciprocals of the x-coordinates of the nonzero canonical-subgroup
// points; the constant term has valuation exactly 1 (precision permitting).
// The classical kernel polynomial itself is not integral, so this is the
// integral object the quotient formulas are fed from.
struct KernelPolynomial {
    GrPoly d;
};

GaloisRing::Elem discriminant(const GaloisRing& R, const WeierstrassCurve& E);
// throws ValidationFailed when the discriminant is not a unit
GaloisRing::Elem j_invariant(const GaloisRing& R, const WeierstrassCurve& E);

// a short model with the prescribed j-invariant: y^2 = x^3+1 for j = 0,
// y^2 = x^3+x for j = 1728, else (3c, 2c) with c = j/(1728-j).  Residues at
// 0 or 1728 that are not exactly 0 or 1728 have no such rational family and
// are rejected with UnsupportedResidue.
WeierstrassCurve curve_from_j(const GaloisRing& R, const GaloisRing::Elem& j);

WeierstrassCurve twisted_curve(const GaloisRing& R, const WeierstrassCurve& E,
                               const GaloisRing::Elem& d);   // (d^2 a, d^3 b)

u64 count_points(const GaloisRing& field, const WeierstrassCurve& E);  // K = 1, p >= 3
i64 trace_of_frobenius(const GaloisRing& field, const WeierstrassCurve& E);
bool is_ordinary(const GaloisRing& field, const WeierstrassCurve& E);

// v-normalized division polynomials: psi_m = v_m (m odd), 2y*v_m (m even);
// returns v_0..v_mmax
std::vector<GrPoly> division_poly_list(const GaloisRing& R,
                                       const WeierstrassCurve& E, unsigned mmax);

// throws NotOrdinary when the curve has no canonical subgroup
KernelPolynomial canonical_subgroup_kernel(const GaloisRing& R,
                                           const WeierstrassCurve& E);

// quotient by the canonical subgroup in Velu normalization, at the same
// precision as the input (guard digits are handled internally)
WeierstrassCurve kohel_quotient(const GaloisRing& R, const WeierstrassCurve& E);

}
