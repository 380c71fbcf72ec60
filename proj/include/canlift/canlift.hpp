#pragma once

#include <vector>

#include "canlift/curves.hpp"
#include "canlift/galois_ring.hpp"
#include "canlift/localized.hpp"

namespace canlift {

// Ceiling on the precision of the universal Frobenius lift at the API
// surface: 8 for p <= 7, 4 for p = 13.  Internal guard precisions go
// higher by passing an explicit K_cap; the hard limit is the scalar
// capacity p^K < 2^62.
unsigned psi_precision_cap(u64 p);

// psi(j): the j-invariant of the quotient by the canonical subgroup, as an
// exact function on the ordinary locus mod p^K.  Normal form has no h
// denominator and satisfies psi = j^p mod p and Phi_p(j, psi(j)) = 0 mod p^K.
struct UniversalFrobeniusLift {
    u64 p;
    unsigned K;
    LocalizedElem psi;
    bool fromDisk = false;  // satisfied from the CANLIFT_CACHE directory
};

// Newton against the modular equation on a precision-doubling ladder,
// starting from j^p; the derivative reduces to the squarefree f h mod p, so
// the localized inverse always exists.  Results are validated against the
// defining identities and cached per (p, K): in-process always, on disk as
// psi_<p>_<K>.json when CANLIFT_CACHE is set.  K_cap = 0 selects the
// per-prime default cap.
UniversalFrobeniusLift universal_psi(u64 p, unsigned K, unsigned K_cap = 0);

// a(g) for localized a, g; a must lose its h denominator under
// normalization (NotClearable otherwise).  f has degree 1 for every
// supported p, so the denominator of the result stays a power of f(g).
LocalizedElem localized_compose(const LocalizedContext& ctx,
                                const LocalizedElem& a,
                                const LocalizedElem& g);

// d/dj, with the quotient rule applied to both denominator factors
LocalizedElem localized_derivative(const LocalizedContext& ctx,
                                   const LocalizedElem& a);

// m-fold self-composition psi(psi(...)); m = 0 gives j.  Numerator degree
// grows like deg(psi)^m, so keep m small.
LocalizedElem psi_iterate(const UniversalFrobeniusLift& u, unsigned m);

// j_0 = j, j_1, ..., j_{n-1}: the universal Witt coordinates of the
// canonical lift, every entry emitted at precision K
struct UniversalWittCoords {
    u64 p;
    unsigned K;
    std::vector<LocalizedElem> coords;
    bool fromDisk = false;  // whether the psi underneath came from disk
};

// Ghost inversion at guard precision K + n:
//   p^m j_m = psi^(m)(j) - sum_{i<m} p^i j_i^(p^(m-i)),
// each division by p certified exact (NotDivisible signals a bug)
UniversalWittCoords universal_witt_coords(u64 p, unsigned n, unsigned K,
                                          unsigned n_cap = 4);

struct CanonicalLiftResult {
    u64 p;
    unsigned r;
    unsigned K;
    GaloisRing::Elem jlift;                    // in GR(p^K, r)
    std::vector<GaloisRing::Elem> wittCoords;  // digits over F_(p^r), length K
    unsigned psiFixValuation;                  // val of psi(a) - sigma(a), >= K
    unsigned phiFixValuation;                  // val of Phi_p(a, sigma(a)), >= K
    unsigned iterations;
    std::vector<unsigned> stepValuations;      // agreement per iteration step
};

// Limit iteration a <- sigma^(-1)(psi(a)) from the Teichmuller lift of
// jbar, run one guard level up in GR(p^(K+1), r); stops at agreement mod
// p^K, hard cap K + 8 steps (NoConvergence).  The fixed-point certificate
// is recomputed on the result and enforced (ValidationFailed).
CanonicalLiftResult canonical_lift_j(u64 p, unsigned r,
                                     const std::vector<u64>& jbar, unsigned K);

// Witt coordinates of the canonical lift over the residue field, computed
// two ways and compared (PathMismatch): evaluating the mod-p universal
// coordinates at jbar, and digit decomposition of the lifted j
std::vector<GaloisRing::Elem> canonical_lift_witt_coords(
    u64 p, unsigned r, const std::vector<u64>& jbar, unsigned n);

// r = 1 direct route: Newton on psi(X) - X over Z/p^K.  The derivative is
// -1 mod p, so the iteration is unconditionally regular; the fixed-point
// equation of the full modular polynomial degenerates at r = 1 and is not
// used.  Returns the canonical representative.
u64 canonical_lift_j_newton(u64 p, u64 jbar, unsigned K);

// Curve-model route, p >= 5 and jbar away from 0 and 1728: iterate the
// canonical-subgroup quotient on any lift and read the j-invariant once per
// ext_degree-block; the sequence contracts to the canonical lift.  The
// quotient machinery spends guard digits internally, so large K can hit
// PrecisionBound before the scalar capacity suggests.
GaloisRing::Elem canonical_lift_j_kohel(u64 p, unsigned r,
                                        const std::vector<u64>& jbar,
                                        unsigned K);

struct CurveLift {
    WeierstrassCurve curve;     // over GR(p^K, r)
    CanonicalLiftResult base;
};

// Weierstrass model of the canonical lift, p >= 5: a short model with the
// lifted j-invariant, twisted so the reduction has the point count of E.
// j = 0 and 1728 lift exactly (complex multiplication), where the model
// is found by exhaustive twist search instead.
CurveLift canonical_lift_curve(const GaloisRing& field,
                               const WeierstrassCurve& E, unsigned K);

// Cross-level consistency of the double lift at j-coordinate level: the
// plethysm image of the length-(m+n) coordinates must match the universal
// coordinates evaluated at the precision-n lift.  Throws Mismatch.
void double_lift_check(u64 p, unsigned r, const std::vector<u64>& jbar,
                       unsigned m, unsigned n);

// (j0, psi(j0), ..., psi^(n-1)(j0)): the ghost components of the canonical
// lift when j0 is the lifted j-invariant
std::vector<GaloisRing::Elem> ghost_report(const GaloisRing& R,
                                           const GaloisRing::Elem& j0,
                                           unsigned n);

// same, from a curve model (p >= 5); every entry is cross-checked against
// the j-invariant of the iterated canonical-subgroup quotient
// (PathMismatch)
std::vector<GaloisRing::Elem> ghost_report_curve(const GaloisRing& R,
                                                 const WeierstrassCurve& E,
                                                 unsigned n);

}
