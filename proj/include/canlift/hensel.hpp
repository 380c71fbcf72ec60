#pragma once

#include "canlift/galois_ring.hpp"
#include "canlift/poly.hpp"

namespace canlift {

using GrPoly = PolyRing<GaloisRing>::Elem;

struct HenselFactors {
    GrPoly g;   // monic, reduces to gbar
    GrPoly h;   // cofactor, f = g*h exactly
};

// Lift a coprime factorization f == gbar * hbar (mod p) to an exact
// factorization over GR(p^K, r).  gbar must be monic and coprime to hbar in
// the residue field; gbar, hbar are given over the residue field of R.
// Throws NotCoprime when the residues share a factor, ValidationFailed when
// the stated precondition fails, NoConvergence when certification fails.
HenselFactors hensel_factor_pair(const GaloisRing& R, const GrPoly& f,
                                 const GrPoly& gbar, const GrPoly& hbar);

}
