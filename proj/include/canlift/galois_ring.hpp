#pragma once

#include <cstdint>
#include <vector>
#include <gmpxx.h>

#include "canlift/zmod.hpp"

namespace canlift {

// Galois ring GR(p^K, r) = (Z/p^K)[x]/(m).  The modulus m is pinned: the
// unique monic lift of the lexicographically least monic irreducible of
// degree r over F_p (coefficients compared from degree r-1 down to the
// constant) that divides x^(q-1) - 1, q = p^r.  For r = 1 the modulus is
// x - 1.  With this choice the class of x is a Teichmuller unit and the
// Frobenius automorphism is the substitution x -> x^p.
class GaloisRing {
public:
    using Elem = std::vector<u64>;
    static constexpr bool p_torsion_free = false;

    GaloisRing(u64 p, unsigned K, unsigned r);

    u64 p() const { return zp_.p(); }
    unsigned precision() const { return zp_.precision(); }
    unsigned ext_degree() const { return r_; }
    u64 char_modulus() const { return zp_.modulus(); }   // p^K
    u64 q() const { return q_; }                         // p^r
    const ZpRing& scalar_ring() const { return zp_; }
    const std::vector<u64>& min_poly() const { return m_; }   // monic, length r+1
    bool same(const GaloisRing& o) const {
        return p() == o.p() && precision() == o.precision() && r_ == o.r_;
    }

    Elem zero() const { return Elem(r_, 0); }
    Elem one() const;
    Elem x_gen() const;
    Elem from_int(i64 n) const;
    Elem from_mpz(const mpz_class& n) const;
    Elem from_coords(std::vector<u64> c) const;   // validates length and range

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem scalar_mul(u64 c, const Elem& a) const;
    bool eq(const Elem& a, const Elem& b) const;
    bool is_zero(const Elem& a) const;
    Elem pow(const Elem& a, u64 e) const;

    bool is_unit(const Elem& a) const { return val_p(a) == 0; }
    Elem inv(const Elem& a) const;
    unsigned val_p(const Elem& a) const;   // K for zero

    // a / p^e landing in GR(p^(K-e), r)
    Elem exact_div_p(const Elem& a, unsigned e, const GaloisRing& target) const;

    Elem frobenius(const Elem& a) const;
    Elem frobenius_inv(const Elem& a) const;
    // Teichmuller representative of the residue of a: fixed point of y -> y^q
    Elem teichmuller(const Elem& a) const;

    GaloisRing truncated(unsigned newK) const;
    GaloisRing residue_field() const { return truncated(1); }
    // coordinatewise reduction into a lower-precision copy of this ring
    Elem reduce_to(const Elem& a, const GaloisRing& target) const;
    // canonical-representative lift into a higher-precision copy
    Elem lift_into(const Elem& a, const GaloisRing& target) const;

    // index -> element with coordinates in [0, p); enumerates the residue
    // field when the index sweeps [0, q)
    Elem element_from_index(u64 idx) const {
        std::vector<u64> c(r_);
        for (unsigned i = 0; i < r_; ++i) { c[i] = idx % p(); idx /= p(); }
        return c;
    }

private:
    struct raw_tag {};
    GaloisRing(const ZpRing& zp, unsigned r, std::vector<u64> m, raw_tag);
    static GaloisRing build(u64 p, unsigned K, unsigned r);
    void finish_canonical();            // frobenius table + certification
    Elem reduce_product(std::vector<u64>& buf) const;

    ZpRing zp_;
    unsigned r_;
    u64 q_;
    std::vector<u64> m_;
    std::vector<Elem> frob_cols_;       // column i = coords of (x^p)^i
};

}
