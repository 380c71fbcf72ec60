#pragma once

#include <vector>

#include "canlift/errors.hpp"
#include "canlift/poly.hpp"
#include "canlift/zmod.hpp"

namespace canlift {

// num / (f^fExp h^auxExp) where f lifts the supersingular polynomial and
// h lifts (j^(p^2) - j) / ss_p.  Numerator coefficients are canonical
// representatives mod p^K, low degree first.
struct LocalizedElem {
    std::vector<u64> num;
    unsigned fExp = 0;
    unsigned auxExp = 0;
};

// Z/p^K [j, 1/f, 1/h]: the functions with poles confined to the locus the
// lifting theory inverts.  f h is the minimal lift of j^(p^2) - j, so the
// units this ring needs (Newton denominators) reduce to c f^a h^b mod p.
class LocalizedContext {
public:
    using Elem = LocalizedElem;

    LocalizedContext(u64 p, unsigned K);

    u64 p() const { return R_.p(); }
    unsigned precision() const { return R_.precision(); }
    const ZpRing& scalar_ring() const { return R_; }
    const std::vector<u64>& ss_factor() const { return f_; }
    const std::vector<u64>& aux_factor() const { return h_; }
    bool same(const LocalizedContext& o) const {
        return p() == o.p() && precision() == o.precision();
    }

    Elem zero() const { return {}; }
    Elem one() const { return constant(1); }
    Elem j_var() const { return make({0, 1}, 0, 0); }
    Elem constant(u64 c) const { return make({c}, 0, 0); }
    Elem from_int(i64 n) const { return constant(R_.from_int(n)); }
    Elem make(std::vector<u64> num, unsigned fExp, unsigned auxExp) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
    Elem mul(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem pow(const Elem& a, u64 e) const;
    bool eq(const Elem& a, const Elem& b) const;
    bool is_zero(const Elem& a) const { return a.num.empty(); }

    // strip every h and f factor that divides the numerator exactly
    Elem normalize(const Elem& a) const;

    // normalize and certify that no h denominator survives; elements of the
    // lifting theory must pass this, so a failure is NotClearable
    Elem clear_aux(const Elem& a) const;

    // Newton inverse; requires the residue numerator to be c f^a h^b up to
    // a unit constant, otherwise NormalizationFailed
    Elem inv(const Elem& a) const;

    // value / p^e in the context of precision K - e; NotDivisible unless
    // every numerator coefficient is divisible (exact for monic f, h)
    Elem exact_div_p(const Elem& a, unsigned e,
                     const LocalizedContext& target) const;

    Elem reduce_to(const Elem& a, const LocalizedContext& target) const;
    Elem lift_to(const Elem& a, const LocalizedContext& target) const;

    // evaluate at a point of Z/p^K' or a Galois ring over it, K' <= K;
    // SupersingularPoint when the f denominator meets a non-unit
    template <class S>
    typename S::Elem eval(const S& s, const Elem& a,
                          const typename S::Elem& j0) const {
        if (s.p() != p())
            throw PrecisionMismatch("LocalizedContext::eval: different prime");
        if (s.precision() > precision())
            throw PrecisionMismatch("LocalizedContext::eval: target precision too high");
        Elem u = clear_aux(a);
        auto horner = [&](const std::vector<u64>& cs) {
            auto acc = s.zero();
            for (std::size_t i = cs.size(); i-- > 0;)
                acc = s.add(s.mul(acc, j0), s.from_int(i64(cs[i])));
            return acc;
        };
        auto N = horner(u.num);
        if (u.fExp == 0) return N;
        auto den = horner(f_);
        if (!s.is_unit(den))
            throw SupersingularPoint("LocalizedContext::eval: pole at a supersingular point");
        return s.mul(N, s.pow(s.inv(den), u.fExp));
    }

private:
    PolyRing<ZpRing> poly() const { return PolyRing<ZpRing>(R_); }
    PolyRing<ZpRing> poly_res() const { return PolyRing<ZpRing>(Rp_); }

    ZpRing R_;
    ZpRing Rp_;            // residue ring Z/p
    std::vector<u64> f_;   // coefficients in [0, p), valid in both rings
    std::vector<u64> h_;
};

}
