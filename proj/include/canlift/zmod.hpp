#pragma once

#include <cstdint>
#include <string>
#include <gmpxx.h>

#include "canlift/errors.hpp"

namespace canlift {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Z/p^K on a single machine word.  Requires p^K < 2^62 so that products fit
// an unsigned 128-bit intermediate with headroom.  Elements are canonical
// representatives in [0, p^K).
class ZpRing {
public:
    using Elem = u64;
    static constexpr bool p_torsion_free = false;

    ZpRing(u64 p, unsigned K) : p_(p), K_(K) {
        if (p < 2 || K == 0)
            throw Error("ZpRing: need p >= 2 and K >= 1");
        u64 m = 1;
        const u64 cap = u64(1) << 62;
        for (unsigned i = 0; i < K; ++i) {
            if (m >= cap / p)
                throw PrecisionBound("ZpRing: p^K exceeds 2^62");
            m *= p;
        }
        mod_ = m;
    }

    u64 p() const { return p_; }
    unsigned precision() const { return K_; }
    u64 modulus() const { return mod_; }
    bool same(const ZpRing& o) const { return p_ == o.p_ && K_ == o.K_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }

    Elem from_int(i64 n) const {
        i64 m = i64(mod_);
        i64 v = n % m;
        if (v < 0) v += m;
        return u64(v);
    }

    Elem from_mpz(const mpz_class& n) const {
        mpz_class r = n % mpz_class(static_cast<unsigned long>(mod_));
        if (r < 0) r += mpz_class(static_cast<unsigned long>(mod_));
        return r.get_ui();
    }

    Elem add(Elem a, Elem b) const {
        u64 s = a + b;                  // < 2^63, no overflow
        return s >= mod_ ? s - mod_ : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : mod_ - b + a; }
    Elem mul(Elem a, Elem b) const { return u64(u128(a) * b % mod_); }
    Elem neg(Elem a) const { return a == 0 ? 0 : mod_ - a; }
    bool eq(Elem a, Elem b) const { return a == b; }
    bool is_zero(Elem a) const { return a == 0; }

    Elem pow(Elem a, u64 e) const {
        Elem acc = one(), b = a;
        while (e) {
            if (e & 1) acc = mul(acc, b);
            b = mul(b, b);
            e >>= 1;
        }
        return acc;
    }

    bool is_unit(Elem a) const { return a % p_ != 0; }

    Elem inv(Elem a) const {
        if (!is_unit(a))
            throw NotCoprime("ZpRing::inv: element is divisible by p");
        // Fermat inverse mod p, then Newton refinement to p^K
        ZpRing fp(p_, 1);
        Elem z = fp.pow(a % p_, p_ - 2);
        for (unsigned lifted = 1; lifted < K_; lifted *= 2)
            z = mul(z, sub(from_int(2), mul(a, z)));
        return z;
    }

    // p-adic valuation, K_ for zero
    unsigned val_p(Elem a) const {
        if (a == 0) return K_;
        unsigned v = 0;
        while (a % p_ == 0) { a /= p_; ++v; }
        return v;
    }

    // a / p^e as an element of Z/p^(K-e); caller owns the smaller ring
    u64 exact_div_p(Elem a, unsigned e) const {
        if (e > K_)
            throw PrecisionMismatch("exact_div_p: exponent exceeds precision");
        u64 pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= p_;
        if (a % pe != 0)
            throw NotDivisible("exact_div_p: p^e does not divide the value");
        return a / pe;
    }

    Elem reduce_from(u64 canonical_rep) const { return canonical_rep % mod_; }

    // Teichmuller representative of a mod p: the unique (p-1)-th root of
    // unity (or 0) congruent to it
    Elem teichmuller(Elem a) const {
        Elem t = a;
        for (unsigned i = 0; i + 1 < K_; ++i) t = pow(t, p_);
        if (pow(t, p_) != t)
            throw Error("ZpRing::teichmuller: iteration did not stabilize");
        return t;
    }

private:
    u64 p_;
    unsigned K_;
    u64 mod_;
};

}
