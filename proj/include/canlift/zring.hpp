#pragma once

#include <array>
#include <gmpxx.h>

#include "canlift/errors.hpp"
#include "canlift/zmod.hpp"

namespace canlift {

// The integers with a distinguished prime p, so exact division by p is
// available and ghost vectors can be pulled back.
class ZRing {
public:
    using Elem = mpz_class;
    static constexpr bool p_torsion_free = true;

    explicit ZRing(u64 p) : p_(p) {}
    u64 p() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(i64 n) const { return Elem(static_cast<long>(n)); }
    Elem from_mpz(const mpz_class& n) const { return n; }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_zero(const Elem& a) const { return a == 0; }

    Elem exact_div_p(const Elem& a) const {
        mpz_class p(static_cast<unsigned long>(p_));
        if (!mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t()))
            throw NotDivisible("ZRing::exact_div_p: value not divisible by p");
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
        return q;
    }

private:
    u64 p_;
};

// Z[t]/(t^3): the smallest coefficient ring with nilpotents that is still
// p-torsion free.  Elements are (c0, c1, c2) for c0 + c1 t + c2 t^2.
class ZTruncRing {
public:
    using Elem = std::array<mpz_class, 3>;
    static constexpr bool p_torsion_free = true;

    explicit ZTruncRing(u64 p) : p_(p) {}
    u64 p() const { return p_; }

    Elem zero() const { return {0, 0, 0}; }
    Elem one() const { return {1, 0, 0}; }
    Elem t() const { return {0, 1, 0}; }
    Elem from_int(i64 n) const { return {mpz_class(static_cast<long>(n)), 0, 0}; }
    Elem from_mpz(const mpz_class& n) const { return {n, 0, 0}; }
    Elem from_coeffs(mpz_class c0, mpz_class c1, mpz_class c2) const {
        return {std::move(c0), std::move(c1), std::move(c2)};
    }

    Elem add(const Elem& a, const Elem& b) const {
        return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
    }
    Elem sub(const Elem& a, const Elem& b) const {
        return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    }
    Elem mul(const Elem& a, const Elem& b) const {
        return {a[0] * b[0], a[0] * b[1] + a[1] * b[0],
                a[0] * b[2] + a[1] * b[1] + a[2] * b[0]};
    }
    Elem neg(const Elem& a) const { return {-a[0], -a[1], -a[2]}; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_zero(const Elem& a) const {
        return a[0] == 0 && a[1] == 0 && a[2] == 0;
    }

    Elem exact_div_p(const Elem& a) const {
        mpz_class p(static_cast<unsigned long>(p_));
        Elem out;
        for (int i = 0; i < 3; ++i) {
            if (!mpz_divisible_p(a[i].get_mpz_t(), p.get_mpz_t()))
                throw NotDivisible("ZTruncRing::exact_div_p: coefficient not divisible");
            mpz_divexact(out[i].get_mpz_t(), a[i].get_mpz_t(), p.get_mpz_t());
        }
        return out;
    }

private:
    u64 p_;
};

}
