#pragma once

#include <utility>
#include <vector>

#include "canlift/errors.hpp"
#include "canlift/ring.hpp"
#include "canlift/zmod.hpp"

namespace canlift {

// Dense univariate polynomials over a coefficient ring, low degree first.
// Normal form has no trailing zero coefficients; the zero polynomial is the
// empty vector.  Models Ring itself, so towers compose.
template <Ring R>
class PolyRing {
public:
    using Coeff = typename R::Elem;
    using Elem = std::vector<Coeff>;
    static constexpr bool p_torsion_free = R::p_torsion_free;

    explicit PolyRing(const R& base) : base_(&base) {}
    const R& base() const { return *base_; }

    Elem zero() const { return {}; }
    Elem one() const { return {base_->one()}; }
    Elem x() const { return {base_->zero(), base_->one()}; }
    Elem from_int(i64 n) const { return normalize({base_->from_int(n)}); }
    Elem constant(Coeff c) const { return normalize({std::move(c)}); }

    Elem normalize(Elem a) const {
        while (!a.empty() && base_->is_zero(a.back())) a.pop_back();
        return a;
    }

    int degree(const Elem& a) const { return int(a.size()) - 1; }

    Coeff coeff(const Elem& a, size_t i) const {
        return i < a.size() ? a[i] : base_->zero();
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem out = a;
        if (out.size() < b.size()) out.resize(b.size(), base_->zero());
        for (size_t i = 0; i < b.size(); ++i) out[i] = base_->add(out[i], b[i]);
        return normalize(std::move(out));
    }

    Elem sub(const Elem& a, const Elem& b) const {
        Elem out = a;
        if (out.size() < b.size()) out.resize(b.size(), base_->zero());
        for (size_t i = 0; i < b.size(); ++i) out[i] = base_->sub(out[i], b[i]);
        return normalize(std::move(out));
    }

    Elem neg(const Elem& a) const {
        Elem out(a.size(), base_->zero());
        for (size_t i = 0; i < a.size(); ++i) out[i] = base_->neg(a[i]);
        return out;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        if (a.empty() || b.empty()) return {};
        Elem out(a.size() + b.size() - 1, base_->zero());
        for (size_t i = 0; i < a.size(); ++i) {
            if (base_->is_zero(a[i])) continue;
            for (size_t j = 0; j < b.size(); ++j)
                out[i + j] = base_->add(out[i + j], base_->mul(a[i], b[j]));
        }
        return normalize(std::move(out));
    }

    Elem scale(const Coeff& c, const Elem& a) const {
        Elem out(a.size(), base_->zero());
        for (size_t i = 0; i < a.size(); ++i) out[i] = base_->mul(c, a[i]);
        return normalize(std::move(out));
    }

    Elem shift(Elem a, unsigned k) const {          // multiply by x^k
        if (a.empty() || k == 0) return a;
        a.insert(a.begin(), k, base_->zero());
        return a;
    }

    bool eq(const Elem& a, const Elem& b) const {
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (!base_->eq(a[i], b[i])) return false;
        return true;
    }

    bool is_zero(const Elem& a) const { return a.empty(); }

    bool is_monic(const Elem& a) const {
        return !a.empty() && base_->eq(a.back(), base_->one());
    }

    Coeff eval(const Elem& a, const Coeff& v) const {
        Coeff acc = base_->zero();
        for (size_t i = a.size(); i-- > 0;)
            acc = base_->add(base_->mul(acc, v), a[i]);
        return acc;
    }

    Elem derivative(const Elem& a) const {
        if (a.size() < 2) return {};
        Elem out(a.size() - 1, base_->zero());
        for (size_t i = 1; i < a.size(); ++i)
            out[i - 1] = base_->mul(base_->from_int(i64(i)), a[i]);
        return normalize(std::move(out));
    }

    Elem pow(const Elem& a, u64 e) const {
        Elem acc = one(), b = a;
        while (e) {
            if (e & 1) acc = mul(acc, b);
            if (e >>= 1) b = mul(b, b);
        }
        return acc;
    }

    // quotient and remainder by a monic divisor
    std::pair<Elem, Elem> divrem_monic(Elem a, const Elem& d) const {
        if (!is_monic(d))
            throw Error("divrem_monic: divisor is not monic");
        if (a.size() < d.size()) return {zero(), normalize(std::move(a))};
        Elem q(a.size() - d.size() + 1, base_->zero());
        for (size_t off = a.size() - d.size() + 1; off-- > 0;) {
            Coeff c = a[off + d.size() - 1];
            if (base_->is_zero(c)) continue;
            q[off] = c;
            for (size_t j = 0; j < d.size(); ++j)
                a[off + j] = base_->sub(a[off + j], base_->mul(c, d[j]));
        }
        a.resize(d.size() - 1);
        return {normalize(std::move(q)), normalize(std::move(a))};
    }

    Elem exact_div_p(const Elem& a) const requires PTorsionFreeRing<R> {
        Elem out(a.size(), base_->zero());
        for (size_t i = 0; i < a.size(); ++i) out[i] = base_->exact_div_p(a[i]);
        return out;
    }

private:
    const R* base_;
};

// h^(-1) mod g over a ring whose nonzero elements are units (residue fields).
// Throws NotCoprime when gcd(g, h) is not constant.
template <Ring R>
typename PolyRing<R>::Elem poly_inv_mod(const PolyRing<R>& P,
                                        const typename PolyRing<R>::Elem& h,
                                        const typename PolyRing<R>::Elem& g) {
    using Elem = typename PolyRing<R>::Elem;
    const R& F = P.base();
    // extended Euclid tracking the coefficient of h only
    auto monic_divrem = [&](Elem a, const Elem& d) {
        auto lcinv = F.inv(d.back());
        Elem dm = P.scale(lcinv, d);
        auto [q, r] = P.divrem_monic(std::move(a), dm);
        return std::pair<Elem, Elem>(P.scale(lcinv, q), std::move(r));
    };
    Elem r0 = g, r1 = P.normalize(h);
    Elem t0 = P.zero(), t1 = P.one();
    if (P.degree(r1) >= P.degree(g)) {
        auto [q, r] = monic_divrem(r1, g);
        (void)q;
        r1 = std::move(r);
    }
    while (!P.is_zero(r1)) {
        auto [q, r] = monic_divrem(r0, r1);
        Elem t2 = P.sub(t0, P.mul(q, t1));
        r0 = std::move(r1); r1 = std::move(r);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (P.degree(r0) != 0)
        throw NotCoprime("poly_inv_mod: operands share a factor");
    Elem t = P.scale(F.inv(r0[0]), t0);
    return P.divrem_monic(std::move(t), g).second;
}

}
