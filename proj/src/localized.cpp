#include "canlift/localized.hpp"

#include <algorithm>

#include "canlift/moddata.hpp"

namespace canlift {

LocalizedContext::LocalizedContext(u64 p, unsigned K)
    : R_(p, K), Rp_(p, 1) {
    switch (p) {
        case 2: case 3: case 5: case 7: case 13: break;
        default:
            throw UnsupportedCharacteristic(
                "LocalizedContext: no supersingular data for p = " +
                std::to_string(p));
    }
    f_ = supersingular_poly(p);

    // h = (j^(p^2) - j) / f over F_p; the lift keeps coefficients in [0, p)
    auto Pp = poly_res();
    std::vector<u64> split(std::size_t(p) * unsigned(p) + 1, 0);
    split[1] = p - 1;
    split.back() = 1;
    auto [q, r] = Pp.divrem_monic(std::move(split), f_);
    if (!Pp.is_zero(r))
        throw ValidationFailed(
            "LocalizedContext: supersingular polynomial does not divide j^(p^2) - j");
    h_ = std::move(q);
}

LocalizedContext::Elem LocalizedContext::make(std::vector<u64> num,
                                              unsigned fExp,
                                              unsigned auxExp) const {
    for (u64& c : num) c %= R_.modulus();
    while (!num.empty() && num.back() == 0) num.pop_back();
    if (num.empty()) return {};
    return {std::move(num), fExp, auxExp};
}

LocalizedContext::Elem LocalizedContext::add(const Elem& a, const Elem& b) const {
    auto P = poly();
    unsigned fe = std::max(a.fExp, b.fExp);
    unsigned ae = std::max(a.auxExp, b.auxExp);
    auto widen = [&](const Elem& x) {
        auto n = x.num;
        if (fe > x.fExp) n = P.mul(n, P.pow(f_, fe - x.fExp));
        if (ae > x.auxExp) n = P.mul(n, P.pow(h_, ae - x.auxExp));
        return n;
    };
    auto n = P.add(widen(a), widen(b));
    if (n.empty()) return {};
    return {std::move(n), fe, ae};
}

LocalizedContext::Elem LocalizedContext::mul(const Elem& a, const Elem& b) const {
    auto n = poly().mul(a.num, b.num);
    if (n.empty()) return {};
    return {std::move(n), a.fExp + b.fExp, a.auxExp + b.auxExp};
}

LocalizedContext::Elem LocalizedContext::neg(const Elem& a) const {
    return {poly().neg(a.num), a.fExp, a.auxExp};
}

LocalizedContext::Elem LocalizedContext::pow(const Elem& a, u64 e) const {
    Elem acc = one(), b = a;
    while (e) {
        if (e & 1) acc = mul(acc, b);
        if (e >>= 1) b = mul(b, b);
    }
    return acc;
}

bool LocalizedContext::eq(const Elem& a, const Elem& b) const {
    auto P = poly();
    unsigned fe = std::max(a.fExp, b.fExp);
    unsigned ae = std::max(a.auxExp, b.auxExp);
    auto widen = [&](const Elem& x) {
        auto n = x.num;
        if (fe > x.fExp) n = P.mul(n, P.pow(f_, fe - x.fExp));
        if (ae > x.auxExp) n = P.mul(n, P.pow(h_, ae - x.auxExp));
        return n;
    };
    return P.eq(widen(a), widen(b));
}

LocalizedContext::Elem LocalizedContext::normalize(const Elem& a) const {
    auto P = poly();
    Elem out{P.normalize(a.num), a.fExp, a.auxExp};
    if (out.num.empty()) return {};
    while (out.auxExp > 0) {
        auto [q, r] = P.divrem_monic(out.num, h_);
        if (!P.is_zero(r)) break;
        out.num = std::move(q);
        --out.auxExp;
    }
    while (out.fExp > 0) {
        auto [q, r] = P.divrem_monic(out.num, f_);
        if (!P.is_zero(r)) break;
        out.num = std::move(q);
        --out.fExp;
    }
    return out;
}

LocalizedContext::Elem LocalizedContext::clear_aux(const Elem& a) const {
    Elem out = normalize(a);
    if (out.auxExp != 0)
        throw NotClearable(
            "LocalizedContext::clear_aux: auxiliary denominator is essential");
    return out;
}

LocalizedContext::Elem LocalizedContext::inv(const Elem& a) const {
    auto Pp = poly_res();
    std::vector<u64> nbar;
    nbar.reserve(a.num.size());
    for (u64 c : a.num) nbar.push_back(c % p());
    nbar = Pp.normalize(std::move(nbar));
    if (nbar.empty())
        throw NormalizationFailed("LocalizedContext::inv: element is not a unit");

    unsigned alpha = 0, beta = 0;
    for (;;) {
        auto [q, r] = Pp.divrem_monic(nbar, f_);
        if (!Pp.is_zero(r)) break;
        nbar = std::move(q);
        ++alpha;
    }
    for (;;) {
        auto [q, r] = Pp.divrem_monic(nbar, h_);
        if (!Pp.is_zero(r)) break;
        nbar = std::move(q);
        ++beta;
    }
    if (Pp.degree(nbar) != 0)
        throw NormalizationFailed(
            "LocalizedContext::inv: residue is not supported on the inverted locus");

    // residue of a is c f^(alpha-fExp) h^(beta-auxExp); seed with its inverse
    u64 cinv = Rp_.inv(nbar[0]);
    auto P = poly();
    std::vector<u64> num = P.constant(cinv);
    if (a.fExp > alpha) num = P.mul(num, P.pow(f_, a.fExp - alpha));
    if (a.auxExp > beta) num = P.mul(num, P.pow(h_, a.auxExp - beta));
    Elem z{std::move(num), alpha > a.fExp ? alpha - a.fExp : 0,
           beta > a.auxExp ? beta - a.auxExp : 0};

    Elem two = from_int(2);
    for (unsigned lifted = 1; lifted < precision(); lifted *= 2)
        z = normalize(mul(z, sub(two, mul(a, z))));
    return z;
}

LocalizedContext::Elem LocalizedContext::exact_div_p(
    const Elem& a, unsigned e, const LocalizedContext& target) const {
    if (target.p() != p() || target.precision() + e != precision())
        throw PrecisionMismatch(
            "LocalizedContext::exact_div_p: target must sit e levels down");
    std::vector<u64> num;
    num.reserve(a.num.size());
    for (u64 c : a.num) num.push_back(R_.exact_div_p(c, e));
    return target.make(std::move(num), a.fExp, a.auxExp);
}

LocalizedContext::Elem LocalizedContext::reduce_to(
    const Elem& a, const LocalizedContext& target) const {
    if (target.p() != p() || target.precision() > precision())
        throw PrecisionMismatch("LocalizedContext::reduce_to: target is larger");
    return target.make(a.num, a.fExp, a.auxExp);
}

LocalizedContext::Elem LocalizedContext::lift_to(
    const Elem& a, const LocalizedContext& target) const {
    if (target.p() != p() || target.precision() < precision())
        throw PrecisionMismatch("LocalizedContext::lift_to: target is smaller");
    return target.make(a.num, a.fExp, a.auxExp);
}

}
