#include "canlift/hensel.hpp"

namespace canlift {

namespace {

GrPoly map_coeffs(const PolyRing<GaloisRing>& P, const GrPoly& a, auto&& fn) {
    GrPoly out;
    out.reserve(a.size());
    for (const auto& c : a) out.push_back(fn(c));
    return P.normalize(std::move(out));
}

}

HenselFactors hensel_factor_pair(const GaloisRing& R, const GrPoly& f,
                                 const GrPoly& gbar, const GrPoly& hbar) {
    const unsigned K = R.precision();
    GaloisRing Rbar = R.residue_field();
    PolyRing<GaloisRing> P(R), Pbar(Rbar);

    if (!Pbar.is_monic(gbar))
        throw ValidationFailed("hensel_factor_pair: gbar is not monic");
    GrPoly fbar = map_coeffs(Pbar, f, [&](const GaloisRing::Elem& c) {
        return R.reduce_to(c, Rbar);
    });
    if (!Pbar.eq(fbar, Pbar.mul(gbar, hbar)))
        throw ValidationFailed("hensel_factor_pair: f != gbar*hbar mod p");

    // t = hbar^(-1) mod gbar, the only residue-field data the lift needs
    GrPoly t = map_coeffs(P, poly_inv_mod(Pbar, hbar, gbar),
                          [&](const GaloisRing::Elem& c) {
                              return Rbar.lift_into(c, R);
                          });
    GrPoly g = map_coeffs(P, gbar, [&](const GaloisRing::Elem& c) {
        return Rbar.lift_into(c, R);
    });

    // g <- g + (t * (f rem g) rem g) doubles the valuation of f rem g;
    // t is refreshed as the inverse of (f quo g) mod g first
    unsigned steps = 0;
    for (unsigned reached = 1; reached < K; reached *= 2) ++steps;
    GrPoly h;
    for (unsigned it = 0; it <= steps + 1; ++it) {
        auto [hq, e] = P.divrem_monic(f, g);
        h = std::move(hq);
        if (P.is_zero(e)) break;
        GrPoly ht = P.sub(P.from_int(2), P.mul(h, t));
        t = P.divrem_monic(P.mul(t, ht), g).second;
        g = P.add(g, P.divrem_monic(P.mul(t, e), g).second);
    }

    auto [hq, e] = P.divrem_monic(f, g);
    h = std::move(hq);
    if (!P.is_zero(e) || !P.eq(P.mul(g, h), f))
        throw NoConvergence("hensel_factor_pair: lift failed to certify");
    if (!P.is_monic(g) || int(g.size()) != int(gbar.size()))
        throw ValidationFailed("hensel_factor_pair: factor lost its shape");
    GrPoly gres = map_coeffs(Pbar, g, [&](const GaloisRing::Elem& c) {
        return R.reduce_to(c, Rbar);
    });
    if (!Pbar.eq(gres, gbar))
        throw ValidationFailed("hensel_factor_pair: residue drifted");
    return {std::move(g), std::move(h)};
}

}
