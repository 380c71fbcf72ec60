#include "canlift/curves.hpp"

namespace canlift {

GaloisRing::Elem discriminant(const GaloisRing& R, const WeierstrassCurve& E) {
    auto a3 = R.mul(E.a, R.mul(E.a, E.a));
    auto b2 = R.mul(E.b, E.b);
    auto s = R.add(R.scalar_mul(4 % R.char_modulus(), a3),
                   R.scalar_mul(27 % R.char_modulus(), b2));
    return R.mul(R.from_int(-16), s);
}

GaloisRing::Elem j_invariant(const GaloisRing& R, const WeierstrassCurve& E) {
    auto a3 = R.mul(E.a, R.mul(E.a, E.a));
    auto s = R.add(R.scalar_mul(4 % R.char_modulus(), a3),
                   R.scalar_mul(27 % R.char_modulus(), R.mul(E.b, E.b)));
    if (!R.is_unit(s))
        throw ValidationFailed("j_invariant: discriminant is not a unit");
    return R.mul(R.from_int(6912), R.mul(a3, R.inv(s)));
}

WeierstrassCurve curve_from_j(const GaloisRing& R, const GaloisRing::Elem& j) {
    if (R.p() < 5)
        throw UnsupportedCharacteristic("curve_from_j: needs p >= 5");
    if (R.is_zero(j)) return {R.zero(), R.one()};
    auto j1728 = R.from_int(1728);
    if (R.eq(j, j1728)) return {R.one(), R.zero()};
    auto den = R.sub(j1728, j);
    if (!R.is_unit(j) || !R.is_unit(den))
        throw UnsupportedResidue(
            "curve_from_j: residue 0 or 1728 without the exact value");
    auto c = R.mul(j, R.inv(den));
    return {R.scalar_mul(3, c), R.scalar_mul(2, c)};
}

WeierstrassCurve twisted_curve(const GaloisRing& R, const WeierstrassCurve& E,
                               const GaloisRing::Elem& d) {
    auto d2 = R.mul(d, d);
    return {R.mul(E.a, d2), R.mul(E.b, R.mul(d2, d))};
}

u64 count_points(const GaloisRing& F, const WeierstrassCurve& E) {
    if (F.precision() != 1)
        throw PrecisionMismatch("count_points: needs a residue field");
    if (F.p() < 3)
        throw UnsupportedCharacteristic("count_points: short model needs p >= 3");
    const u64 q = F.q();
    auto minus1 = F.neg(F.one());
    u64 n = q + 1;
    for (u64 i = 0; i < q; ++i) {
        auto x = F.element_from_index(i);
        auto fx = F.add(F.mul(x, F.add(F.mul(x, x), E.a)), E.b);
        if (F.is_zero(fx)) continue;
        auto chi = F.pow(fx, (q - 1) / 2);
        if (F.eq(chi, F.one())) n += 1;
        else if (F.eq(chi, minus1)) n -= 1;
        else throw ValidationFailed("count_points: character value out of range");
    }
    return n;
}

i64 trace_of_frobenius(const GaloisRing& F, const WeierstrassCurve& E) {
    return i64(F.q()) + 1 - i64(count_points(F, E));
}

bool is_ordinary(const GaloisRing& F, const WeierstrassCurve& E) {
    return trace_of_frobenius(F, E) % i64(F.p()) != 0;
}

std::vector<GrPoly> division_poly_list(const GaloisRing& R,
                                       const WeierstrassCurve& E, unsigned mmax) {
    PolyRing<GaloisRing> P(R);
    const auto& a = E.a;
    const auto& b = E.b;
    auto C = [&](i64 n) { return R.from_int(n); };
    auto a2 = R.mul(a, a), b2 = R.mul(b, b), ab = R.mul(a, b);
    auto a3 = R.mul(a2, a);

    std::vector<GrPoly> v(std::max(mmax, 4u) + 1);
    v[0] = P.zero();
    v[1] = P.one();
    v[2] = P.one();
    v[3] = P.normalize({R.neg(a2), R.scalar_mul(12, b), R.scalar_mul(6, a),
                        R.zero(), C(3)});
    v[4] = P.normalize({R.scalar_mul(2, R.neg(R.add(R.scalar_mul(8, b2), a3))),
                        R.scalar_mul(8, R.neg(ab)),
                        R.scalar_mul(10, R.neg(a2)),
                        R.scalar_mul(40, b),
                        R.scalar_mul(10, a),
                        R.zero(), C(2)});
    GrPoly S = P.normalize({R.scalar_mul(4, b), R.scalar_mul(4, a), R.zero(), C(4)});
    GrPoly S2 = P.mul(S, S);

    for (unsigned m = 5; m <= mmax; ++m) {
        unsigned k = m / 2;
        if (m % 2 == 1) {
            GrPoly t1 = P.mul(v[k + 2], P.pow(v[k], 3));
            GrPoly t2 = P.mul(v[k - 1], P.pow(v[k + 1], 3));
            v[m] = (k % 2 == 0) ? P.sub(P.mul(S2, t1), t2)
                                : P.sub(t1, P.mul(S2, t2));
        } else {
            GrPoly t = P.sub(P.mul(v[k + 2], P.mul(v[k - 1], v[k - 1])),
                             P.mul(v[k - 2], P.mul(v[k + 1], v[k + 1])));
            v[m] = P.mul(v[k], t);
        }
    }
    v.resize(mmax + 1);
    return v;
}

KernelPolynomial canonical_subgroup_kernel(const GaloisRing& R,
                                           const WeierstrassCurve& E) {
    const u64 p = R.p();
    if (p < 5)
        throw UnsupportedCharacteristic("canonical_subgroup_kernel: needs p >= 5");
    PolyRing<GaloisRing> P(R);
    const unsigned D2 = unsigned((p * p - 1) / 2);    // deg of the p-division poly
    const unsigned d = unsigned((p - 1) / 2);

    GrPoly vp = division_poly_list(R, E, unsigned(p)).back();
    GrPoly rho(D2 + 1, R.zero());
    for (unsigned i = 0; i <= D2; ++i) rho[i] = P.coeff(vp, D2 - i);
    rho = P.normalize(std::move(rho));

    // coefficients below x^d vanish mod p for every curve; the x^d one is a
    // unit exactly in the ordinary case (it reduces to the Hasse invariant
    // up to a power and a unit)
    for (unsigned i = 0; i < d; ++i)
        if (R.val_p(P.coeff(rho, i)) < 1)
            throw ValidationFailed("canonical_subgroup_kernel: low terms not divisible by p");
    if (!R.is_unit(P.coeff(rho, d)))
        throw NotOrdinary("canonical_subgroup_kernel: curve is supersingular mod p");

    GaloisRing Rbar = R.residue_field();
    PolyRing<GaloisRing> Pbar(Rbar);
    GrPoly gbar(d + 1, Rbar.zero());
    gbar[d] = Rbar.one();
    GrPoly hbar;
    for (size_t i = d; i < rho.size(); ++i)
        hbar.push_back(R.reduce_to(rho[i], Rbar));
    hbar = Pbar.normalize(std::move(hbar));

    auto split = hensel_factor_pair(R, rho, gbar, hbar);
    if (R.precision() >= 2 && R.val_p(P.coeff(split.g, 0)) != 1)
        throw ValidationFailed("canonical_subgroup_kernel: constant term valuation is off");
    return {std::move(split.g)};
}

WeierstrassCurve kohel_quotient(const GaloisRing& R, const WeierstrassCurve& E) {
    const u64 p = R.p();
    if (p < 5)
        throw UnsupportedCharacteristic("kohel_quotient: needs p >= 5");
    const unsigned K = R.precision();
    const unsigned d = unsigned((p - 1) / 2);

    // guard digits: one for the unit part of D(0), nine for the descale
    GaloisRing RP(p, K + 10, R.ext_degree());
    WeierstrassCurve EP{R.lift_into(E.a, RP), R.lift_into(E.b, RP)};
    KernelPolynomial ker = canonical_subgroup_kernel(RP, EP);

    // scaled power sums m_k = p^k * (sum of kernel x-coordinates^k) stay
    // integral; they satisfy u*m_k = -(sum_{j=1}^{k-1} D_j p^(j-1) m_(k-j)
    //                                 + k D_k p^(k-1)) with D(0) = p*u
    GaloisRing R1(p, K + 9, R.ext_degree());
    PolyRing<GaloisRing> P1(R1);
    std::vector<GaloisRing::Elem> D(d + 1, R1.zero());
    for (unsigned j = 1; j <= d; ++j)
        D[j] = RP.reduce_to(j < ker.d.size() ? ker.d[j] : RP.zero(), R1);
    auto u = RP.exact_div_p(ker.d[0], 1, R1);
    auto uinv = R1.inv(u);

    std::vector<GaloisRing::Elem> m(4, R1.zero());
    for (unsigned k = 1; k <= 3; ++k) {
        u64 pk1 = 1;
        for (unsigned i = 0; i + 1 < k; ++i) pk1 *= p;       // p^(k-1)
        auto acc = (k <= d) ? R1.scalar_mul(k % R1.char_modulus(),
                                            R1.scalar_mul(pk1 % R1.char_modulus(), D[k]))
                            : R1.zero();
        u64 pj1 = 1;
        for (unsigned j = 1; j < k; ++j) {
            if (j <= d)
                acc = R1.add(acc, R1.scalar_mul(pj1 % R1.char_modulus(),
                                                R1.mul(D[j], m[k - j])));
            pj1 *= p;
        }
        m[k] = R1.neg(R1.mul(uinv, acc));
    }

    auto a1 = RP.reduce_to(EP.a, R1), b1 = RP.reduce_to(EP.b, R1);
    const u64 mod1 = R1.char_modulus();
    u64 p2 = (p * p) % mod1, p3 = (p * p * p) % mod1;

    // Velu's normalized model (a - 5t, b - 7w) pulls the invariant
    // differential back exactly; since the quotient map reduces to the
    // inseparable Frobenius, that model is p^(4,6)-scaled and the smooth
    // one is ((a - 5t)/p^4, (b - 7w)/p^6)
    // p^6 a'' = p^2 a - 30 m_2 - 10 a d p^2
    auto t2 = R1.sub(R1.scalar_mul(p2, a1), R1.scalar_mul(30 % mod1, m[2]));
    t2 = R1.sub(t2, R1.scalar_mul((10 * d) % mod1, R1.scalar_mul(p2, a1)));
    GaloisRing R3(p, K + 3, R.ext_degree());
    auto ap = R1.exact_div_p(t2, 6, R3);

    // p^9 b'' = p^3 b - 70 m_3 - 42 a p^2 m_1 - 28 b d p^3
    auto t3 = R1.sub(R1.scalar_mul(p3, b1), R1.scalar_mul(70 % mod1, m[3]));
    t3 = R1.sub(t3, R1.scalar_mul(42 % mod1,
                                  R1.mul(a1, R1.scalar_mul(p2, m[1]))));
    t3 = R1.sub(t3, R1.scalar_mul((28 * d) % mod1, R1.scalar_mul(p3, b1)));
    GaloisRing R4(p, K, R.ext_degree());
    auto bp = R1.exact_div_p(t3, 9, R4);

    WeierstrassCurve out{R3.reduce_to(ap, R4), bp};

    // certificates at the residue: the quotient reduces to the Frobenius
    // twist, so j' = j^p mod p and the point counts agree
    GaloisRing F = R.residue_field();
    WeierstrassCurve Ebar{R.reduce_to(E.a, F), R.reduce_to(E.b, F)};
    WeierstrassCurve Obar{R4.reduce_to(out.a, F), R4.reduce_to(out.b, F)};
    auto jb = j_invariant(F, Ebar);
    auto jo = j_invariant(F, Obar);
    if (!F.eq(jo, F.pow(jb, p)))
        throw ValidationFailed("kohel_quotient: residue is not the Frobenius twist");
    if (F.q() <= 4096 && count_points(F, Ebar) != count_points(F, Obar))
        throw ValidationFailed("kohel_quotient: point counts disagree");
    return out;
}

}
