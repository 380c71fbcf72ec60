#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "canlift/curves.hpp"
#include "canlift/moddata.hpp"

using namespace canlift;

namespace {

// affine group law over a residue field, p >= 5; independent of the
// division-polynomial code
struct Pt {
    bool inf = true;
    GaloisRing::Elem x{}, y{};
};

Pt pt_add(const GaloisRing& F, const WeierstrassCurve& E, const Pt& P,
          const Pt& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    GaloisRing::Elem lam;
    if (F.eq(P.x, Q.x)) {
        if (F.eq(P.y, F.neg(Q.y))) return {};
        lam = F.mul(F.add(F.scalar_mul(3, F.mul(P.x, P.x)), E.a),
                    F.inv(F.scalar_mul(2, P.y)));
    } else {
        lam = F.mul(F.sub(Q.y, P.y), F.inv(F.sub(Q.x, P.x)));
    }
    auto x3 = F.sub(F.sub(F.mul(lam, lam), P.x), Q.x);
    auto y3 = F.sub(F.mul(lam, F.sub(P.x, x3)), P.y);
    return {false, x3, y3};
}

bool find_point(const GaloisRing& F, const WeierstrassCurve& E,
                std::mt19937_64& rng, Pt& out) {
    for (int tries = 0; tries < 40; ++tries) {
        auto x = F.element_from_index(rng() % F.q());
        auto rhs = F.add(F.mul(x, F.add(F.mul(x, x), E.a)), E.b);
        for (u64 yi = 0; yi < F.q(); ++yi) {
            auto y = F.element_from_index(yi);
            if (F.eq(F.mul(y, y), rhs)) {
                out = {false, x, y};
                return true;
            }
        }
    }
    return false;
}

u64 naive_count(const GaloisRing& F, const WeierstrassCurve& E) {
    u64 n = 1;
    for (u64 xi = 0; xi < F.q(); ++xi) {
        auto x = F.element_from_index(xi);
        auto rhs = F.add(F.mul(x, F.add(F.mul(x, x), E.a)), E.b);
        for (u64 yi = 0; yi < F.q(); ++yi) {
            auto y = F.element_from_index(yi);
            if (F.eq(F.mul(y, y), rhs)) ++n;
        }
    }
    return n;
}

}

TEST_CASE("j-invariant round trips through the standard models") {
    GaloisRing R(5, 3, 1);
    CHECK(R.is_zero(j_invariant(R, curve_from_j(R, R.zero()))));
    CHECK(R.eq(j_invariant(R, curve_from_j(R, R.from_int(1728))),
               R.from_int(1728)));
    for (i64 j0 : {1, 2, 7, 49, 101, 1111}) {
        auto j = R.from_int(j0);
        CHECK(R.eq(j_invariant(R, curve_from_j(R, j)), j));
    }

    GaloisRing R2(7, 2, 2);
    std::mt19937_64 rng(3);
    int done = 0;
    while (done < 10) {
        auto j = R2.from_coords(
            {rng() % R2.char_modulus(), rng() % R2.char_modulus()});
        if (!R2.is_unit(j) || !R2.is_unit(R2.sub(j, R2.from_int(1728))))
            continue;
        CHECK(R2.eq(j_invariant(R2, curve_from_j(R2, j)), j));
        ++done;
    }

    CHECK_THROWS_AS(curve_from_j(R, R.from_int(5)), UnsupportedResidue);
    CHECK_THROWS_AS(curve_from_j(R, R.from_int(1728 + 5)), UnsupportedResidue);
    CHECK_THROWS_AS(curve_from_j(GaloisRing(3, 1, 1), GaloisRing(3, 1, 1).one()),
                    UnsupportedCharacteristic);
    // singular model
    CHECK_THROWS_AS(j_invariant(R, WeierstrassCurve{R.zero(), R.zero()}),
                    ValidationFailed);
}

TEST_CASE("twisting preserves j and pairs up the point counts") {
    GaloisRing F(7, 1, 1);
    WeierstrassCurve E{F.from_int(1), F.from_int(3)};
    u64 n = count_points(F, E);
    for (u64 di = 1; di < 7; ++di) {
        auto d = F.from_int(i64(di));
        auto Ed = twisted_curve(F, E, d);
        CHECK(F.eq(j_invariant(F, Ed), j_invariant(F, E)));
        bool square = F.eq(F.pow(d, 3), F.one());
        u64 nd = count_points(F, Ed);
        if (square) CHECK(nd == n);
        else CHECK(nd + n == 2 * F.q() + 2);
    }

    GaloisRing R(5, 3, 2);
    WeierstrassCurve E2{R.from_int(17), R.from_int(30)};
    auto d = R.x_gen();
    CHECK(R.eq(j_invariant(R, twisted_curve(R, E2, d)), j_invariant(R, E2)));
}

TEST_CASE("point counts match a direct sweep") {
    GaloisRing F5(5, 1, 1);
    WeierstrassCurve E{F5.from_int(1), F5.from_int(1)};
    CHECK(count_points(F5, E) == 9);

    GaloisRing F7(7, 1, 1);
    CHECK(count_points(F7, {F7.zero(), F7.one()}) == 12);

    std::mt19937_64 rng(99);
    for (u64 p : {3, 5, 7}) {
        GaloisRing F(p, 1, 2);
        int done = 0;
        while (done < 6) {
            WeierstrassCurve C{F.element_from_index(rng() % F.q()),
                               F.element_from_index(rng() % F.q())};
            if (!F.is_unit(discriminant(F, C))) continue;
            CHECK(count_points(F, C) == naive_count(F, C));
            ++done;
        }
    }
    CHECK_THROWS_AS(count_points(GaloisRing(5, 2, 1), E), PrecisionMismatch);
}

TEST_CASE("ordinarity via the trace") {
    GaloisRing F5(5, 1, 1);
    CHECK(!is_ordinary(F5, {F5.zero(), F5.one()}));          // j = 0 mod 5
    CHECK(is_ordinary(F5, {F5.from_int(1), F5.from_int(1)}));
    GaloisRing F7(7, 1, 1);
    CHECK(is_ordinary(F7, {F7.zero(), F7.one()}));           // 7 = 1 mod 3
    CHECK(!is_ordinary(F7, {F7.one(), F7.zero()}));          // j = 1728 = 6
}

TEST_CASE("division polynomial shape") {
    GaloisRing R5(5, 2, 1), R7(7, 2, 1);
    PolyRing<GaloisRing> P5(R5), P7(R7);
    WeierstrassCurve E5{R5.from_int(3), R5.from_int(8)};
    WeierstrassCurve E7{R7.from_int(12), R7.from_int(5)};
    auto v5 = division_poly_list(R5, E5, 5);
    auto v7 = division_poly_list(R7, E7, 7);
    CHECK(P5.is_zero(v5[0]));
    CHECK(P5.eq(v5[1], P5.one()));
    CHECK(P5.eq(v5[2], P5.one()));
    CHECK(P5.degree(v5[5]) == 12);
    CHECK(R5.eq(P5.coeff(v5[5], 12), R5.from_int(5)));
    CHECK(P7.degree(v7[7]) == 24);
    CHECK(R7.eq(P7.coeff(v7[7], 24), R7.from_int(7)));
}

TEST_CASE("division polynomials track scalar multiplication") {
    std::mt19937_64 rng(20240501);
    struct Cfg { u64 p; unsigned r; int samples; };
    for (Cfg cfg : {Cfg{7, 2, 12}, Cfg{5, 3, 12}}) {
        GaloisRing F(cfg.p, 1, cfg.r);
        PolyRing<GaloisRing> P(F);
        int done = 0;
        while (done < cfg.samples) {
            WeierstrassCurve E{F.element_from_index(rng() % F.q()),
                               F.element_from_index(rng() % F.q())};
            if (!F.is_unit(discriminant(F, E))) continue;
            Pt Q;
            if (!find_point(F, E, rng, Q)) continue;
            auto v = division_poly_list(F, E, 9);
            auto Sx = F.scalar_mul(
                4, F.add(F.mul(Q.x, F.add(F.mul(Q.x, Q.x), E.a)), E.b));
            Pt M = Q;
            for (unsigned m = 2; m <= 8; ++m) {
                M = pt_add(F, E, M, Q);
                auto vm = P.eval(v[m], Q.x);
                auto w = F.mul(P.eval(v[m - 1], Q.x), P.eval(v[m + 1], Q.x));
                if (M.inf) {
                    if (m % 2 == 1) CHECK(F.is_zero(vm));
                    else CHECK((F.is_zero(vm) || F.is_zero(Q.y)));
                    break;
                }
                GaloisRing::Elem den, rhs;
                if (m % 2 == 0) {
                    den = F.mul(Sx, F.mul(vm, vm));
                    rhs = F.sub(F.mul(Q.x, den), w);
                } else {
                    den = F.mul(vm, vm);
                    rhs = F.sub(F.mul(Q.x, den), F.mul(Sx, w));
                }
                CHECK(F.eq(F.mul(M.x, den), rhs));
            }
            ++done;
        }
    }
}

TEST_CASE("canonical subgroup kernels have the distinguished shape") {
    GaloisRing R(5, 3, 1);
    PolyRing<GaloisRing> P(R);
    for (i64 j0 : {1, 2, 7, 49, 101, 1728}) {
        auto D = canonical_subgroup_kernel(R, curve_from_j(R, R.from_int(j0))).d;
        CHECK(P.degree(D) == 2);
        CHECK(P.is_monic(D));
        CHECK(R.val_p(P.coeff(D, 0)) == 1);
        CHECK(R.val_p(P.coeff(D, 1)) >= 1);
    }

    GaloisRing R13(13, 2, 2);
    std::mt19937_64 rng(5);
    GaloisRing F13 = R13.residue_field();
    PolyRing<GaloisRing> P13(R13);
    int done = 0;
    while (done < 3) {
        auto j = R13.from_coords(
            {rng() % R13.char_modulus(), rng() % R13.char_modulus()});
        if (!R13.is_unit(j) || !R13.is_unit(R13.sub(j, R13.from_int(1728))))
            continue;
        if (!is_ordinary_j(F13, R13.reduce_to(j, F13))) continue;
        auto D = canonical_subgroup_kernel(R13, curve_from_j(R13, j)).d;
        CHECK(P13.degree(D) == 6);
        CHECK(P13.is_monic(D));
        CHECK(R13.val_p(P13.coeff(D, 0)) == 1);
        ++done;
    }

    CHECK_THROWS_AS(
        canonical_subgroup_kernel(R, WeierstrassCurve{R.zero(), R.one()}),
        NotOrdinary);
    GaloisRing R7(7, 2, 1);
    CHECK_THROWS_AS(
        canonical_subgroup_kernel(R7, WeierstrassCurve{R7.one(), R7.zero()}),
        NotOrdinary);
    GaloisRing R3(3, 2, 1);
    CHECK_THROWS_AS(
        canonical_subgroup_kernel(R3, WeierstrassCurve{R3.one(), R3.one()}),
        UnsupportedCharacteristic);
}

TEST_CASE("kernel computation commutes with reduction") {
    GaloisRing R4(5, 4, 1), R2(5, 2, 1);
    PolyRing<GaloisRing> P2(R2);
    for (i64 j0 : {1, 2, 101}) {
        auto E4 = curve_from_j(R4, R4.from_int(j0));
        WeierstrassCurve E2{R4.reduce_to(E4.a, R2), R4.reduce_to(E4.b, R2)};
        auto D4 = canonical_subgroup_kernel(R4, E4).d;
        auto D2 = canonical_subgroup_kernel(R2, E2).d;
        GrPoly D4r;
        for (const auto& c : D4) D4r.push_back(R4.reduce_to(c, R2));
        CHECK(P2.eq(P2.normalize(std::move(D4r)), D2));
    }
}

TEST_CASE("quotient curves are p-isogenous at full precision") {
    std::mt19937_64 rng(11);
    struct Cfg { u64 p; unsigned K, r; int n; };
    for (Cfg c : {Cfg{5, 2, 1, 6}, Cfg{5, 3, 2, 4}, Cfg{7, 2, 1, 4},
                  Cfg{13, 2, 1, 2}, Cfg{13, 1, 2, 2}}) {
        GaloisRing R(c.p, c.K, c.r);
        GaloisRing F = R.residue_field();
        PhiTable t = load_phi_table(c.p);
        int done = 0;
        while (done < c.n) {
            std::vector<u64> coords(c.r);
            for (auto& v : coords) v = rng() % R.char_modulus();
            auto j = R.from_coords(coords);
            if (!R.is_unit(j) || !R.is_unit(R.sub(j, R.from_int(1728))))
                continue;
            if (!is_ordinary_j(F, R.reduce_to(j, F))) continue;
            auto E = curve_from_j(R, j);
            auto Eq = kohel_quotient(R, E);
            auto jq = j_invariant(R, Eq);
            CHECK(R.is_zero(phi_eval(t, R, j, jq)));
            CHECK(F.eq(R.reduce_to(jq, F), F.pow(R.reduce_to(j, F), c.p)));
            ++done;
        }
    }
    GaloisRing R5(5, 2, 1);
    CHECK_THROWS_AS(kohel_quotient(R5, WeierstrassCurve{R5.zero(), R5.one()}),
                    NotOrdinary);
}

TEST_CASE("quotient j-invariant is stable under precision change") {
    GaloisRing R3(5, 3, 1), R2(5, 2, 1);
    for (i64 j0 : {1, 2, 101, 1728}) {
        auto E3 = curve_from_j(R3, R3.from_int(j0));
        WeierstrassCurve E2{R3.reduce_to(E3.a, R2), R3.reduce_to(E3.b, R2)};
        auto jq3 = j_invariant(R3, kohel_quotient(R3, E3));
        auto jq2 = j_invariant(R2, kohel_quotient(R2, E2));
        CHECK(R2.eq(jq2, R3.reduce_to(jq3, R2)));
    }
    GaloisRing S3(7, 3, 1), S1(7, 1, 1);
    for (i64 j0 : {2, 3, 10}) {
        auto E3 = curve_from_j(S3, S3.from_int(j0));
        WeierstrassCurve E1{S3.reduce_to(E3.a, S1), S3.reduce_to(E3.b, S1)};
        auto jq3 = j_invariant(S3, kohel_quotient(S3, E3));
        auto jq1 = j_invariant(S1, kohel_quotient(S1, E1));
        CHECK(S1.eq(jq1, S3.reduce_to(jq3, S1)));
    }
}

TEST_CASE("iterated quotients stabilize at a diagonal root") {
    GaloisRing R(5, 2, 1);
    PhiTable t = load_phi_table(5);
    std::map<u64, GaloisRing::Elem> fixed_by_residue;
    for (i64 j0 : {1, 2, 4, 7, 11}) {
        auto j = R.from_int(j0);
        for (int it = 0; it < 8; ++it)
            j = j_invariant(R, kohel_quotient(R, curve_from_j(R, j)));
        auto jn = j_invariant(R, kohel_quotient(R, curve_from_j(R, j)));
        CHECK(R.eq(jn, j));
        CHECK(R.is_zero(phi_eval(t, R, j, j)));
        u64 res = j[0] % 5;
        auto it = fixed_by_residue.find(res);
        if (it == fixed_by_residue.end()) fixed_by_residue.emplace(res, j);
        else CHECK(R.eq(it->second, j));   // limit depends only on the residue
    }
    CHECK(fixed_by_residue.size() == 3);
}
