#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "canlift/galois_ring.hpp"
#include "canlift/localized.hpp"

using namespace canlift;
using V = std::vector<u64>;

TEST_CASE("context construction") {
    LocalizedContext C(5, 3);
    CHECK(C.p() == 5);
    CHECK(C.precision() == 3);
    CHECK(C.ss_factor() == V{0, 1});       // j
    CHECK(C.aux_factor().size() == 25);    // degree 24
    CHECK(C.aux_factor().back() == 1);

    CHECK(LocalizedContext(7, 2).ss_factor() == V{1, 1});   // j - 6
    CHECK(LocalizedContext(13, 2).ss_factor() == V{8, 1});  // j - 5

    CHECK_THROWS_AS(LocalizedContext(11, 2), UnsupportedCharacteristic);
    CHECK_THROWS_AS(LocalizedContext(2, 63), PrecisionBound);

    // f h = j^(p^2) - j over F_p
    ZpRing Fp(5, 1);
    PolyRing<ZpRing> P(Fp);
    V split(26, 0);
    split[1] = 4;
    split[25] = 1;
    CHECK(P.eq(P.mul(C.ss_factor(), C.aux_factor()), split));
}

TEST_CASE("arithmetic and cross-multiplied equality") {
    LocalizedContext C(5, 3);
    auto j = C.j_var();

    // j / f is the unit 1 when f = j
    auto a = C.make({0, 1}, 1, 0);
    CHECK(C.eq(a, C.one()));
    auto n = C.normalize(a);
    CHECK(n.num == V{1});
    CHECK(n.fExp == 0);
    CHECK(n.auxExp == 0);

    auto inv_f = C.make({1}, 1, 0);
    CHECK(C.eq(C.add(inv_f, inv_f), C.make({2}, 1, 0)));
    CHECK(C.eq(C.pow(inv_f, 3), C.make({1}, 3, 0)));
    CHECK(C.eq(C.mul(C.pow(inv_f, 3), C.pow(j, 3)), C.one()));

    CHECK(C.is_zero(C.sub(a, C.one())));
    CHECK(C.is_zero(C.add(j, C.neg(j))));
    CHECK_FALSE(C.eq(j, C.one()));

    // mixed h exponents widen correctly
    auto b = C.make({1}, 0, 1);
    auto s = C.add(b, C.one());
    CHECK(s.auxExp == 1);
    CHECK(C.eq(s, C.make(PolyRing<ZpRing>(C.scalar_ring()).add(
                             C.aux_factor(), {1}),
                         0, 1)));
}

TEST_CASE("normalization clears h and trims f") {
    LocalizedContext C(5, 2);
    PolyRing<ZpRing> P(C.scalar_ring());

    // (f^2 h) / (f h) normalizes to f
    auto num = P.mul(P.mul(C.ss_factor(), C.ss_factor()), C.aux_factor());
    auto u = C.make(num, 1, 1);
    auto n = C.normalize(u);
    CHECK(n.num == C.ss_factor());
    CHECK(n.fExp == 0);
    CHECK(n.auxExp == 0);

    // an essential h pole survives normalize but fails certification
    auto e = C.normalize(C.make({0, 1}, 0, 1));
    CHECK(e.auxExp == 1);
    CHECK_THROWS_AS(C.clear_aux(C.make({0, 1}, 0, 1)), NotClearable);
}

TEST_CASE("newton inversion") {
    LocalizedContext C(7, 4);
    PolyRing<ZpRing> P(C.scalar_ring());

    auto u = C.make(P.mul(C.ss_factor(), C.aux_factor()), 0, 0);
    auto z = C.inv(u);
    CHECK(C.eq(C.mul(u, z), C.one()));
    CHECK(z.fExp == 1);
    CHECK(z.auxExp == 1);

    // constants invert to constants
    auto c = C.from_int(3);
    CHECK(C.eq(C.mul(c, C.inv(c)), C.one()));

    // element with denominator exponents already in place
    auto w = C.make({2}, 1, 0);      // 2 / f
    CHECK(C.eq(C.mul(w, C.inv(w)), C.one()));

    // perturbation by p keeps the residue and stays invertible
    auto upert = C.add(u, C.make({7, 7}, 0, 0));
    CHECK(C.eq(C.mul(upert, C.inv(upert)), C.one()));

    CHECK_THROWS_AS(C.inv(C.zero()), NormalizationFailed);
    CHECK_THROWS_AS(C.inv(C.from_int(7)), NormalizationFailed);
    LocalizedContext C5(5, 3);
    CHECK_THROWS_AS(C5.inv(C5.make({2, 1}, 0, 0)), NormalizationFailed);

    // precision 1 needs no refinement
    LocalizedContext C1(13, 1);
    PolyRing<ZpRing> P1(C1.scalar_ring());
    auto u1 = C1.make(P1.mul(C1.ss_factor(), C1.aux_factor()), 0, 0);
    CHECK(C1.eq(C1.mul(u1, C1.inv(u1)), C1.one()));
}

TEST_CASE("division by p moves between precisions") {
    LocalizedContext C(5, 3), D(5, 1);
    auto u = C.make({25, 50}, 1, 0);
    auto v = C.exact_div_p(u, 2, D);
    CHECK(v.num == V{1, 2});
    CHECK(v.fExp == 1);
    CHECK_THROWS_AS(C.exact_div_p(C.make({5, 1}, 0, 0), 1, LocalizedContext(5, 2)),
                    NotDivisible);
    CHECK_THROWS_AS(C.exact_div_p(u, 1, D), PrecisionMismatch);

    LocalizedContext E(5, 2);
    auto r = C.reduce_to(C.make({30, 7}, 2, 1), E);
    CHECK(r.num == V{5, 7});
    CHECK(r.fExp == 2);
    CHECK(r.auxExp == 1);
    auto l = E.lift_to(r, C);
    CHECK(l.num == V{5, 7});
    CHECK_THROWS_AS(E.lift_to(r, D), PrecisionMismatch);
}

TEST_CASE("evaluation at points") {
    LocalizedContext C(5, 2);
    ZpRing S(5, 2);

    // j^2 / f = j when f = j
    auto u = C.make({0, 0, 1}, 1, 0);
    CHECK(C.eval(S, u, S.from_int(7)) == 7);

    // 1 / f at j0 = 2 is the inverse of 2 mod 25
    auto w = C.make({1}, 1, 0);
    CHECK(S.mul(C.eval(S, w, S.from_int(2)), 2) == 1);

    CHECK_THROWS_AS(C.eval(S, w, S.from_int(5)), SupersingularPoint);
    ZpRing S3(5, 3);
    CHECK_THROWS_AS(C.eval(S3, u, S3.from_int(1)), PrecisionMismatch);

    // Galois ring target, reduced precision
    GaloisRing G(5, 2, 2);
    auto j0 = G.add(G.x_gen(), G.from_int(3));
    auto expect = G.add(G.mul(j0, j0), G.scalar_mul(20, j0));  // j0^2 + 20 j0
    auto v = C.make({0, 20, 1}, 0, 0);
    CHECK(C.eval(G, v, j0) == expect);
}
