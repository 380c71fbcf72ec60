#include "canlift/canlift.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"

#include "canlift/cache.hpp"
#include "canlift/moddata.hpp"
#include "canlift/poly.hpp"
#include "canlift/witt.hpp"

namespace canlift {

namespace {

constexpr char kPsiFormat[] = "canlift-psi-v1";

// Phi(j, Y) = sum_k A_k(j) Y^k; rows[k] = A_k as a localized constant
std::vector<LocalizedElem> phi_rows(const LocalizedContext& ctx,
                                    const PhiTable& t) {
    const ZpRing& Z = ctx.scalar_ring();
    unsigned d = t.degree();
    std::vector<LocalizedElem> rows;
    rows.reserve(d + 1);
    for (unsigned k = 0; k <= d; ++k) {
        std::vector<u64> cs(d + 1);
        for (unsigned i = 0; i <= d; ++i) cs[i] = Z.from_mpz(t.coeff(i, k));
        rows.push_back(ctx.make(std::move(cs), 0, 0));
    }
    return rows;
}

// dPhi/dY = sum_k (k+1) A_{k+1} Y^k
std::vector<LocalizedElem> phi_rows_dy(const LocalizedContext& ctx,
                                       const PhiTable& t) {
    const ZpRing& Z = ctx.scalar_ring();
    unsigned d = t.degree();
    std::vector<LocalizedElem> rows;
    rows.reserve(d);
    for (unsigned k = 1; k <= d; ++k) {
        std::vector<u64> cs(d + 1);
        for (unsigned i = 0; i <= d; ++i)
            cs[i] = Z.mul(Z.from_mpz(t.coeff(i, k)), Z.reduce_from(k));
        rows.push_back(ctx.make(std::move(cs), 0, 0));
    }
    return rows;
}

LocalizedElem eval_rows(const LocalizedContext& ctx,
                        const std::vector<LocalizedElem>& rows,
                        const LocalizedElem& y) {
    LocalizedElem acc = ctx.zero();
    for (std::size_t k = rows.size(); k-- > 0;)
        acc = ctx.add(ctx.mul(acc, y), rows[k]);
    return acc;
}

// square-and-multiply with normalization after every product; powers of
// localized inverses have minimal representations far smaller than the raw
// products, so this keeps intermediate degrees down
LocalizedElem npow(const LocalizedContext& ctx, const LocalizedElem& a,
                   u64 e) {
    LocalizedElem acc = ctx.one();
    LocalizedElem b = a;
    while (e) {
        if (e & 1) acc = ctx.normalize(ctx.mul(acc, b));
        e >>= 1;
        if (e) b = ctx.normalize(ctx.mul(b, b));
    }
    return acc;
}

// One Newton update per precision doubling, with a coupled inverse of the
// Y-derivative refined alongside.  Entering a step, Y matches the lift mod
// p^k and z inverts the derivative mod p^k; after it both hold mod p^k',
// k' <= 2k.  clear_aux is guaranteed to succeed because the update equals
// the lift exactly at the new precision.
LocalizedElem compute_psi(u64 p, unsigned K, const PhiTable& t) {
    std::vector<unsigned> ladder{1};
    while (ladder.back() < K)
        ladder.push_back(std::min(ladder.back() * 2, K));

    LocalizedContext cur(p, 1);
    LocalizedElem Y = cur.pow(cur.j_var(), p);
    LocalizedElem z = cur.inv(eval_rows(cur, phi_rows_dy(cur, t), Y));

    for (std::size_t s = 1; s < ladder.size(); ++s) {
        LocalizedContext nxt(p, ladder[s]);
        Y = cur.lift_to(Y, nxt);
        z = cur.lift_to(z, nxt);
        LocalizedElem val = eval_rows(nxt, phi_rows(nxt, t), Y);
        Y = nxt.clear_aux(nxt.sub(Y, nxt.mul(val, z)));
        if (s + 1 < ladder.size()) {
            LocalizedElem dval = eval_rows(nxt, phi_rows_dy(nxt, t), Y);
            z = nxt.normalize(nxt.mul(
                z, nxt.sub(nxt.from_int(2), nxt.mul(dval, z))));
        }
        cur = nxt;
    }
    return Y;
}

bool psi_valid(const LocalizedContext& ctx, const PhiTable& t,
               const LocalizedElem& psi) {
    if (psi.auxExp != 0) return false;
    LocalizedContext c1(ctx.p(), 1);
    if (!c1.eq(ctx.reduce_to(psi, c1), c1.pow(c1.j_var(), ctx.p())))
        return false;
    return ctx.is_zero(eval_rows(ctx, phi_rows(ctx, t), psi));
}

std::string serialize_psi(const LocalizedContext& ctx,
                          const LocalizedElem& psi) {
    nlohmann::ordered_json doc;
    doc["format"] = kPsiFormat;
    doc["p"] = ctx.p();
    doc["K"] = ctx.precision();
    doc["f"] = ctx.ss_factor();
    doc["h"] = ctx.aux_factor();
    doc["fExp"] = psi.fExp;
    auto arr = nlohmann::ordered_json::array();
    for (u64 c : psi.num) arr.push_back(std::to_string(c));
    doc["num"] = std::move(arr);
    return doc.dump(1) + "\n";
}

// any anomaly, parse failure, or identity failure rejects the file and
// triggers a rebuild
std::optional<LocalizedElem> load_psi_file(const std::string& path,
                                           const LocalizedContext& ctx,
                                           const PhiTable& t) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        nlohmann::json doc = nlohmann::json::parse(in);
        if (doc.at("format").get<std::string>() != kPsiFormat)
            return std::nullopt;
        if (doc.at("p").get<u64>() != ctx.p()) return std::nullopt;
        if (doc.at("K").get<unsigned>() != ctx.precision())
            return std::nullopt;
        if (doc.at("f").get<std::vector<u64>>() != ctx.ss_factor())
            return std::nullopt;
        if (doc.at("h").get<std::vector<u64>>() != ctx.aux_factor())
            return std::nullopt;
        unsigned fe = doc.at("fExp").get<unsigned>();
        std::vector<u64> num;
        for (const auto& item : doc.at("num")) {
            const std::string& s = item.get_ref<const std::string&>();
            if (s.empty() || s.size() > 19 ||
                s.find_first_not_of("0123456789") != std::string::npos)
                return std::nullopt;
            u64 v = std::stoull(s);
            if (v >= ctx.scalar_ring().modulus()) return std::nullopt;
            num.push_back(v);
        }
        LocalizedElem psi = ctx.make(std::move(num), fe, 0);
        if (!psi_valid(ctx, t, psi)) return std::nullopt;
        return psi;
    } catch (...) {
        return std::nullopt;
    }
}

// Horner evaluation of a plain coefficient vector at a localized point
LocalizedElem eval_coeffs_at(const LocalizedContext& ctx,
                             const std::vector<u64>& cs,
                             const LocalizedElem& g) {
    LocalizedElem acc = ctx.zero();
    for (std::size_t i = cs.size(); i-- > 0;)
        acc = ctx.add(ctx.mul(acc, g), ctx.constant(cs[i]));
    return acc;
}

}  // namespace

unsigned psi_precision_cap(u64 p) { return p <= 7 ? 8 : 4; }

UniversalFrobeniusLift universal_psi(u64 p, unsigned K, unsigned K_cap) {
    if (K == 0) throw Error("universal_psi: precision must be at least 1");
    unsigned cap = K_cap ? K_cap : psi_precision_cap(p);
    if (K > cap)
        throw PrecisionBound("universal_psi: precision above the configured cap");
    LocalizedContext ctx(p, K);

    static std::mutex mu;
    static std::map<std::pair<u64, unsigned>,
                    std::pair<LocalizedElem, bool>> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find({p, K});
        if (it != memo.end())
            return {p, K, it->second.first, it->second.second};
    }

    PhiTable t = load_phi_table(p);
    std::optional<std::string> path;
    if (auto dir = cache_dir())
        path = *dir + "/psi_" + std::to_string(p) + "_" + std::to_string(K) +
               ".json";

    std::optional<LocalizedElem> psi;
    if (path) psi = load_psi_file(*path, ctx, t);
    bool fromDisk = psi.has_value();
    if (!psi) {
        psi = compute_psi(p, K, t);
        if (!psi_valid(ctx, t, *psi))
            throw NormalizationFailed(
                "universal_psi: lift fails the modular-equation identity");
        if (path) write_cache_file(*path, serialize_psi(ctx, *psi));
    }

    std::lock_guard<std::mutex> lk(mu);
    memo.emplace(std::pair<u64, unsigned>{p, K},
                 std::pair<LocalizedElem, bool>{*psi, fromDisk});
    return {p, K, *psi, fromDisk};
}

LocalizedElem localized_compose(const LocalizedContext& ctx,
                                const LocalizedElem& a,
                                const LocalizedElem& g) {
    LocalizedElem u = ctx.clear_aux(a);
    LocalizedElem acc = ctx.normalize(eval_coeffs_at(ctx, u.num, g));
    if (u.fExp) {
        LocalizedElem fg = eval_coeffs_at(ctx, ctx.ss_factor(), g);
        acc = ctx.normalize(ctx.mul(acc, npow(ctx, ctx.inv(fg), u.fExp)));
    }
    return acc;
}

LocalizedElem localized_derivative(const LocalizedContext& ctx,
                                   const LocalizedElem& a) {
    PolyRing<ZpRing> P(ctx.scalar_ring());
    const std::vector<u64>& f = ctx.ss_factor();
    const std::vector<u64>& h = ctx.aux_factor();
    // d(N / (f^A h^B)) = (N' f h - A N f' h - B N h' f) / (f^(A+1) h^(B+1))
    std::vector<u64> t = P.mul(P.mul(P.derivative(a.num), f), h);
    if (a.fExp) {
        u64 c = ctx.scalar_ring().reduce_from(a.fExp);
        t = P.sub(t, P.scale(c, P.mul(P.mul(a.num, P.derivative(f)), h)));
    }
    if (a.auxExp) {
        u64 c = ctx.scalar_ring().reduce_from(a.auxExp);
        t = P.sub(t, P.scale(c, P.mul(P.mul(a.num, P.derivative(h)), f)));
    }
    return ctx.normalize(ctx.make(std::move(t), a.fExp + 1, a.auxExp + 1));
}

LocalizedElem psi_iterate(const UniversalFrobeniusLift& u, unsigned m) {
    LocalizedContext ctx(u.p, u.K);
    LocalizedElem it = ctx.j_var();
    for (unsigned s = 0; s < m; ++s)
        it = localized_compose(ctx, u.psi, it);
    return it;
}

UniversalWittCoords universal_witt_coords(u64 p, unsigned n, unsigned K,
                                          unsigned n_cap) {
    if (n == 0 || K == 0)
        throw Error("universal_witt_coords: need n >= 1 and K >= 1");
    if (n > n_cap)
        throw PrecisionBound("universal_witt_coords: length above the cap");
    unsigned G = K + n;
    UniversalFrobeniusLift psi = universal_psi(p, G, G);
    LocalizedContext ctxG(p, G);

    // coords[m] lives at precision G - m until emission
    std::vector<LocalizedContext> ctxs;
    ctxs.reserve(n);
    for (unsigned m = 0; m < n; ++m) ctxs.emplace_back(p, G - m);

    std::vector<LocalizedElem> coords;
    coords.reserve(n);
    coords.push_back(ctxG.j_var());
    LocalizedElem iter = ctxG.j_var();
    for (unsigned m = 1; m < n; ++m) {
        iter = localized_compose(ctxG, psi.psi, iter);
        LocalizedElem acc = iter;
        for (unsigned i = 0; i < m; ++i) {
            // the p^i prefactor makes the value independent of the lift
            LocalizedElem x = ctxs[i].lift_to(coords[i], ctxG);
            LocalizedElem term = npow(ctxG, x, upow(p, m - i));
            acc = ctxG.sub(acc, ctxG.mul(ctxG.constant(upow(p, i)), term));
        }
        coords.push_back(ctxG.exact_div_p(acc, m, ctxs[m]));
    }

    LocalizedContext ctxK(p, K);
    UniversalWittCoords out{p, K, {}, psi.fromDisk};
    out.coords.reserve(n);
    for (unsigned m = 0; m < n; ++m)
        out.coords.push_back(
            ctxK.normalize(ctxs[m].reduce_to(coords[m], ctxK)));
    return out;
}

CanonicalLiftResult canonical_lift_j(u64 p, unsigned r,
                                     const std::vector<u64>& jbar,
                                     unsigned K) {
    if (K == 0 || r == 0)
        throw Error("canonical_lift_j: need K >= 1 and r >= 1");
    GaloisRing F(p, 1, r);
    GaloisRing::Elem jb = F.from_coords(jbar);
    if (!is_ordinary_j(F, jb))
        throw SupersingularPoint("canonical_lift_j: j is supersingular");

    GaloisRing Rg(p, K + 1, r);  // one guard level
    UniversalFrobeniusLift psi = universal_psi(p, K + 1, K + 1);
    LocalizedContext ctx(p, K + 1);

    GaloisRing::Elem a = Rg.teichmuller(F.lift_into(jb, Rg));
    std::vector<unsigned> steps;
    unsigned iterations = 0;
    for (;;) {
        GaloisRing::Elem next = Rg.frobenius_inv(ctx.eval(Rg, psi.psi, a));
        unsigned v = Rg.val_p(Rg.sub(next, a));
        steps.push_back(v);
        ++iterations;
        a = std::move(next);
        if (v >= K) break;
        if (iterations >= K + 8)
            throw NoConvergence("canonical_lift_j: no stabilization within the step cap");
    }

    GaloisRing::Elem sig = Rg.frobenius(a);
    unsigned v1 = Rg.val_p(Rg.sub(ctx.eval(Rg, psi.psi, a), sig));
    PhiTable t = load_phi_table(p);
    unsigned v2 = Rg.val_p(phi_eval(t, Rg, a, sig));
    if (v1 < K || v2 < K)
        throw ValidationFailed("canonical_lift_j: fixed-point certificate failed");

    GaloisRing R(p, K, r);
    GaloisRing::Elem jl = Rg.reduce_to(a, R);
    std::vector<GaloisRing::Elem> wc = gr_to_witt(R, jl);
    return {p, r, K, std::move(jl), std::move(wc), v1, v2, iterations,
            std::move(steps)};
}

std::vector<GaloisRing::Elem> canonical_lift_witt_coords(
    u64 p, unsigned r, const std::vector<u64>& jbar, unsigned n) {
    CanonicalLiftResult lift = canonical_lift_j(p, r, jbar, n);

    GaloisRing F(p, 1, r);
    GaloisRing::Elem jb = F.from_coords(jbar);
    UniversalWittCoords uc = universal_witt_coords(p, n, 1);
    LocalizedContext c1(p, 1);
    std::vector<GaloisRing::Elem> direct;
    direct.reserve(n);
    for (unsigned i = 0; i < n; ++i)
        direct.push_back(c1.eval(F, uc.coords[i], jb));

    for (unsigned i = 0; i < n; ++i)
        if (!F.eq(direct[i], lift.wittCoords[i]))
            throw PathMismatch(
                "canonical_lift_witt_coords: universal evaluation disagrees "
                "with the digit decomposition");
    return direct;
}

u64 canonical_lift_j_newton(u64 p, u64 jbar, unsigned K) {
    if (K == 0) throw Error("canonical_lift_j_newton: need K >= 1");
    GaloisRing F(p, 1, 1);
    if (!is_ordinary_j(F, F.from_int(i64(jbar % p))))
        throw SupersingularPoint("canonical_lift_j_newton: j is supersingular");

    UniversalFrobeniusLift psi = universal_psi(p, K, K);
    LocalizedContext ctx(p, K);
    LocalizedElem dpsi = localized_derivative(ctx, psi.psi);
    ZpRing Z(p, K);

    u64 x = Z.teichmuller(Z.reduce_from(jbar));
    for (unsigned it = 0; it < K + 8; ++it) {
        u64 tx = Z.sub(ctx.eval(Z, psi.psi, x), x);
        if (Z.is_zero(tx)) return x;
        u64 td = Z.sub(ctx.eval(Z, dpsi, x), Z.one());
        x = Z.sub(x, Z.mul(tx, Z.inv(td)));
    }
    throw NoConvergence("canonical_lift_j_newton: no fixed point within the step cap");
}

GaloisRing::Elem canonical_lift_j_kohel(u64 p, unsigned r,
                                        const std::vector<u64>& jbar,
                                        unsigned K) {
    if (p < 5)
        throw UnsupportedResidue("canonical_lift_j_kohel: needs p >= 5");
    if (K == 0 || r == 0)
        throw Error("canonical_lift_j_kohel: need K >= 1 and r >= 1");
    GaloisRing F(p, 1, r);
    GaloisRing::Elem jb = F.from_coords(jbar);
    if (!is_ordinary_j(F, jb))
        throw SupersingularPoint("canonical_lift_j_kohel: j is supersingular");
    if (F.is_zero(jb) || F.eq(jb, F.from_int(1728)))
        throw UnsupportedResidue(
            "canonical_lift_j_kohel: extra automorphisms at j = 0 and 1728");

    GaloisRing R(p, K, r);
    WeierstrassCurve E = curve_from_j(R, R.teichmuller(F.lift_into(jb, R)));
    GaloisRing::Elem prev = j_invariant(R, E);
    for (unsigned block = 0; block < K + 8; ++block) {
        for (unsigned s = 0; s < r; ++s) E = kohel_quotient(R, E);
        GaloisRing::Elem curj = j_invariant(R, E);
        if (R.eq(curj, prev)) return curj;
        prev = std::move(curj);
    }
    throw NoConvergence("canonical_lift_j_kohel: no stabilization within the block cap");
}

CurveLift canonical_lift_curve(const GaloisRing& field,
                               const WeierstrassCurve& E, unsigned K) {
    if (field.precision() != 1)
        throw Error("canonical_lift_curve: the input curve must live over a field");
    if (field.p() < 5)
        throw UnsupportedResidue("canonical_lift_curve: needs p >= 5");
    if (!is_ordinary(field, E))
        throw NotOrdinary("canonical_lift_curve: the curve is supersingular");

    GaloisRing::Elem jb = j_invariant(field, E);
    CanonicalLiftResult base =
        canonical_lift_j(field.p(), field.ext_degree(), jb, K);
    GaloisRing R(field.p(), K, field.ext_degree());
    u64 target = count_points(field, E);
    u64 q = field.q();

    WeierstrassCurve out;
    if (R.is_zero(base.jlift) || R.eq(base.jlift, R.from_int(1728))) {
        // complex multiplication: the lift is an exact CM model, found among
        // the twists y^2 = x^3 + d resp. x^3 + d x by matching point counts
        bool cube = R.is_zero(base.jlift);
        bool found = false;
        for (u64 idx = 1; idx < q && !found; ++idx) {
            GaloisRing::Elem d = field.element_from_index(idx);
            WeierstrassCurve cand{cube ? field.zero() : d,
                                  cube ? d : field.zero()};
            if (count_points(field, cand) == target) {
                GaloisRing::Elem dl = R.teichmuller(field.lift_into(d, R));
                out = cube ? WeierstrassCurve{R.zero(), dl}
                           : WeierstrassCurve{dl, R.zero()};
                found = true;
            }
        }
        if (!found)
            throw ValidationFailed("canonical_lift_curve: no twist matches the point count");
    } else {
        out = curve_from_j(R, base.jlift);
        WeierstrassCurve red{R.reduce_to(out.a, field),
                             R.reduce_to(out.b, field)};
        if (count_points(field, red) != target) {
            // quadratic twist by a lifted non-square swaps the trace sign
            GaloisRing::Elem ns = field.zero();
            for (u64 idx = 1; idx < q; ++idx) {
                GaloisRing::Elem u = field.element_from_index(idx);
                if (!field.eq(field.pow(u, (q - 1) / 2), field.one())) {
                    ns = u;
                    break;
                }
            }
            out = twisted_curve(R, out, R.teichmuller(field.lift_into(ns, R)));
        }
    }

    WeierstrassCurve red{R.reduce_to(out.a, field), R.reduce_to(out.b, field)};
    if (count_points(field, red) != target ||
        !field.eq(j_invariant(field, red), jb))
        throw ValidationFailed(
            "canonical_lift_curve: reduction is not a model of the input curve");
    return {std::move(out), std::move(base)};
}

void double_lift_check(u64 p, unsigned r, const std::vector<u64>& jbar,
                       unsigned m, unsigned n) {
    if (m == 0 || n == 0)
        throw Error("double_lift_check: need m >= 1 and n >= 1");
    GaloisRing F(p, 1, r);

    // outer route: full coordinates, then the composition map down to
    // W_m(W_n(F_q))
    std::vector<GaloisRing::Elem> u =
        canonical_lift_witt_coords(p, r, jbar, m + n);
    std::vector<std::vector<GaloisRing::Elem>> grid =
        plethysm_delta(F, p, m, n, u);

    // inner route: universal coordinates of length m evaluated at the
    // precision-n lift, then digit decomposition of each entry
    CanonicalLiftResult lift = canonical_lift_j(p, r, jbar, n);
    UniversalWittCoords uc = universal_witt_coords(p, m, n);
    GaloisRing Rn(p, n, r);
    LocalizedContext ctxn(p, n);
    for (unsigned i = 0; i < m; ++i) {
        GaloisRing::Elem ci = ctxn.eval(Rn, uc.coords[i], lift.jlift);
        std::vector<GaloisRing::Elem> digits = gr_to_witt(Rn, ci);
        for (unsigned k = 0; k < n; ++k)
            if (!F.eq(digits[k], grid[i][k]))
                throw Mismatch("double_lift_check: the two routes disagree");
    }
}

std::vector<GaloisRing::Elem> ghost_report(const GaloisRing& R,
                                           const GaloisRing::Elem& j0,
                                           unsigned n) {
    if (n == 0) throw Error("ghost_report: need n >= 1");
    GaloisRing F(R.p(), 1, R.ext_degree());
    if (!is_ordinary_j(F, R.reduce_to(j0, F)))
        throw SupersingularPoint("ghost_report: j has supersingular reduction");
    UniversalFrobeniusLift psi =
        universal_psi(R.p(), R.precision(), R.precision());
    LocalizedContext ctx(R.p(), R.precision());
    std::vector<GaloisRing::Elem> out;
    out.reserve(n);
    out.push_back(j0);
    for (unsigned s = 1; s < n; ++s)
        out.push_back(ctx.eval(R, psi.psi, out.back()));
    return out;
}

std::vector<GaloisRing::Elem> ghost_report_curve(const GaloisRing& R,
                                                 const WeierstrassCurve& E,
                                                 unsigned n) {
    if (R.p() < 5)
        throw UnsupportedResidue("ghost_report_curve: needs p >= 5");
    std::vector<GaloisRing::Elem> out = ghost_report(R, j_invariant(R, E), n);
    WeierstrassCurve C = E;
    for (unsigned s = 1; s < n; ++s) {
        C = kohel_quotient(R, C);
        if (!R.eq(j_invariant(R, C), out[s]))
            throw PathMismatch(
                "ghost_report_curve: quotient j-invariant disagrees with the "
                "universal lift");
    }
    return out;
}

}
