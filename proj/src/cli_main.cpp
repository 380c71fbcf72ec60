#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "canlift/cache.hpp"
#include "canlift/canlift.hpp"
#include "canlift/curves.hpp"
#include "canlift/moddata.hpp"
#include "canlift/witt.hpp"
#include "canlift/zring.hpp"

// Output contract: stdout carries one JSON document with a schema version,
// deterministic for fixed inputs, data and cache state; timing alone goes
// to stderr so repeated warm-cache runs stay byte-identical.
// Exit codes: 0 ok, 2 bad user input, 3 data validation, 4 broken internal
// invariant.

namespace {

using json = nlohmann::ordered_json;
using namespace canlift;

constexpr const char* kSchema = "canlift-cli-v1";

json elem_json(const ZRing&, const mpz_class& a) { return a.get_str(); }
json elem_json(const ZpRing&, u64 a) { return std::to_string(a); }
json elem_json(const GaloisRing&, const std::vector<u64>& a) {
    json out = json::array();
    for (u64 d : a) out.push_back(std::to_string(d));
    return out;
}

template <class R>
json vec_json(const R& r, const std::vector<typename R::Elem>& v) {
    json out = json::array();
    for (const auto& e : v) out.push_back(elem_json(r, e));
    return out;
}

json coeff_json(const std::vector<u64>& c) {
    json out = json::array();
    for (u64 v : c) out.push_back(std::to_string(v));
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t from = 0;
    for (;;) {
        std::size_t at = s.find(sep, from);
        parts.push_back(s.substr(from, at - from));
        if (at == std::string::npos) return parts;
        from = at + 1;
    }
}

u64 parse_u64(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw Error("cannot parse '" + s + "' as a nonnegative integer");
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw Error("integer '" + s + "' out of range");
    }
}

mpz_class parse_mpz(const std::string& s) {
    try {
        return mpz_class(s);
    } catch (const std::invalid_argument&) {
        throw Error("cannot parse '" + s + "' as an integer");
    }
}

// one Galois-ring element: colon-separated digits, length r
std::vector<u64> parse_digits(const std::string& s) {
    std::vector<u64> out;
    for (const auto& part : split(s, ':')) out.push_back(parse_u64(part));
    return out;
}

std::vector<mpz_class> parse_vec_z(const std::string& s) {
    std::vector<mpz_class> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_mpz(part));
    return out;
}

std::vector<u64> parse_vec_zp(const ZpRing& Z, const std::string& s) {
    std::vector<u64> out;
    for (const auto& part : split(s, ','))
        out.push_back(Z.from_mpz(parse_mpz(part)));
    return out;
}

std::vector<GaloisRing::Elem> parse_vec_gr(const GaloisRing& R,
                                           const std::string& s) {
    std::vector<GaloisRing::Elem> out;
    for (const auto& part : split(s, ','))
        out.push_back(R.from_coords(parse_digits(part)));
    return out;
}

bool is_prime(u64 p) {
    if (p < 2) return false;
    for (u64 d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::string pretty_poly(const std::vector<u64>& c) {
    std::string s;
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        if (!s.empty()) s += " + ";
        if (i == 0 || c[i] != 1) s += std::to_string(c[i]);
        if (i >= 1) s += "j";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

json cmd_data_validate(u64 p) {
    json payload;
    payload["p"] = p;
    payload["data_dir"] = data_dir();
    PhiTable t = load_phi_table(p);
    payload["phi_degree"] = t.degree();
    payload["checks"] = {"header",  "index-bounds",    "no-duplicates",
                         "monic",   "leading-slice",   "kronecker-mod-p",
                         "cm-values"};
    std::vector<u64> ss = supersingular_poly(p);
    payload["ss_poly"] = {{"coeffs", coeff_json(ss)}, {"pretty", pretty_poly(ss)}};
    return payload;
}

json cmd_data_ss_poly(u64 p) {
    std::vector<u64> ss = supersingular_poly(p);
    json payload;
    payload["p"] = p;
    payload["coeffs"] = coeff_json(ss);
    payload["pretty"] = pretty_poly(ss);
    return payload;
}

template <class R>
json witt_exec(const R& ring, u64 p, unsigned n, unsigned m,
               const std::string& op,
               const std::vector<std::vector<typename R::Elem>>& vs) {
    using Vec = std::vector<typename R::Elem>;
    auto need = [&](std::size_t k) {
        if (vs.size() != k)
            throw Error("witt " + op + ": expected " + std::to_string(k) +
                        " coordinate list(s), got " + std::to_string(vs.size()));
    };
    auto need_len = [&](const Vec& v, unsigned l) {
        if (v.size() != l)
            throw Error("witt " + op + ": expected " + std::to_string(l) +
                        " coordinates, got " + std::to_string(v.size()));
    };
    json out;
    Vec res;
    if (op == "add" || op == "mul") {
        need(2);
        need_len(vs[0], n), need_len(vs[1], n);
        WittOps<R> W(ring, p, n);
        res = op == "add" ? W.add(vs[0], vs[1]) : W.mul(vs[0], vs[1]);
    } else if (op == "frob") {
        need(1);
        need_len(vs[0], n);
        WittOps<R> W(ring, p, n);
        res = W.frobenius(vs[0]);
    } else if (op == "ver") {
        need(1);
        need_len(vs[0], n);
        res = vs[0];
        res.insert(res.begin(), ring.zero());
    } else if (op == "teich") {
        need(1);
        need_len(vs[0], 1);
        res.assign(n, ring.zero());
        res[0] = vs[0][0];
    } else if (op == "ghost") {
        need(1);
        need_len(vs[0], n);
        out["ghost"] = vec_json(ring, witt_ghost(ring, p, vs[0]));
        return out;
    } else if (op == "delta") {
        need(1);
        if (m == 0) throw Error("witt delta: need --m >= 1");
        need_len(vs[0], m + n);
        auto grid = plethysm_delta(ring, p, m, n, vs[0]);
        json g = json::array();
        for (const auto& row : grid) g.push_back(vec_json(ring, row));
        out["grid"] = g;
        return out;
    } else {
        throw Error("witt: unknown operation '" + op + "'");
    }
    out["coords"] = vec_json(ring, res);
    if constexpr (R::p_torsion_free)
        out["ghost"] = vec_json(ring, witt_ghost(ring, p, res));
    return out;
}

json cmd_witt(const std::string& op, u64 p, unsigned n, unsigned m,
              const std::string& ring, unsigned prec, unsigned r,
              const std::vector<std::string>& args) {
    if (!is_prime(p)) throw Error("witt: --p must be prime");
    if (n == 0) throw Error("witt: need --n >= 1");
    json payload;
    payload["p"] = p;
    payload["n"] = n;
    if (op == "delta") payload["m"] = m;
    payload["ring"] = ring;
    json out;
    if (ring == "Z") {
        ZRing R(p);
        std::vector<std::vector<mpz_class>> vs;
        for (const auto& a : args) vs.push_back(parse_vec_z(a));
        out = witt_exec(R, p, n, m, op, vs);
    } else if (ring == "Zp") {
        if (prec == 0) throw Error("witt: ring Zp needs --prec >= 1");
        ZpRing R(p, prec);
        payload["prec"] = prec;
        std::vector<std::vector<u64>> vs;
        for (const auto& a : args) vs.push_back(parse_vec_zp(R, a));
        out = witt_exec(R, p, n, m, op, vs);
    } else if (ring == "GR") {
        if (prec == 0 || r == 0)
            throw Error("witt: ring GR needs --prec >= 1 and --r >= 1");
        GaloisRing R(p, prec, r);
        payload["prec"] = prec;
        payload["r"] = r;
        std::vector<std::vector<GaloisRing::Elem>> vs;
        for (const auto& a : args) vs.push_back(parse_vec_gr(R, a));
        out = witt_exec(R, p, n, m, op, vs);
    } else {
        throw Error("witt: --ring must be Z, Zp or GR");
    }
    payload.update(out);
    return payload;
}

json localized_json(const LocalizedElem& e) {
    return {{"num", coeff_json(e.num)}, {"fExp", e.fExp}, {"auxExp", e.auxExp}};
}

json cmd_universal_psi(u64 p, unsigned K, json& cache) {
    UniversalFrobeniusLift u = universal_psi(p, K);
    LocalizedContext ctx(p, K);
    cache = {{"enabled", cache_dir().has_value()}, {"disk_hit", u.fromDisk}};
    json payload;
    payload["p"] = p;
    payload["prec"] = K;
    payload["f"] = coeff_json(ctx.ss_factor());
    payload.update(localized_json(u.psi));
    return payload;
}

json cmd_universal_coords(u64 p, unsigned n, unsigned K, json& cache) {
    UniversalWittCoords uc = universal_witt_coords(p, n, K);
    LocalizedContext ctx(p, K);
    cache = {{"enabled", cache_dir().has_value()}, {"disk_hit", uc.fromDisk}};
    json payload;
    payload["p"] = p;
    payload["prec"] = K;
    payload["len"] = n;
    payload["f"] = coeff_json(ctx.ss_factor());
    json cs = json::array();
    for (const auto& c : uc.coords) cs.push_back(localized_json(c));
    payload["coords"] = cs;
    return payload;
}

void lift_extras(json& payload, const CanonicalLiftResult& res, bool coords,
                 bool trace) {
    GaloisRing R(res.p, res.K, res.r);
    GaloisRing F(res.p, 1, res.r);
    if (coords) {
        json ws = json::array();
        for (const auto& c : res.wittCoords)
            ws.push_back(elem_json(F, R.reduce_to(c, F)));
        payload["witt_coords"] = ws;
    }
    if (trace) {
        payload["iterations"] = res.iterations;
        payload["step_valuations"] = res.stepValuations;
        payload["psi_fix_valuation"] = res.psiFixValuation;
        payload["phi_fix_valuation"] = res.phiFixValuation;
    }
}

json cmd_lift_j(u64 p, unsigned r, unsigned K, const std::string& jstr,
                bool coords, bool trace) {
    std::vector<u64> jbar = parse_digits(jstr);
    CanonicalLiftResult res = canonical_lift_j(p, r, jbar, K);
    GaloisRing R(p, K, r);
    json payload;
    payload["p"] = p;
    payload["r"] = r;
    payload["prec"] = K;
    payload["jbar"] = coeff_json(jbar);
    payload["jlift"] = elem_json(R, res.jlift);
    lift_extras(payload, res, coords, trace);
    return payload;
}

json cmd_lift_curve(u64 p, unsigned r, unsigned K, const std::string& astr,
                    const std::string& bstr, bool coords, bool trace) {
    GaloisRing F(p, 1, r);
    WeierstrassCurve E{F.from_coords(parse_digits(astr)),
                       F.from_coords(parse_digits(bstr))};
    if (F.is_zero(discriminant(F, E)))
        throw Error("lift curve: the input curve is singular");
    CurveLift lift = canonical_lift_curve(F, E, K);
    GaloisRing R(p, K, r);
    json payload;
    payload["p"] = p;
    payload["r"] = r;
    payload["prec"] = K;
    payload["a"] = elem_json(R, lift.curve.a);
    payload["b"] = elem_json(R, lift.curve.b);
    payload["j"] = elem_json(R, j_invariant(R, lift.curve));
    payload["count"] = std::to_string(count_points(F, E));
    payload["frobenius_trace"] = std::to_string(trace_of_frobenius(F, E));
    lift_extras(payload, lift.base, coords, trace);
    return payload;
}

int run_body(json& doc, const std::function<void()>& body) {
    auto fail = [&](const char* status, const char* what, int code) {
        doc.erase("payload");
        doc.erase("cache");
        doc["status"] = status;
        doc["error"] = what;
        return code;
    };
    try {
        body();
        doc["status"] = "ok";
        return 0;
    } catch (const SupersingularPoint& e) {
        return fail("SupersingularPoint", e.what(), 2);
    } catch (const NotOrdinary& e) {
        return fail("NotOrdinary", e.what(), 2);
    } catch (const UnsupportedResidue& e) {
        return fail("UnsupportedResidue", e.what(), 2);
    } catch (const UnsupportedCharacteristic& e) {
        return fail("UnsupportedCharacteristic", e.what(), 2);
    } catch (const PrecisionBound& e) {
        return fail("PrecisionBound", e.what(), 2);
    } catch (const PrecisionMismatch& e) {
        return fail("PrecisionMismatch", e.what(), 2);
    } catch (const NotCoprime& e) {
        return fail("NotCoprime", e.what(), 2);
    } catch (const MissingData& e) {
        return fail("MissingData", e.what(), 3);
    } catch (const ValidationFailed& e) {
        return fail("ValidationFailed", e.what(), 3);
    } catch (const PathMismatch& e) {
        return fail("PathMismatch", e.what(), 4);
    } catch (const Mismatch& e) {
        return fail("Mismatch", e.what(), 4);
    } catch (const NotDivisible& e) {
        return fail("NotDivisible", e.what(), 4);
    } catch (const NonIntegral& e) {
        return fail("NonIntegral", e.what(), 4);
    } catch (const NotClearable& e) {
        return fail("NotClearable", e.what(), 4);
    } catch (const NormalizationFailed& e) {
        return fail("NormalizationFailed", e.what(), 4);
    } catch (const NoConvergence& e) {
        return fail("NoConvergence", e.what(), 4);
    } catch (const Error& e) {
        return fail("Error", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("Internal", e.what(), 4);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact canonical lifts of ordinary elliptic curves"};
    app.require_subcommand(1);

    u64 p = 0;
    unsigned prec = 0, r = 1, n = 0, m = 0, len = 0;
    std::string ring = "Z", jstr, astr, bstr, outfile;
    bool coords = false, trace = false;
    std::vector<std::string> vecargs;

    CLI::App* data = app.add_subcommand("data", "bundled modular data");
    data->require_subcommand(1);
    CLI::App* dval = data->add_subcommand("validate", "revalidate the data files");
    dval->add_option("--p", p, "prime")->required();
    CLI::App* dss = data->add_subcommand("ss-poly", "supersingular polynomial");
    dss->add_option("--p", p, "prime")->required();

    CLI::App* witt = app.add_subcommand("witt", "Witt vector calculator");
    witt->require_subcommand(1);
    const char* wittops[] = {"add", "mul", "ghost", "frob", "ver", "teich",
                             "delta"};
    std::vector<CLI::App*> wsubs;
    for (const char* op : wittops) {
        CLI::App* s = witt->add_subcommand(op);
        s->add_option("--p", p, "prime")->required();
        s->add_option("--n", n, "vector length")->required();
        if (std::string(op) == "delta")
            s->add_option("--m", m, "outer length")->required();
        s->add_option("--ring", ring, "coefficient ring: Z, Zp or GR")
            ->default_val("Z");
        s->add_option("--prec", prec, "precision K for Zp / GR");
        s->add_option("--r", r, "extension degree for GR");
        s->add_option("vectors", vecargs, "comma-separated coordinates");
        wsubs.push_back(s);
    }

    CLI::App* uni = app.add_subcommand("universal", "universal expressions");
    uni->require_subcommand(1);
    CLI::App* upsi = uni->add_subcommand("psi", "lift of Frobenius on the j-line");
    upsi->add_option("--p", p, "prime")->required();
    upsi->add_option("--prec", prec, "precision K")->required();
    upsi->add_option("--out", outfile, "also write the document to a file");
    CLI::App* ucoords = uni->add_subcommand("coords", "Witt coordinates of the lift");
    ucoords->add_option("--p", p, "prime")->required();
    ucoords->add_option("--prec", prec, "precision K")->required();
    ucoords->add_option("--len", len, "number of coordinates")->required();
    ucoords->add_option("--out", outfile, "also write the document to a file");

    CLI::App* lift = app.add_subcommand("lift", "canonical lifts");
    lift->require_subcommand(1);
    CLI::App* liftj = lift->add_subcommand("j", "lift a j-invariant");
    liftj->add_option("--p", p, "prime")->required();
    liftj->add_option("--r", r, "extension degree")->default_val(1);
    liftj->add_option("--prec", prec, "precision K")->required();
    liftj->add_option("--j", jstr, "residue j-invariant, digits colon-separated")
        ->required();
    liftj->add_flag("--coords", coords, "emit Witt coordinates");
    liftj->add_flag("--trace", trace, "emit iteration trace and certificates");
    CLI::App* liftc = lift->add_subcommand("curve", "lift a Weierstrass curve");
    liftc->add_option("--p", p, "prime")->required();
    liftc->add_option("--r", r, "extension degree")->default_val(1);
    liftc->add_option("--prec", prec, "precision K")->required();
    liftc->add_option("--a", astr, "curve coefficient a")->required();
    liftc->add_option("--b", bstr, "curve coefficient b")->required();
    liftc->add_flag("--coords", coords, "emit Witt coordinates");
    liftc->add_flag("--trace", trace, "emit iteration trace and certificates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    json doc;
    doc["schema"] = kSchema;
    doc["status"] = "";

    std::function<void()> body;
    if (*dval) {
        body = [&] { doc["payload"] = cmd_data_validate(p); };
    } else if (*dss) {
        body = [&] { doc["payload"] = cmd_data_ss_poly(p); };
    } else if (*upsi) {
        body = [&] {
            json cache;
            doc["payload"] = cmd_universal_psi(p, prec, cache);
            doc["cache"] = cache;
        };
    } else if (*ucoords) {
        body = [&] {
            json cache;
            doc["payload"] = cmd_universal_coords(p, len, prec, cache);
            doc["cache"] = cache;
        };
    } else if (*liftj) {
        body = [&] { doc["payload"] = cmd_lift_j(p, r, prec, jstr, coords, trace); };
    } else if (*liftc) {
        body = [&] {
            doc["payload"] = cmd_lift_curve(p, r, prec, astr, bstr, coords, trace);
        };
    } else {
        for (std::size_t i = 0; i < wsubs.size(); ++i)
            if (*wsubs[i]) {
                std::string op = wittops[i];
                body = [&, op] {
                    doc["payload"] = cmd_witt(op, p, n, m, ring, prec, r, vecargs);
                };
            }
    }

    auto t0 = std::chrono::steady_clock::now();
    int code = run_body(doc, body);
    auto t1 = std::chrono::steady_clock::now();

    if (code == 0 && !outfile.empty()) {
        std::ofstream out(outfile);
        out << doc.dump(1) << "\n";
        if (!out.good()) {
            doc.erase("payload");
            doc.erase("cache");
            doc["status"] = "Error";
            doc["error"] = "cannot write output file " + outfile;
            code = 2;
        }
    }

    std::fputs((doc.dump(1) + "\n").c_str(), stdout);
    std::fprintf(stderr, "{\"timing_ms\":%.3f}\n",
                 std::chrono::duration<double, std::milli>(t1 - t0).count());
    return code;
}
