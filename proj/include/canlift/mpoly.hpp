#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>
#include <gmpxx.h>

#include "canlift/errors.hpp"
#include "canlift/ring.hpp"
#include "canlift/zmod.hpp"

namespace canlift {

// Sparse multivariate polynomials over Z.  Carrier of the universal Witt
// structure polynomials, so correctness beats generality: at most 12
// variables, exponents below 2^16, lexicographic term order.
inline constexpr unsigned kMPolyMaxVars = 12;

struct MPolyKey {
    std::array<std::uint16_t, kMPolyMaxVars> e{};

    friend bool operator==(const MPolyKey&, const MPolyKey&) = default;
    friend auto operator<=>(const MPolyKey&, const MPolyKey&) = default;
};

struct MPolyKeyHash {
    std::size_t operator()(const MPolyKey& k) const {
        u64 w[3];
        std::memcpy(w, k.e.data(), sizeof w);
        u64 h = 1469598103934665603ull;
        for (u64 x : w) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return std::size_t(h);
    }
};

// Terms sorted by key, coefficients nonzero; the zero polynomial is empty.
struct MPoly {
    std::vector<std::pair<MPolyKey, mpz_class>> t;

    std::size_t terms() const { return t.size(); }
};

class MPolyRing {
public:
    using Elem = MPoly;
    static constexpr bool p_torsion_free = true;

    MPolyRing(u64 p, unsigned nvars);

    u64 p() const { return p_; }
    unsigned nvars() const { return nvars_; }

    Elem zero() const { return {}; }
    Elem one() const { return from_int(1); }
    Elem from_int(i64 n) const;
    Elem from_mpz(const mpz_class& n) const;
    Elem variable(unsigned v) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem scale(const mpz_class& c, const Elem& a) const;
    Elem pow(const Elem& a, u64 e) const;
    bool eq(const Elem& a, const Elem& b) const { return a.t == b.t; }
    bool is_zero(const Elem& a) const { return a.t.empty(); }

    Elem exact_div_p(const Elem& a) const;

    unsigned degree_in(const Elem& a, unsigned v) const;
    // variable v of a becomes variable vmap[v]
    Elem renumber(const Elem& a, const std::vector<unsigned>& vmap) const;

private:
    u64 p_;
    unsigned nvars_;
};

// One term with the coefficient already pushed into R; a table of these
// evaluates a fixed MPoly at many argument tuples without re-reducing.
template <Ring R>
struct CompiledPoly {
    struct Term {
        typename R::Elem c;
        MPolyKey e;
    };
    std::vector<Term> terms;
    std::array<std::uint16_t, kMPolyMaxVars> maxexp{};
    unsigned arity = 0;

    static CompiledPoly compile(const R& r, const MPoly& a, unsigned arity) {
        CompiledPoly out;
        out.arity = arity;
        out.terms.reserve(a.t.size());
        for (const auto& [key, coeff] : a.t) {
            for (unsigned v = arity; v < kMPolyMaxVars; ++v)
                if (key.e[v] != 0)
                    throw Error("CompiledPoly: term exceeds declared arity");
            for (unsigned v = 0; v < arity; ++v)
                if (key.e[v] > out.maxexp[v]) out.maxexp[v] = key.e[v];
            out.terms.push_back({r.from_mpz(coeff), key});
        }
        return out;
    }

    typename R::Elem eval(const R& r,
                          const std::vector<typename R::Elem>& args) const {
        if (args.size() != arity)
            throw Error("CompiledPoly::eval: argument count mismatch");
        // power tables per variable, built by successive multiplication
        std::vector<std::vector<typename R::Elem>> pw(arity);
        for (unsigned v = 0; v < arity; ++v) {
            pw[v].reserve(maxexp[v] + 1);
            pw[v].push_back(r.one());
            for (unsigned e = 1; e <= maxexp[v]; ++e)
                pw[v].push_back(r.mul(pw[v].back(), args[v]));
        }
        typename R::Elem acc = r.zero();
        for (const auto& term : terms) {
            typename R::Elem m = term.c;
            for (unsigned v = 0; v < arity; ++v)
                if (term.e.e[v] != 0) m = r.mul(m, pw[v][term.e.e[v]]);
            acc = r.add(acc, m);
        }
        return acc;
    }
};

// One-shot evaluation (compile + eval); prefer CompiledPoly in loops.
template <Ring R>
typename R::Elem mpoly_eval(const R& r, const MPoly& a, unsigned arity,
                            const std::vector<typename R::Elem>& args) {
    return CompiledPoly<R>::compile(r, a, arity).eval(r, args);
}

}
