#include "canlift/mpoly.hpp"

#include <algorithm>
#include <unordered_map>

namespace canlift {

MPolyRing::MPolyRing(u64 p, unsigned nvars) : p_(p), nvars_(nvars) {
    if (p < 2) throw Error("MPolyRing: need p >= 2");
    if (nvars > kMPolyMaxVars)
        throw PrecisionBound("MPolyRing: too many variables");
}

MPolyRing::Elem MPolyRing::from_int(i64 n) const {
    return from_mpz(mpz_class(static_cast<long>(n)));
}

MPolyRing::Elem MPolyRing::from_mpz(const mpz_class& n) const {
    MPoly out;
    if (n != 0) out.t.push_back({MPolyKey{}, n});
    return out;
}

MPolyRing::Elem MPolyRing::variable(unsigned v) const {
    if (v >= nvars_) throw Error("MPolyRing::variable: index out of range");
    MPolyKey k;
    k.e[v] = 1;
    MPoly out;
    out.t.push_back({k, mpz_class(1)});
    return out;
}

MPolyRing::Elem MPolyRing::add(const Elem& a, const Elem& b) const {
    MPoly out;
    out.t.reserve(a.t.size() + b.t.size());
    std::size_t i = 0, j = 0;
    while (i < a.t.size() && j < b.t.size()) {
        if (a.t[i].first < b.t[j].first) {
            out.t.push_back(a.t[i++]);
        } else if (b.t[j].first < a.t[i].first) {
            out.t.push_back(b.t[j++]);
        } else {
            mpz_class c = a.t[i].second + b.t[j].second;
            if (c != 0) out.t.push_back({a.t[i].first, std::move(c)});
            ++i, ++j;
        }
    }
    for (; i < a.t.size(); ++i) out.t.push_back(a.t[i]);
    for (; j < b.t.size(); ++j) out.t.push_back(b.t[j]);
    return out;
}

MPolyRing::Elem MPolyRing::sub(const Elem& a, const Elem& b) const {
    return add(a, neg(b));
}

MPolyRing::Elem MPolyRing::neg(const Elem& a) const {
    MPoly out = a;
    for (auto& [k, c] : out.t) c = -c;
    return out;
}

MPolyRing::Elem MPolyRing::scale(const mpz_class& c, const Elem& a) const {
    if (c == 0) return {};
    MPoly out = a;
    for (auto& [k, v] : out.t) v *= c;
    return out;
}

MPolyRing::Elem MPolyRing::mul(const Elem& a, const Elem& b) const {
    if (a.t.empty() || b.t.empty()) return {};
    const Elem& big = a.t.size() >= b.t.size() ? a : b;
    const Elem& sml = a.t.size() >= b.t.size() ? b : a;
    std::unordered_map<MPolyKey, mpz_class, MPolyKeyHash> acc;
    acc.reserve(big.t.size() * 2);
    MPolyKey k;
    for (const auto& [kb, cb] : sml.t) {
        for (const auto& [ka, ca] : big.t) {
            for (unsigned v = 0; v < kMPolyMaxVars; ++v) {
                unsigned s = unsigned(ka.e[v]) + unsigned(kb.e[v]);
                if (s > 0xffffu) throw Error("MPolyRing::mul: exponent overflow");
                k.e[v] = std::uint16_t(s);
            }
            mpz_class& slot = acc[k];
            mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
        }
    }
    MPoly out;
    out.t.reserve(acc.size());
    for (auto& [key, c] : acc)
        if (c != 0) out.t.push_back({key, std::move(c)});
    std::sort(out.t.begin(), out.t.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

MPolyRing::Elem MPolyRing::pow(const Elem& a, u64 e) const {
    Elem acc = one(), b = a;
    while (e) {
        if (e & 1) acc = mul(acc, b);
        if (e >>= 1) b = mul(b, b);
    }
    return acc;
}

MPolyRing::Elem MPolyRing::exact_div_p(const Elem& a) const {
    mpz_class p(static_cast<unsigned long>(p_));
    MPoly out = a;
    for (auto& [k, c] : out.t) {
        if (!mpz_divisible_p(c.get_mpz_t(), p.get_mpz_t()))
            throw NotDivisible("MPolyRing::exact_div_p: coefficient not divisible");
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t());
    }
    return out;
}

unsigned MPolyRing::degree_in(const Elem& a, unsigned v) const {
    unsigned d = 0;
    for (const auto& [k, c] : a.t) d = std::max(d, unsigned(k.e[v]));
    return d;
}

MPolyRing::Elem MPolyRing::renumber(const Elem& a,
                                    const std::vector<unsigned>& vmap) const {
    MPoly out;
    out.t.reserve(a.t.size());
    for (const auto& [key, c] : a.t) {
        MPolyKey nk;
        for (unsigned v = 0; v < kMPolyMaxVars; ++v) {
            if (key.e[v] == 0) continue;
            if (v >= vmap.size() || vmap[v] >= kMPolyMaxVars)
                throw Error("MPolyRing::renumber: unmapped variable");
            nk.e[vmap[v]] = key.e[v];
        }
        out.t.push_back({nk, c});
    }
    std::sort(out.t.begin(), out.t.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

}
