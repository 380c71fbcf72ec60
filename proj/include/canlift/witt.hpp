#pragma once

#include <memory>
#include <vector>

#include "canlift/galois_ring.hpp"
#include "canlift/mpoly.hpp"
#include "canlift/ring.hpp"

namespace canlift {

inline u64 upow(u64 b, unsigned e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

template <Ring R>
typename R::Elem ring_pow(const R& r, typename R::Elem a, u64 e) {
    typename R::Elem acc = r.one();
    while (e) {
        if (e & 1) acc = r.mul(acc, a);
        if (e >>= 1) a = r.mul(a, a);
    }
    return acc;
}

// Ghost components w_i = sum_{j<=i} p^j x_j^(p^(i-j)); a ring homomorphism
// into R^n for every coefficient ring.
template <Ring R>
std::vector<typename R::Elem> witt_ghost(const R& r, u64 p,
                                         const std::vector<typename R::Elem>& x) {
    std::vector<typename R::Elem> w;
    w.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        typename R::Elem acc = r.zero();
        for (std::size_t j = 0; j <= i; ++j) {
            typename R::Elem term = ring_pow(r, x[j], upow(p, unsigned(i - j)));
            if (j > 0) term = r.mul(r.from_int(i64(upow(p, unsigned(j)))), term);
            acc = r.add(acc, term);
        }
        w.push_back(std::move(acc));
    }
    return w;
}

// Inverse of the ghost map where it is injective.  Solves
// x_i = (g_i - sum_{j<i} p^j x_j^(p^(i-j))) / p^i with certified divisions;
// a failed division means g is not a ghost vector (NonIntegral).
template <PTorsionFreeRing R>
std::vector<typename R::Elem> witt_from_ghost(const R& r, u64 p,
                                              const std::vector<typename R::Elem>& g) {
    std::vector<typename R::Elem> x;
    x.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        typename R::Elem acc = g[i];
        for (std::size_t j = 0; j < i; ++j) {
            typename R::Elem term = ring_pow(r, x[j], upow(p, unsigned(i - j)));
            if (j > 0) term = r.mul(r.from_int(i64(upow(p, unsigned(j)))), term);
            acc = r.sub(acc, term);
        }
        try {
            for (std::size_t e = 0; e < i; ++e) acc = r.exact_div_p(acc);
        } catch (const NotDivisible&) {
            throw NonIntegral("witt_from_ghost: vector not in the ghost image");
        }
        x.push_back(std::move(acc));
    }
    return x;
}

// Universal coordinate polynomials for sum, product, additive inverse and
// Frobenius, solved once over Z by inverting the ghost map.  Index i of a
// binary table reads variables x_0..x_i, y_0..y_i numbered 0..i, i+1..2i+1;
// neg reads x_0..x_i, frob reads x_0..x_(i+1).
struct StructureTable {
    u64 p = 0;
    unsigned n = 0;
    std::vector<MPoly> sum, prod, neg;   // size n
    std::vector<MPoly> frob;             // size n-1

    static unsigned arity(const char* kind, unsigned i);
};

// Build or load the table for (p, n); memoized in-process and, when
// CANLIFT_CACHE is set, on disk.  n is capped (default 5): sizes grow
// superpolynomially.
std::shared_ptr<const StructureTable> structure_polys(u64 p, unsigned n,
                                                      unsigned n_cap = 5);

// Plethysm coordinates: grid[i][k] over Z[x_0..x_(m+n-1)] is inner
// coordinate k of outer coordinate i of the image in W_m(W_n).  The outer
// ghost law w_i(Delta x) = restrict(F^i x, n) pins the map.
std::shared_ptr<const std::vector<std::vector<MPoly>>>
plethysm_polys(u64 p, unsigned m, unsigned n);

// Coordinates of (F(x) - restrict(x)^p) / p over Z[x_0..x_(n-1)]: the
// certified witness that the Frobenius congruence holds in W_(n-1).
std::vector<MPoly> frobenius_congruence_witness(u64 p, unsigned n);

// Witt vectors over one coefficient ring, all operations through the
// structure table.  Vectors of any length up to the table bound mix freely;
// binary operations require equal lengths.
template <Ring R>
class WittOps {
public:
    using Elem = typename R::Elem;
    using Vec = std::vector<Elem>;

    WittOps(const R& ring, u64 p, unsigned n)
        : ring_(&ring), p_(p), n_(n), tab_(structure_polys(p, n)) {
        csum_.reserve(n), cprod_.reserve(n), cneg_.reserve(n);
        for (unsigned i = 0; i < n; ++i) {
            csum_.push_back(CompiledPoly<R>::compile(ring, tab_->sum[i], 2 * (i + 1)));
            cprod_.push_back(CompiledPoly<R>::compile(ring, tab_->prod[i], 2 * (i + 1)));
            cneg_.push_back(CompiledPoly<R>::compile(ring, tab_->neg[i], i + 1));
        }
        cfrob_.reserve(n >= 1 ? n - 1 : 0);
        for (unsigned i = 0; i + 1 < n; ++i)
            cfrob_.push_back(CompiledPoly<R>::compile(ring, tab_->frob[i], i + 2));
    }

    const R& ring() const { return *ring_; }
    u64 p() const { return p_; }
    unsigned max_len() const { return n_; }

    Vec zero(unsigned len) const { return Vec(len, ring_->zero()); }
    Vec teichmuller(const Elem& a, unsigned len) const {
        Vec v = zero(len);
        if (len) v[0] = a;
        return v;
    }
    Vec one(unsigned len) const { return teichmuller(ring_->one(), len); }

    Vec from_int(i64 c, unsigned len) const {
        bool flip = c < 0;
        u64 m = flip ? u64(-(c + 1)) + 1 : u64(c);
        Vec v = scalar_int(m, one(len));
        return flip ? neg(v) : v;
    }

    bool eq(const Vec& a, const Vec& b) const {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!ring_->eq(a[i], b[i])) return false;
        return true;
    }

    Vec add(const Vec& a, const Vec& b) const { return binary(csum_, a, b); }
    Vec mul(const Vec& a, const Vec& b) const { return binary(cprod_, a, b); }

    Vec neg(const Vec& a) const {
        check_len(a.size());
        Vec out;
        out.reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::vector<Elem> args(a.begin(), a.begin() + i + 1);
            out.push_back(cneg_[i].eval(*ring_, args));
        }
        return out;
    }

    Vec sub(const Vec& a, const Vec& b) const { return add(a, neg(b)); }

    // ghost shift: length must be >= 2, output one shorter
    Vec frobenius(const Vec& a) const {
        if (a.size() < 2)
            throw PrecisionMismatch("WittOps::frobenius: need length >= 2");
        check_len(a.size());
        Vec out;
        out.reserve(a.size() - 1);
        for (std::size_t i = 0; i + 1 < a.size(); ++i) {
            std::vector<Elem> args(a.begin(), a.begin() + i + 2);
            out.push_back(cfrob_[i].eval(*ring_, args));
        }
        return out;
    }

    Vec verschiebung(const Vec& a) const {
        Vec out;
        out.reserve(a.size() + 1);
        out.push_back(ring_->zero());
        out.insert(out.end(), a.begin(), a.end());
        return out;
    }

    Vec restrict_to(const Vec& a, unsigned m) const {
        if (m > a.size())
            throw PrecisionMismatch("WittOps::restrict_to: length too short");
        return Vec(a.begin(), a.begin() + m);
    }

    Vec scalar_int(u64 c, const Vec& a) const {
        Vec acc = zero(unsigned(a.size()));
        bool started = false;
        for (int b = 63; b >= 0; --b) {
            if (started) acc = add(acc, acc);
            if ((c >> b) & 1) {
                acc = started ? add(acc, a) : a;
                started = true;
            }
        }
        return acc;
    }

    Vec pow(const Vec& a, u64 e) const {
        Vec acc = one(unsigned(a.size())), b = a;
        while (e) {
            if (e & 1) acc = mul(acc, b);
            if (e >>= 1) b = mul(b, b);
        }
        return acc;
    }

    Vec ghost(const Vec& a) const { return witt_ghost(*ring_, p_, a); }

    Vec from_ghost(const Vec& g) const requires PTorsionFreeRing<R> {
        check_len(g.size());
        return witt_from_ghost(*ring_, p_, g);
    }

private:
    void check_len(std::size_t len) const {
        if (len == 0 || len > n_)
            throw PrecisionMismatch("WittOps: vector length out of range");
    }

    Vec binary(const std::vector<CompiledPoly<R>>& tb, const Vec& a,
               const Vec& b) const {
        if (a.size() != b.size())
            throw PrecisionMismatch("WittOps: operand lengths differ");
        check_len(a.size());
        Vec out;
        out.reserve(a.size());
        std::vector<Elem> args;
        for (std::size_t i = 0; i < a.size(); ++i) {
            args.assign(a.begin(), a.begin() + i + 1);
            args.insert(args.end(), b.begin(), b.begin() + i + 1);
            out.push_back(tb[i].eval(*ring_, args));
        }
        return out;
    }

    const R* ring_;
    u64 p_;
    unsigned n_;
    std::shared_ptr<const StructureTable> tab_;
    std::vector<CompiledPoly<R>> csum_, cprod_, cneg_, cfrob_;
};

// W_n(R) itself as a coefficient ring, so towers W_m(W_n(R)) compose.
template <Ring R>
class WittRingAdapter {
public:
    using Elem = std::vector<typename R::Elem>;
    static constexpr bool p_torsion_free = false;

    WittRingAdapter(const R& base, u64 p, unsigned n) : ops_(base, p, n), n_(n) {}

    const WittOps<R>& ops() const { return ops_; }
    unsigned len() const { return n_; }

    Elem zero() const { return ops_.zero(n_); }
    Elem one() const { return ops_.one(n_); }
    Elem from_int(i64 c) const { return ops_.from_int(c, n_); }
    Elem from_mpz(const mpz_class& c) const {
        bool flip = c < 0;
        mpz_class m = flip ? mpz_class(-c) : c;
        Elem acc = zero();
        bool started = false;
        for (long b = long(mpz_sizeinbase(m.get_mpz_t(), 2)) - 1; b >= 0; --b) {
            if (started) acc = add(acc, acc);
            if (mpz_tstbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(b))) {
                acc = started ? add(acc, one()) : one();
                started = true;
            }
        }
        return flip ? neg(acc) : acc;
    }
    Elem add(const Elem& a, const Elem& b) const { return ops_.add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return ops_.sub(a, b); }
    Elem mul(const Elem& a, const Elem& b) const { return ops_.mul(a, b); }
    Elem neg(const Elem& a) const { return ops_.neg(a); }
    bool eq(const Elem& a, const Elem& b) const { return ops_.eq(a, b); }
    bool is_zero(const Elem& a) const { return ops_.eq(a, ops_.zero(n_)); }

private:
    WittOps<R> ops_;
    unsigned n_;
};

// Evaluate the plethysm grid at concrete coordinates: x of length m+n over
// R maps to m outer coordinates, each a length-n Witt vector over R.
template <Ring R>
std::vector<std::vector<typename R::Elem>>
plethysm_delta(const R& r, u64 p, unsigned m, unsigned n,
               const std::vector<typename R::Elem>& x) {
    if (x.size() != m + n)
        throw PrecisionMismatch("plethysm_delta: need length m+n");
    auto grid = plethysm_polys(p, m, n);
    std::vector<std::vector<typename R::Elem>> out(m);
    for (unsigned i = 0; i < m; ++i) {
        out[i].reserve(n);
        for (unsigned k = 0; k < n; ++k)
            out[i].push_back(mpoly_eval(r, (*grid)[i][k], m + n, x));
    }
    return out;
}

// Digit decomposition GR(p^n, r) -> W_n(F_(p^r)): peel Teichmuller digits
// u = sum p^i [d_i], coordinates x_i = d_i^(p^i).  A ring isomorphism; the
// Galois-ring sigma corresponds to the coordinatewise p-th power and
// multiplication by p to V(F(.)).
std::vector<GaloisRing::Elem> gr_to_witt(const GaloisRing& R,
                                         const GaloisRing::Elem& u);
GaloisRing::Elem witt_to_gr(const GaloisRing& R,
                            const std::vector<GaloisRing::Elem>& x);

}
