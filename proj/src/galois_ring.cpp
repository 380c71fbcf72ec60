#include "canlift/galois_ring.hpp"

#include <algorithm>

namespace canlift {

namespace {

// dense F_p[x] helpers for the modulus search, low degree first
using Fp = std::vector<u64>;

Fp trim(Fp a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Fp pmul(const ZpRing& F, const Fp& a, const Fp& b) {
    if (a.empty() || b.empty()) return {};
    Fp out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (size_t j = 0; j < b.size(); ++j)
                out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    return trim(std::move(out));
}

Fp psub(const ZpRing& F, Fp a, const Fp& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
    return trim(std::move(a));
}

// remainder of a by f, f with unit leading coefficient
Fp pmod(const ZpRing& F, Fp a, const Fp& f) {
    u64 lcinv = F.inv(f.back());
    while (a.size() >= f.size()) {
        u64 c = F.mul(a.back(), lcinv);
        size_t off = a.size() - f.size();
        if (c)
            for (size_t j = 0; j < f.size(); ++j)
                a[off + j] = F.sub(a[off + j], F.mul(c, f[j]));
        a.pop_back();
        a = trim(std::move(a));
        if (a.empty()) break;
    }
    return a;
}

Fp ppowmod(const ZpRing& F, Fp base, u64 e, const Fp& f) {
    Fp acc = {1};
    base = pmod(F, std::move(base), f);
    while (e) {
        if (e & 1) acc = pmod(F, pmul(F, acc, base), f);
        base = pmod(F, pmul(F, base, base), f);
        e >>= 1;
    }
    return acc;
}

Fp pgcd(const ZpRing& F, Fp a, Fp b) {
    while (!b.empty()) {
        Fp r = pmod(F, std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool is_prime_u(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Rabin test: f monic of degree r is irreducible over F_p
bool irreducible(const ZpRing& F, const Fp& f, unsigned r) {
    Fp x = {0, 1};
    Fp t = x;
    for (unsigned i = 1; i <= r; ++i) {
        t = ppowmod(F, std::move(t), F.p(), f);
        if (i < r && r % i == 0 && is_prime_u(r / i)) {
            Fp g = pgcd(F, psub(F, t, x), f);
            if (g.size() != 1) return false;
        }
    }
    return trim(psub(F, t, x)).empty();
}

}  // namespace

GaloisRing::GaloisRing(const ZpRing& zp, unsigned r, std::vector<u64> m, raw_tag)
    : zp_(zp), r_(r), m_(std::move(m)) {
    q_ = 1;
    const u64 cap = u64(1) << 62;
    for (unsigned i = 0; i < r_; ++i) {
        if (q_ >= cap / zp_.p())
            throw PrecisionBound("GaloisRing: p^r exceeds 2^62");
        q_ *= zp_.p();
    }
}

GaloisRing::GaloisRing(u64 p, unsigned K, unsigned r) : GaloisRing(build(p, K, r)) {}

GaloisRing GaloisRing::build(u64 p, unsigned K, unsigned r) {
    if (r == 0) throw Error("GaloisRing: extension degree must be >= 1");
    ZpRing zp(p, K);
    if (r == 1) {
        GaloisRing R(zp, 1, {zp.neg(zp.one()), 1}, raw_tag{});   // x - 1
        R.finish_canonical();
        return R;
    }

    // lexicographically least monic irreducible of degree r over F_p
    ZpRing fp(p, 1);
    std::vector<u64> mu;
    u64 count = 1;
    for (unsigned i = 0; i < r; ++i) count *= p;
    for (u64 n = 0; n < count; ++n) {
        Fp cand(r + 1, 0);
        cand[r] = 1;
        u64 v = n;
        for (unsigned i = 0; i < r; ++i) { cand[i] = v % p; v /= p; }
        if (irreducible(fp, cand, r)) { mu = cand; break; }
    }
    if (mu.empty()) throw Error("GaloisRing: no irreducible found");

    // provisional ring with the naive lift of mu, good enough for products
    GaloisRing naive(zp, r, mu, raw_tag{});

    // Teichmuller unit over the residue class of x
    Elem t = naive.x_gen();
    for (unsigned i = 0; i + 1 < K; ++i) t = naive.pow(t, naive.q_);
    if (!naive.eq(naive.pow(t, naive.q_), t))
        throw ValidationFailed("GaloisRing: Teichmuller iteration did not stabilize");

    // canonical modulus = prod over conjugates (x - t^(p^i))
    std::vector<Elem> poly{naive.one()};
    Elem tc = t;
    for (unsigned i = 0; i < r; ++i) {
        std::vector<Elem> next(poly.size() + 1, naive.zero());
        for (size_t j = 0; j < poly.size(); ++j) {
            next[j + 1] = naive.add(next[j + 1], poly[j]);
            next[j] = naive.sub(next[j], naive.mul(tc, poly[j]));
        }
        poly = std::move(next);
        tc = naive.pow(tc, p);
    }
    std::vector<u64> m(r + 1, 0);
    for (size_t i = 0; i < poly.size(); ++i) {
        for (unsigned j = 1; j < r; ++j)
            if (poly[i][j] != 0)
                throw ValidationFailed("GaloisRing: conjugate product not rational");
        m[i] = poly[i][0];
    }
    if (m[r] != 1) throw ValidationFailed("GaloisRing: modulus not monic");
    for (unsigned i = 0; i <= r; ++i)
        if (m[i] % p != mu[i])
            throw ValidationFailed("GaloisRing: modulus does not reduce to mu");

    GaloisRing R(zp, r, std::move(m), raw_tag{});
    R.finish_canonical();
    return R;
}

void GaloisRing::finish_canonical() {
    // class of x must be a (q-1)-th root of unity; then x -> x^p is the
    // Frobenius automorphism
    if (q_ >= 2 && !eq(pow(x_gen(), q_ - 1), one()))
        throw ValidationFailed("GaloisRing: modulus does not divide x^(q-1)-1");
    frob_cols_.assign(r_, zero());
    Elem xp = pow(x_gen(), zp_.p());
    frob_cols_[0] = one();
    for (unsigned i = 1; i < r_; ++i) frob_cols_[i] = mul(frob_cols_[i - 1], xp);
    Elem y = x_gen();
    for (unsigned i = 0; i < r_; ++i) y = frobenius(y);
    if (!eq(y, x_gen()))
        throw ValidationFailed("GaloisRing: Frobenius is not of order r");
}

GaloisRing::Elem GaloisRing::one() const {
    Elem e(r_, 0);
    e[0] = 1;
    return e;
}

GaloisRing::Elem GaloisRing::x_gen() const {
    if (r_ == 1) return one();
    Elem e(r_, 0);
    e[1] = 1;
    return e;
}

GaloisRing::Elem GaloisRing::from_int(i64 n) const {
    Elem e(r_, 0);
    e[0] = zp_.from_int(n);
    return e;
}

GaloisRing::Elem GaloisRing::from_mpz(const mpz_class& n) const {
    Elem e(r_, 0);
    e[0] = zp_.from_mpz(n);
    return e;
}

GaloisRing::Elem GaloisRing::from_coords(std::vector<u64> c) const {
    if (c.size() != r_)
        throw PrecisionMismatch("GaloisRing::from_coords: wrong length");
    for (u64 v : c)
        if (v >= zp_.modulus())
            throw Error("GaloisRing::from_coords: coordinate out of range");
    return c;
}

GaloisRing::Elem GaloisRing::add(const Elem& a, const Elem& b) const {
    Elem out(r_);
    for (unsigned i = 0; i < r_; ++i) out[i] = zp_.add(a[i], b[i]);
    return out;
}

GaloisRing::Elem GaloisRing::sub(const Elem& a, const Elem& b) const {
    Elem out(r_);
    for (unsigned i = 0; i < r_; ++i) out[i] = zp_.sub(a[i], b[i]);
    return out;
}

GaloisRing::Elem GaloisRing::neg(const Elem& a) const {
    Elem out(r_);
    for (unsigned i = 0; i < r_; ++i) out[i] = zp_.neg(a[i]);
    return out;
}

GaloisRing::Elem GaloisRing::scalar_mul(u64 c, const Elem& a) const {
    Elem out(r_);
    for (unsigned i = 0; i < r_; ++i) out[i] = zp_.mul(c, a[i]);
    return out;
}

GaloisRing::Elem GaloisRing::reduce_product(std::vector<u64>& buf) const {
    for (size_t i = buf.size(); i-- > r_;) {
        u64 c = buf[i];
        if (c) {
            buf[i] = 0;
            for (unsigned j = 0; j < r_; ++j)
                buf[i - r_ + j] = zp_.sub(buf[i - r_ + j], zp_.mul(c, m_[j]));
        }
    }
    buf.resize(r_);
    return buf;
}

GaloisRing::Elem GaloisRing::mul(const Elem& a, const Elem& b) const {
    std::vector<u64> buf(2 * r_ - 1, 0);
    for (unsigned i = 0; i < r_; ++i)
        if (a[i])
            for (unsigned j = 0; j < r_; ++j)
                buf[i + j] = zp_.add(buf[i + j], zp_.mul(a[i], b[j]));
    return reduce_product(buf);
}

bool GaloisRing::eq(const Elem& a, const Elem& b) const { return a == b; }

bool GaloisRing::is_zero(const Elem& a) const {
    return std::all_of(a.begin(), a.end(), [](u64 v) { return v == 0; });
}

GaloisRing::Elem GaloisRing::pow(const Elem& a, u64 e) const {
    Elem acc = one(), b = a;
    while (e) {
        if (e & 1) acc = mul(acc, b);
        b = mul(b, b);
        e >>= 1;
    }
    return acc;
}

unsigned GaloisRing::val_p(const Elem& a) const {
    unsigned v = zp_.precision();
    for (u64 c : a) v = std::min(v, zp_.val_p(c));
    return v;
}

GaloisRing::Elem GaloisRing::inv(const Elem& a) const {
    if (!is_unit(a))
        throw NotCoprime("GaloisRing::inv: element is not a unit");
    GaloisRing Rbar = truncated(1);
    Elem abar = reduce_to(a, Rbar);
    Elem z = Rbar.pow(abar, q_ - 2);            // residue-field inverse
    z.resize(r_);                               // representative lift
    Elem two = from_int(2);
    for (unsigned lifted = 1; lifted < zp_.precision(); lifted *= 2)
        z = mul(z, sub(two, mul(a, z)));
    if (!eq(mul(a, z), one()))
        throw ValidationFailed("GaloisRing::inv: certification failed");
    return z;
}

GaloisRing::Elem GaloisRing::frobenius(const Elem& a) const {
    Elem acc = zero();
    for (unsigned i = 0; i < r_; ++i)
        if (a[i]) acc = add(acc, scalar_mul(a[i], frob_cols_[i]));
    return acc;
}

GaloisRing::Elem GaloisRing::frobenius_inv(const Elem& a) const {
    Elem y = a;
    for (unsigned i = 0; i + 1 < r_; ++i) y = frobenius(y);
    return y;
}

GaloisRing::Elem GaloisRing::teichmuller(const Elem& a) const {
    Elem t = a;
    for (unsigned i = 0; i + 1 < zp_.precision(); ++i) t = pow(t, q_);
    if (!eq(pow(t, q_), t))
        throw ValidationFailed("GaloisRing::teichmuller: did not stabilize");
    return t;
}

GaloisRing GaloisRing::truncated(unsigned newK) const {
    if (newK == 0 || newK > zp_.precision())
        throw PrecisionMismatch("GaloisRing::truncated: bad precision");
    ZpRing zp2(zp_.p(), newK);
    std::vector<u64> m2(m_.size());
    for (size_t i = 0; i < m_.size(); ++i) m2[i] = m_[i] % zp2.modulus();
    GaloisRing R(zp2, r_, std::move(m2), raw_tag{});
    R.finish_canonical();
    return R;
}

GaloisRing::Elem GaloisRing::reduce_to(const Elem& a, const GaloisRing& target) const {
    if (target.p() != p() || target.r_ != r_ || target.precision() > precision())
        throw PrecisionMismatch("GaloisRing::reduce_to: incompatible target");
    Elem out(r_);
    for (unsigned i = 0; i < r_; ++i) out[i] = a[i] % target.char_modulus();
    return out;
}

GaloisRing::Elem GaloisRing::lift_into(const Elem& a, const GaloisRing& target) const {
    if (target.p() != p() || target.r_ != r_ || target.precision() < precision())
        throw PrecisionMismatch("GaloisRing::lift_into: incompatible target");
    return a;
}

GaloisRing::Elem GaloisRing::exact_div_p(const Elem& a, unsigned e,
                                         const GaloisRing& target) const {
    if (target.p() != p() || target.r_ != r_ ||
        target.precision() + e != precision())
        throw PrecisionMismatch("GaloisRing::exact_div_p: incompatible target");
    Elem out(r_);
    for (unsigned i = 0; i < r_; ++i) out[i] = zp_.exact_div_p(a[i], e);
    return out;
}

}
