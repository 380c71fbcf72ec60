#include "canlift/moddata.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>

#include "canlift/curves.hpp"
#include "canlift/errors.hpp"
#include "canlift/poly.hpp"

namespace canlift {

namespace {

mpz_class eval_diag(const PhiTable& t, long v) {
    // Phi(v, v) over the integers
    mpz_class x(v), acc(0);
    unsigned n = t.degree() + 1;
    for (unsigned i = n; i-- > 0;) {
        mpz_class row(0);
        for (unsigned j = n; j-- > 0;) row = row * x + t.c[i][j];
        acc = acc * x + row;
    }
    return acc;
}

void validate(const PhiTable& t, const std::string& path) {
    const u64 p = t.p;
    const unsigned n = t.degree() + 1;
    if (t.c[n - 1][0] != 1)
        throw ValidationFailed("phi table " + path + ": not monic");
    for (unsigned j = 1; j < n; ++j)
        if (t.c[n - 1][j] != 0)
            throw ValidationFailed("phi table " + path + ": leading slice not constant");
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            long expect = 0;   // (X^p - Y)(X - Y^p) mod p
            if ((i == n - 1 && j == 0) || (i == 0 && j == n - 1)) expect = 1;
            if ((i == unsigned(p) && j == unsigned(p)) || (i == 1 && j == 1)) expect = -1;
            mpz_class d = t.c[i][j] - expect;
            if (!mpz_divisible_ui_p(d.get_mpz_t(), p))
                throw ValidationFailed("phi table " + path + ": wrong reduction mod p");
        }
    // j = 0 has CM by the Eisenstein order, j = 1728 by the Gaussian one;
    // the diagonal value vanishes exactly when p is non-inert there
    bool zero_cm = (p % 3 == 1 || p == 3);
    bool i1728_cm = (p % 4 == 1 || p == 2);
    if ((eval_diag(t, 0) == 0) != zero_cm)
        throw ValidationFailed("phi table " + path + ": value at (0,0) is wrong");
    if ((eval_diag(t, 1728) == 0) != i1728_cm)
        throw ValidationFailed("phi table " + path + ": value at (1728,1728) is wrong");
}

// affine solutions of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, plus one
u64 sweep_count(const GaloisRing& F, const GaloisRing::Elem& a1,
                const GaloisRing::Elem& a2, const GaloisRing::Elem& a3,
                const GaloisRing::Elem& a4, const GaloisRing::Elem& a6) {
    const u64 q = F.q();
    u64 n = 1;
    for (u64 xi = 0; xi < q; ++xi) {
        auto x = F.element_from_index(xi);
        auto rhs = F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6);
        auto a1x3 = F.add(F.mul(a1, x), a3);
        for (u64 yi = 0; yi < q; ++yi) {
            auto y = F.element_from_index(yi);
            auto lhs = F.mul(F.add(y, a1x3), y);
            if (F.eq(lhs, rhs)) ++n;
        }
    }
    return n;
}

}

std::string data_dir() {
    if (const char* env = std::getenv("CANLIFT_DATA"))
        if (*env) return env;
    return CANLIFT_DEFAULT_DATA_DIR;
}

PhiTable load_phi_table(u64 p, const std::string& dir) {
    const std::string path = dir + "/phi_" + std::to_string(p) + ".txt";
    std::ifstream in(path);
    if (!in)
        throw MissingData("load_phi_table: cannot open " + path);

    std::string kp, kdeg, kconv, conv;
    u64 pval = 0;
    unsigned deg = 0;
    in >> kp >> pval >> kdeg >> deg >> kconv >> conv;
    if (!in || kp != "p" || kdeg != "degree" || kconv != "convention" ||
        conv != "symmetric-upper" || pval != p || deg != p + 1)
        throw ValidationFailed("load_phi_table: bad header in " + path);

    const unsigned n = deg + 1;
    PhiTable t{p, std::vector<std::vector<mpz_class>>(
                      n, std::vector<mpz_class>(n, mpz_class(0)))};
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    unsigned i = 0, j = 0;
    mpz_class cval;
    while (in >> i >> j >> cval) {
        if (i >= n || j > i)
            throw ValidationFailed("load_phi_table: index out of range in " + path);
        if (seen[i][j])
            throw ValidationFailed("load_phi_table: duplicate entry in " + path);
        seen[i][j] = true;
        t.c[i][j] = cval;
        t.c[j][i] = cval;
    }
    if (!in.eof())
        throw ValidationFailed("load_phi_table: malformed entry in " + path);
    validate(t, path);
    return t;
}

PhiTable load_phi_table(u64 p) { return load_phi_table(p, data_dir()); }

GaloisRing::Elem phi_eval(const PhiTable& t, const GaloisRing& R,
                          const GaloisRing::Elem& X, const GaloisRing::Elem& Y) {
    const unsigned n = t.degree() + 1;
    auto acc = R.zero();
    for (unsigned i = n; i-- > 0;) {
        auto row = R.zero();
        for (unsigned j = n; j-- > 0;)
            row = R.add(R.mul(row, Y), R.from_mpz(t.c[i][j]));
        acc = R.add(R.mul(acc, X), row);
    }
    return acc;
}

std::vector<GaloisRing::Elem> supersingular_j_list(const GaloisRing& F2) {
    if (F2.precision() != 1 || F2.ext_degree() != 2)
        throw ValidationFailed("supersingular_j_list: expects GF(p^2)");
    const u64 p = F2.p(), q = F2.q();
    std::vector<GaloisRing::Elem> out;
    for (u64 idx = 0; idx < q; ++idx) {
        auto j = F2.element_from_index(idx);
        u64 N;
        if (p >= 5) {
            N = count_points(F2, curve_from_j(F2, j));
        } else if (p == 3) {
            N = F2.is_zero(j)
                    ? sweep_count(F2, F2.zero(), F2.zero(), F2.zero(), F2.one(),
                                  F2.zero())
                    : sweep_count(F2, F2.zero(), F2.one(), F2.zero(), F2.zero(),
                                  F2.neg(F2.inv(j)));
        } else {
            N = F2.is_zero(j)
                    ? sweep_count(F2, F2.zero(), F2.zero(), F2.one(), F2.zero(),
                                  F2.zero())
                    : sweep_count(F2, F2.one(), F2.zero(), F2.zero(), F2.zero(),
                                  F2.inv(j));
        }
        if (N % p == 1) out.push_back(j);   // trace divisible by p
    }
    return out;
}

std::vector<u64> supersingular_poly(u64 p) {
    GaloisRing F2(p, 1, 2);
    PolyRing<GaloisRing> P(F2);
    auto poly = P.one();
    for (const auto& j : supersingular_j_list(F2))
        poly = P.mul(poly, P.normalize({F2.neg(j), F2.one()}));
    std::vector<u64> out;
    out.reserve(poly.size());
    for (const auto& c : poly) {
        if (c[1] != 0)
            throw ValidationFailed("supersingular_poly: coefficient not rational");
        out.push_back(c[0]);
    }
    return out;
}

bool is_ordinary_j(const GaloisRing& field, const GaloisRing::Elem& jbar) {
    if (field.precision() != 1)
        throw PrecisionMismatch("is_ordinary_j: expects a residue field");
    static std::mutex mu;
    static std::map<u64, std::vector<u64>> cache;
    std::vector<u64> sp;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(field.p());
        if (it == cache.end())
            it = cache.emplace(field.p(), supersingular_poly(field.p())).first;
        sp = it->second;
    }
    auto acc = field.zero();
    for (size_t k = sp.size(); k-- > 0;)
        acc = field.add(field.mul(acc, jbar), field.from_int(i64(sp[k])));
    return !field.is_zero(acc);
}

}
