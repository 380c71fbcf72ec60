#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

#include "canlift/galois_ring.hpp"

namespace canlift {

// symmetric modular polynomial of prime level; c is the dense
// (p+2) x (p+2) grid, c[i][j] = coefficient of X^i Y^j
struct PhiTable {
    u64 p;
    std::vector<std::vector<mpz_class>> c;
    unsigned degree() const { return unsigned(p) + 1; }
    const mpz_class& coeff(unsigned i, unsigned j) const { return c[i][j]; }
};

// CANLIFT_DATA if set, else the compiled-in table directory
std::string data_dir();

// reads data/phi_<p>.txt and revalidates it: header shape, index bounds,
// duplicate entries, monic leading slice, the mod-p product form, and the
// complex-multiplication values at 0 and 1728
PhiTable load_phi_table(u64 p, const std::string& dir);
PhiTable load_phi_table(u64 p);

GaloisRing::Elem phi_eval(const PhiTable& t, const GaloisRing& R,
                          const GaloisRing::Elem& X, const GaloisRing::Elem& Y);

// every supersingular j-invariant, enumerated over a quadratic residue field
std::vector<GaloisRing::Elem> supersingular_j_list(const GaloisRing& F2);

// monic product of (x - j) over the supersingular j; the coefficients are
// rational, returned as residues in [0, p), low degree first
std::vector<u64> supersingular_poly(u64 p);

bool is_ordinary_j(const GaloisRing& field, const GaloisRing::Elem& jbar);

}
