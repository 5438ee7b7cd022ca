#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgl2bb/errors.hpp"

namespace pgl2bb {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Polynomials over F_2 packed into an unsigned 128-bit word, coefficient of
/// x^i at bit i.  Degrees stay below 128 everywhere (field degree <= 64).
namespace f2poly {

int degree(u128 p);                       // -1 for the zero polynomial
u128 clmul(u64 a, u64 b);                 // carry-less product
u128 mod(u128 a, u128 f);
u128 mulmod(u64 a, u64 b, u128 f);
u128 gcd(u128 a, u128 b);
bool is_irreducible(u128 f, int e);       // f monic of degree e

}  // namespace f2poly

/// Lexicographically least irreducible polynomial of degree e over F_2
/// (coefficient words compared as integers; e = 1 gives x).
u128 irreducible_poly(int e);

/// Fixed-width little-endian hex of the low `nbits` bits of a bit vector.
std::string bits_to_hex(u128 bits, int nbits);
u128 bits_from_hex(const std::string& hex, int nbits);

/// Explicit arithmetic in GF(2^e), 1 <= e <= 64, in the polynomial basis of
/// F_2[x]/(modulus).  Elements are coefficient bit vectors in a u64.
/// Satisfies the generic field interface used by the subfield/minimal
/// polynomial/coordinate algorithms below, as does the black box field.
class Gf2e {
public:
    using Elem = u64;

    Gf2e(int e, u128 modulus);
    static Gf2e with_default_modulus(int e) { return Gf2e(e, irreducible_poly(e)); }

    int ext_degree() const { return e_; }
    u128 order() const { return u128(1) << e_; }
    u128 modulus() const { return modulus_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem gen() const { return e_ == 1 ? mul_x_reduced_ : 2; }  // the class of x

    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    Elem add(Elem a, Elem b) const { return a ^ b; }
    Elem mul(Elem a, Elem b) const;
    Elem square(Elem a) const { return mul(a, a); }
    Elem inv(Elem a) const;               // a^(2^e - 2); throws DivisionByZero
    Elem sqrt(Elem a) const;              // a^(2^(e-1)), total
    Elem pow(Elem a, u128 n) const;

    /// Absolute trace sum_{i<e} t^(2^i), always 0 or 1.
    int trace(Elem t) const;

    std::string to_hex(Elem a) const { return bits_to_hex(a, e_); }
    Elem from_hex(const std::string& h) const { return static_cast<Elem>(bits_from_hex(h, e_)); }

private:
    int e_;
    u128 modulus_;
    u64 elem_mask_;       // low e bits
    u64 mod_low_;         // modulus minus its leading x^e term
    u64 mul_x_reduced_;   // x reduced mod modulus (only differs from x when e = 1)
};

/// Dense GF(2) linear solver for systems of up to 64 unknowns.  Rows hold the
/// coefficient bits of one equation.  Construction inverts the matrix with
/// Gauss-Jordan elimination and throws SingularGram if it is singular.
class Gf2Solver {
public:
    Gf2Solver(const std::vector<u64>& rows, int n);
    u64 solve(u64 rhs_bits) const;        // x with M x = rhs
    static bool invertible(std::vector<u64> rows, int n);

private:
    int n_;
    std::vector<u64> inv_rows_;
};

// ---------------------------------------------------------------------------
// Field-generic algorithms.  F supplies: Elem, zero/one, add, mul, inv,
// square, sqrt, eq, is_zero, trace(Elem) -> int, ext_degree().
// ---------------------------------------------------------------------------

/// Least m >= 1 with t^(2^m) = t, so F_2[t] is a field of order 2^m.
template <class F>
int subfield_degree(const F& f, typename F::Elem t) {
    auto p = f.square(t);
    for (int m = 1; m <= f.ext_degree(); ++m) {
        if (f.eq(p, t)) return m;
        p = f.square(p);
    }
    throw OracleInconsistent("t^(2^e) != t; not a field of order 2^e");
}

/// Multiplies the monic polynomial `poly` (coefficients low to high) by
/// (x + root) in place.
template <class F>
void poly_mul_linear(const F& f, std::vector<typename F::Elem>& poly, typename F::Elem root) {
    poly.push_back(poly.back());
    for (size_t i = poly.size() - 2; i > 0; --i) poly[i] = f.add(poly[i - 1], f.mul(root, poly[i]));
    poly[0] = f.mul(root, poly[0]);
}

/// prod_{i<m} (x + t^(2^i)) as explicit coefficients.
template <class F>
std::vector<typename F::Elem> frobenius_orbit_poly(const F& f, typename F::Elem t, int m) {
    std::vector<typename F::Elem> poly{f.one()};
    auto root = t;
    for (int i = 0; i < m; ++i) {
        poly_mul_linear(f, poly, root);
        root = f.square(root);
    }
    return poly;
}

/// Degree-m minimal polynomial of t over F_2, m = subfield_degree(f, t).
/// The telescoped product must have coefficients fixed by Frobenius;
/// anything else signals a corrupted field oracle.
template <class F>
u128 min_poly(const F& f, typename F::Elem t, int m) {
    auto poly = frobenius_orbit_poly(f, t, m);
    u128 bits = 0;
    for (int i = 0; i <= m; ++i) {
        if (f.is_zero(poly[i])) continue;
        if (!f.eq(poly[i], f.one())) throw CoefficientNotInF2();
        bits |= u128(1) << i;
    }
    return bits;
}

/// Coordinates of t in the basis 1, s, ..., s^(e-1), where F_2[s] is the whole
/// field.  Solves the trace-form system Tr(t s^j) = sum_i x_i Tr(s^(i+j)).
template <class F>
u64 coordinates(const F& f, typename F::Elem t, typename F::Elem s) {
    const int e = f.ext_degree();
    std::vector<int> tr(2 * e - 1);
    auto p = f.one();
    for (int m = 0; m < 2 * e - 1; ++m) {
        tr[m] = f.trace(p);
        if (m + 1 < 2 * e - 1) p = f.mul(p, s);
    }
    std::vector<u64> rows(e, 0);
    for (int j = 0; j < e; ++j)
        for (int i = 0; i < e; ++i)
            if (tr[i + j]) rows[j] |= u64(1) << i;
    Gf2Solver solver(rows, e);
    u64 rhs = 0;
    auto ts = t;
    for (int j = 0; j < e; ++j) {
        if (f.trace(ts)) rhs |= u64(1) << j;
        if (j + 1 < e) ts = f.mul(ts, s);
    }
    return solver.solve(rhs);
}

std::vector<int> prime_power_factors(int e);  // e = prod q_i, q_i = p_i^k_i

/// Field generator search: given elements that lie in no common proper
/// subfield, returns s with F_2[s] the whole field.  For each prime power q_i
/// of e it extracts from a Frobenius-orbit polynomial a coefficient c_i
/// generating F_{2^{q_i}} and returns the product of the c_i.
template <class F>
typename F::Elem find_field_generator(const F& f, const std::vector<typename F::Elem>& alphas) {
    const int e = f.ext_degree();
    std::vector<int> degs(alphas.size());
    for (size_t j = 0; j < alphas.size(); ++j) degs[j] = subfield_degree(f, alphas[j]);

    auto s = f.one();
    for (int qi : prime_power_factors(e)) {
        int use = -1;
        for (size_t j = 0; j < alphas.size(); ++j)
            if (degs[j] % qi == 0) { use = static_cast<int>(j); break; }
        if (use < 0) throw GeneratorsInsufficient();
        const int m = degs[use];
        std::vector<typename F::Elem> poly{f.one()};
        auto root = alphas[use];
        for (int t = 0; t < m / qi; ++t) {
            poly_mul_linear(f, poly, root);
            for (int k = 0; k < qi; ++k) root = f.square(root);
        }
        bool found = false;
        for (auto& c : poly) {
            if (f.is_zero(c)) continue;
            if (subfield_degree(f, c) == qi) {
                s = f.mul(s, c);
                found = true;
                break;
            }
        }
        if (!found) throw GeneratorsInsufficient();
    }
    return s;
}

}  // namespace pgl2bb
