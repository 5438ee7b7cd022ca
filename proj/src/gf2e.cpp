#include "pgl2bb/gf2e.hpp"

#include <array>

namespace pgl2bb {

namespace f2poly {

int degree(u128 p) {
    if (p == 0) return -1;
    int d = 0;
    while (p >> 1) { p >>= 1; ++d; }
    return d;
}

u128 clmul(u64 a, u64 b) {
    u128 r = 0;
    u128 aa = a;
    while (b) {
        if (b & 1) r ^= aa;
        aa <<= 1;
        b >>= 1;
    }
    return r;
}

u128 mod(u128 a, u128 f) {
    const int df = degree(f);
    for (int d = degree(a); d >= df; d = degree(a)) a ^= f << (d - df);
    return a;
}

u128 mulmod(u64 a, u64 b, u128 f) { return mod(clmul(a, b), f); }

u128 gcd(u128 a, u128 b) {
    while (b != 0) {
        a = mod(a, b);
        std::swap(a, b);
    }
    return a;
}

bool is_irreducible(u128 f, int e) {
    if (degree(f) != e) return false;
    // No irreducible factor of degree <= e/2 exists iff gcd(x^(2^i) - x, f) = 1
    // for 1 <= i <= e/2; a proper factorization of f would contain one.
    u128 xp = mod(2, f);  // x
    for (int i = 1; i <= e / 2; ++i) {
        xp = mod(clmul(static_cast<u64>(xp), static_cast<u64>(xp)), f);
        if (gcd(xp ^ 2, f) != 1) return false;
    }
    return true;
}

}  // namespace f2poly

u128 irreducible_poly(int e) {
    if (e < 1 || e > 64) throw UnsupportedDegree("extension degree must be in [1, 64]");
    if (e == 1) return 2;  // x itself: F_2[x]/(x) = F_2
    const u128 lead = u128(1) << e;
    for (u128 c = 0;; ++c) {
        if (f2poly::is_irreducible(lead | c, e)) return lead | c;
    }
}

std::string bits_to_hex(u128 bits, int nbits) {
    static const char* digits = "0123456789abcdef";
    const int nbytes = (nbits + 7) / 8;
    std::string out(2 * nbytes, '0');
    for (int i = 0; i < nbytes; ++i) {
        unsigned byte = static_cast<unsigned>((bits >> (8 * i)) & 0xff);
        out[2 * i] = digits[byte >> 4];
        out[2 * i + 1] = digits[byte & 0xf];
    }
    return out;
}

u128 bits_from_hex(const std::string& hex, int nbits) {
    const int nbytes = (nbits + 7) / 8;
    if (hex.size() != static_cast<size_t>(2 * nbytes))
        throw Error("hex string has wrong length for " + std::to_string(nbits) + " bits");
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw Error("invalid hex digit");
    };
    u128 bits = 0;
    for (int i = 0; i < nbytes; ++i) {
        u128 byte = (nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]);
        bits |= byte << (8 * i);
    }
    if (nbits < 128 && (bits >> nbits) != 0) throw Error("hex encodes more bits than expected");
    return bits;
}

Gf2e::Gf2e(int e, u128 modulus) : e_(e), modulus_(modulus) {
    if (e < 1 || e > 64) throw UnsupportedDegree("extension degree must be in [1, 64]");
    if (f2poly::degree(modulus) != e) throw Error("modulus degree does not match e");
    if (!f2poly::is_irreducible(modulus, e)) throw Error("modulus is reducible over F_2");
    elem_mask_ = (e == 64) ? ~u64(0) : ((u64(1) << e) - 1);
    mod_low_ = static_cast<u64>(modulus & elem_mask_);
    mul_x_reduced_ = static_cast<u64>(f2poly::mod(2, modulus) & elem_mask_);
}

Gf2e::Elem Gf2e::mul(Elem a, Elem b) const {
    Elem r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        const u64 hi = a >> (e_ - 1);
        a = (a << 1) & elem_mask_;
        if (hi) a ^= mod_low_;
    }
    return r;
}

Gf2e::Elem Gf2e::pow(Elem a, u128 n) const {
    Elem r = 1;
    while (n) {
        if (n & 1) r = mul(r, a);
        a = mul(a, a);
        n >>= 1;
    }
    return r;
}

Gf2e::Elem Gf2e::inv(Elem a) const {
    if (a == 0) throw DivisionByZero();
    return pow(a, order() - 2);
}

Gf2e::Elem Gf2e::sqrt(Elem a) const {
    for (int i = 0; i < e_ - 1; ++i) a = mul(a, a);
    return a;
}

int Gf2e::trace(Elem t) const {
    Elem acc = 0;
    for (int i = 0; i < e_; ++i) {
        acc ^= t;
        t = mul(t, t);
    }
    if (acc != 0 && acc != 1) throw OracleInconsistent("trace not in F_2");
    return static_cast<int>(acc);
}

Gf2Solver::Gf2Solver(const std::vector<u64>& rows, int n) : n_(n), inv_rows_(n, 0) {
    std::vector<u64> work(rows.begin(), rows.end());
    for (int i = 0; i < n; ++i) inv_rows_[i] = u64(1) << i;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (work[r] >> col & 1) { pivot = r; break; }
        if (pivot < 0) throw SingularGram();
        std::swap(work[col], work[pivot]);
        std::swap(inv_rows_[col], inv_rows_[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r != col && (work[r] >> col & 1)) {
                work[r] ^= work[col];
                inv_rows_[r] ^= inv_rows_[col];
            }
        }
    }
}

u64 Gf2Solver::solve(u64 rhs_bits) const {
    u64 x = 0;
    for (int i = 0; i < n_; ++i)
        if (__builtin_parityll(inv_rows_[i] & rhs_bits)) x |= u64(1) << i;
    return x;
}

bool Gf2Solver::invertible(std::vector<u64> rows, int n) {
    try {
        Gf2Solver s(rows, n);
        return true;
    } catch (const SingularGram&) {
        return false;
    }
}

std::vector<int> prime_power_factors(int e) {
    std::vector<int> out;
    for (int p = 2; p <= e; ++p) {
        if (e % p) continue;
        int q = 1;
        while (e % p == 0) {
            q *= p;
            e /= p;
        }
        out.push_back(q);
    }
    return out;
}

}  // namespace pgl2bb
