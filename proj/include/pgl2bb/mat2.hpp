#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgl2bb/gf2e.hpp"
#include "pgl2bb/slp.hpp"

namespace pgl2bb {

/// Element of SL(2, 2^e) = PGL(2, 2^e): row-major entries, det = ad + bc = 1.
struct Mat2 {
    u64 a = 1, b = 0, c = 0, d = 1;
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Degree-derived group constants; 2k + 1 = q^2 - 1 is the odd part of |G|,
/// so k + 1 = 2^(2e-1).
struct GroupParams {
    int e;
    u128 q;
    u128 k;
    static GroupParams for_degree(int e) {
        if (e < 1 || e > 64) throw UnsupportedDegree("extension degree must be in [1, 64]");
        return {e, u128(1) << e, (u128(1) << (2 * e - 1)) - 1};
    }
    u128 k_plus_1() const { return k + 1; }
};

inline Mat2 mat_identity() { return {1, 0, 0, 1}; }
inline bool mat_is_identity(const Mat2& m) { return m == mat_identity(); }
inline u64 mat_trace(const Mat2& m) { return m.a ^ m.d; }

Mat2 mat_mul(const Gf2e& f, const Mat2& x, const Mat2& y);
inline Mat2 mat_inv(const Mat2& x) { return {x.d, x.b, x.c, x.a}; }  // adjugate, det 1, char 2
Mat2 mat_pow(const Gf2e& f, Mat2 x, u128 n);
inline Mat2 mat_conj(const Gf2e& f, const Mat2& x, const Mat2& g) {
    return mat_mul(f, mat_mul(f, mat_inv(g), x), g);
}
inline Mat2 mat_comm(const Gf2e& f, const Mat2& x, const Mat2& y) {
    return mat_mul(f, mat_mul(f, mat_inv(x), mat_inv(y)), mat_mul(f, x, y));
}
inline bool mat_det_is_one(const Gf2e& f, const Mat2& m) {
    return f.add(f.mul(m.a, m.d), f.mul(m.b, m.c)) == 1;
}
Mat2 mat_checked(const Gf2e& f, u64 a, u64 b, u64 c, u64 d);  // throws on det != 1

std::string mat_to_hex(const Gf2e& f, const Mat2& m);          // "a:b:c:d"
Mat2 mat_from_hex(const Gf2e& f, const std::string& s);

/// Unique square root of a matrix of nonzero trace: (h + I) / sqrt(tr h).
Mat2 mat_sqrt(const Gf2e& f, const Mat2& h);

/// B(g) = (u u^g)^(k+1) g^(-1) for u = [[1,0],[1,1]], defined when
/// [u, u^g] != 1, i.e. when b != 0.  Closed form [[1,0],[1+(a+d)/b,1]].
Mat2 b_closed_form(const Gf2e& f, const Mat2& g);
Mat2 b_power_form(const Gf2e& f, const GroupParams& gp, const Mat2& g);

// Standard elements.  h(t) is the word n(1) n(t) built from
// n(t) = X(t) X(t^-1)^r' X(t), which evaluates to diag(t, t^-1); the same
// word is used on the black box side so the generator correspondence is
// word-for-word.
inline Mat2 x_of(u64 t) { return {1, 0, t, 1}; }
inline Mat2 r_prime_mat() { return {0, 1, 1, 0}; }
Mat2 n_of(const Gf2e& f, u64 t);   // [[0, t^-1],[t, 0]]; throws ZeroArgument
Mat2 h_of(const Gf2e& f, u64 t);   // diag(t, t^-1); throws ZeroArgument
Mat2 n_word(const Gf2e& f, u64 t); // the defining word, for cross-checks
Mat2 h_word(const Gf2e& f, u64 t);

/// Group-operation adapter for SLP evaluation over matrices.
struct MatOps {
    const Gf2e& f;
    using Elem = Mat2;
    Mat2 identity() const { return mat_identity(); }
    Mat2 mul(const Mat2& x, const Mat2& y) const { return mat_mul(f, x, y); }
    Mat2 inv(const Mat2& x) const { return mat_inv(x); }
};

/// Shared SLP prelude over the generators {X(1), r', h(s)} (indices 0, 1, 2):
/// slots for h(s)^-1 and the conjugation chains X(s^i), i < e.  Conjugating
/// by h(s)^-1 maps X(t) to X(t s^2); the even chain starts at X(1), the odd
/// chain at X(s) = X(1)^(h(s)^-j) with j = 2^(e-1) mod (q-1).
class ChainTable {
public:
    ChainTable(const Gf2e& f, u64 s);

    const std::shared_ptr<const Slp>& prefix() const { return prefix_; }
    std::uint32_t x_power_slot(int i) const { return x_power_slots_.at(i); }
    std::uint32_t gen_slot(int g) const { return gen_slots_[g]; }  // 0: X(1), 1: r', 2: h(s)
    u64 s() const { return s_; }

private:
    u64 s_;
    std::shared_ptr<const Slp> prefix_;
    std::uint32_t gen_slots_[3];
    std::vector<std::uint32_t> x_power_slots_;
};

/// O(e)-length SLP over {X(1), r', h(s)} evaluating to g.  Cell decomposition:
/// g = X(d/b) h(b) r' X(a/b) when b != 0, g = h(a) X(a c) when b = 0.
Slp bruhat_slp(const Gf2e& f, const ChainTable& chains, const Mat2& g);

/// All of SL(2, 2^e), enumeration order fixed by the entry bit patterns.
std::vector<Mat2> enumerate_sl2(const Gf2e& f);

/// Uniformly random element of SL(2, 2^e) from caller-supplied raw bits.
template <class Rng>
Mat2 random_sl2(const Gf2e& f, Rng& rng) {
    const u64 mask = f.ext_degree() == 64 ? ~u64(0) : ((u64(1) << f.ext_degree()) - 1);
    for (;;) {
        const u64 a = rng() & mask, b = rng() & mask;
        if (a == 0 && b == 0) continue;
        const u64 r = rng() & mask;
        if (a != 0) {
            // free c := r, then d = (1 + b c) / a
            return {a, b, r, f.mul(f.add(1, f.mul(b, r)), f.inv(a))};
        }
        // a = 0: need b c = 1, d free
        return {a, b, f.inv(b), r};
    }
}

}  // namespace pgl2bb
