#include "pgl2bb/mat2.hpp"

#include <sstream>

namespace pgl2bb {

Mat2 mat_mul(const Gf2e& f, const Mat2& x, const Mat2& y) {
    return {f.add(f.mul(x.a, y.a), f.mul(x.b, y.c)), f.add(f.mul(x.a, y.b), f.mul(x.b, y.d)),
            f.add(f.mul(x.c, y.a), f.mul(x.d, y.c)), f.add(f.mul(x.c, y.b), f.mul(x.d, y.d))};
}

Mat2 mat_pow(const Gf2e& f, Mat2 x, u128 n) {
    Mat2 r = mat_identity();
    while (n) {
        if (n & 1) r = mat_mul(f, r, x);
        n >>= 1;
        if (n) x = mat_mul(f, x, x);
    }
    return r;
}

Mat2 mat_checked(const Gf2e& f, u64 a, u64 b, u64 c, u64 d) {
    Mat2 m{a, b, c, d};
    if (!mat_det_is_one(f, m)) throw Error("matrix determinant is not 1");
    return m;
}

std::string mat_to_hex(const Gf2e& f, const Mat2& m) {
    return f.to_hex(m.a) + ':' + f.to_hex(m.b) + ':' + f.to_hex(m.c) + ':' + f.to_hex(m.d);
}

Mat2 mat_from_hex(const Gf2e& f, const std::string& s) {
    std::istringstream is(s);
    std::string part;
    u64 v[4];
    for (int i = 0; i < 4; ++i) {
        if (!std::getline(is, part, ':')) throw Error("malformed matrix serialization: " + s);
        v[i] = f.from_hex(part);
    }
    if (std::getline(is, part, ':')) throw Error("malformed matrix serialization: " + s);
    return mat_checked(f, v[0], v[1], v[2], v[3]);
}

Mat2 mat_sqrt(const Gf2e& f, const Mat2& h) {
    const u64 tr = mat_trace(h);
    if (tr == 0) throw TraceZero();
    const u64 c0 = f.inv(f.sqrt(tr));
    return {f.mul(c0, f.add(h.a, 1)), f.mul(c0, h.b), f.mul(c0, h.c), f.mul(c0, f.add(h.d, 1))};
}

Mat2 b_closed_form(const Gf2e& f, const Mat2& g) {
    if (g.b == 0) throw Undefined("B(g) undefined: [u, u^g] = 1");
    return {1, 0, f.add(1, f.mul(mat_trace(g), f.inv(g.b))), 1};
}

Mat2 b_power_form(const Gf2e& f, const GroupParams& gp, const Mat2& g) {
    if (g.b == 0) throw Undefined("B(g) undefined: [u, u^g] = 1");
    const Mat2 u = x_of(1);
    const Mat2 prod = mat_mul(f, u, mat_conj(f, u, g));
    return mat_mul(f, mat_pow(f, prod, gp.k_plus_1()), mat_inv(g));
}

Mat2 n_of(const Gf2e& f, u64 t) {
    if (t == 0) throw ZeroArgument("n(0) is undefined");
    return {0, f.inv(t), t, 0};
}

Mat2 h_of(const Gf2e& f, u64 t) {
    if (t == 0) throw ZeroArgument("h(0) is undefined");
    return {t, 0, 0, f.inv(t)};
}

Mat2 n_word(const Gf2e& f, u64 t) {
    if (t == 0) throw ZeroArgument("n(0) is undefined");
    const Mat2 x = x_of(t);
    const Mat2 mid = mat_conj(f, x_of(f.inv(t)), r_prime_mat());
    return mat_mul(f, mat_mul(f, x, mid), x);
}

Mat2 h_word(const Gf2e& f, u64 t) { return mat_mul(f, n_word(f, 1), n_word(f, t)); }

ChainTable::ChainTable(const Gf2e& f, u64 s) : s_(s) {
    const int e = f.ext_degree();
    auto p = std::make_shared<Slp>(3);
    const std::uint32_t g0 = p->load_gen(0);
    const std::uint32_t g1 = p->load_gen(1);
    const std::uint32_t g2 = p->load_gen(2);
    gen_slots_[0] = g0;
    gen_slots_[1] = g1;
    gen_slots_[2] = g2;
    const std::uint32_t hinv = p->inv(g2);

    x_power_slots_.assign(e, 0);
    x_power_slots_[0] = g0;
    if (e > 1) {
        // chain step: h(s)^-1 X(t) h(s) = X(t s^2)
        // odd chain seed: X(s) = h(s)^-j X(1) h(s)^j with 2j = 1 mod (q-1)
        const u128 qm1 = (u128(1) << e) - 1;
        const u128 j = (u128(1) << (e - 1)) % qm1;
        const std::uint32_t hj = p->pow(g2, j);
        const std::uint32_t hjinv = p->inv(hj);
        x_power_slots_[1] = p->mul(p->mul(hjinv, g0), hj);
        for (int i = 2; i < e; ++i)
            x_power_slots_[i] = p->mul(p->mul(hinv, x_power_slots_[i - 2]), g2);
    }
    prefix_ = std::move(p);
}

namespace {

// X(t) as a product of the chain slots X(s^i) over the set bits of t;
// returns the slot, or UINT32_MAX for t = 0 (the identity, emitted as no-op).
std::uint32_t emit_x(Slp& p, const ChainTable& chains, u64 t) {
    std::uint32_t slot = UINT32_MAX;
    for (int i = 0; t; ++i, t >>= 1) {
        if (!(t & 1)) continue;
        const std::uint32_t pi = chains.x_power_slot(i);
        slot = slot == UINT32_MAX ? pi : p.mul(slot, pi);
    }
    return slot;
}

std::uint32_t emit_mul(Slp& p, std::uint32_t a, std::uint32_t b) {
    if (a == UINT32_MAX) return b;
    if (b == UINT32_MAX) return a;
    return p.mul(a, b);
}

// h(w) = n(1) n(w) with n(w) = X(w) r'^-1 X(w^-1) r' X(w); n(1) is the
// generator r' itself.  h(1) is the identity and is skipped.
std::uint32_t emit_h(Slp& p, const Gf2e& f, const ChainTable& chains, u64 w) {
    if (w == 1) return UINT32_MAX;
    const std::uint32_t r = chains.gen_slot(1);
    const std::uint32_t xw = emit_x(p, chains, w);
    const std::uint32_t xwi = emit_x(p, chains, f.inv(w));
    const std::uint32_t conj = p.mul(p.mul(p.inv(r), xwi), r);
    const std::uint32_t n = emit_mul(p, emit_mul(p, xw, conj), xw);
    return p.mul(r, n);
}

}  // namespace

Slp bruhat_slp(const Gf2e& f, const ChainTable& chains, const Mat2& g) {
    if (!mat_det_is_one(f, g)) throw Error("bruhat_slp requires det 1");
    // Generator shortcuts keep the trivial cases prefix-free.
    if (mat_is_identity(g)) return Slp(3);
    if (g == x_of(1) || g == r_prime_mat() || (chains.s() != 0 && g == h_of(f, chains.s()))) {
        Slp p(3);
        p.load_gen(g == x_of(1) ? 0 : g == r_prime_mat() ? 1 : 2);
        return p;
    }
    Slp p(chains.prefix(), 3);
    std::uint32_t slot;
    if (g.b != 0) {
        const u64 binv = f.inv(g.b);
        const std::uint32_t left = emit_x(p, chains, f.mul(g.d, binv));
        const std::uint32_t h = emit_h(p, f, chains, g.b);
        const std::uint32_t right = emit_x(p, chains, f.mul(g.a, binv));
        slot = emit_mul(p, emit_mul(p, emit_mul(p, left, h), chains.gen_slot(1)), right);
    } else {
        const std::uint32_t h = emit_h(p, f, chains, g.a);
        const std::uint32_t x = emit_x(p, chains, f.mul(g.a, g.c));
        slot = emit_mul(p, h, x);
    }
    if (slot == UINT32_MAX) throw Error("empty Bruhat emission for non-identity element");
    // The program's value is its last slot; materialize if the result landed
    // on an earlier (e.g. chain) slot.
    if (slot + 1 != p.total_slots()) p.inv(p.inv(slot));
    return p;
}

std::vector<Mat2> enumerate_sl2(const Gf2e& f) {
    if (f.ext_degree() > 8) throw Error("enumerate_sl2 is for small fields only");
    const u64 q = u64(1) << f.ext_degree();
    std::vector<Mat2> out;
    out.reserve(static_cast<size_t>(q * q * q - q));
    for (u64 a = 0; a < q; ++a)
        for (u64 b = 0; b < q; ++b)
            for (u64 c = 0; c < q; ++c)
                for (u64 d = 0; d < q; ++d)
                    if (f.add(f.mul(a, d), f.mul(b, c)) == 1) out.push_back({a, b, c, d});
    return out;
}

}  // namespace pgl2bb
