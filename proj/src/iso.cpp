#include "pgl2bb/iso.hpp"

namespace pgl2bb {

BBElem conjugator_of_involutions(const BBGroup& G, const GroupParams& gp, const BBElem& z,
                                 const BBElem& z2) {
    if (!bb_is_involution(G, z) || !bb_is_involution(G, z2))
        throw PreconditionFailed("conjugator_of_involutions requires involutions");
    const BBElem p = G.mul(z, z2);
    if (!G.is_identity(p) && G.is_identity(G.mul(p, p))) throw EvenOrderProduct();
    return bb_pow(G, p, gp.k_plus_1());
}

namespace {

struct InNormalizer {};  // control flow: current element normalizes the r'u torus

std::vector<BFieldElem> make_s_powers(const BField& bf, const BFieldElem& s, int e) {
    std::vector<BFieldElem> pows{bf.one()};
    for (int i = 1; i < 2 * e - 1; ++i) pows.push_back(bf.mul(pows.back(), s));
    return pows;
}

Gf2Solver make_gram(const BField& bf, const std::vector<BFieldElem>& pows, int e) {
    std::vector<int> tr(2 * e - 1);
    for (int m = 0; m < 2 * e - 1; ++m) tr[m] = bf.trace(pows[m]);
    std::vector<u64> rows(e, 0);
    for (int j = 0; j < e; ++j)
        for (int i = 0; i < e; ++i)
            if (tr[i + j]) rows[j] |= u64(1) << i;
    return Gf2Solver(rows, e);
}

// Run before any field machinery is built on top of the certificate.
Certificate validated_certificate(Certificate cert, const BBGroup& G) {
    if (!bb_is_involution(G, cert.u) || !bb_is_involution(G, cert.r_prime) ||
        !bb_is_involution(G, cert.r))
        throw NotRecognized("certificate inconsistent: u, r, r' must be involutions");
    if (bb_involutions_commute(G, cert.u, cert.r))
        throw NotRecognized("certificate inconsistent: [u, r] = 1");
    const BBElem p = G.mul(cert.u, cert.r_prime);
    if (G.is_identity(p) || !G.is_identity(G.mul(G.mul(p, p), p)))
        throw NotRecognized("certificate inconsistent: u r' does not have order 3");
    if (!cert.chains) throw NotRecognized("certificate has no chain table");
    return cert;
}

}  // namespace

Iso::Iso(Certificate cert, const BBGroup& G)
    : cert_(validated_certificate(std::move(cert), G)),
      G_(&G),
      gp_(GroupParams::for_degree(cert_.e)),
      field_(cert_.explicit_field()),
      bf_(G, gp_, cert_.u, cert_.r_prime),
      bf_orig_(G, gp_, cert_.u, cert_.r),
      s_pows_(make_s_powers(bf_, cert_.s, cert_.e)),
      gram_(make_gram(bf_, s_pows_, cert_.e)) {
    BBOps ops{*G_};
    const std::vector<BBElem> star(cert_.s_star.begin(), cert_.s_star.end());
    prefix_slots_ = slp_eval_slots(*cert_.chains->prefix(), star, ops);
}

AbcdValues Iso::quadruple(const BField& bf, const BBElem& g) const {
    const BBGroup& G = *G_;
    const BBElem gr = G.mul(g, bf.r());
    const BBElem rg = G.mul(bf.r(), g);
    const BBElem rgr = G.mul(rg, bf.r());
    const BBElem* items[4] = {&g, &gr, &rg, &rgr};
    std::optional<BFieldElem> vals[4];
    for (int i = 0; i < 4; ++i) {
        const BValue b = b_op(G, gp_, bf.u(), *items[i]);
        if (!b.defined) continue;
        // Shifted value: the label of B(.)u is X(A), so A = b(B(.)u), with
        // B(.) = u giving A = 0.
        const BBElem prod = G.mul(b.value, bf.u());
        vals[i] = G.is_identity(prod) ? bf.zero() : bf.lift(prod);
    }
    return {vals[0], vals[1], vals[2], vals[3]};
}

AbcdValues Iso::abcd_values(const BBElem& g, Reflector use) const {
    return quadruple(reflector_field(use), g);
}

BFieldElem Iso::recover_lambda(const AbcdValues& v, Reflector use) const {
    const BField& bf = reflector_field(use);
    auto nonzero = [&](const std::optional<BFieldElem>& x) { return x && !bf.is_zero(*x); };
    BFieldElem lambda;
    if (nonzero(v.a) && nonzero(v.b) && nonzero(v.c) && nonzero(v.d)) {
        const BFieldElem num = bf.mul(bf.add(*v.a, *v.d), bf.add(*v.b, *v.c));
        const BFieldElem den = bf.mul(bf.mul(*v.a, *v.b), bf.mul(*v.c, *v.d));
        if (bf.is_zero(num)) throw Indeterminate("degenerate B-values");
        lambda = bf.sqrt(bf.mul(num, bf.inv(den)));
    } else if (!v.a && nonzero(v.b) && nonzero(v.c) && nonzero(v.d)) {
        const BFieldElem num = bf.add(*v.b, *v.c);
        if (bf.is_zero(num)) throw Indeterminate("degenerate B-values");
        lambda = bf.sqrt(bf.mul(num, bf.inv(bf.mul(bf.mul(*v.b, *v.c), *v.d))));
    } else {
        throw Indeterminate("lambda recovery needs four nonzero values or exactly A undefined");
    }
    if (use == Reflector::RPrime && !bf.eq(lambda, bf.one()))
        throw OracleInconsistent("lambda != 1 for the r' reflector");
    return lambda;
}

u64 Iso::to_explicit(const BFieldElem& t) const {
    if (bf_.is_zero(t)) return 0;
    u64 rhs = 0;
    for (int j = 0; j < cert_.e; ++j)
        if (bf_.trace(bf_.mul(t, s_pows_[j]))) rhs |= u64(1) << j;
    return gram_.solve(rhs);
}

BFieldElem Iso::from_explicit(u64 bits) const {
    BFieldElem acc = bf_.zero();
    for (int i = 0; bits; ++i, bits >>= 1)
        if (bits & 1) acc = bf_.add(acc, s_pows_[i]);
    return acc;
}

Mat2 Iso::entries_to_matrix(const BFieldElem& a, const BFieldElem& b, const BFieldElem& c,
                            const BFieldElem& d) const {
    return {to_explicit(a), to_explicit(b), to_explicit(c), to_explicit(d)};
}

Mat2 Iso::recover_rec(const BBElem& g, int depth) const {
    // Translation depth: the case analysis needs at most gr, gu, a slot
    // permutation and one direct case.
    if (depth > 6) throw NotRecognized("entry recovery: translation chain too deep");
    const BBGroup& G = *G_;
    if (G.is_identity(g)) return mat_identity();
    if (bb_eq(G, g, cert_.u)) return x_of(1);
    if (bb_eq(G, g, cert_.r_prime)) return r_prime_mat();

    const AbcdValues q = quadruple(bf_, g);
    const int nd = q.defined_count();
    const Mat2 u_hat = x_of(1);
    const Mat2 r_hat = r_prime_mat();

    if (nd == 4) {
        const bool za = bf_.is_zero(*q.a);
        const bool zb = bf_.is_zero(*q.b);
        if (!za && !zb) {
            // All four defined and nonzero (the zero conditions pair up:
            // A = 0 iff D = 0, B = 0 iff C = 0).
            const BFieldElem bc = bf_.add(*q.b, *q.c);
            const BFieldElem total = bf_.add(bf_.add(*q.a, *q.d), bc);
            const BFieldElem arg = bf_.mul(bf_.mul(*q.a, *q.d), bf_.mul(bc, total));
            if (bf_.is_zero(arg)) throw NotRecognized("entry recovery: vanishing discriminant");
            const BFieldElem di = bf_.inv(bf_.sqrt(arg));
            const BFieldElem ea = bf_.mul(bf_.mul(*q.a, bf_.mul(*q.c, *q.d)), di);
            const BFieldElem eb = bf_.mul(bf_.mul(*q.d, bc), di);
            const BFieldElem ec = bf_.mul(bf_.mul(*q.a, bc), di);
            const BFieldElem ed = bf_.mul(bf_.mul(*q.a, bf_.mul(*q.b, *q.d)), di);
            return entries_to_matrix(ea, eb, ec, ed);
        }
        // One zero pair: normalize to the trace-zero shape (A = D = 0) by a
        // right r' translate, then pass to g u, whose quadruple loses the
        // degeneracy -- unless g normalizes the r'u torus, which is exactly
        // the case (r' g u)^2 = 1.
        BBElem x = g;
        bool shifted = false;
        if (!za) {
            x = G.mul(g, cert_.r_prime);
            shifted = true;
        }
        const BBElem probe = G.mul(G.mul(cert_.r_prime, x), cert_.u);
        if (G.is_identity(G.mul(probe, probe))) throw InNormalizer{};
        const Mat2 mxu = recover_rec(G.mul(x, cert_.u), depth + 1);
        const Mat2 mx = mat_mul(field_, mxu, u_hat);
        return shifted ? mat_mul(field_, mx, r_hat) : mx;
    }

    if (nd == 3) {
        // Move the undefined slot to the B(g) position; the permuted
        // (B', C', D') values come from the original quadruple.
        const std::optional<BFieldElem> vals[4] = {q.a, q.b, q.c, q.d};
        int pos = 0;
        while (vals[pos]) ++pos;
        static const int sel[4][3] = {{1, 2, 3}, {0, 3, 2}, {3, 0, 1}, {2, 1, 0}};
        const BFieldElem& vb = *vals[sel[pos][0]];
        const BFieldElem& vc = *vals[sel[pos][1]];
        const BFieldElem& vd = *vals[sel[pos][2]];
        BBElem x = g;
        if (pos == 1) x = G.mul(g, cert_.r_prime);
        if (pos == 2) x = G.mul(cert_.r_prime, g);
        if (pos == 3) x = G.mul(G.mul(cert_.r_prime, g), cert_.r_prime);

        Mat2 mx;
        if (bf_.is_zero(vd)) {
            // x is unipotent X(c'): either u itself, or u r' x has all
            // entries nonzero and resolves by the dense case.
            if (bb_eq(G, x, cert_.u)) {
                mx = u_hat;
            } else {
                const Mat2 murx = recover_rec(G.mul(G.mul(cert_.u, cert_.r_prime), x), depth + 1);
                mx = mat_mul(field_, mat_mul(field_, r_hat, u_hat), murx);
            }
        } else if (!bf_.is_zero(vb) && !bf_.is_zero(vc)) {
            const BFieldElem delta = bf_.sqrt(bf_.mul(vb, vc));
            const BFieldElem di = bf_.inv(delta);
            mx = entries_to_matrix(bf_.mul(vc, di), bf_.zero(), delta, bf_.mul(vb, di));
        } else {
            throw NotRecognized("entry recovery: inconsistent three-value pattern");
        }
        if (pos == 1) return mat_mul(field_, mx, r_hat);
        if (pos == 2) return mat_mul(field_, r_hat, mx);
        if (pos == 3) return mat_mul(field_, mat_mul(field_, r_hat, mx), r_hat);
        return mx;
    }

    if (nd == 2) {
        // Two zero entries (diagonal or antidiagonal); g u has only one.
        const Mat2 mgu = recover_rec(G.mul(g, cert_.u), depth + 1);
        return mat_mul(field_, mgu, u_hat);
    }

    throw NotRecognized("entry recovery: B-value pattern impossible in SL(2)");
}

Mat2 Iso::recover_matrix(const BBElem& g) const {
    Mat2 m;
    try {
        m = recover_rec(g, 0);
    } catch (const InNormalizer&) {
        // g normalizes the torus: recover g h(s)^-1 and multiply back.
        try {
            const Mat2 m0 = recover_rec(G_->mul(g, G_->inv(cert_.h_s)), 0);
            m = mat_mul(field_, m0, cert_.s_hat[2]);
        } catch (const InNormalizer&) {
            throw NotRecognized("entry recovery: h(s)-shifted element still in normalizer");
        }
    }
    if (!mat_det_is_one(field_, m)) throw NotRecognized("entry recovery: determinant is not 1");
    return m;
}

std::pair<BBElem, Slp> Iso::psi_forward(const Mat2& m) const {
    if (!mat_det_is_one(field_, m)) throw Error("psi_forward requires det 1");
    Slp slp = bruhat_slp(field_, *cert_.chains, m);
    BBOps ops{*G_};
    const std::vector<BBElem> star(cert_.s_star.begin(), cert_.s_star.end());
    BBElem handle = slp_eval_with_prefix(slp, prefix_slots_, star, ops);
    return {std::move(handle), std::move(slp)};
}

std::pair<Mat2, Slp> Iso::psi_inverse(const BBElem& g) const {
    const Mat2 m = recover_matrix(g);
    Slp slp = bruhat_slp(field_, *cert_.chains, m);
    BBOps ops{*G_};
    const std::vector<BBElem> star(cert_.s_star.begin(), cert_.s_star.end());
    const BBElem back = slp_eval_with_prefix(slp, prefix_slots_, star, ops);
    if (!bb_eq(*G_, back, g)) throw NotRecognized("psi_inverse: SLP does not evaluate back to g");
    return {m, std::move(slp)};
}

BFieldElem Iso::point_image_zero(const BBElem& g) const {
    const AbcdValues q = quadruple(bf_, g);
    if (q.defined_count() != 4 || bf_.is_zero(*q.a) || bf_.is_zero(*q.b) || bf_.is_zero(*q.c) ||
        bf_.is_zero(*q.d))
        throw Undefined("point image needs all four B-values defined and != u");
    return bf_.mul(bf_.mul(*q.a, *q.b), bf_.inv(bf_.add(*q.a, *q.d)));
}

BFieldElem Iso::point_image_infinity(const BBElem& g) const {
    const AbcdValues q = quadruple(bf_, g);
    if (q.defined_count() != 4 || bf_.is_zero(*q.a) || bf_.is_zero(*q.b) || bf_.is_zero(*q.c) ||
        bf_.is_zero(*q.d))
        throw Undefined("point image needs all four B-values defined and != u");
    return bf_.mul(bf_.mul(*q.a, *q.b), bf_.inv(bf_.add(*q.b, *q.c)));
}

BFieldElem Iso::point_image(const BBElem& g, const BFieldElem& x) const {
    return point_image_zero(G_->mul(g, bf_.label(x)));
}

}  // namespace pgl2bb
