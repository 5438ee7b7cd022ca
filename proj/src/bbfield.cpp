#include "pgl2bb/bbfield.hpp"

namespace pgl2bb {

std::string bfield_elem_to_string(const BFieldElem& t) {
    return t.zero ? "0" : bytes_to_hex(t.rep);
}

BField::BField(const BBGroup& G, const GroupParams& gp, BBElem u, BBElem r, bool check_lifts)
    : G_(&G), gp_(gp), u_(std::move(u)), r_(std::move(r)), check_lifts_(check_lifts) {
    if (!bb_is_involution(G, u_) || !bb_is_involution(G, r_))
        throw PreconditionFailed("black box field requires involutions u, r");
    if (bb_involutions_commute(G, u_, r_))
        throw PreconditionFailed("black box field requires [u, r] != 1");
    u_r_ = bb_conj(G, u_, r_);
    c0_ = bb_pow(G, G.mul(u_, u_r_), gp_.k_plus_1());
}

bool BField::eq(const Elem& a, const Elem& b) const {
    if (a.zero || b.zero) return a.zero == b.zero;
    const BBElem q = G_->mul(a.rep, G_->inv(b.rep));
    return G_->is_identity(G_->mul(q, q));
}

BField::Membership BField::membership(const BBElem& g) const {
    if (G_->is_identity(bb_comm(*G_, u_, g))) return Membership::InU;
    const BBElem ug = bb_conj(*G_, u_, g);
    const BBElem p = G_->mul(u_, ug);
    if (G_->is_identity(G_->mul(p, p))) return Membership::InB;
    return Membership::Outside;
}

BField::Elem BField::lift(const BBElem& x) const {
    if (G_->is_identity(x)) throw IdentityArgument();
    if (!G_->is_identity(bb_comm(*G_, u_, x))) throw NotInU();
    const BBElem rep = G_->mul(c0_, bb_pow(*G_, G_->mul(u_r_, x), gp_.k_plus_1()));
    if (check_lifts_ && !bb_eq(*G_, bb_conj(*G_, u_, rep), x))
        throw OracleInconsistent("lifted representative does not conjugate u to x");
    return BFieldElem::coset(rep);
}

BBElem BField::label(const Elem& t) const {
    if (t.zero) return G_->identity();
    return bb_conj(*G_, u_, t.rep);
}

BField::Elem BField::add(const Elem& a, const Elem& b) const {
    if (a.zero) return b;
    if (b.zero) return a;
    const BBElem p = G_->mul(label(a), label(b));
    if (G_->is_identity(p)) return zero();  // characteristic 2: x + x = 0
    return lift(p);
}

BField::Elem BField::mul(const Elem& a, const Elem& b) const {
    if (a.zero || b.zero) return zero();
    return BFieldElem::coset(G_->mul(a.rep, b.rep));
}

BField::Elem BField::inv(const Elem& a) const {
    if (a.zero) throw DivisionByZero();
    return BFieldElem::coset(G_->inv(a.rep));
}

BField::Elem BField::sqrt(const Elem& a) const {
    if (a.zero) return zero();
    BBElem rep = a.rep;
    for (int i = 0; i < gp_.e - 1; ++i) rep = G_->mul(rep, rep);
    return BFieldElem::coset(rep);
}

int BField::trace(const Elem& t) const {
    if (t.zero) return 0;
    BBElem prod = label(t);
    BBElem rep = t.rep;
    for (int i = 1; i < gp_.e; ++i) {
        rep = G_->mul(rep, rep);
        prod = G_->mul(prod, bb_conj(*G_, u_, rep));
    }
    if (G_->is_identity(prod)) return 0;
    if (bb_eq(*G_, prod, u_)) return 1;
    throw OracleInconsistent("trace product is neither 1 nor u");
}

}  // namespace pgl2bb
