#pragma once

#include <string>
#include <vector>

#include "pgl2bb/bbox.hpp"
#include "pgl2bb/mat2.hpp"

namespace pgl2bb {

/// Element of the black box field F = B*/U union {0}: zero, or a stored coset
/// representative in B = N_G(U).  Nonzero values are never canonicalized;
/// equality is always the squared-quotient test.
struct BFieldElem {
    bool zero = true;
    BBElem rep;

    static BFieldElem zero_elem() { return {}; }
    static BFieldElem coset(BBElem r) { return {false, std::move(r)}; }
};

std::string bfield_elem_to_string(const BFieldElem& t);  // "0" or rep hex

/// The field of order 2^e built inside the group oracle from an involution u:
/// U = C_G(u) is the additive group, B/U the multiplicative group.  The field
/// depends only on u; the second involution r merely produces B-elements.
/// Implements the same interface as Gf2e, so the subfield-degree, minimal
/// polynomial, coordinate and generator-search algorithms run unchanged here.
class BField {
public:
    using Elem = BFieldElem;

    BField(const BBGroup& G, const GroupParams& gp, BBElem u, BBElem r, bool check_lifts = false);

    int ext_degree() const { return gp_.e; }
    const BBGroup& group() const { return *G_; }
    const GroupParams& params() const { return gp_; }
    const BBElem& u() const { return u_; }
    const BBElem& r() const { return r_; }
    const BBElem& u_r() const { return u_r_; }

    Elem zero() const { return BFieldElem::zero_elem(); }
    Elem one() const { return BFieldElem::coset(G_->identity()); }
    bool is_zero(const Elem& a) const { return a.zero; }

    bool eq(const Elem& a, const Elem& b) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    Elem square(const Elem& a) const { return mul(a, a); }
    Elem sqrt(const Elem& a) const;           // rep^(2^(e-1))
    int trace(const Elem& t) const;           // via u^Tr(t) = prod u^(t^(2^i))

    enum class Membership { InU, InB, Outside };
    Membership membership(const BBElem& g) const;

    /// b(x) = (u u^r)^(k+1) (u^r x)^(k+1) for x in U \ {1}; the returned
    /// representative conjugates u to x.  Inverse of label().
    Elem lift(const BBElem& x) const;

    /// X(t): the label u^rep of a nonzero field element, X(0) = 1.
    BBElem label(const Elem& t) const;

    /// Section 5.3 generator search over this field.
    Elem find_generator(const std::vector<Elem>& alphas) const { return find_field_generator(*this, alphas); }

private:
    const BBGroup* G_;
    GroupParams gp_;
    BBElem u_, r_, u_r_, c0_;  // c0 = (u u^r)^(k+1)
    bool check_lifts_;
};

}  // namespace pgl2bb
