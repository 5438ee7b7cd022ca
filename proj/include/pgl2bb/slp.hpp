#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pgl2bb/errors.hpp"
#include "pgl2bb/gf2e.hpp"

namespace pgl2bb {

std::string u128_to_dec(u128 n);
u128 u128_from_dec(const std::string& s);
int bitlength(u128 n);  // bitlength(0) = 1

enum class SlpOp : std::uint8_t { LoadGen, Mul, Inv, Pow };

struct SlpInstr {
    SlpOp op;
    std::uint32_t x = 0;  // generator index for LoadGen, else slot
    std::uint32_t y = 0;  // second slot for Mul
    u128 exp = 0;         // exponent for Pow
};

/// A straight-line program over an indexed generating set.  Every instruction
/// writes a fresh slot; the program's value is the last slot, and the empty
/// program evaluates to the identity.  A program may share an immutable
/// prefix (the per-certificate conjugation chains) whose slots it references.
struct Slp {
    std::uint32_t num_gens = 0;
    std::shared_ptr<const Slp> prefix;
    std::vector<SlpInstr> code;

    explicit Slp(std::uint32_t gens = 0) : num_gens(gens) {}
    Slp(std::shared_ptr<const Slp> shared, std::uint32_t gens) : num_gens(gens), prefix(std::move(shared)) {}

    std::size_t prefix_slots() const { return prefix ? prefix->total_slots() : 0; }
    std::size_t total_slots() const { return prefix_slots() + code.size(); }
    bool empty() const { return code.empty() && !prefix; }

    std::uint32_t load_gen(std::uint32_t g);
    std::uint32_t mul(std::uint32_t a, std::uint32_t b);
    std::uint32_t inv(std::uint32_t a);
    std::uint32_t pow(std::uint32_t a, u128 n);

    /// Reported length: one per instruction, except Pow counts as
    /// 2*bitlength(exponent).  Shared prefix included.
    std::uint64_t length() const;

    std::vector<SlpInstr> flatten() const;  // prefix + own code
    std::string to_text() const;            // one instruction per line
    static Slp from_text(const std::string& text, std::uint32_t num_gens);

private:
    std::uint32_t append(SlpInstr ins);
};

/// Evaluates `code` against already-computed earlier slots.  Ops supplies
/// Elem, identity(), mul(a, b), inv(a).
template <class Ops>
void slp_eval_code(const std::vector<SlpInstr>& code, std::size_t base,
                   const std::vector<typename Ops::Elem>& gens, Ops& ops,
                   std::vector<typename Ops::Elem>& slots) {
    auto at = [&](std::uint32_t i) -> const typename Ops::Elem& {
        if (i >= slots.size()) throw IndexOutOfRange("slot reference " + std::to_string(i));
        return slots[i];
    };
    for (const auto& ins : code) {
        switch (ins.op) {
            case SlpOp::LoadGen:
                if (ins.x >= gens.size()) throw IndexOutOfRange("generator index " + std::to_string(ins.x));
                slots.push_back(gens[ins.x]);
                break;
            case SlpOp::Mul:
                slots.push_back(ops.mul(at(ins.x), at(ins.y)));
                break;
            case SlpOp::Inv:
                slots.push_back(ops.inv(at(ins.x)));
                break;
            case SlpOp::Pow: {
                auto base_val = at(ins.x);
                auto acc = ops.identity();
                u128 n = ins.exp;
                while (n) {
                    if (n & 1) acc = ops.mul(acc, base_val);
                    n >>= 1;
                    if (n) base_val = ops.mul(base_val, base_val);
                }
                slots.push_back(acc);
                break;
            }
        }
    }
    (void)base;
}

template <class Ops>
std::vector<typename Ops::Elem> slp_eval_slots(const Slp& p, const std::vector<typename Ops::Elem>& gens,
                                               Ops& ops) {
    std::vector<typename Ops::Elem> slots;
    if (p.prefix) slots = slp_eval_slots(*p.prefix, gens, ops);
    slp_eval_code(p.code, slots.size(), gens, ops, slots);
    return slots;
}

/// Evaluates the whole program; the empty program yields the identity.
template <class Ops>
typename Ops::Elem slp_eval(const Slp& p, const std::vector<typename Ops::Elem>& gens, Ops& ops) {
    if (p.empty()) return ops.identity();
    auto slots = slp_eval_slots(p, gens, ops);
    return slots.back();
}

/// Evaluates only the program's own code on top of cached prefix slots.
/// Programs without a prefix are evaluated standalone.
template <class Ops>
typename Ops::Elem slp_eval_with_prefix(const Slp& p, const std::vector<typename Ops::Elem>& prefix_slots,
                                        const std::vector<typename Ops::Elem>& gens, Ops& ops) {
    if (!p.prefix) return slp_eval(p, gens, ops);
    if (p.code.empty()) return prefix_slots.back();
    auto slots = prefix_slots;
    slp_eval_code(p.code, slots.size(), gens, ops, slots);
    return slots.back();
}

}  // namespace pgl2bb
