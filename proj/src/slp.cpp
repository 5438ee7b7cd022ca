#include "pgl2bb/slp.hpp"

#include <sstream>

namespace pgl2bb {

std::string u128_to_dec(u128 n) {
    if (n == 0) return "0";
    std::string out;
    while (n) {
        out.push_back(static_cast<char>('0' + static_cast<int>(n % 10)));
        n /= 10;
    }
    return {out.rbegin(), out.rend()};
}

u128 u128_from_dec(const std::string& s) {
    if (s.empty()) throw Error("empty decimal literal");
    u128 n = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw Error("invalid decimal literal");
        n = n * 10 + static_cast<unsigned>(c - '0');
    }
    return n;
}

int bitlength(u128 n) {
    int b = 1;
    while (n >>= 1) ++b;
    return b;
}

std::uint32_t Slp::append(SlpInstr ins) {
    code.push_back(ins);
    return static_cast<std::uint32_t>(total_slots() - 1);
}

std::uint32_t Slp::load_gen(std::uint32_t g) {
    if (g >= num_gens) throw IndexOutOfRange("generator index " + std::to_string(g));
    return append({SlpOp::LoadGen, g, 0, 0});
}

std::uint32_t Slp::mul(std::uint32_t a, std::uint32_t b) {
    if (a >= total_slots() || b >= total_slots()) throw IndexOutOfRange("Mul operand slot");
    return append({SlpOp::Mul, a, b, 0});
}

std::uint32_t Slp::inv(std::uint32_t a) {
    if (a >= total_slots()) throw IndexOutOfRange("Inv operand slot");
    return append({SlpOp::Inv, a, 0, 0});
}

std::uint32_t Slp::pow(std::uint32_t a, u128 n) {
    if (a >= total_slots()) throw IndexOutOfRange("Pow operand slot");
    return append({SlpOp::Pow, a, 0, n});
}

std::uint64_t Slp::length() const {
    std::uint64_t len = prefix ? prefix->length() : 0;
    for (const auto& ins : code) len += ins.op == SlpOp::Pow ? 2 * bitlength(ins.exp) : 1;
    return len;
}

std::vector<SlpInstr> Slp::flatten() const {
    std::vector<SlpInstr> out;
    if (prefix) out = prefix->flatten();
    out.insert(out.end(), code.begin(), code.end());
    return out;
}

std::string Slp::to_text() const {
    std::ostringstream os;
    for (const auto& ins : flatten()) {
        switch (ins.op) {
            case SlpOp::LoadGen: os << 'G' << ins.x << '\n'; break;
            case SlpOp::Mul: os << "M " << ins.x << ' ' << ins.y << '\n'; break;
            case SlpOp::Inv: os << "I " << ins.x << '\n'; break;
            case SlpOp::Pow: os << "P " << ins.x << ' ' << u128_to_dec(ins.exp) << '\n'; break;
        }
    }
    return os.str();
}

Slp Slp::from_text(const std::string& text, std::uint32_t num_gens) {
    Slp p(num_gens);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        char op;
        ls >> op;
        if (op == 'G') {
            std::uint32_t g;
            ls >> g;
            if (ls.fail()) throw Error("malformed SLP line: " + line);
            p.load_gen(g);
        } else if (op == 'M') {
            std::uint32_t a, b;
            ls >> a >> b;
            if (ls.fail()) throw Error("malformed SLP line: " + line);
            p.mul(a, b);
        } else if (op == 'I') {
            std::uint32_t a;
            ls >> a;
            if (ls.fail()) throw Error("malformed SLP line: " + line);
            p.inv(a);
        } else if (op == 'P') {
            std::uint32_t a;
            std::string exp;
            ls >> a >> exp;
            if (ls.fail()) throw Error("malformed SLP line: " + line);
            p.pow(a, u128_from_dec(exp));
        } else {
            throw Error("unknown SLP instruction: " + line);
        }
    }
    return p;
}

}  // namespace pgl2bb
