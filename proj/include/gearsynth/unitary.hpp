#pragma once

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gearsynth/ring.hpp"

namespace gearsynth {

enum class Token { H, T, Tdg, S, Sdg, X, Y, Z, W };

inline const char* token_name(Token t) {
    switch (t) {
        case Token::H: return "H";
        case Token::T: return "T";
        case Token::Tdg: return "Tdg";
        case Token::S: return "S";
        case Token::Sdg: return "Sdg";
        case Token::X: return "X";
        case Token::Y: return "Y";
        case Token::Z: return "Z";
        case Token::W: return "W";
    }
    return "?";
}

/**
 * GateWord: a sequence of gate tokens. The text form is whitespace-separated,
 * e.g. "H T H". W is the global phase ω.
 */
class GateWord {
  public:
    GateWord() = default;
    explicit GateWord(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    static GateWord parse(const std::string& text) {
        std::istringstream is(text);
        std::vector<Token> toks;
        std::string s;
        while (is >> s) {
            toks.push_back(parse_token(s));
        }
        return GateWord(std::move(toks));
    }

    static Token parse_token(const std::string& s) {
        if (s == "H") return Token::H;
        if (s == "T") return Token::T;
        if (s == "Tdg" || s == "T+" || s == "Td") return Token::Tdg;
        if (s == "S") return Token::S;
        if (s == "Sdg" || s == "S+" || s == "Sd") return Token::Sdg;
        if (s == "X") return Token::X;
        if (s == "Y") return Token::Y;
        if (s == "Z") return Token::Z;
        if (s == "W") return Token::W;
        throw std::invalid_argument("GateWord: unknown token '" + s + "'");
    }

    const std::vector<Token>& tokens() const { return tokens_; }
    bool empty() const { return tokens_.empty(); }
    std::size_t size() const { return tokens_.size(); }

    void push_back(Token t) { tokens_.push_back(t); }
    void append(const GateWord& w) {
        tokens_.insert(tokens_.end(), w.tokens_.begin(), w.tokens_.end());
    }

    // Number of T/Tdg tokens; both are non-Clifford with unit T-cost.
    long tcount() const {
        long n = 0;
        for (Token t : tokens_)
            if (t == Token::T || t == Token::Tdg) ++n;
        return n;
    }

    // For a single-qubit word every T is its own layer.
    long tdepth() const { return tcount(); }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            if (i) out += ' ';
            out += token_name(tokens_[i]);
        }
        return out;
    }

    bool operator==(const GateWord& o) const { return tokens_ == o.tokens_; }

  private:
    std::vector<Token> tokens_;
};

/**
 * ExactUnitary: a 2×2 matrix over the ring, exactly unitary for any value
 * built from gate generators. Global phase ω^k is compared via
 * canonical_mod_phase(); `phase_power` reports the ω exponent factored out
 * when a canonical form is taken.
 */
class ExactUnitary {
  public:
    ExactUnitary()
        : e00_(RingElement::one()), e01_(), e10_(), e11_(RingElement::one()) {}

    ExactUnitary(RingElement e00, RingElement e01, RingElement e10, RingElement e11)
        : e00_(std::move(e00)), e01_(std::move(e01)), e10_(std::move(e10)),
          e11_(std::move(e11)) {}

    static ExactUnitary identity() { return ExactUnitary(); }

    const RingElement& e00() const { return e00_; }
    const RingElement& e01() const { return e01_; }
    const RingElement& e10() const { return e10_; }
    const RingElement& e11() const { return e11_; }

    ExactUnitary operator*(const ExactUnitary& o) const {
        return ExactUnitary(e00_ * o.e00_ + e01_ * o.e10_, e00_ * o.e01_ + e01_ * o.e11_,
                            e10_ * o.e00_ + e11_ * o.e10_, e10_ * o.e01_ + e11_ * o.e11_);
    }

    ExactUnitary dagger() const {
        return ExactUnitary(e00_.conj(), e10_.conj(), e01_.conj(), e11_.conj());
    }

    ExactUnitary mul_phase(long omega_exp) const {
        return ExactUnitary(e00_.mul_omega_power(omega_exp), e01_.mul_omega_power(omega_exp),
                            e10_.mul_omega_power(omega_exp), e11_.mul_omega_power(omega_exp));
    }

    bool operator==(const ExactUnitary& o) const {
        return e00_ == o.e00_ && e01_ == o.e01_ && e10_ == o.e10_ && e11_ == o.e11_;
    }
    bool operator!=(const ExactUnitary& o) const { return !(*this == o); }

    bool is_unitary() const {
        ExactUnitary p = dagger() * (*this);
        return p == identity();
    }

    // Serialized canonical representative over the eight global phases ω^k,
    // plus the exponent that was applied to reach it.
    std::pair<std::string, long> canonical_mod_phase() const {
        std::string best;
        long best_k = 0;
        for (long k = 0; k < 8; ++k) {
            std::string key = mul_phase(k).key();
            if (best.empty() || key < best) {
                best = key;
                best_k = k;
            }
        }
        return {best, best_k};
    }

    bool equal_mod_phase(const ExactUnitary& o) const {
        return canonical_mod_phase().first == o.canonical_mod_phase().first;
    }

    // If o == ω^k · (*this) for some k, return k.
    std::optional<long> phase_to(const ExactUnitary& o) const {
        for (long k = 0; k < 8; ++k) {
            if (mul_phase(k) == o) return k;
        }
        return std::nullopt;
    }

    std::string key() const {
        std::ostringstream os;
        for (const RingElement* e : {&e00_, &e01_, &e10_, &e11_}) {
            os << e->a() << ',' << e->b() << ',' << e->c() << ',' << e->d() << ','
               << e->kappa() << ';';
        }
        return os.str();
    }

    std::array<std::complex<double>, 4> eval() const {
        return {e00_.eval(), e01_.eval(), e10_.eval(), e11_.eval()};
    }

  private:
    RingElement e00_, e01_, e10_, e11_;
};

inline ExactUnitary gate_unitary(Token t) {
    const RingElement zero;
    const RingElement one = RingElement::one();
    const RingElement w = RingElement::omega_power(1);
    switch (t) {
        case Token::H: {
            RingElement h(1, 0, 0, 0, 1); // 1/√2
            return ExactUnitary(h, h, h, -h);
        }
        case Token::T:
            return ExactUnitary(one, zero, zero, w);
        case Token::Tdg:
            return ExactUnitary(one, zero, zero, RingElement::omega_power(7));
        case Token::S:
            return ExactUnitary(one, zero, zero, RingElement::omega_power(2));
        case Token::Sdg:
            return ExactUnitary(one, zero, zero, RingElement::omega_power(6));
        case Token::X:
            return ExactUnitary(zero, one, one, zero);
        case Token::Y:
            return ExactUnitary(zero, -RingElement::omega_power(2),
                                RingElement::omega_power(2), zero);
        case Token::Z:
            return ExactUnitary(one, zero, zero, -one);
        case Token::W:
            return ExactUnitary(w, zero, zero, w);
    }
    throw std::invalid_argument("gate_unitary: bad token");
}

// Product of the generator matrices in reading order: eval("H T H") = H·T·H.
inline ExactUnitary eval_circuit(const GateWord& word) {
    ExactUnitary u = ExactUnitary::identity();
    for (Token t : word.tokens()) u = u * gate_unitary(t);
    return u;
}

inline ExactUnitary eval_circuit(const std::string& text) {
    return eval_circuit(GateWord::parse(text));
}

} // namespace gearsynth
