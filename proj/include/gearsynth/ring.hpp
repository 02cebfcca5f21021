#pragma once

#include <array>
#include <cassert>
#include <complex>
#include <ostream>
#include <sstream>
#include <string>

#include "gearsynth/common.hpp"

namespace gearsynth {

class Root2Scaled;

/**
 * RingElement: exact value (a + b·ω + c·ω² + d·ω³) / √2^κ with ω = e^{iπ/4}.
 *
 * Always kept canonical: κ = 0, or the numerator is not divisible by √2.
 * Divisibility test: a ≡ c (mod 2) and b ≡ d (mod 2); the quotient under
 * division by √2 = ω − ω³ is ((b−d)/2, (a+c)/2, (b+d)/2, (c−a)/2).
 */
class RingElement {
  public:
    RingElement() : a_(0), b_(0), c_(0), d_(0), kappa_(0) {}

    RingElement(Integer a, Integer b, Integer c, Integer d, long kappa = 0)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)),
          kappa_(kappa) {
        if (kappa_ < 0) throw std::invalid_argument("RingElement: negative kappa");
        canonicalize();
    }

    static RingElement from_int(long v) { return RingElement(Integer(v), 0, 0, 0, 0); }
    static RingElement zero() { return RingElement(); }
    static RingElement one() { return from_int(1); }
    // ω^k for any k.
    static RingElement omega_power(long k) {
        RingElement r = one();
        return r.mul_omega_power(k);
    }

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& c() const { return c_; }
    const Integer& d() const { return d_; }
    long kappa() const { return kappa_; }

    bool is_zero() const { return a_ == 0 && b_ == 0 && c_ == 0 && d_ == 0; }

    bool operator==(const RingElement& o) const {
        return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_ && kappa_ == o.kappa_;
    }
    bool operator!=(const RingElement& o) const { return !(*this == o); }

    RingElement operator-() const {
        return raw(-a_, -b_, -c_, -d_, kappa_);
    }

    RingElement operator+(const RingElement& o) const {
        if (kappa_ == o.kappa_) {
            return RingElement(a_ + o.a_, b_ + o.b_, c_ + o.c_, d_ + o.d_, kappa_);
        }
        const RingElement* lo = this;
        const RingElement* hi = &o;
        if (lo->kappa_ > hi->kappa_) std::swap(lo, hi);
        RingElement scaled = lo->scaled_numerator(hi->kappa_);
        return RingElement(scaled.a_ + hi->a_, scaled.b_ + hi->b_, scaled.c_ + hi->c_,
                           scaled.d_ + hi->d_, hi->kappa_);
    }

    RingElement operator-(const RingElement& o) const { return *this + (-o); }

    RingElement operator*(const RingElement& o) const {
        // Polynomial product modulo ω⁴ = −1.
        const Integer& p0 = a_;
        const Integer& p1 = b_;
        const Integer& p2 = c_;
        const Integer& p3 = d_;
        const Integer& q0 = o.a_;
        const Integer& q1 = o.b_;
        const Integer& q2 = o.c_;
        const Integer& q3 = o.d_;
        Integer r0 = p0 * q0 - p1 * q3 - p2 * q2 - p3 * q1;
        Integer r1 = p0 * q1 + p1 * q0 - p2 * q3 - p3 * q2;
        Integer r2 = p0 * q2 + p1 * q1 + p2 * q0 - p3 * q3;
        Integer r3 = p0 * q3 + p1 * q2 + p2 * q1 + p3 * q0;
        return RingElement(std::move(r0), std::move(r1), std::move(r2), std::move(r3),
                           kappa_ + o.kappa_);
    }

    // Complex conjugate: ω^k → ω^{−k}.
    RingElement conj() const { return raw(a_, -d_, -c_, -b_, kappa_); }

    // Multiply by ω^k (k may be negative).
    RingElement mul_omega_power(long k) const {
        long r = ((k % 8) + 8) % 8;
        Integer w[4] = {a_, b_, c_, d_};
        for (long i = 0; i < r; ++i) {
            // ×ω: (a,b,c,d) → (−d, a, b, c)
            Integer nd = -w[3];
            w[3] = w[2];
            w[2] = w[1];
            w[1] = w[0];
            w[0] = std::move(nd);
        }
        return raw(w[0], w[1], w[2], w[3], kappa_);
    }

    // |x|² as an exact element of Z[√2]/√2^m; always real and non-negative
    // in the √2 → +√2 embedding.
    Root2Scaled abs_sq() const;

    std::complex<double> eval() const {
        double half_sqrt2 = kSqrt2 / 2.0;
        double re = to_double(a_) + to_double(b_ - d_) * half_sqrt2;
        double im = to_double(c_) + to_double(b_ + d_) * half_sqrt2;
        double scale = std::pow(kSqrt2, static_cast<double>(kappa_));
        return {re / scale, im / scale};
    }

    std::string str() const {
        std::ostringstream os;
        os << "(" << a_ << "," << b_ << "," << c_ << "," << d_ << ")/√2^" << kappa_;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const RingElement& x) {
        return os << x.str();
    }

  private:
    // Construct without re-canonicalizing; valid when the inputs are already
    // a permutation/negation of a canonical numerator.
    static RingElement raw(Integer a, Integer b, Integer c, Integer d, long kappa) {
        RingElement r;
        r.a_ = std::move(a);
        r.b_ = std::move(b);
        r.c_ = std::move(c);
        r.d_ = std::move(d);
        r.kappa_ = kappa;
        return r;
    }

    RingElement scaled_numerator(long target_kappa) const {
        assert(target_kappa >= kappa_);
        Integer w[4] = {a_, b_, c_, d_};
        for (long i = kappa_; i < target_kappa; ++i) {
            // ×√2: (a,b,c,d) → (b−d, a+c, b+d, c−a)
            Integer na = w[1] - w[3];
            Integer nb = w[0] + w[2];
            Integer nc = w[1] + w[3];
            Integer nd = w[2] - w[0];
            w[0] = std::move(na);
            w[1] = std::move(nb);
            w[2] = std::move(nc);
            w[3] = std::move(nd);
        }
        return raw(w[0], w[1], w[2], w[3], target_kappa);
    }

    void canonicalize() {
        if (is_zero()) {
            kappa_ = 0;
            return;
        }
        while (kappa_ > 0 && is_even(a_ - c_) && is_even(b_ - d_)) {
            Integer na = (b_ - d_) / 2;
            Integer nb = (a_ + c_) / 2;
            Integer nc = (b_ + d_) / 2;
            Integer nd = (c_ - a_) / 2;
            a_ = std::move(na);
            b_ = std::move(nb);
            c_ = std::move(nc);
            d_ = std::move(nd);
            --kappa_;
        }
    }

    Integer a_, b_, c_, d_;
    long kappa_;
};

/**
 * Root2Scaled: exact value (A + B·√2) / √2^m.
 *
 * Canonical: m = 0, or A odd (the reduction (A,B,m) → (B, A/2, m−1) applies
 * exactly when A is even, since (A + B√2)/√2 = B + (A/2)√2).
 * The canonical m is the smallest denominator exponent (sde).
 */
class Root2Scaled {
  public:
    Root2Scaled() : A_(0), B_(0), m_(0) {}

    Root2Scaled(Integer A, Integer B, long m) : A_(std::move(A)), B_(std::move(B)), m_(m) {
        if (m_ < 0) throw std::invalid_argument("Root2Scaled: negative m");
        canonicalize();
    }

    static Root2Scaled from_int(long v) { return Root2Scaled(Integer(v), 0, 0); }
    static Root2Scaled zero() { return Root2Scaled(); }
    static Root2Scaled one() { return from_int(1); }

    const Integer& A() const { return A_; }
    const Integer& B() const { return B_; }
    long m() const { return m_; }

    long sde() const { return m_; }

    bool is_zero() const { return A_ == 0 && B_ == 0; }

    bool operator==(const Root2Scaled& o) const {
        return A_ == o.A_ && B_ == o.B_ && m_ == o.m_;
    }
    bool operator!=(const Root2Scaled& o) const { return !(*this == o); }

    Root2Scaled operator-() const { return Root2Scaled(-A_, -B_, m_); }

    Root2Scaled operator+(const Root2Scaled& o) const {
        const Root2Scaled* lo = this;
        const Root2Scaled* hi = &o;
        if (lo->m_ > hi->m_) std::swap(lo, hi);
        auto [A, B] = lo->numerator_at(hi->m_);
        return Root2Scaled(A + hi->A_, B + hi->B_, hi->m_);
    }

    Root2Scaled operator-(const Root2Scaled& o) const { return *this + (-o); }

    Root2Scaled operator*(const Root2Scaled& o) const {
        return Root2Scaled(A_ * o.A_ + 2 * B_ * o.B_, A_ * o.B_ + B_ * o.A_, m_ + o.m_);
    }

    // √2 → −√2 applied to the whole value. Odd-m representations are first
    // normalized to an even denominator exponent so the conjugate acts purely
    // on the numerator.
    Root2Scaled sqrt2_conj() const {
        if (m_ % 2 != 0) {
            // (A+B√2)/√2^m = (2B+A√2)/√2^{m+1}, then negate the √2 part.
            return Root2Scaled(2 * B_, -A_, m_ + 1);
        }
        return Root2Scaled(A_, -B_, m_);
    }

    // Sign of the value in the √2 → +√2 embedding, exactly.
    int sign() const {
        int sa = A_ == 0 ? 0 : (A_ > 0 ? 1 : -1);
        int sb = B_ == 0 ? 0 : (B_ > 0 ? 1 : -1);
        if (sa == 0 && sb == 0) return 0;
        if (sa >= 0 && sb >= 0) return 1;
        if (sa <= 0 && sb <= 0) return -1;
        // Mixed signs: compare A² with 2B².
        Integer lhs = A_ * A_;
        Integer rhs = 2 * B_ * B_;
        if (lhs == rhs) return 0; // impossible for integers unless both zero
        bool a_dominates = lhs > rhs;
        return a_dominates ? sa : sb;
    }

    bool is_negative() const { return sign() < 0; }
    bool is_positive() const { return sign() > 0; }

    // Exact comparison in the +√2 embedding.
    int compare(const Root2Scaled& o) const { return (*this - o).sign(); }
    bool operator<(const Root2Scaled& o) const { return compare(o) < 0; }
    bool operator<=(const Root2Scaled& o) const { return compare(o) <= 0; }

    double eval() const {
        double num = to_double(A_) + to_double(B_) * kSqrt2;
        return num / std::pow(kSqrt2, static_cast<double>(m_));
    }

    double eval_conj() const { return sqrt2_conj().eval(); }

    std::string str() const {
        std::ostringstream os;
        os << "(" << A_ << "+" << B_ << "√2)/√2^" << m_;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Root2Scaled& x) {
        return os << x.str();
    }

  private:
    std::pair<Integer, Integer> numerator_at(long target_m) const {
        assert(target_m >= m_);
        Integer A = A_, B = B_;
        for (long i = m_; i < target_m; ++i) {
            // ×√2: (A,B) → (2B, A)
            Integer nA = 2 * B;
            B = A;
            A = std::move(nA);
        }
        return {A, B};
    }

    void canonicalize() {
        if (is_zero()) {
            m_ = 0;
            return;
        }
        while (m_ > 0 && is_even(A_)) {
            Integer nA = B_;
            Integer nB = A_ / 2;
            A_ = std::move(nA);
            B_ = std::move(nB);
            --m_;
        }
    }

    Integer A_, B_;
    long m_;
};

inline Root2Scaled RingElement::abs_sq() const {
    RingElement p = (*this) * conj();
    // A real element of the ring has the form A + B(ω − ω³); p is already
    // canonical, so its kappa is the right denominator exponent.
    assert(p.c_ == 0 && p.b_ == -p.d_);
    return Root2Scaled(p.a_, p.b_, p.kappa_);
}

// sde of a Root2Scaled value (already canonical, so this is just m).
inline long sde(const Root2Scaled& x) { return x.sde(); }

} // namespace gearsynth
