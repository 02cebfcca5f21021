#pragma once

#include <algorithm>
#include <cctype>
#include <cstring>
#include <string>
#include <vector>

#include "gearsynth/angle.hpp"
#include "gearsynth/unitary.hpp"

namespace gearsynth {

/**
 * GearboxNode: a rotation-plan tree.
 *   Leaf       — a gate word applied directly,
 *   Gearbox    — the d-ancilla circuit over its children,
 *   Composed   — the depth-d recursive gearbox over one base node.
 * Text grammar: leaf = gate word, `GB(child, child, ...)`, `C*d(child)`.
 */
struct GearboxNode {
    enum class Kind { Leaf, Gearbox, Composed };

    Kind kind = Kind::Leaf;
    GateWord word;                    // Leaf
    std::vector<GearboxNode> children; // Gearbox: d >= 1 children; Composed: [base]
    long depth = 0;                   // Composed

    static GearboxNode leaf(GateWord w) {
        GearboxNode n;
        n.kind = Kind::Leaf;
        n.word = std::move(w);
        return n;
    }
    static GearboxNode leaf(const std::string& text) { return leaf(GateWord::parse(text)); }

    static GearboxNode gearbox(std::vector<GearboxNode> cs) {
        if (cs.empty()) throw std::invalid_argument("GearboxNode: gearbox arity must be >= 1");
        GearboxNode n;
        n.kind = Kind::Gearbox;
        n.children = std::move(cs);
        return n;
    }

    static GearboxNode composed(GearboxNode base, long d) {
        if (d < 1) throw std::invalid_argument("GearboxNode: composed depth must be >= 1");
        GearboxNode n;
        n.kind = Kind::Composed;
        n.children.push_back(std::move(base));
        n.depth = d;
        return n;
    }

    long arity() const { return static_cast<long>(children.size()); }

    std::string str() const {
        switch (kind) {
            case Kind::Leaf:
                return word.empty() ? "I" : word.str();
            case Kind::Gearbox: {
                std::string s = "GB(";
                for (std::size_t i = 0; i < children.size(); ++i) {
                    if (i) s += ", ";
                    s += children[i].str();
                }
                return s + ")";
            }
            case Kind::Composed:
                return "C*" + std::to_string(depth) + "(" + children[0].str() + ")";
        }
        return "?";
    }
};

namespace detail {

class NodeParser {
  public:
    explicit NodeParser(const std::string& text) : s_(text) {}

    GearboxNode parse() {
        GearboxNode n = parse_node();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return n;
    }

  private:
    GearboxNode parse_node() {
        skip_ws();
        if (starts_with("GB(")) {
            pos_ += 3;
            std::vector<GearboxNode> cs;
            cs.push_back(parse_node());
            skip_ws();
            while (peek() == ',') {
                ++pos_;
                cs.push_back(parse_node());
                skip_ws();
            }
            expect(')');
            return GearboxNode::gearbox(std::move(cs));
        }
        if (starts_with("C*")) {
            pos_ += 2;
            long d = parse_int();
            expect('(');
            GearboxNode base = parse_node();
            skip_ws();
            expect(')');
            return GearboxNode::composed(std::move(base), d);
        }
        // Leaf: tokens up to ',' or ')'. "I" denotes the empty word.
        std::string leaf;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ')') {
            leaf += s_[pos_++];
        }
        std::string trimmed;
        {
            auto b = leaf.find_first_not_of(" \t");
            auto e = leaf.find_last_not_of(" \t");
            if (b != std::string::npos) trimmed = leaf.substr(b, e - b + 1);
        }
        if (trimmed.empty()) fail("empty leaf");
        if (trimmed == "I") return GearboxNode::leaf(GateWord());
        return GearboxNode::leaf(trimmed);
    }

    bool starts_with(const char* p) const { return s_.compare(pos_, std::strlen(p), p) == 0; }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    long parse_int() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer");
        return std::stol(s_.substr(start, pos_ - start));
    }
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("gearbox grammar error at position " +
                                    std::to_string(pos_) + ": " + why);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline GearboxNode parse_gearbox(const std::string& text) {
    return detail::NodeParser(text).parse();
}

// The angle θ with sin²θ = Π magᵢ²; the measurement statistics of the flat
// gearbox are functions of θ, the output rotation of tan²θ.
inline Angle gearbox_theta(const std::vector<LogMag>& mags) {
    double sum = 0.0;
    for (const LogMag& m : mags) {
        if (m.is_zero()) return Angle{};
        sum += m.log2_inv;
    }
    if (sum < 500.0) {
        double s = std::exp2(-sum);
        if (s >= 1.0) throw std::invalid_argument("gearbox_theta: magnitude product must be < 1");
        return make_angle(std::asin(s));
    }
    return angle_from_log2_inv(sum);
}

/**
 * Success-branch rotation angle of a flat gearbox whose children have the
 * given off-diagonal magnitudes: tan⁻¹(tan²θ) with sin²θ = Π magᵢ².
 */
inline Angle gearbox_angle(const std::vector<LogMag>& mags) {
    double sum = 0.0;
    for (const LogMag& m : mags) {
        if (m.is_zero()) return Angle{}; // any zero magnitude gives the identity
        sum += m.log2_inv;
    }
    if (sum <= 0.0) {
        throw std::invalid_argument("gearbox_angle: magnitude product must be < 1");
    }
    if (sum < 500.0) {
        double s = std::exp2(-sum);
        double theta = std::asin(s);
        double t = std::tan(theta);
        double out = std::atan(t * t);
        return make_angle(out);
    }
    // Deep regime: sin θ = tan θ = θ to double precision; output is θ².
    Angle a = angle_from_log2_inv(2.0 * sum);
    return a;
}

inline Angle gearbox_angle(const std::vector<double>& mags) {
    std::vector<LogMag> lm;
    lm.reserve(mags.size());
    for (double m : mags) lm.push_back(LogMag::from_value(m));
    return gearbox_angle(lm);
}

// Probability that every measurement reads 0: cos⁴θ + sin⁴θ.
inline double gearbox_success_prob(const Angle& theta) {
    if (theta.radians >= kPi / 2) {
        throw std::invalid_argument("gearbox_success_prob: theta must be below pi/2");
    }
    double s2;
    if (theta.is_zero()) return 1.0;
    if (theta.radians >= kTinyAngle) {
        double s = std::sin(theta.radians);
        s2 = s * s;
    } else {
        double s = std::exp2(-theta.log2_inv);
        s2 = s * s;
    }
    return 1.0 - 2.0 * s2 * (1.0 - s2);
}

/**
 * Rotation angle of the depth-d composed gearbox: tan⁻¹(tan^{2^d} θ₀),
 * with the tangent-power descriptor populated.
 */
inline Angle composed_angle(const Angle& theta0, long d) {
    if (d < 1) throw std::invalid_argument("composed_angle: depth must be >= 1");
    if (d > 60) throw std::invalid_argument("composed_angle: depth too large");
    if (theta0.is_zero() || theta0.radians <= 0.0 || theta0.radians >= kPi / 4) {
        throw std::invalid_argument("composed_angle: theta0 must lie in (0, pi/4)");
    }
    double per = log2_inv_tan(theta0);
    double L = std::ldexp(per, static_cast<int>(d)); // 2^d · log₂(1/tan θ₀)
    Angle out;
    if (L < 500.0) {
        double t = std::exp2(-L);
        out = make_angle(std::atan(t));
    } else {
        out = angle_from_log2_inv(L);
    }
    out.tan_power = TanPower{theta0.radians, d};
    return out;
}

inline Angle composed_angle(double theta0, long d) {
    return composed_angle(make_angle(theta0), d);
}

// D-sets with distinct positive entries correspond to even weights Σ 2^{D_j}.
inline long weight_of_dset(const std::vector<long>& D) {
    long w = 0;
    for (long d : D) {
        if (d < 1 || d > 60) throw std::invalid_argument("dset: entries must be in [1,60]");
        w += 1L << d;
    }
    return w;
}

inline std::vector<long> dset_from_weight(long w) {
    if (w < 2 || w % 2 != 0) {
        throw std::invalid_argument("dset_from_weight: weight must be even and >= 2");
    }
    std::vector<long> D;
    for (long bit = 1; bit <= 60; ++bit) {
        if ((w >> bit) & 1) D.push_back(bit);
    }
    return D;
}

/**
 * φ(D) = sin⁻¹( Π_j sin(tan⁻¹(tan^{2^{D_j}}(π/8))) ), the exponent-circuit
 * angle for a strictly increasing positive D-set. Strictly decreasing in the
 * weight Σ 2^{D_j}.
 */
inline Angle phi_of_D(const std::vector<long>& D) {
    if (D.empty()) throw std::invalid_argument("phi_of_D: D must be non-empty");
    for (std::size_t i = 0; i < D.size(); ++i) {
        if (D[i] < 1) throw std::invalid_argument("phi_of_D: D entries must be positive");
        if (i > 0 && D[i] <= D[i - 1]) {
            throw std::invalid_argument("phi_of_D: D must be strictly increasing");
        }
    }
    const Angle theta0 = make_angle(kPi / 8);
    double sum = 0.0; // log₂(1/Π sin)
    for (long d : D) sum += log2_inv_sin(composed_angle(theta0, d));
    if (sum < 500.0) {
        double s = std::exp2(-sum);
        return make_angle(std::asin(s));
    }
    return angle_from_log2_inv(sum);
}

// Per-attempt (all measurements zero) T-gate count of a plan tree.
inline long static_tcount(const GearboxNode& node) {
    switch (node.kind) {
        case GearboxNode::Kind::Leaf:
            return node.word.tcount();
        case GearboxNode::Kind::Gearbox: {
            long sum = 0;
            for (const auto& c : node.children) sum += static_tcount(c);
            return 4 * (node.arity() - 1) + 2 * sum;
        }
        case GearboxNode::Kind::Composed: {
            // Each level is an arity-1 gearbox (Clifford-controlled -iX), so
            // the all-success unrolling applies the base 2^d times.
            long base = static_tcount(node.children[0]);
            return (1L << node.depth) * base;
        }
    }
    return 0;
}

// Per-attempt T-depth of a plan tree (single-qubit leaves: depth = count).
inline long static_tdepth(const GearboxNode& node) {
    switch (node.kind) {
        case GearboxNode::Kind::Leaf:
            return node.word.tdepth();
        case GearboxNode::Kind::Gearbox: {
            long mx = 0;
            for (const auto& c : node.children) mx = std::max(mx, static_tdepth(c));
            return (node.arity() - 1) + 2 * mx;
        }
        case GearboxNode::Kind::Composed:
            return (1L << node.depth) * static_tdepth(node.children[0]);
    }
    return 0;
}

// Success probability of one attempt of a flat gearbox with the given child
// magnitudes.
inline double gearbox_success_prob(const std::vector<LogMag>& mags) {
    return gearbox_success_prob(gearbox_theta(mags));
}

// Off-diagonal magnitude of the unitary the node realizes on success.
inline LogMag node_magnitude(const GearboxNode& node) {
    switch (node.kind) {
        case GearboxNode::Kind::Leaf: {
            double v = eval_circuit(node.word).e10().abs_sq().eval();
            return LogMag::from_value(std::sqrt(std::max(0.0, v)));
        }
        case GearboxNode::Kind::Gearbox: {
            std::vector<LogMag> mags;
            for (const auto& c : node.children) mags.push_back(node_magnitude(c));
            return sin_mag(gearbox_angle(mags));
        }
        case GearboxNode::Kind::Composed: {
            LogMag base = node_magnitude(node.children[0]);
            Angle theta0 = make_angle(std::asin(std::min(1.0, base.value())));
            return sin_mag(composed_angle(theta0, node.depth));
        }
    }
    return LogMag{};
}

// Success-branch rotation angle realized by the node (Gearbox/Composed).
inline Angle node_realized_angle(const GearboxNode& node) {
    switch (node.kind) {
        case GearboxNode::Kind::Gearbox: {
            std::vector<LogMag> mags;
            for (const auto& c : node.children) mags.push_back(node_magnitude(c));
            return gearbox_angle(mags);
        }
        case GearboxNode::Kind::Composed: {
            LogMag base = node_magnitude(node.children[0]);
            Angle theta0 = make_angle(std::asin(std::min(1.0, base.value())));
            return composed_angle(theta0, node.depth);
        }
        case GearboxNode::Kind::Leaf:
            throw std::invalid_argument("node_realized_angle: leaf has no rotation angle");
    }
    return Angle{};
}

} // namespace gearsynth
