#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <iostream>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "gearsynth/config.hpp"
#include "gearsynth/unitary.hpp"

namespace gearsynth {

struct EnumeratedUnitary {
    ExactUnitary u;
    GateWord word;
    long tcount = 0;
    double abs_u = 0.0; // |e10| in the +√2 embedding
};

/**
 * Breadth-first closure of Clifford+T unitaries modulo global phase, layered
 * by T-count. Clifford generators extend a layer at zero cost; T/Tdg step to
 * the next layer. Entries appear in deterministic discovery order, so the
 * stored word for each class is reproducible and has minimal T-count.
 */
class UnitaryEnumeration {
  public:
    UnitaryEnumeration(long max_tcount, long node_cap) {
        build(max_tcount, node_cap);
    }

    const std::vector<EnumeratedUnitary>& entries() const { return entries_; }
    long max_tcount() const { return built_tcount_; }

    const EnumeratedUnitary* find_mod_phase(const ExactUnitary& u) const {
        auto it = index_.find(u.canonical_mod_phase().first);
        if (it == index_.end()) return nullptr;
        return &entries_[it->second];
    }

  private:
    void build(long max_tcount, long node_cap) {
        built_tcount_ = max_tcount;
        const Token cliffords[] = {Token::H, Token::S, Token::Sdg, Token::X, Token::Z};
        const Token tgates[] = {Token::T, Token::Tdg};

        add_state(ExactUnitary::identity(), GateWord(), 0);
        std::size_t layer_begin = 0;
        for (long layer = 0; layer <= max_tcount; ++layer) {
            // Zero-cost closure of the current layer under Clifford generators.
            for (std::size_t i = layer_begin; i < entries_.size(); ++i) {
                for (Token g : cliffords) {
                    ExactUnitary v = entries_[i].u * gate_unitary(g);
                    GateWord w = entries_[i].word;
                    w.push_back(g);
                    add_state(std::move(v), std::move(w), layer);
                    if (static_cast<long>(entries_.size()) > node_cap)
                        throw ResourceError("unitary enumeration exceeded node cap");
                }
            }
            if (layer == max_tcount) break;
            std::size_t next_begin = entries_.size();
            for (std::size_t i = layer_begin; i < next_begin; ++i) {
                for (Token g : tgates) {
                    ExactUnitary v = entries_[i].u * gate_unitary(g);
                    GateWord w = entries_[i].word;
                    w.push_back(g);
                    add_state(std::move(v), std::move(w), layer + 1);
                    if (static_cast<long>(entries_.size()) > node_cap)
                        throw ResourceError("unitary enumeration exceeded node cap");
                }
            }
            layer_begin = next_begin;
        }
    }

    void add_state(ExactUnitary u, GateWord word, long tcount) {
        std::string key = u.canonical_mod_phase().first;
        if (index_.count(key)) return;
        EnumeratedUnitary e;
        e.abs_u = std::sqrt(std::max(0.0, u.e10().abs_sq().eval()));
        e.u = std::move(u);
        e.word = std::move(word);
        e.tcount = tcount;
        index_.emplace(std::move(key), entries_.size());
        entries_.push_back(std::move(e));
    }

    std::vector<EnumeratedUnitary> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    long built_tcount_ = 0;
};

/**
 * Base database for exact synthesis: every enumerated class with
 * sde(|u|²) ≤ 3, each mapped to a minimal-T word. Built once, then shared.
 */
class BaseDatabase {
  public:
    BaseDatabase() {
        UnitaryEnumeration bfs(config().db_bfs_tcount, 4000000);
        long clifford_classes = 0;
        for (const auto& e : bfs.entries()) {
            if (e.u.e10().abs_sq().sde() > 3) continue;
            if (e.tcount > 3) {
                throw std::logic_error(
                    "base database: sde<=3 class with T-count above 3; raise db_bfs_tcount");
            }
            if (e.tcount == 0) ++clifford_classes;
            index_.emplace(e.u.canonical_mod_phase().first, entries_.size());
            entries_.push_back(e);
        }
        if (clifford_classes != 24) {
            throw std::logic_error("base database: expected 24 Clifford classes, got " +
                                   std::to_string(clifford_classes));
        }
        check_closure();
    }

    const EnumeratedUnitary* lookup(const ExactUnitary& u) const {
        auto it = index_.find(u.canonical_mod_phase().first);
        if (it == index_.end()) return nullptr;
        return &entries_[it->second];
    }

    std::size_t size() const { return entries_.size(); }
    const std::vector<EnumeratedUnitary>& entries() const { return entries_; }

  private:
    // The sde ≤ 3 region must be closed under the generators; a gap here
    // would surface later as a lookup miss inside the greedy loop.
    void check_closure() const {
        const Token gens[] = {Token::H, Token::S, Token::T, Token::Tdg};
        for (const auto& e : entries_) {
            for (Token g : gens) {
                ExactUnitary v = gate_unitary(g) * e.u;
                if (v.e10().abs_sq().sde() > 3) continue;
                if (!index_.count(v.canonical_mod_phase().first)) {
                    throw std::logic_error("base database: closure violation");
                }
            }
        }
    }

    std::vector<EnumeratedUnitary> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline const BaseDatabase& base_database() {
    static const BaseDatabase db;
    return db;
}

// Count of greedy steps where more than one l reduced the sde (expected 0).
inline std::atomic<long>& greedy_tie_count() {
    static std::atomic<long> n{0};
    return n;
}

namespace detail {

inline const GateWord& tpower_tokens(long p) {
    static const std::vector<GateWord> table = [] {
        std::vector<GateWord> t(8);
        t[1] = GateWord::parse("T");
        t[2] = GateWord::parse("S");
        t[3] = GateWord::parse("S T");
        t[4] = GateWord::parse("Z");
        t[5] = GateWord::parse("Z T");
        t[6] = GateWord::parse("Sdg");
        t[7] = GateWord::parse("Tdg");
        return t;
    }();
    return table[((p % 8) + 8) % 8];
}

} // namespace detail

/**
 * Exact synthesis: greedy sde reduction by left-multiplying with H·T^l, then
 * a database lookup at sde(|u|²) ≤ 3. The returned word re-evaluates to the
 * input exactly (trailing W tokens absorb the global phase) and its T-count
 * is the minimum over all Clifford+T realizations.
 */
inline GateWord exact_synthesize(const ExactUnitary& input) {
    if (!input.is_unitary()) {
        throw std::invalid_argument("exact_synthesize: input is not exactly unitary");
    }
    static const ExactUnitary ht[4] = {
        eval_circuit("H"),
        eval_circuit("H T"),
        eval_circuit("H S"),
        eval_circuit("H S T"),
    }; // ht[l] = H·T^l

    ExactUnitary working = input;
    std::vector<long> ls;
    long m = working.e10().abs_sq().sde();
    while (m > 3) {
        long chosen = -1;
        for (long l = 0; l < 4; ++l) {
            ExactUnitary cand = ht[l] * working;
            long m2 = cand.e10().abs_sq().sde();
            if (m2 < m) {
                if (chosen < 0) {
                    chosen = l;
                } else {
                    ++greedy_tie_count();
                }
            }
        }
        if (chosen < 0) {
            throw std::logic_error("exact_synthesize: no H T^l reduces sde at m=" +
                                   std::to_string(m));
        }
        working = ht[chosen] * working;
        long m2 = working.e10().abs_sq().sde();
        if (m2 >= m) throw std::logic_error("exact_synthesize: sde did not decrease");
        m = m2;
        ls.push_back(chosen);
    }

    const EnumeratedUnitary* base = base_database().lookup(working);
    if (!base) {
        throw std::logic_error("exact_synthesize: database miss at sde <= 3");
    }
    // working == ω^k_b · eval(base->word)
    GateWord out;
    for (long l : ls) {
        out.append(detail::tpower_tokens((8 - l) % 8));
        out.push_back(Token::H);
    }
    out.append(base->word);

    ExactUnitary recon = eval_circuit(out);
    auto k = recon.phase_to(input);
    if (!k) throw std::logic_error("exact_synthesize: reconstruction mismatch");
    for (long i = 0; i < *k; ++i) out.push_back(Token::W);
    return out;
}

// Minimal T-gate count over all Clifford+T circuits implementing U up to
// global phase.
inline long optimal_tcount(const ExactUnitary& u) {
    return exact_synthesize(u).tcount();
}

struct ApproxResult {
    GateWord word;
    double achieved_err = 0.0;
    bool within_delta = false;
};

namespace detail {

inline const UnitaryEnumeration& approx_enumeration() {
    static const UnitaryEnumeration bfs(config().approx_bfs_tcount,
                                        config().approx_bfs_node_cap);
    return bfs;
}

} // namespace detail

/**
 * Desk-scale approximate synthesis oracle: exhaustive over the BFS closure up
 * to the configured T budget. Returns the lowest-T word whose off-diagonal
 * magnitude lands within delta of the target; if none qualifies, the best
 * word found is returned with within_delta = false.
 */
inline ApproxResult approx_synthesize(double target_mag, double delta, long max_t) {
    if (!(target_mag > 0.0 && target_mag <= 1.0)) {
        throw std::invalid_argument("approx_synthesize: target magnitude outside (0,1]");
    }
    if (delta < 0.0) throw std::invalid_argument("approx_synthesize: negative delta");
    if (max_t > config().approx_bfs_tcount) {
        throw ResourceError("approx_synthesize: max_t " + std::to_string(max_t) +
                            " exceeds enumeration budget " +
                            std::to_string(config().approx_bfs_tcount));
    }
    const auto& bfs = detail::approx_enumeration();
    const EnumeratedUnitary* best = nullptr;
    double best_err = 0.0;
    long best_layer = -1;
    for (const auto& e : bfs.entries()) {
        if (e.tcount > max_t) continue;
        if (best_layer >= 0 && e.tcount > best_layer) break; // entries are layer-ordered
        double err = std::abs(e.abs_u - target_mag);
        if (!best || err < best_err - 1e-15) {
            best = &e;
            best_err = err;
            if (err <= delta) best_layer = e.tcount;
        }
    }
    ApproxResult r;
    r.word = best->word;
    r.achieved_err = best_err;
    r.within_delta = best_err <= delta;
    return r;
}

} // namespace gearsynth
