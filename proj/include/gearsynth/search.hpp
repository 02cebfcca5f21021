#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "gearsynth/config.hpp"
#include "gearsynth/fit.hpp"
#include "gearsynth/synth.hpp"

namespace gearsynth {

/**
 * All integer pairs (x, y) with x² + y² = s, cached up to the largest s
 * requested so far. Shared read-mostly table behind a mutex-guarded grow.
 */
class TwoSquareTable {
  public:
    // Grow the cache so that references returned below stay valid for all
    // s <= smax until the next ensure() with a larger bound.
    static void ensure(long smax) {
        TwoSquareTable& t = instance();
        std::lock_guard<std::mutex> lock(t.mu_);
        if (smax >= static_cast<long>(t.lists_.size())) t.grow(smax);
    }

    static const std::vector<std::pair<long, long>>& decompositions(long s) {
        TwoSquareTable& t = instance();
        {
            std::lock_guard<std::mutex> lock(t.mu_);
            if (s < static_cast<long>(t.lists_.size())) {
                return t.lists_[static_cast<std::size_t>(s)];
            }
        }
        ensure(s);
        std::lock_guard<std::mutex> lock(t.mu_);
        return t.lists_[static_cast<std::size_t>(s)];
    }

  private:
    static TwoSquareTable& instance() {
        static TwoSquareTable table;
        return table;
    }

    void grow(long smax) {
        long old = static_cast<long>(lists_.size());
        lists_.resize(static_cast<std::size_t>(smax) + 1);
        long r = static_cast<long>(std::sqrt(static_cast<double>(smax))) + 1;
        for (long x = -r; x <= r; ++x) {
            for (long y = -r; y <= r; ++y) {
                long s = x * x + y * y;
                if (s >= old && s <= smax) {
                    lists_[static_cast<std::size_t>(s)].emplace_back(x, y);
                }
            }
        }
    }

    std::mutex mu_;
    std::vector<std::vector<std::pair<long, long>>> lists_;
};

/**
 * All v ∈ Z[ω] with |v|² = A + B√2 (empty if none; capped at max_count).
 * |v|² expands to Σv_j² + √2·(v₀v₁ + v₁v₂ + v₂v₃ − v₀v₃), so the search
 * meets in the middle over two-square decompositions of A.
 */
inline std::vector<RingElement> norm_solutions(const Root2Scaled& xi,
                                               std::size_t max_count = SIZE_MAX) {
    if (xi.m() != 0) {
        throw std::invalid_argument("norm_solutions: xi must be in numerator form (m = 0)");
    }
    std::vector<RingElement> out;
    if (xi.is_zero()) {
        out.push_back(RingElement::zero());
        return out;
    }
    Root2Scaled conj = xi.sqrt2_conj();
    if (xi.is_negative() || conj.is_negative()) return out; // necessary condition
    long A = to_i64(xi.A());
    long B = to_i64(xi.B());
    if (A < 0) return out;
    TwoSquareTable::ensure(A);
    for (long s1 = 0; s1 <= A; ++s1) {
        const auto& first = TwoSquareTable::decompositions(s1);
        if (first.empty()) continue;
        const auto& second = TwoSquareTable::decompositions(A - s1);
        if (second.empty()) continue;
        for (const auto& [v0, v2] : first) {
            long p = v0 + v2;
            long q = v2 - v0;
            for (const auto& [v1, v3] : second) {
                if (v1 * p + v3 * q == B) {
                    out.push_back(RingElement(v0, v1, v2, v3, 0));
                    if (out.size() >= max_count) return out;
                }
            }
        }
    }
    return out;
}

inline std::optional<RingElement> norm_solvable(const Root2Scaled& xi) {
    auto sols = norm_solutions(xi, 1);
    if (sols.empty()) return std::nullopt;
    return sols.front();
}

struct SearchCandidate {
    RingElement u;    // canonical over the eight unit multiples
    Root2Scaled usq;  // |u|² exact
    double value = 0; // |u|² in the +√2 embedding
};

/**
 * PairList: triples (a, b, |a + b√2|²) sorted ascending by value; the raw
 * material of the banded candidate scan.
 */
struct PairEntry {
    long a = 0;
    long b = 0;
    double value = 0;      // (a + b√2)²
    double conj_value = 0; // (a − b√2)²
};
using PairList = std::vector<PairEntry>;

namespace detail {

inline RingElement canonical_omega(const RingElement& u) {
    RingElement best = u;
    auto tuple_less = [](const RingElement& x, const RingElement& y) {
        if (x.a() != y.a()) return x.a() < y.a();
        if (x.b() != y.b()) return x.b() < y.b();
        if (x.c() != y.c()) return x.c() < y.c();
        return x.d() < y.d();
    };
    for (long k = 1; k < 8; ++k) {
        RingElement cand = u.mul_omega_power(k);
        if (tuple_less(cand, best)) best = cand;
    }
    return best;
}

inline std::string element_key(const RingElement& u) {
    return u.str();
}

inline PairList build_pair_list(long kappa_enum, double r2_bound) {
    double pow2 = std::ldexp(1.0, static_cast<int>(kappa_enum));
    double R = std::sqrt(r2_bound);
    long bmax = static_cast<long>(std::sqrt((r2_bound + pow2) / 4.0)) + 1;
    PairList L;
    for (long b = -bmax; b <= bmax; ++b) {
        double center = -b * kSqrt2;
        long alo = static_cast<long>(std::ceil(center - R - 1e-6));
        long ahi = static_cast<long>(std::floor(center + R + 1e-6));
        for (long a = alo; a <= ahi; ++a) {
            double t = a + b * kSqrt2;
            double v = t * t;
            if (v > r2_bound + 1e-9) continue;
            double tc = a - b * kSqrt2;
            double vc = tc * tc;
            if (vc > pow2 + 1e-6) continue; // conjugate embedding ≤ 1
            L.push_back({a, b, v, vc});
        }
    }
    std::sort(L.begin(), L.end(), [](const PairEntry& x, const PairEntry& y) {
        if (x.value != y.value) return x.value < y.value;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    return L;
}

} // namespace detail

/**
 * Visit every u with sde(|u|²) = m, |u|² ≤ eps, and |u^•|² ≤ 1, exactly once
 * up to the eight unit multiples, in ascending |u|² order. The visitor
 * returns false to stop early. Returns true if at least one candidate was
 * visited (false = the bound was too tight).
 *
 * Candidates are generated in the representation
 * u = ((a₀ + b₀√2) + i(a₁ + b₁√2)) / √2^{⌈m/2⌉+1} with a₀ ≡ a₁ (mod 2);
 * the scan walks value bands [0,δ], [δ,2δ], … over the sorted pair list.
 */
inline bool scan_candidates(long m, const Root2Scaled& eps, int jobs,
                            const std::function<bool(const SearchCandidate&)>& visit) {
    if (m < 3) throw std::invalid_argument("scan_candidates: m must be >= 3");
    double eps_value = std::min(1.0, eps.eval());
    if (!(eps_value > 0.0)) return false;
    long kappa_t = (m + 1) / 2;
    long kappa_enum = kappa_t + 1;
    double pow2e = std::ldexp(1.0, static_cast<int>(kappa_enum));
    double r2 = pow2e * eps_value;
    PairList L = detail::build_pair_list(kappa_enum, r2);
    if (L.empty()) return false;
    const Root2Scaled one = Root2Scaled::one();

    long candidate_budget = config().search_candidate_cap;
    bool visited_any = false;
    double delta = std::max(r2 / 16.0, 1e-300);
    double lo = 0.0;
    double r_end = r2 + 1e-9; // all representable sums at or below the bound
    while (lo <= r_end) {
        // Half-open band [lo, hi): bands tile the range with no gaps, so every
        // representable sum lands in exactly one band.
        double hi = lo + delta;
        // Collect the band in parallel over the first index.
        std::vector<SearchCandidate> band;
        std::mutex band_mu;
        long scanned = 0;
        auto worker = [&](std::size_t begin, std::size_t end) {
            std::vector<SearchCandidate> local;
            long local_scanned = 0;
            for (std::size_t i = begin; i < end; ++i) {
                const PairEntry& e1 = L[i];
                if (e1.value >= hi) break;
                double jlo = lo - e1.value;
                double jhi = hi - e1.value;
                auto itlo = std::lower_bound(
                    L.begin(), L.end(), jlo - 1e-9,
                    [](const PairEntry& e, double v) { return e.value < v; });
                for (auto it = itlo; it != L.end() && it->value <= jhi + 1e-9; ++it) {
                    const PairEntry& e2 = *it;
                    if (((e1.a ^ e2.a) & 1) != 0) continue; // parity a0 ≡ a1
                    double r = e1.value + e2.value;
                    if (r < lo || r >= hi) continue; // the band membership authority
                    if (e1.conj_value + e2.conj_value > pow2e + 1e-6) continue;
                    ++local_scanned;
                    long An = (e1.a * e1.a + e2.a * e2.a) / 2 + e1.b * e1.b + e2.b * e2.b;
                    long Bn = e1.a * e1.b + e2.a * e2.b;
                    Root2Scaled usq(An, Bn, 2 * kappa_t);
                    if (usq.sde() != m) continue;
                    if (usq.sign() <= 0) continue;
                    if (eps.compare(usq) < 0) continue;        // usq > eps
                    if (one.compare(usq.sqrt2_conj()) < 0) continue; // conj > 1
                    RingElement u(e1.b, (e1.a + e2.a) / 2, e2.b, (e2.a - e1.a) / 2,
                                  kappa_t);
                    SearchCandidate c;
                    c.u = detail::canonical_omega(u);
                    c.usq = usq;
                    c.value = usq.eval();
                    local.push_back(std::move(c));
                }
            }
            std::lock_guard<std::mutex> lock(band_mu);
            scanned += local_scanned;
            for (auto& c : local) band.push_back(std::move(c));
        };
        if (jobs <= 1 || L.size() < 64) {
            worker(0, L.size());
        } else {
            std::vector<std::thread> threads;
            std::size_t chunk = (L.size() + jobs - 1) / jobs;
            for (int j = 0; j < jobs; ++j) {
                std::size_t b = static_cast<std::size_t>(j) * chunk;
                std::size_t e = std::min(L.size(), b + chunk);
                if (b >= e) break;
                threads.emplace_back(worker, b, e);
            }
            for (auto& t : threads) t.join();
        }
        if (scanned > candidate_budget) {
            throw ResourceError("scan_candidates: candidate budget exceeded at m=" +
                                std::to_string(m));
        }

        // Deterministic order: ascending |u|², then lexicographic canonical u.
        std::sort(band.begin(), band.end(),
                  [](const SearchCandidate& x, const SearchCandidate& y) {
                      if (x.value != y.value) return x.value < y.value;
                      int cmp = x.usq.compare(y.usq);
                      if (cmp != 0) return cmp < 0;
                      if (x.u.a() != y.u.a()) return x.u.a() < y.u.a();
                      if (x.u.b() != y.u.b()) return x.u.b() < y.u.b();
                      if (x.u.c() != y.u.c()) return x.u.c() < y.u.c();
                      return x.u.d() < y.u.d();
                  });
        std::set<std::string> seen;
        for (const SearchCandidate& c : band) {
            if (!seen.insert(detail::element_key(c.u)).second) continue;
            visited_any = true;
            if (!visit(c)) return true;
        }
        lo = hi;
        if (band.empty()) delta *= 2.0; // adaptive band width
    }
    return visited_any;
}

struct EnumerationResult {
    std::vector<SearchCandidate> candidates;
    bool too_tight = false;
};

// Dyadic upper bound for a float tolerance, as an exact ring value.
inline Root2Scaled dyadic_upper(double x) {
    if (x >= 1.0) return Root2Scaled::one();
    if (!(x > 0.0)) throw std::invalid_argument("dyadic_upper: need x > 0");
    Integer num = Integer(static_cast<long long>(std::ceil(std::ldexp(x, 52)))) + 1;
    return Root2Scaled(num, 0, 104); // / sqrt2^104 = / 2^52
}

inline EnumerationResult enumerate_candidates(long m, double eps_value, int jobs = 1) {
    if (!(eps_value > 0.0)) throw std::invalid_argument("enumerate_candidates: eps must be > 0");
    EnumerationResult out;
    Root2Scaled bound = dyadic_upper(eps_value);
    scan_candidates(m, bound, jobs, [&](const SearchCandidate& c) {
        if (c.value <= eps_value * (1.0 + 1e-12)) {
            out.candidates.push_back(c);
        }
        return true;
    });
    out.too_tight = out.candidates.empty();
    return out;
}

/**
 * SearchResult: minimal non-zero off-diagonal entry at optimal T-count
 * n_t = m − 2, with a witness v completing the unitary column.
 */
struct SearchResult {
    long m = 0;
    long n_t = 0;
    RingElement u;
    Root2Scaled usq;
    double abs_u = 0.0;
    std::optional<RingElement> witness_v;
};

namespace detail {

// Every v (at the candidate's denominator exponent) with |u|² + |v|² = 1.
inline std::vector<RingElement> completion_witnesses(const SearchCandidate& c,
                                                     long kappa_t) {
    // 1 - |u|² as (A + B√2) / 2^{kappa_t}.
    Root2Scaled xi = Root2Scaled::one() - c.usq;
    long shift = 2 * kappa_t - xi.m();
    if (shift < 0) throw std::logic_error("completion_witnesses: denominator overflow");
    Integer A = xi.A(), B = xi.B();
    for (long i = 0; i < shift; ++i) {
        Integer nA = 2 * B;
        B = A;
        A = std::move(nA);
    }
    auto raw = norm_solutions(Root2Scaled(A, B, 0));
    std::vector<RingElement> out;
    out.reserve(raw.size());
    for (const auto& v : raw) {
        RingElement scaled(v.a(), v.b(), v.c(), v.d(), kappa_t);
        if (!(c.usq + scaled.abs_sq() == Root2Scaled::one())) {
            throw std::logic_error("completion_witnesses: inexact witness");
        }
        out.push_back(std::move(scaled));
    }
    return out;
}

struct VerifiedCompletion {
    RingElement witness;
    long tcount = 0;
};

// A completable candidate sits at optimal T-count m-2 only if some unitary
// with this off-diagonal synthesizes to m-2 T gates; sweep the completion
// family (witness x phases) with the exact synthesizer until one does.
inline std::optional<VerifiedCompletion> verified_completion(const SearchCandidate& c,
                                                             long kappa_t, long m) {
    auto witnesses = completion_witnesses(c, kappa_t);
    if (witnesses.empty()) return std::nullopt;
    std::optional<VerifiedCompletion> fallback;
    for (const auto& w : witnesses) {
        for (long a = 0; a < 8; ++a) {
            RingElement ua = c.u.mul_omega_power(a);
            for (long k = 0; k < 8; ++k) {
                ExactUnitary U(w, -(ua.conj().mul_omega_power(k)), ua,
                               w.conj().mul_omega_power(k));
                long tc = optimal_tcount(U);
                if (tc == m - 2) return VerifiedCompletion{w, tc};
                if (!fallback) fallback = VerifiedCompletion{w, tc};
            }
        }
    }
    // Norm-completable but no completion reaches m-2: not a member of this
    // T-count's pool.
    (void)fallback;
    return std::nullopt;
}

} // namespace detail

/**
 * Minimal |u| over completable candidates with sde(|u|²) = m, scanning in
 * ascending order with an upper bound eps. Returns nothing when no verified
 * candidate lies at or below eps.
 */
inline std::optional<SearchResult> min_offdiag_bounded(long n_t, const Root2Scaled& eps,
                                                       int jobs = 1) {
    if (n_t < 1) throw std::invalid_argument("min_offdiag: n_t must be >= 1");
    long m = n_t + 2;
    long kappa_t = (m + 1) / 2;
    std::optional<SearchResult> best;
    scan_candidates(m, eps, jobs, [&](const SearchCandidate& c) {
        // Candidates arrive in ascending |u|² with lexicographic tie order,
        // so the first verified one is the minimum.
        auto vc = detail::verified_completion(c, kappa_t, m);
        if (!vc) return true; // keep scanning upward
        SearchResult r;
        r.m = m;
        r.n_t = n_t;
        r.u = c.u;
        r.usq = c.usq;
        r.abs_u = std::sqrt(c.value);
        r.witness_v = vc->witness;
        best = std::move(r);
        return false;
    });
    return best;
}

/**
 * Minimal |u| at optimal T-count n_t, seeding the bound from the previous
 * envelope value per the improved search; if that bound excludes every
 * candidate (a "skipped" T-count), the bound is relaxed until the true
 * minimum at this m is found.
 */
inline SearchResult min_offdiag(long n_t, int jobs = 1) {
    if (n_t > config().search_max_tcount) {
        throw ResourceError("min_offdiag: n_t above configured search_max_tcount");
    }
    Root2Scaled envelope = Root2Scaled::one();
    for (long k = 1; k < n_t; ++k) {
        auto r = min_offdiag_bounded(k, envelope, jobs);
        if (r) envelope = r->usq;
    }
    auto r = min_offdiag_bounded(n_t, envelope, jobs);
    if (r) return *r;
    // Skipped T-count: relax the bound to recover the true minimum at this m.
    Root2Scaled bound = envelope;
    for (int relax = 0; relax < 64; ++relax) {
        bound = bound + bound; // double the bound
        if (Root2Scaled::one().compare(bound) < 0) bound = Root2Scaled::one();
        auto r2 = min_offdiag_bounded(n_t, bound, jobs);
        if (r2) return *r2;
        if (bound == Root2Scaled::one()) break;
    }
    throw ResourceError("min_offdiag: no completable candidate found at n_t=" +
                        std::to_string(n_t));
}

struct Table2Row {
    long n_t = 0;
    bool new_min = false; // false: no value below the running envelope
    SearchResult result;  // the envelope holder (this row's result when new_min)
};

/**
 * Reproduce the optimal ancilla-free table: for each T-count, the minimal
 * |u| if it improves on the running envelope, otherwise a skipped row.
 */
inline std::vector<Table2Row> table2(long max_nt, int jobs = 1) {
    if (max_nt > config().search_max_tcount) {
        throw ResourceError("table2: max_nt above configured search_max_tcount");
    }
    std::vector<Table2Row> rows;
    Root2Scaled envelope = Root2Scaled::one();
    SearchResult env_result;
    bool have_env = false;
    for (long n_t = 1; n_t <= max_nt; ++n_t) {
        auto r = min_offdiag_bounded(n_t, envelope, jobs);
        Table2Row row;
        row.n_t = n_t;
        if (r && (!have_env || r->usq.compare(envelope) < 0)) {
            row.new_min = true;
            row.result = *r;
            envelope = r->usq;
            env_result = *r;
            have_env = true;
        } else {
            row.new_min = false;
            row.result = env_result;
            row.result.n_t = n_t;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/**
 * Word-restricted minimum: smallest non-zero off-diagonal magnitude over the
 * breadth-first Clifford+T closure with T-count at most j (the BFS-side
 * answer to the same question table2 answers number-theoretically).
 */
inline double min_offdiag_words(long j) {
    const auto& bfs = detail::approx_enumeration();
    if (j > bfs.max_tcount()) {
        throw ResourceError("min_offdiag_words: j above the BFS budget");
    }
    double best = 1.0;
    for (const auto& e : bfs.entries()) {
        if (e.tcount > j) continue;
        if (e.abs_u > 1e-15 && e.abs_u < best) best = e.abs_u;
    }
    return best;
}

} // namespace gearsynth
