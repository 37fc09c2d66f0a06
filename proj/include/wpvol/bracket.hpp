#pragma once

// Memoized evaluation of the normalized intersection brackets
// [tau_{d_1} ... tau_{d_n}]_{g,n}.
//
// Base cases: [tau_0^3]_{0,3} = 1, [tau_0]_{1,1} = pi^2/12,
// [tau_1]_{1,1} = 1/2. Everything else comes from the one-boundary
// reduction with coefficients a_L:
//
//   [d]_{g,n} =  8 * sum_{j>=2} sum_L (2 d_j + 1) a_L [tau_{d_1+d_j+L-1}, d \ {d_1,d_j}]_{g,n-1}
//             + 16 * sum_L sum_{k_1+k_2 = L+d_1-2} a_L [tau_{k_1}, tau_{k_2}, d \ {d_1}]_{g-1,n+1}
//             + 16 * sum over ordered ((g',I),(g'',J)) sum_L sum_{k_1+k_2 = L+d_1-2}
//                    a_L [tau_{k_1}, d_I]_{g',|I|+1} [tau_{k_2}, d_J]_{g'',|J|+1}
//
// where d_1 is the largest entry of the canonical (descending) key,
// negative indices and unstable factors contribute 0, and every L-sum
// stops at d_0 = 3g-3+n-|d| where positivity kills all summands. The
// multipliers (8, 16, 16) are pinned by the anchor values of the
// normalization ([tau_0^4]_{0,4} = 2 pi^2 etc.) and checked against the
// independent oracle; the pair (k_1,k_2) and the split ((g',I),(g'',J))
// both run over ordered configurations.
//
// A bracket is nonzero iff |d| <= 3g-3+n, and then its pi-degree is
// exactly d_0; both facts are asserted on every memo insertion.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wpvol/pi_scalar.hpp"
#include "wpvol/special.hpp"

namespace wpvol {

struct BracketKey {
    int g = 0;
    std::vector<int> d;  // sorted descending

    BracketKey() = default;
    BracketKey(int genus, std::vector<int> exps) : g(genus), d(std::move(exps)) { canonicalize(); }

    void canonicalize() { std::sort(d.begin(), d.end(), std::greater<int>()); }
    int n() const { return static_cast<int>(d.size()); }
    long level() const { return 2L * g - 2 + n(); }
    long dim() const { return 3L * g - 3 + n(); }
    long dsum() const {
        long s = 0;
        for (int x : d) s += x;
        return s;
    }
    bool stable() const { return g >= 0 && n() >= 1 && level() > 0; }

    friend bool operator==(const BracketKey& a, const BracketKey& b) { return a.g == b.g && a.d == b.d; }
    friend bool operator<(const BracketKey& a, const BracketKey& b) {
        if (a.level() != b.level()) return a.level() < b.level();
        if (a.g != b.g) return a.g < b.g;
        return a.d < b.d;
    }

    std::string str() const {
        std::string s = "(" + std::to_string(g) + "; ";
        for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
        return s + ")";
    }
};

struct BracketKeyHash {
    std::size_t operator()(const BracketKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ull;
        };
        mix(static_cast<std::uint64_t>(k.g) + 0x9e37);
        for (int x : k.d) mix(static_cast<std::uint64_t>(x) + 0x85eb);
        return static_cast<std::size_t>(h);
    }
};

class BracketEngine {
  public:
    BracketEngine() = default;
    BracketEngine(const BracketEngine&) = delete;
    BracketEngine& operator=(const BracketEngine&) = delete;

    // [d]_{g,n}; throws on unstable keys, returns 0 above top degree.
    PiScalar bracket(const BracketKey& key_in) {
        BracketKey key = key_in;
        key.canonicalize();
        if (!key.stable()) throw std::invalid_argument("unstable moduli space " + key.str());
        for (int x : key.d)
            if (x < 0) throw std::invalid_argument("bracket: negative index in " + key.str());
        if (key.dsum() > key.dim()) return PiScalar::zero();
        return get(key);
    }

    PiScalar bracket(int g, const std::vector<int>& d) { return bracket(BracketKey(g, d)); }

    // All stable keys with 2g-2+n <= max_weight and |d| <= 3g-3+n, each
    // exactly once, in non-decreasing 2g-2+n order (a valid dependency
    // order for the recursion).
    static std::vector<BracketKey> bracket_range(int max_weight) {
        if (max_weight < 1) throw std::invalid_argument("bracket_range: max_weight >= 1 required");
        std::vector<BracketKey> out;
        for (int level = 1; level <= max_weight; ++level) append_level_keys(level, out);
        return out;
    }

    // Computes every bracket up to the given weight, level by level;
    // within a level keys only depend on lower levels, so they are
    // evaluated in parallel.
    void ensure_weight(int max_weight, unsigned threads = 0) {
        if (threads == 0) threads = default_threads();
        for (int level = 1; level <= max_weight; ++level) {
            std::vector<BracketKey> keys;
            append_level_keys(level, keys);
            if (threads <= 1 || keys.size() < 16) {
                for (const auto& k : keys) get(k);
                continue;
            }
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(keys.size()));
            pool.reserve(nt);
            for (unsigned t = 0; t < nt; ++t)
                pool.emplace_back([&]() {
                    for (;;) {
                        std::size_t i = next.fetch_add(1);
                        if (i >= keys.size()) return;
                        get(keys[i]);
                    }
                });
            for (auto& th : pool) th.join();
        }
    }

    std::size_t memo_size() const {
        std::size_t total = 0;
        for (const auto& s : shards_) {
            std::lock_guard<std::mutex> lock(s.mu);
            total += s.map.size();
        }
        return total;
    }

    // Memo contents in canonical key order.
    std::vector<std::pair<BracketKey, PiScalar>> snapshot() const {
        std::vector<std::pair<BracketKey, PiScalar>> out;
        out.reserve(memo_size());
        for (const auto& s : shards_) {
            std::lock_guard<std::mutex> lock(s.mu);
            for (const auto& kv : s.map) out.push_back(kv);
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    // Install a precomputed value (cache load); validated like any
    // computed bracket.
    void insert_raw(const BracketKey& key, const PiScalar& value) {
        BracketKey k = key;
        k.canonicalize();
        if (!k.stable()) throw std::invalid_argument("insert_raw: unstable key " + k.str());
        validate(k, value);
        store(k, value);
    }

    static unsigned default_threads() {
        unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1 : hc;
    }

  private:
    struct Shard {
        mutable std::mutex mu;
        std::unordered_map<BracketKey, PiScalar, BracketKeyHash> map;
    };
    static constexpr std::size_t kShards = 64;

    Shard& shard_for(const BracketKey& k) { return shards_[BracketKeyHash{}(k) % kShards]; }

    PiScalar get(const BracketKey& key) {
        Shard& s = shard_for(key);
        {
            std::lock_guard<std::mutex> lock(s.mu);
            auto it = s.map.find(key);
            if (it != s.map.end()) return it->second;
        }
        PiScalar value = compute(key);
        validate(key, value);
        return store(key, value);
    }

    PiScalar store(const BracketKey& key, const PiScalar& value) {
        Shard& s = shard_for(key);
        std::lock_guard<std::mutex> lock(s.mu);
        return s.map.emplace(key, value).first->second;  // first writer wins
    }

    static void validate(const BracketKey& key, const PiScalar& value) {
        const long d0 = key.dim() - key.dsum();
        if (value.sign() <= 0)
            throw std::logic_error("bracket positivity violated at " + key.str());
        if (value.pi_exp() != d0)
            throw std::logic_error("bracket pi-degree " + std::to_string(value.pi_exp()) +
                                   " != " + std::to_string(d0) + " at " + key.str());
    }

    // Child lookup treating out-of-range and unstable keys as 0.
    PiScalar child(int g, std::vector<int> d) {
        BracketKey k(g, std::move(d));
        if (!k.stable()) return PiScalar::zero();
        if (k.dsum() > k.dim()) return PiScalar::zero();
        return get(k);
    }

    PiScalar compute(const BracketKey& key) {
        const int g = key.g, n = key.n();
        if (g == 0 && n == 3) return PiScalar::one();
        if (g == 1 && n == 1)
            return key.d[0] == 0 ? PiScalar(make_rational(1, 12), 1) : PiScalar(make_rational(1, 2), 0);

        const long d0 = key.dim() - key.dsum();
        const int d1 = key.d[0];
        std::vector<int> rest(key.d.begin() + 1, key.d.end());

        PiScalar total;

        // --- A: join d_1 with one other index, grouped by distinct value.
        {
            PiScalar acc;
            std::vector<std::pair<int, int>> groups = run_lengths(rest);
            for (const auto& [v, mult] : groups) {
                std::vector<int> base = remove_one(rest, v);
                BigRational weight(static_cast<long>(mult) * (2L * v + 1));
                for (long L = 0; L <= d0; ++L) {
                    int idx = d1 + v + static_cast<int>(L) - 1;
                    if (idx < 0) continue;
                    std::vector<int> cd = base;
                    cd.push_back(idx);
                    PiScalar c = child(g, std::move(cd));
                    if (c.is_zero()) continue;
                    acc += a_seq(static_cast<unsigned long>(L)) * c * weight;
                }
            }
            total += acc * BigRational(8);
        }

        // --- B: open d_1 into an ordered pair on a genus-(g-1) child.
        if (g >= 1) {
            PiScalar acc;
            for (long L = 0; L <= d0; ++L) {
                long pair_sum = L + d1 - 2;
                if (pair_sum < 0) continue;
                const PiScalar aL = a_seq(static_cast<unsigned long>(L));
                for (long k1 = 0; k1 <= pair_sum; ++k1) {
                    std::vector<int> cd = rest;
                    cd.push_back(static_cast<int>(k1));
                    cd.push_back(static_cast<int>(pair_sum - k1));
                    PiScalar c = child(g - 1, std::move(cd));
                    if (c.is_zero()) continue;
                    acc += aL * c;
                }
            }
            total += acc * BigRational(16);
        }

        // --- C: ordered splits of genus and of the remaining indices.
        // Subsets of `rest` are enumerated as sub-multisets with a
        // multinomial weight, which collapses the 2^(n-1) labeled
        // subsets when indices repeat.
        {
            PiScalar acc;
            std::vector<std::pair<int, int>> groups = run_lengths(rest);
            std::vector<int> pick(groups.size(), 0);
            for (;;) {
                std::vector<int> left, right;
                BigRational weight(1);
                for (std::size_t i = 0; i < groups.size(); ++i) {
                    weight *= BigRational(binomial(static_cast<unsigned long>(groups[i].second),
                                                   static_cast<unsigned long>(pick[i])));
                    for (int c = 0; c < pick[i]; ++c) left.push_back(groups[i].first);
                    for (int c = pick[i]; c < groups[i].second; ++c) right.push_back(groups[i].first);
                }
                long lsum = 0, rsum = 0;
                for (int x : left) lsum += x;
                for (int x : right) rsum += x;

                for (int g1 = 0; g1 <= g; ++g1) {
                    const int g2 = g - g1;
                    const int n1 = static_cast<int>(left.size()) + 1;
                    const int n2 = static_cast<int>(right.size()) + 1;
                    if (2 * g1 - 2 + n1 <= 0 || 2 * g2 - 2 + n2 <= 0) continue;
                    const long k1max = (3L * g1 - 3 + n1) - lsum;
                    const long k2max = (3L * g2 - 3 + n2) - rsum;
                    if (k1max < 0 || k2max < 0) continue;
                    for (long L = 0; L <= d0; ++L) {
                        long pair_sum = L + d1 - 2;
                        if (pair_sum < 0) continue;
                        const PiScalar aL = a_seq(static_cast<unsigned long>(L));
                        long k1lo = std::max(0L, pair_sum - k2max);
                        long k1hi = std::min(k1max, pair_sum);
                        for (long k1 = k1lo; k1 <= k1hi; ++k1) {
                            std::vector<int> cd1 = left;
                            cd1.push_back(static_cast<int>(k1));
                            PiScalar c1 = child(g1, std::move(cd1));
                            if (c1.is_zero()) continue;
                            std::vector<int> cd2 = right;
                            cd2.push_back(static_cast<int>(pair_sum - k1));
                            PiScalar c2 = child(g2, std::move(cd2));
                            if (c2.is_zero()) continue;
                            acc += aL * c1 * c2 * weight;
                        }
                    }
                }

                // next sub-multiset
                std::size_t i = 0;
                for (; i < pick.size(); ++i) {
                    if (pick[i] < groups[i].second) {
                        ++pick[i];
                        break;
                    }
                    pick[i] = 0;
                }
                if (i == pick.size()) break;
            }
            total += acc * BigRational(16);
        }

        return total;
    }

    static std::vector<std::pair<int, int>> run_lengths(const std::vector<int>& sorted_desc) {
        std::vector<std::pair<int, int>> out;
        for (int v : sorted_desc) {
            if (!out.empty() && out.back().first == v)
                ++out.back().second;
            else
                out.emplace_back(v, 1);
        }
        return out;
    }

    static std::vector<int> remove_one(const std::vector<int>& sorted_desc, int v) {
        std::vector<int> out;
        out.reserve(sorted_desc.size() - 1);
        bool removed = false;
        for (int x : sorted_desc) {
            if (!removed && x == v) {
                removed = true;
                continue;
            }
            out.push_back(x);
        }
        return out;
    }

    static void append_level_keys(int level, std::vector<BracketKey>& out) {
        std::size_t first = out.size();
        for (int g = 0; 2 * g <= level + 1; ++g) {
            const int n = level + 2 - 2 * g;
            if (n < 1) continue;
            const long dim = 3L * g - 3 + n;
            if (dim < 0) continue;
            std::vector<int> d(static_cast<std::size_t>(n), 0);
            descend(g, d, 0, static_cast<int>(dim), dim, out);
        }
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
    }

    static void descend(int g, std::vector<int>& d, std::size_t pos, int max_entry, long budget,
                        std::vector<BracketKey>& out) {
        if (pos == d.size()) {
            BracketKey k;
            k.g = g;
            k.d = d;  // already descending by construction
            out.push_back(std::move(k));
            return;
        }
        for (int v = std::min<long>(max_entry, budget); v >= 0; --v) {
            d[pos] = v;
            descend(g, d, pos + 1, v, budget - v, out);
        }
    }

    Shard shards_[kShards];
};

// Process-wide engine shared by the CLI and convenience callers.
inline BracketEngine& default_engine() {
    static BracketEngine engine;
    return engine;
}

}  // namespace wpvol
