#include "mixmono/finite.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "mixmono/errors.hpp"

namespace mixmono {

FinitePoset::FinitePoset(int size, std::vector<std::uint8_t> leq_matrix)
    : size_(size), leq_(std::move(leq_matrix)) {
    if (size <= 0 || leq_.size() != static_cast<std::size_t>(size) * size) {
        throw ShapeError("poset matrix must be size x size");
    }
}

FinitePoset FinitePoset::chain(int n) {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) m[static_cast<std::size_t>(a) * n + b] = 1;
    return FinitePoset(n, std::move(m));
}

FinitePoset FinitePoset::chain_product(std::span<const int> lengths) {
    int n = 1;
    for (int len : lengths) n *= len;
    // Element i decodes to mixed-radix coordinates; order is componentwise.
    auto decode = [&](int idx) {
        std::vector<int> c(lengths.size());
        for (std::size_t d = 0; d < lengths.size(); ++d) {
            c[d] = idx % lengths[d];
            idx /= lengths[d];
        }
        return c;
    };
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a) {
        const auto ca = decode(a);
        for (int b = 0; b < n; ++b) {
            const auto cb = decode(b);
            bool le = true;
            for (std::size_t d = 0; d < lengths.size(); ++d) {
                if (ca[d] > cb[d]) { le = false; break; }
            }
            m[static_cast<std::size_t>(a) * n + b] = le ? 1 : 0;
        }
    }
    return FinitePoset(n, std::move(m));
}

FinitePoset FinitePoset::diamond(int middles) {
    const int n = middles + 2;  // 0 = bottom, 1..middles = antichain, n-1 = top
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
    auto set = [&](int a, int b) { m[static_cast<std::size_t>(a) * n + b] = 1; };
    for (int a = 0; a < n; ++a) set(a, a);
    for (int a = 0; a < n; ++a) {
        set(0, a);
        set(a, n - 1);
    }
    return FinitePoset(n, std::move(m));
}

FinitePoset FinitePoset::divisor_lattice(long long n) {
    std::vector<long long> divisors;
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divisors.push_back(d);
            if (d != n / d) divisors.push_back(n / d);
        }
    }
    std::sort(divisors.begin(), divisors.end());
    const int k = static_cast<int>(divisors.size());
    std::vector<std::uint8_t> m(static_cast<std::size_t>(k) * k, 0);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            m[static_cast<std::size_t>(a) * k + b] = (divisors[b] % divisors[a] == 0) ? 1 : 0;
    FinitePoset p(k, std::move(m));
    for (long long d : divisors) p.labels_.push_back(std::to_string(d));
    return p;
}

PosetValidation validate_poset(const FinitePoset& p) {
    const int n = p.size();
    for (int a = 0; a < n; ++a) {
        if (!p.leq(a, a)) return {false, "reflexivity", {a, a, -1}};
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a != b && p.leq(a, b) && p.leq(b, a)) {
                return {false, "antisymmetry", {a, b, -1}};
            }
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (!p.leq(a, b)) continue;
            for (int c = 0; c < n; ++c) {
                if (p.leq(b, c) && !p.leq(a, c)) {
                    return {false, "transitivity", {a, b, c}};
                }
            }
        }
    }
    return {};
}

LatticeTables lattice_tables(const FinitePoset& p) {
    const int n = p.size();
    LatticeTables t;
    t.n = n;
    t.is_lattice = true;
    t.join.assign(static_cast<std::size_t>(n) * n, -1);
    t.meet.assign(static_cast<std::size_t>(n) * n, -1);

    auto least_among = [&](const std::vector<int>& candidates) -> int {
        for (int c : candidates) {
            bool least = true;
            for (int other : candidates) {
                if (!p.leq(c, other)) { least = false; break; }
            }
            if (least) return c;
        }
        return -1;
    };
    auto greatest_among = [&](const std::vector<int>& candidates) -> int {
        for (int c : candidates) {
            bool greatest = true;
            for (int other : candidates) {
                if (!p.leq(other, c)) { greatest = false; break; }
            }
            if (greatest) return c;
        }
        return -1;
    };

    for (int a = 0; a < n && t.is_lattice; ++a) {
        for (int b = 0; b < n; ++b) {
            std::vector<int> uppers, lowers;
            for (int c = 0; c < n; ++c) {
                if (p.leq(a, c) && p.leq(b, c)) uppers.push_back(c);
                if (p.leq(c, a) && p.leq(c, b)) lowers.push_back(c);
            }
            const int j = least_among(uppers);
            const int m = greatest_among(lowers);
            if (j < 0 || m < 0) {
                t.is_lattice = false;
                t.witness = {a, b};
                break;
            }
            t.join[static_cast<std::size_t>(a) * n + b] = j;
            t.meet[static_cast<std::size_t>(a) * n + b] = m;
        }
    }
    return t;
}

namespace {

// Smallest integer with exactly `count` divisors, or 0 when none exists
// below the search bound (prime-ish counts need huge prime powers).
long long smallest_with_divisor_count(int count) {
    static std::map<int, long long> cache;
    if (auto it = cache.find(count); it != cache.end()) return it->second;
    constexpr long long kBound = 2'000'000;
    std::vector<int> divisor_count(kBound + 1, 0);
    for (long long d = 1; d <= kBound; ++d) {
        for (long long m = d; m <= kBound; m += d) ++divisor_count[m];
    }
    for (int c = 1; c <= 64; ++c) {
        if (!cache.contains(c)) cache[c] = 0;
    }
    for (long long v = 1; v <= kBound; ++v) {
        const int c = divisor_count[v];
        if (c <= 64 && cache[c] == 0) cache[c] = v;
    }
    return cache[count];
}

std::vector<int> random_factorization(DetRng& rng, int size) {
    std::vector<int> factors;
    int rest = size;
    while (rest > 1) {
        std::vector<int> divisors;
        for (int d = 2; d <= rest; ++d) {
            if (rest % d == 0) divisors.push_back(d);
        }
        const int pick = divisors[rng.below(divisors.size())];
        factors.push_back(pick);
        rest /= pick;
    }
    return factors;
}

}  // namespace

FinitePoset generate_random_lattice(std::uint64_t seed, int size) {
    if (size < 2 || size > 64) {
        throw Error("generate_random_lattice supports sizes 2..64");
    }
    DetRng rng(seed);
    for (int attempt = 0; attempt < 4; ++attempt) {
        switch (rng.below(3)) {
            case 0: {
                const auto factors = random_factorization(rng, size);
                return FinitePoset::chain_product(factors);
            }
            case 1: {
                if (size >= 3) return FinitePoset::diamond(size - 2);
                break;
            }
            case 2: {
                const long long n = smallest_with_divisor_count(size);
                if (n > 0) return FinitePoset::divisor_lattice(n);
                break;
            }
        }
    }
    const auto factors = random_factorization(rng, size);
    return FinitePoset::chain_product(factors);
}

FinitePoset generate_random_poset(std::uint64_t seed, int size) {
    DetRng rng(seed);
    const int n = size;
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
    // Random edges respecting the index order keep the relation acyclic;
    // reflexive-transitive closure makes it a poset.
    for (int a = 0; a < n; ++a) {
        m[static_cast<std::size_t>(a) * n + a] = 1;
        for (int b = a + 1; b < n; ++b) {
            if (rng.below(3) == 0) m[static_cast<std::size_t>(a) * n + b] = 1;
        }
    }
    for (int k = 0; k < n; ++k) {
        for (int a = 0; a < n; ++a) {
            if (!m[static_cast<std::size_t>(a) * n + k]) continue;
            for (int b = 0; b < n; ++b) {
                if (m[static_cast<std::size_t>(k) * n + b]) {
                    m[static_cast<std::size_t>(a) * n + b] = 1;
                }
            }
        }
    }
    return FinitePoset(n, std::move(m));
}

UniversePtr<int> poset_universe(FinitePoset p) {
    const auto check = validate_poset(p);
    if (!check.pass) {
        throw Error("poset violates " + check.axiom + " at (" +
                    std::to_string(check.witness[0]) + ", " + std::to_string(check.witness[1]) +
                    (check.witness[2] >= 0 ? ", " + std::to_string(check.witness[2]) : "") + ")");
    }
    auto poset = std::make_shared<FinitePoset>(std::move(p));
    auto u = std::make_shared<Universe<int>>();
    u->name = "poset-" + std::to_string(poset->size());
    u->leq = [poset](const int& a, const int& b) { return poset->leq(a, b); };
    u->eq = [](const int& a, const int& b) { return a == b; };
    u->elements.resize(poset->size());
    std::iota(u->elements.begin(), u->elements.end(), 0);
    u->exact_key = [](const int& a) { return static_cast<std::uint64_t>(a); };
    return u;
}

TableOperator::TableOperator(int size, std::vector<int> table)
    : size_(size), table_(std::move(table)) {
    if (size <= 0 || table_.size() != static_cast<std::size_t>(size) * size) {
        throw ShapeError("operator table must be size x size");
    }
    for (int v : table_) {
        if (v < 0 || v >= size) throw ShapeError("operator table entry out of range");
    }
}

namespace {

// Linear extension: sorting by the number of predecessors respects the
// order because y < x implies pred(y) strictly inside pred(x).
std::vector<int> linear_extension(const FinitePoset& p) {
    const int n = p.size();
    std::vector<int> order(n), rank(n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (p.leq(b, a)) ++rank[a];
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return rank[a] < rank[b]; });
    return order;
}

}  // namespace

TableOperator generate_random_mixed_monotone(std::uint64_t seed, const FinitePoset& p,
                                             const LatticeTables& lattice) {
    if (!lattice.is_lattice) throw Error("mixed monotone generator requires a lattice");
    DetRng rng(seed);
    const int n = p.size();
    const auto order = linear_extension(p);

    // f nondecreasing: each value is drawn from the up-set of the join of
    // the values already assigned below.
    std::vector<int> f(n, -1), g(n, -1);
    for (int x : order) {
        int lo = -1;
        int hi = -1;
        for (int y = 0; y < n; ++y) {
            if (y != x && p.leq(y, x)) {
                lo = lo < 0 ? f[y] : lattice.join_of(lo, f[y]);
                hi = hi < 0 ? g[y] : lattice.meet_of(hi, g[y]);
            }
        }
        std::vector<int> f_choices, g_choices;
        for (int e = 0; e < n; ++e) {
            if (lo < 0 || p.leq(lo, e)) f_choices.push_back(e);
            if (hi < 0 || p.leq(e, hi)) g_choices.push_back(e);
        }
        f[x] = f_choices[rng.below(f_choices.size())];
        g[x] = g_choices[rng.below(g_choices.size())];
    }

    const bool join_form = rng.coin();
    std::vector<int> table(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            table[static_cast<std::size_t>(x) * n + y] =
                join_form ? lattice.join_of(f[x], g[y]) : lattice.meet_of(f[x], g[y]);
        }
    }
    return TableOperator(n, std::move(table));
}

TableOperator random_table_operator(std::uint64_t seed, int size) {
    DetRng rng(seed);
    std::vector<int> table(static_cast<std::size_t>(size) * size);
    for (auto& v : table) v = static_cast<int>(rng.below(size));
    return TableOperator(size, std::move(table));
}

BivariateOperator<int> make_operator(UniversePtr<int> universe, TableOperator table,
                                     std::string label) {
    if (static_cast<int>(universe->elements.size()) != table.size()) {
        throw ShapeError("operator table size does not match the universe");
    }
    auto shared = std::make_shared<TableOperator>(std::move(table));
    return BivariateOperator<int>(
        std::move(universe),
        [shared](const int& x, const int& y) { return shared->apply(x, y); },
        std::move(label));
}

std::vector<std::pair<int, int>> enumerate_coupled_fixed_points(
    const TableOperator& a, const FinitePoset& p, std::optional<OrderInterval<int>> box) {
    std::vector<std::pair<int, int>> out;
    const int n = a.size();
    auto inside = [&](int z) {
        return !box || (p.leq(box->lo, z) && p.leq(z, box->hi));
    };
    for (int x = 0; x < n; ++x) {
        if (!inside(x)) continue;
        for (int y = 0; y < n; ++y) {
            if (!inside(y)) continue;
            if (a.apply(x, y) == x && a.apply(y, x) == y) out.emplace_back(x, y);
        }
    }
    return out;
}

}  // namespace mixmono
