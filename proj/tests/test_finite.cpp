#include <doctest.h>

#include <set>

#include "mixmono/finite.hpp"
#include "mixmono/iteration.hpp"

using namespace mixmono;

TEST_CASE("poset validation finds the first broken axiom") {
    CHECK(validate_poset(FinitePoset::chain(3)).pass);

    // leq(0,1) and leq(1,0) with 0 != 1.
    std::vector<std::uint8_t> anti = {1, 1, 1, 1};
    const auto anti_report = validate_poset(FinitePoset(2, anti));
    CHECK_FALSE(anti_report.pass);
    CHECK(anti_report.axiom == "antisymmetry");

    // 0 <= 1 and 1 <= 2 but not 0 <= 2.
    std::vector<std::uint8_t> trans = {
        1, 1, 0,
        0, 1, 1,
        0, 0, 1,
    };
    const auto trans_report = validate_poset(FinitePoset(3, trans));
    CHECK_FALSE(trans_report.pass);
    CHECK(trans_report.axiom == "transitivity");
    CHECK(trans_report.witness == std::array<int, 3>{0, 1, 2});

    CHECK_THROWS_AS(FinitePoset(3, std::vector<std::uint8_t>(5, 1)), ShapeError);
}

TEST_CASE("chain product of two 2-chains is the grid lattice") {
    const int dims[] = {2, 2};
    const auto grid = FinitePoset::chain_product(dims);
    CHECK(grid.size() == 4);
    const auto tables = lattice_tables(grid);
    REQUIRE(tables.is_lattice);
    // Elements decode as (bit0, bit1): 0 = bottom, 3 = top, 1 and 2 incomparable.
    CHECK_FALSE(grid.leq(1, 2));
    CHECK_FALSE(grid.leq(2, 1));
    CHECK(tables.join_of(1, 2) == 3);
    CHECK(tables.meet_of(1, 2) == 0);
}

TEST_CASE("divisor lattice of 12") {
    const auto d12 = FinitePoset::divisor_lattice(12);
    CHECK(d12.size() == 6);
    const std::vector<std::string> expected = {"1", "2", "3", "4", "6", "12"};
    CHECK(d12.labels() == expected);
    // divisibility: 2 | 6 but 4 does not divide 6
    auto index_of = [&](const std::string& s) {
        for (int i = 0; i < d12.size(); ++i) {
            if (d12.labels()[i] == s) return i;
        }
        return -1;
    };
    CHECK(d12.leq(index_of("2"), index_of("6")));
    CHECK_FALSE(d12.leq(index_of("4"), index_of("6")));
    CHECK(lattice_tables(d12).is_lattice);
}

TEST_CASE("diamond is a lattice but not a chain") {
    const auto m2 = FinitePoset::diamond(2);
    CHECK(m2.size() == 4);
    CHECK(lattice_tables(m2).is_lattice);
    CHECK_FALSE(m2.leq(1, 2));
}

TEST_CASE("random lattice generation is deterministic and size-exact") {
    for (int size : {2, 3, 4, 5, 6, 7, 8, 13, 24, 64}) {
        const auto a = generate_random_lattice(997, size);
        const auto b = generate_random_lattice(997, size);
        CHECK(a.size() == size);
        CHECK(a.matrix() == b.matrix());
        CHECK(lattice_tables(a).is_lattice);
    }
}

TEST_CASE("general posets exercise the absent-supremum path") {
    bool saw_absent = false;
    for (std::uint64_t seed = 0; seed < 40 && !saw_absent; ++seed) {
        const auto poset = generate_random_poset(seed, 6);
        REQUIRE(validate_poset(poset).pass);
        auto u = poset_universe(poset);
        for (int a = 0; a < 6 && !saw_absent; ++a) {
            for (int b = 0; b < 6 && !saw_absent; ++b) {
                const std::vector<int> pair = {a, b};
                if (!sup_of(*u, std::span<const int>(pair))) saw_absent = true;
            }
        }
    }
    CHECK(saw_absent);
}

TEST_CASE("mixed monotone generator building blocks") {
    // f = identity, g = constant bottom, join form: A(x, y) = x.
    const auto chain = FinitePoset::chain(3);
    const auto tables = lattice_tables(chain);
    std::vector<int> table(9);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            table[static_cast<std::size_t>(x) * 3 + y] = tables.join_of(x, 0);
    auto u = poset_universe(chain);
    CHECK(check_mixed_monotone(make_operator(u, TableOperator(3, table), "id")).pass);

    // On the 2-chain: f = id, g = complement, join form gives x OR NOT y.
    const auto two = FinitePoset::chain(2);
    const auto two_tables = lattice_tables(two);
    auto comp = [](int z) { return 1 - z; };
    std::vector<int> xor_table(4);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            xor_table[static_cast<std::size_t>(x) * 2 + y] = two_tables.join_of(x, comp(y));
    auto u2 = poset_universe(two);
    CHECK(check_mixed_monotone(make_operator(u2, TableOperator(2, xor_table), "or-not")).pass);
    CHECK(xor_table == std::vector<int>{1, 0, 1, 1});
}

TEST_CASE("generated operators are exhaustively mixed monotone") {
    DetRng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const int size = 2 + static_cast<int>(rng.below(7));
        const auto poset = generate_random_lattice(rng.next(), size);
        const auto tables = lattice_tables(poset);
        const auto op = generate_random_mixed_monotone(rng.next(), poset, tables);
        auto u = poset_universe(poset);
        CHECK(check_mixed_monotone(make_operator(u, op, "gen")).pass);
    }
}

TEST_CASE("coupled fixed point enumeration") {
    const auto two = FinitePoset::chain(2);

    // Projection: every pair is a coupled fixed point.
    std::vector<int> proj = {0, 0, 1, 1};
    CHECK(enumerate_coupled_fixed_points(TableOperator(2, proj), two).size() == 4);

    // Constant c: only (c, c).
    std::vector<int> ones = {1, 1, 1, 1};
    const auto only = enumerate_coupled_fixed_points(TableOperator(2, ones), two);
    REQUIRE(only.size() == 1);
    CHECK(only.front() == std::pair<int, int>{1, 1});

    // Randomized lattice instances agree with the definitional filter.
    DetRng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const int size = 2 + static_cast<int>(rng.below(7));
        const auto poset = generate_random_lattice(rng.next(), size);
        const auto tables = lattice_tables(poset);
        const auto op = generate_random_mixed_monotone(rng.next(), poset, tables);
        auto u = poset_universe(poset);
        auto a = make_operator(u, op, "gen");

        std::set<std::pair<int, int>> filtered;
        for (int x = 0; x < size; ++x) {
            for (int y = 0; y < size; ++y) {
                if (is_coupled_fixed_point(a, x, y)) filtered.insert({x, y});
            }
        }
        const auto enumerated = enumerate_coupled_fixed_points(op, poset);
        CHECK(filtered == std::set<std::pair<int, int>>(enumerated.begin(), enumerated.end()));
    }
}
