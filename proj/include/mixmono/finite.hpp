#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixmono/operators.hpp"
#include "mixmono/rng.hpp"
#include "mixmono/universe.hpp"

namespace mixmono {

/// Explicit finite poset: elements are indices 0..size-1 and the order is a
/// boolean relation matrix.
class FinitePoset {
public:
    FinitePoset(int size, std::vector<std::uint8_t> leq_matrix);

    int size() const { return size_; }
    bool leq(int a, int b) const { return leq_[static_cast<std::size_t>(a) * size_ + b] != 0; }
    const std::vector<std::uint8_t>& matrix() const { return leq_; }

    /// Optional element labels (divisor lattices label elements by the
    /// divisors they represent); empty otherwise.
    const std::vector<std::string>& labels() const { return labels_; }

    static FinitePoset chain(int n);
    static FinitePoset chain_product(std::span<const int> lengths);
    /// Bottom, an antichain of `middles` elements, top. M_1 is the 3-chain.
    static FinitePoset diamond(int middles);
    /// Divisors of n ordered by divisibility.
    static FinitePoset divisor_lattice(long long n);

private:
    int size_;
    std::vector<std::uint8_t> leq_;
    std::vector<std::string> labels_;
};

/// Axiom-check result: pass, or the first violated axiom with a witness
/// (pair for reflexivity/antisymmetry, triple for transitivity).
struct PosetValidation {
    bool pass = true;
    std::string axiom;
    std::array<int, 3> witness{-1, -1, -1};
};

PosetValidation validate_poset(const FinitePoset& p);

/// Meet/join tables. is_lattice is false when some pair lacks a unique
/// least upper or greatest lower bound; `witness` then names the pair.
struct LatticeTables {
    bool is_lattice = false;
    std::array<int, 2> witness{-1, -1};
    std::vector<int> join;  // size*size, -1 where undefined
    std::vector<int> meet;

    int join_of(int a, int b) const { return join[static_cast<std::size_t>(a) * n + b]; }
    int meet_of(int a, int b) const { return meet[static_cast<std::size_t>(a) * n + b]; }
    int n = 0;
};

LatticeTables lattice_tables(const FinitePoset& p);

/// Random lattice with 2 <= size <= 64 elements. Construction draws from
/// chain products (random factorization of size), diamonds M_k, and divisor
/// lattices, so every pair of elements has a meet and a join.
FinitePoset generate_random_lattice(std::uint64_t seed, int size);

/// Random poset that need not be a lattice (random DAG closure); exercises
/// the absent-supremum paths.
FinitePoset generate_random_poset(std::uint64_t seed, int size);

/// Universe over the poset's element indices. Validates the axioms eagerly
/// and throws on violation.
UniversePtr<int> poset_universe(FinitePoset p);

/// Lookup-table operator on a finite poset.
class TableOperator {
public:
    TableOperator(int size, std::vector<int> table);

    int size() const { return size_; }
    int apply(int x, int y) const { return table_[static_cast<std::size_t>(x) * size_ + y]; }
    const std::vector<int>& table() const { return table_; }

private:
    int size_;
    std::vector<int> table_;
};

/// Mixed monotone operator by construction: A(x, y) = join(f(x), g(y)) or
/// the meet form, with f a random nondecreasing self-map and g a random
/// nonincreasing one. The result is re-verified exhaustively.
TableOperator generate_random_mixed_monotone(std::uint64_t seed, const FinitePoset& p,
                                             const LatticeTables& lattice);

/// Unconstrained random table; negative-test instances.
TableOperator random_table_operator(std::uint64_t seed, int size);

BivariateOperator<int> make_operator(UniversePtr<int> universe, TableOperator table,
                                     std::string label);

/// All pairs (x, y) with A(x, y) = x and A(y, x) = y, restricted to
/// box x box when a box is given. Diagonal members are the fixed points.
std::vector<std::pair<int, int>> enumerate_coupled_fixed_points(
    const TableOperator& a, const FinitePoset& p,
    std::optional<OrderInterval<int>> box = std::nullopt);

}  // namespace mixmono
