#ifndef QSTAB_MUTATION_HPP
#define QSTAB_MUTATION_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qstab::mutation {

using IntVector = std::vector<std::int64_t>;

/// One signed braid letter: left or right mutation at an adjacent pair
/// (index, index+1), 0-based.
struct BraidLetter {
    int index = 0;
    bool left = true;
};

/// Ordered decomposition of a paired lattice: gram(i, j) = [e_i, e_j), the
/// summands are column-vector bases, blockwise upper-triangular:
/// [Lambda_j, Lambda_i) = 0 for j > i. All arithmetic is exact integer.
struct PairedLattice {
    int rank = 0;
    std::vector<IntVector> gram;                 // rank x rank
    std::vector<std::vector<IntVector>> summands;  // summand -> basis vectors
    std::vector<BraidLetter> history;
    std::vector<int> permutation;  // underlying strand permutation of history

    std::int64_t pair(const IntVector& a, const IntVector& b) const;
};

/// Validates gram non-degeneracy (det != 0), upper-triangularity, and that the
/// concatenated summand bases have determinant +/-1 when they fill the rank.
void validate(const PairedLattice& dec);

/// Rank-1 mutation at adjacent summands (i, i+1), both generated by
/// exceptional vectors ([e,e) = [f,f) = 1):
///   left:  (e, f) -> (f - [e,f) e, e)
///   right: (e, f) -> (f, e - [e,f) f)
/// The result is re-validated. Higher-rank blocks are unsupported.
PairedLattice mutate(const PairedLattice& dec, int index, bool left);

/// Composition of mutations; records the braid word and the induced
/// permutation.
PairedLattice braid_apply(const PairedLattice& dec, const std::vector<BraidLetter>& word);

/// Euler-form helpers for testing and the bundled examples:
/// P^1: chi(O(a), O(b)) = b - a + 1 in the basis ([O], [O_p]).
PairedLattice p1_lattice();
/// P^2-style rank 3: chi(O(a), O(b)) = (b - a + 2)(b - a + 1)/2 on
/// <O, O(1), O(2)>.
PairedLattice p2_lattice();

}  // namespace qstab::mutation

#endif
