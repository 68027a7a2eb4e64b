#include "qstab/mutation.hpp"

#include <numeric>

namespace qstab::mutation {

namespace {

// fraction-free determinant in __int128, |det| compared against 1
__int128 int_det(std::vector<__int128> w, int n) {
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (w[k * n + k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (w[i * n + k] != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(w[k * n + j], w[p * n + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                w[i * n + j] = (w[i * n + j] * w[k * n + k] - w[i * n + k] * w[k * n + j]) / prev;
        prev = w[k * n + k];
    }
    return sign * w[(n - 1) * n + (n - 1)];
}

}  // namespace

std::int64_t PairedLattice::pair(const IntVector& a, const IntVector& b) const {
    __int128 sum = 0;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            sum += static_cast<__int128>(a[i]) * gram[i][j] * b[j];
    if (sum > INT64_MAX || sum < INT64_MIN) throw std::overflow_error("pair: overflow");
    return static_cast<std::int64_t>(sum);
}

void validate(const PairedLattice& dec) {
    const int n = dec.rank;
    if (static_cast<int>(dec.gram.size()) != n)
        throw std::invalid_argument("lattice: gram size mismatch");
    std::vector<__int128> g(n * n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(dec.gram[i].size()) != n)
            throw std::invalid_argument("lattice: gram row size mismatch");
        for (int j = 0; j < n; ++j) g[i * n + j] = dec.gram[i][j];
    }
    if (int_det(g, n) == 0) throw std::invalid_argument("lattice: gram is degenerate");

    for (std::size_t i = 0; i < dec.summands.size(); ++i)
        for (std::size_t j = i + 1; j < dec.summands.size(); ++j)
            for (const auto& later : dec.summands[j])
                for (const auto& earlier : dec.summands[i])
                    if (dec.pair(later, earlier) != 0)
                        throw std::invalid_argument(
                            "lattice: upper-triangularity fails between summands " +
                            std::to_string(i) + " and " + std::to_string(j));

    int total = 0;
    for (const auto& s : dec.summands) total += static_cast<int>(s.size());
    if (total == n) {
        std::vector<__int128> b(n * n);
        int col = 0;
        for (const auto& s : dec.summands)
            for (const auto& v : s) {
                for (int i = 0; i < n; ++i) b[i * n + col] = v[i];
                ++col;
            }
        const __int128 d = int_det(b, n);
        if (d != 1 && d != -1)
            throw std::invalid_argument("lattice: concatenated summand bases are not unimodular");
    }
}

PairedLattice mutate(const PairedLattice& dec, int index, bool left) {
    if (index < 0 || index + 1 >= static_cast<int>(dec.summands.size()))
        throw std::invalid_argument("mutate: index out of range");
    if (dec.summands[index].size() != 1 || dec.summands[index + 1].size() != 1)
        throw std::invalid_argument("mutate: only rank-1 summands are supported");

    const IntVector e = dec.summands[index][0];
    const IntVector f = dec.summands[index + 1][0];
    if (dec.pair(e, e) != 1 || dec.pair(f, f) != 1)
        throw std::invalid_argument("mutate: generators must be exceptional ([v,v) = 1)");

    const std::int64_t chi = dec.pair(e, f);
    PairedLattice out = dec;
    IntVector mutated(dec.rank);
    if (left) {
        for (int i = 0; i < dec.rank; ++i) mutated[i] = f[i] - chi * e[i];
        out.summands[index][0] = mutated;
        out.summands[index + 1][0] = e;
    } else {
        for (int i = 0; i < dec.rank; ++i) mutated[i] = e[i] - chi * f[i];
        out.summands[index][0] = f;
        out.summands[index + 1][0] = mutated;
    }
    out.history.push_back({index, left});
    if (out.permutation.empty()) {
        out.permutation.resize(dec.summands.size());
        std::iota(out.permutation.begin(), out.permutation.end(), 0);
    }
    std::swap(out.permutation[index], out.permutation[index + 1]);

    try {
        validate(out);
    } catch (const std::invalid_argument& err) {
        throw std::runtime_error(std::string("mutate: pairing data inconsistent after mutation: ") +
                                 err.what());
    }
    return out;
}

PairedLattice braid_apply(const PairedLattice& dec, const std::vector<BraidLetter>& word) {
    PairedLattice out = dec;
    if (out.permutation.empty()) {
        out.permutation.resize(dec.summands.size());
        std::iota(out.permutation.begin(), out.permutation.end(), 0);
    }
    for (const auto& letter : word) out = mutate(out, letter.index, letter.left);
    return out;
}

PairedLattice p1_lattice() {
    PairedLattice dec;
    dec.rank = 2;
    // chi(O(a), O(b)) = b - a + 1 in the basis [O] = (1,0), [O_p] = (0,1):
    // [O(b)] = [O] + b [O_p]
    dec.gram = {{1, 1}, {-1, 0}};
    dec.summands = {{{1, 0}}, {{1, 1}}};  // <[O], [O(1)]>
    return dec;
}

PairedLattice p2_lattice() {
    PairedLattice dec;
    dec.rank = 3;
    // Gram of chi(O(a), O(b)) = C(b-a+2, 2) on the collection <O, O(1), O(2)>
    dec.gram = {{1, 3, 6}, {0, 1, 3}, {0, 0, 1}};
    dec.summands = {{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}};
    return dec;
}

}  // namespace qstab::mutation
