#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ingleton/ingleton_expr.hpp"
#include "ingleton/parallel.hpp"

namespace ingleton {

struct NoIngletonColumn : std::runtime_error {
    explicit NoIngletonColumn(const std::string& what) : std::runtime_error(what) {}
};

/// Row-major integer matrix.
using IntMatrix = std::vector<std::vector<long long>>;

struct FunctionalMatrix {
    IntMatrix rows;                      // 16 x 25
    std::vector<std::string> col_names;  // 24 difference expressions + the Ingleton column
};

inline constexpr int kIngletonColumn = kNumStatements;  // column 24

/// Columns are the 24 difference expressions in enumeration order followed
/// by box(XY|ZU); rows are indexed by variable subsets.
inline FunctionalMatrix functional_matrix() {
    FunctionalMatrix m;
    m.rows.assign(kNumSubsets, std::vector<long long>(kNumStatements + 1, 0));
    for (int n = 0; n < kNumStatements; ++n) {
        const CIStatement& s = enumerate_elementary()[n];
        LinFunctional f = delta_functional(s);
        for (int r = 0; r < kNumSubsets; ++r) m.rows[r][n] = f.coeff[r];
        m.col_names.push_back(s.str());
    }
    LinFunctional box = ingleton_xyzu();
    for (int r = 0; r < kNumSubsets; ++r) m.rows[r][kIngletonColumn] = box.coeff[r];
    m.col_names.push_back("ingleton(XY|ZU)");
    return m;
}

/// Kernel vector with inclusion-minimal support, coprime entries and the
/// first nonzero entry positive.
struct Circuit {
    std::vector<long long> coeffs;  // one entry per column
    std::uint64_t support = 0;

    int support_size() const { return std::popcount(support); }

    auto operator<=>(const Circuit&) const = default;
};

/// Rank via fraction-free Gaussian elimination.
inline int matrix_rank(const IntMatrix& m) {
    if (m.empty()) return 0;
    std::vector<std::vector<long long>> a = m;
    const int nr = int(a.size()), nc = int(a[0].size());
    int rank = 0;
    long long prev = 1;
    for (int col = 0; col < nc && rank < nr; ++col) {
        int piv = -1;
        for (int r = rank; r < nr; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        for (int r = rank + 1; r < nr; ++r) {
            for (int c = col + 1; c < nc; ++c)
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
            a[r][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

namespace detail {

// Depth-first enumeration of independent column sets with incremental
// fraction-free elimination.  Every column vector is augmented with an
// identity tail, so that when the top (row) part of a candidate vanishes
// the tail holds an integer kernel vector of the chosen set plus the
// candidate.  Such a set is a circuit exactly when the kernel vector is
// supported on all of it, and each circuit arises from exactly one chosen
// prefix, so no deduplication is required.
class CircuitSearch {
  public:
    CircuitSearch(const IntMatrix& m, int rank)
        : nrows_(int(m.size())), ncols_(int(m[0].size())), len_(nrows_ + ncols_), rank_(rank) {
        root_.assign(size_t(ncols_) * len_, 0);
        root_idx_.resize(ncols_);
        for (int j = 0; j < ncols_; ++j) {
            root_idx_[j] = j;
            long long* v = &root_[size_t(j) * len_];
            for (int r = 0; r < nrows_; ++r) v[r] = m[r][j];
            v[nrows_ + j] = 1;
        }
    }

    std::vector<Circuit> run(unsigned threads) {
        std::vector<std::vector<Circuit>> partial(ncols_);
        parallel_for(size_t(ncols_), threads, [&](size_t j0) {
            Workspace ws(*this);
            ws.extend(root_, root_idx_, ncols_, int(j0), /*prev=*/1, /*chosen=*/0, /*depth=*/0,
                      partial[j0]);
        });
        std::vector<Circuit> out;
        for (auto& p : partial)
            out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    struct Workspace {
        const CircuitSearch& cs;
        // one candidate buffer per depth level
        std::vector<std::vector<long long>> buf;
        std::vector<std::vector<int>> idx;

        explicit Workspace(const CircuitSearch& cs_) : cs(cs_) {
            buf.assign(cs.rank_ + 1, std::vector<long long>(size_t(cs.ncols_) * cs.len_));
            idx.assign(cs.rank_ + 1, std::vector<int>(cs.ncols_));
        }

        // Processes candidate number `pos` of the current node's list.
        void extend(const std::vector<long long>& cands, const std::vector<int>& cidx, int count,
                    int pos, long long prev, std::uint64_t chosen, int depth,
                    std::vector<Circuit>& out) {
            const int len = cs.len_, nrows = cs.nrows_, ncols = cs.ncols_;
            const long long* c = &cands[size_t(pos) * len];
            int piv = -1;
            for (int r = 0; r < nrows; ++r)
                if (c[r] != 0) { piv = r; break; }

            if (piv < 0) {
                // dependent on the chosen set: candidate's tail is a kernel vector
                std::uint64_t sup = 0;
                for (int j = 0; j < ncols; ++j)
                    if (c[nrows + j] != 0) sup |= std::uint64_t(1) << j;
                if (sup == (chosen | (std::uint64_t(1) << cidx[pos]))) out.push_back(make_circuit(c));
                return;
            }
            if (pos + 1 >= count || depth >= cs.rank_) return;

            // eliminate the pivot row from all later candidates (Bareiss step)
            std::vector<long long>& nbuf = buf[depth + 1];
            std::vector<int>& nidx = idx[depth + 1];
            const long long pv = c[piv];
            int ncount = 0;
            for (int q = pos + 1; q < count; ++q) {
                const long long* w = &cands[size_t(q) * len];
                long long* nw = &nbuf[size_t(ncount) * len];
                const long long wp = w[piv];
                for (int t = 0; t < len; ++t) nw[t] = (pv * w[t] - wp * c[t]) / prev;
                nidx[ncount++] = cidx[q];
            }
            const std::uint64_t nchosen = chosen | (std::uint64_t(1) << cidx[pos]);
            for (int q = 0; q < ncount; ++q)
                extend(nbuf, nidx, ncount, q, pv, nchosen, depth + 1, out);
        }

        Circuit make_circuit(const long long* v) const {
            Circuit c;
            c.coeffs.assign(v + cs.nrows_, v + cs.len_);
            long long g = 0;
            for (long long x : c.coeffs) g = std::gcd(g, x);
            long long lead = 0;
            for (long long& x : c.coeffs) {
                x /= g;
                if (lead == 0) lead = x;
            }
            if (lead < 0)
                for (long long& x : c.coeffs) x = -x;
            for (int j = 0; j < cs.ncols_; ++j)
                if (c.coeffs[j] != 0) c.support |= std::uint64_t(1) << j;
            return c;
        }
    };

    int nrows_, ncols_, len_, rank_;
    std::vector<long long> root_;
    std::vector<int> root_idx_;
};

}  // namespace detail

/// All circuits of an integer matrix, canonically signed and sorted.
inline std::vector<Circuit> circuits(const IntMatrix& m, unsigned threads = 1) {
    if (m.empty() || m[0].empty()) return {};
    if (m[0].size() > 63) throw std::invalid_argument("circuits: at most 63 columns supported");
    int rank = matrix_rank(m);
    // intermediate values are minors of the augmented matrix; by Hadamard
    // they stay below (r+1)^((r+1)/2) * maxentry^(r+1), which must fit in
    // 63 bits with room for one cross-multiplication
    double max_entry = 1;
    for (const auto& row : m)
        for (long long v : row) max_entry = std::max(max_entry, double(v < 0 ? -v : v));
    double bits = 0.5 * (rank + 1) * std::log2(double(rank + 1)) + (rank + 1) * std::log2(max_entry);
    if (bits > 31)
        throw std::invalid_argument("circuits: entries too large for 64-bit fraction-free elimination");
    detail::CircuitSearch search(m, rank);
    std::vector<Circuit> out = search.run(threads);
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw std::logic_error("circuit enumeration produced a duplicate");
    return out;
}

struct CircuitCensus {
    std::size_t total = 0;
    std::size_t through_ingleton = 0;
    std::size_t shortest = 0;  // support-5 circuits through the Ingleton column
};

inline CircuitCensus census(const std::vector<Circuit>& cs, int ingleton_col = kIngletonColumn) {
    CircuitCensus c;
    c.total = cs.size();
    for (const Circuit& v : cs) {
        if (!(v.support >> ingleton_col & 1)) continue;
        ++c.through_ingleton;
        if (v.support_size() == 5) ++c.shortest;
    }
    return c;
}

/// Solves each support-5 circuit through the Ingleton column for the box
/// functional, yielding mask identities box = sum of signed deltas.
inline std::vector<MaskIdentity> shortest_masks(const std::vector<Circuit>& cs) {
    std::vector<MaskIdentity> out;
    bool any_through = false;
    for (const Circuit& v : cs) {
        if (!(v.support >> kIngletonColumn & 1)) continue;
        any_through = true;
        if (v.support_size() != 5) continue;
        long long vbox = v.coeffs[kIngletonColumn];
        if (vbox != 1 && vbox != -1)
            throw std::domain_error("support-5 circuit with non-unit Ingleton coefficient");
        MaskIdentity id;
        id.label = "shortest." + std::to_string(out.size() + 1);
        id.lhs = ingleton_xyzu();
        for (int j = 0; j < kNumStatements; ++j)
            if (v.coeffs[j] != 0)
                id.rhs.push_back({int(-v.coeffs[j] * vbox), enumerate_elementary()[j]});
        if (!id.verify())
            throw std::logic_error("reconstructed mask failed verification: " + id.str());
        out.push_back(std::move(id));
    }
    if (!any_through) throw NoIngletonColumn("no circuits through the Ingleton column");
    return out;
}

/// CSV export: one line per circuit, "name:coefficient" pairs by column index.
inline std::string circuit_csv_line(const Circuit& c, const std::vector<std::string>& col_names) {
    std::string line;
    for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
        if (c.coeffs[j] == 0) continue;
        if (!line.empty()) line += ",";
        line += col_names[j] + ":" + std::to_string(c.coeffs[j]);
    }
    return line;
}

}  // namespace ingleton
