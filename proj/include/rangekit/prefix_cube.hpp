#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/errors.hpp"

namespace rangekit {

namespace detail {

inline unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    while (b) {
        unsigned __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline __int128 checked_mul128(__int128 a, __int128 b) {
    if (a == 0 || b == 0) return 0;
    __int128 r = a * b;
    if (r / b != a) throw OverflowError("128-bit product overflow");
    return r;
}

// Exact signed rational on 128-bit parts, reduced after every step. Keeps
// product-mode inclusion-exclusion exact regardless of corner order.
struct Rat128 {
    __int128 num = 1;
    __int128 den = 1;  // > 0

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        unsigned __int128 g = gcd128(num < 0 ? static_cast<unsigned __int128>(-num)
                                             : static_cast<unsigned __int128>(num),
                                     static_cast<unsigned __int128>(den));
        if (g > 1) {
            num /= static_cast<__int128>(g);
            den /= static_cast<__int128>(g);
        }
    }

    void mul(Weight v) {
        num = checked_mul128(num, v);
        reduce();
    }

    void div(Weight v) {
        if (v == 0) throw DivisionByZero();
        den = checked_mul128(den, v);
        reduce();
    }

    Weight to_weight() const {
        if (den != 1) throw NotInvertible("product inverse is not exact");
        if (num > static_cast<__int128>(kPosInf) || num < static_cast<__int128>(kNegInf))
            throw OverflowError();
        return static_cast<Weight>(num);
    }
};

// Folds the signed corner terms of an inclusion-exclusion expansion.
class CornerAccum {
public:
    explicit CornerAccum(AggregateOp op) : op_(op), acc_(op.neutral()) {}

    void add(Weight v, bool inverted) {
        if (op_.kind() == AggKind::Product) {
            if (inverted)
                rat_.div(v);
            else
                rat_.mul(v);
        } else {
            acc_ = inverted ? op_.invert(acc_, v) : op_.combine(acc_, v);
        }
    }

    Weight finish() const { return op_.kind() == AggKind::Product ? rat_.to_weight() : acc_; }

private:
    AggregateOp op_;
    Weight acc_;
    Rat128 rat_;
};

}  // namespace detail

// Row-major d-dimensional array of weights; dimension 1 is outermost, so
// lexicographic index order is storage order. Indices are 1-based.
class DenseCube {
public:
    DenseCube(std::vector<int> axis_sizes, AggregateOp op)
        : m_(std::move(axis_sizes)), op_(op) {
        if (m_.empty()) throw BadBox("cube needs at least one dimension");
        std::int64_t np = 1;
        for (int mj : m_) {
            if (mj < 1) throw BadBox("axis sizes must be positive");
            np = checked_mul(np, mj);
        }
        np_ = np;
        cells_.assign(static_cast<size_t>(np_), op_.neutral());
    }

    int dim() const { return static_cast<int>(m_.size()); }
    const std::vector<int>& axis_sizes() const { return m_; }
    std::int64_t cell_count() const { return np_; }
    const AggregateOp& op() const { return op_; }
    std::vector<Weight>& cells() { return cells_; }
    const std::vector<Weight>& cells() const { return cells_; }

    size_t offset(const std::vector<int>& idx) const {
        size_t off = 0;
        for (size_t j = 0; j < m_.size(); ++j) {
            if (idx[j] < 1 || idx[j] > m_[j]) throw BadBox("cell index out of range");
            off = off * static_cast<size_t>(m_[j]) + static_cast<size_t>(idx[j] - 1);
        }
        return off;
    }

    Weight at(const std::vector<int>& idx) const { return cells_[offset(idx)]; }
    Weight& at(const std::vector<int>& idx) { return cells_[offset(idx)]; }

    // Lexicographically advances a 1-based index tuple; false after the last.
    bool next_index(std::vector<int>& idx) const {
        for (int j = dim() - 1; j >= 0; --j) {
            if (idx[static_cast<size_t>(j)] < m_[static_cast<size_t>(j)]) {
                ++idx[static_cast<size_t>(j)];
                for (size_t t = static_cast<size_t>(j) + 1; t < m_.size(); ++t) idx[t] = 1;
                return true;
            }
        }
        return false;
    }

private:
    std::vector<int> m_;
    AggregateOp op_;
    std::int64_t np_ = 0;
    std::vector<Weight> cells_;
};

// Prefix-aggregate cube: entry c holds the fold of all cells dominated by c;
// any zero index reads as the neutral element.
class PrefixCube {
public:
    PrefixCube(std::vector<int> axis_sizes, AggregateOp op) : data_(std::move(axis_sizes), op) {}

    const DenseCube& data() const { return data_; }
    DenseCube& data() { return data_; }
    const AggregateOp& op() const { return data_.op(); }

    // idx entries may be 0 (virtual neutral border).
    Weight at_or_neutral(const std::vector<int>& idx) const {
        for (int v : idx)
            if (v == 0) return data_.op().neutral();
        return data_.at(idx);
    }

    std::uint64_t build_op_calls = 0;  // combine/invert calls spent building

private:
    DenseCube data_;
};

namespace detail {
inline void require_invertible(const DenseCube& c) {
    if (!c.op().invertible())
        throw UnsupportedCombination("prefix cubes require an invertible aggregate");
    if (c.op().kind() == AggKind::Product)
        for (Weight w : c.cells())
            if (w == 0) throw ZeroInProductCube();
}
}  // namespace detail

// Per-entry inclusion-exclusion fill in lexicographic order: each entry
// combines the cell value with the 2^d - 1 previously computed neighbours,
// inverting those with an even number of decremented coordinates.
inline PrefixCube build_prefix_naive(const DenseCube& c) {
    detail::require_invertible(c);
    PrefixCube ps(c.axis_sizes(), c.op());
    const int d = c.dim();
    std::vector<int> idx(static_cast<size_t>(d), 1);
    std::vector<int> corner(static_cast<size_t>(d));
    do {
        detail::CornerAccum acc(c.op());
        for (unsigned mask = 1; mask < (1u << d); ++mask) {
            int dec = 0;
            bool in_range = true;
            for (int j = 0; j < d; ++j) {
                if (mask & (1u << j)) {
                    corner[static_cast<size_t>(j)] = idx[static_cast<size_t>(j)] - 1;
                    ++dec;
                    if (corner[static_cast<size_t>(j)] == 0) in_range = false;
                } else {
                    corner[static_cast<size_t>(j)] = idx[static_cast<size_t>(j)];
                }
            }
            Weight term = in_range ? ps.data().at(corner) : c.op().neutral();
            // sign (-1)^(1 + dec): odd number of decrements combines, even inverts
            acc.add(term, dec % 2 == 0);
            ++ps.build_op_calls;
        }
        Weight combo = acc.finish();
        ps.data().at(idx) = c.op().combine(c.at(idx), combo);
        ++ps.build_op_calls;
    } while (c.next_index(idx));
    return ps;
}

// Dimension-sweep fill: one prefix pass per dimension, O(d) combines per
// entry. Output is identical to the per-entry builder.
inline PrefixCube build_prefix_sweep(const DenseCube& c) {
    detail::require_invertible(c);
    PrefixCube ps(c.axis_sizes(), c.op());
    ps.data().cells() = c.cells();
    const int d = c.dim();
    std::vector<int> idx(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        std::fill(idx.begin(), idx.end(), 1);
        do {
            if (idx[static_cast<size_t>(j)] > 1) {
                std::vector<int> prev = idx;
                --prev[static_cast<size_t>(j)];
                ps.data().at(idx) = c.op().combine(ps.data().at(idx), ps.data().at(prev));
                ++ps.build_op_calls;
            }
        } while (c.next_index(idx));
    }
    return ps;
}

// Box fold from 2^d prefix entries: corner picks chigh(j) or clow(j)-1 per
// dimension, inverting when the number of low picks is odd.
inline Weight prefix_range_query(const PrefixCube& ps, const std::vector<std::pair<int, int>>& box) {
    const DenseCube& c = ps.data();
    const int d = c.dim();
    if (static_cast<int>(box.size()) != d) throw BadBox("box dimension mismatch");
    for (int j = 0; j < d; ++j) {
        auto [lo, hi] = box[static_cast<size_t>(j)];
        if (lo < 1 || lo > hi || hi > c.axis_sizes()[static_cast<size_t>(j)])
            throw BadBox("box out of cube bounds");
    }
    detail::CornerAccum acc(c.op());
    std::vector<int> corner(static_cast<size_t>(d));
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        int low_picks = 0;
        for (int j = 0; j < d; ++j) {
            if (mask & (1u << j)) {
                corner[static_cast<size_t>(j)] = box[static_cast<size_t>(j)].first - 1;
                ++low_picks;
            } else {
                corner[static_cast<size_t>(j)] = box[static_cast<size_t>(j)].second;
            }
        }
        acc.add(ps.at_or_neutral(corner), low_picks % 2 == 1);
    }
    return acc.finish();
}

// One box update: add u inside [xa(j), xb(j)] per dimension.
struct RangeStamp {
    std::vector<std::pair<int, int>> box;
    Weight u = 0;
};

struct BatchedUpdateResult {
    DenseCube cube;  // final cell values after all stamps
    std::vector<int> corners_per_stamp;
};

// Applies all stamps by marking at most 2^d corner cells each (corners past
// the upper grid border are dropped), then runs one prefix sweep. Cell c of
// the result equals the fold of u over the stamps whose box contains c.
inline BatchedUpdateResult batched_range_updates(const std::vector<int>& axis_sizes,
                                                 const std::vector<RangeStamp>& updates,
                                                 AggregateOp op) {
    if (!op.invertible())
        throw UnsupportedCombination("batched range updates require an invertible aggregate");
    DenseCube work(axis_sizes, op);
    const int d = work.dim();
    const bool product = op.kind() == AggKind::Product;
    std::vector<detail::Rat128> rat;
    if (product) rat.assign(static_cast<size_t>(work.cell_count()), detail::Rat128{});
    BatchedUpdateResult out{DenseCube(axis_sizes, op), {}};
    std::vector<int> corner(static_cast<size_t>(d));
    for (const RangeStamp& st : updates) {
        if (static_cast<int>(st.box.size()) != d) throw BadBox("stamp dimension mismatch");
        for (int j = 0; j < d; ++j) {
            auto [a, b] = st.box[static_cast<size_t>(j)];
            if (a < 1 || a > b || b > axis_sizes[static_cast<size_t>(j)]) throw BadBox("stamp out of grid");
        }
        if (product && st.u == 0) throw ZeroUpdateInProductMode();
        int stamped = 0;
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            int high_picks = 0;
            bool inside = true;
            for (int j = 0; j < d; ++j) {
                if (mask & (1u << j)) {
                    corner[static_cast<size_t>(j)] = st.box[static_cast<size_t>(j)].second + 1;
                    ++high_picks;
                    if (corner[static_cast<size_t>(j)] > axis_sizes[static_cast<size_t>(j)]) inside = false;
                } else {
                    corner[static_cast<size_t>(j)] = st.box[static_cast<size_t>(j)].first;
                }
            }
            if (!inside) continue;
            ++stamped;
            bool invert = high_picks % 2 == 1;
            if (product) {
                detail::Rat128& cell = rat[work.offset(corner)];
                if (invert)
                    cell.div(st.u);
                else
                    cell.mul(st.u);
            } else {
                Weight& cell = work.at(corner);
                cell = invert ? op.invert(cell, st.u) : op.combine(cell, st.u);
            }
        }
        out.corners_per_stamp.push_back(stamped);
    }
    if (product) {
        // rational prefix sweep, then materialize exact integers
        std::vector<int> idx(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j) {
            std::fill(idx.begin(), idx.end(), 1);
            do {
                if (idx[static_cast<size_t>(j)] > 1) {
                    std::vector<int> prev = idx;
                    --prev[static_cast<size_t>(j)];
                    detail::Rat128& cur = rat[work.offset(idx)];
                    const detail::Rat128& pre = rat[work.offset(prev)];
                    cur.num = detail::checked_mul128(cur.num, pre.num);
                    cur.den = detail::checked_mul128(cur.den, pre.den);
                    cur.reduce();
                }
            } while (work.next_index(idx));
        }
        for (size_t i = 0; i < rat.size(); ++i) out.cube.cells()[i] = rat[i].to_weight();
    } else {
        PrefixCube swept = build_prefix_sweep(work);
        out.cube.cells() = swept.data().cells();
    }
    return out;
}

}  // namespace rangekit
