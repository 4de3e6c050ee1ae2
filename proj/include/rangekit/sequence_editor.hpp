#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "rangekit/errors.hpp"

namespace rangekit {

// One editing operation, 1-indexed positions.
struct SeqOp {
    enum class Kind { Reverse, CutPaste, Insert, Get };
    Kind kind;
    std::int64_t i = 0, j = 0, p = 0;
    std::vector<std::int64_t> values;  // Insert only
};

// The current sequence as an ordered list of ([a, b], dir) descriptors over
// an append-only base store: dir=+1 reads base[a..b] forward, dir=-1
// backward. Reverse and cut-paste shuffle whole descriptors after isolating
// the touched positions with find().
class IntervalList {
public:
    struct Entry {
        std::int64_t a, b;
        int dir;
        std::int64_t len() const { return b - a + 1; }
    };

    explicit IntervalList(std::vector<std::int64_t> initial) : base_(std::move(initial)) {
        n_ = static_cast<std::int64_t>(base_.size());
        if (n_ > 0) si_.push_back({1, n_, +1});
    }

    std::int64_t size() const { return n_; }
    const std::vector<Entry>& entries() const { return si_; }
    const std::vector<std::int64_t>& base() const { return base_; }
    std::uint64_t touched_entries() const { return touched_; }

    // Splits the entry covering logical position i so that i sits alone in a
    // singleton entry; returns that entry's index. find(0) returns -1 (the
    // slot before the first entry). The logical sequence never changes.
    std::ptrdiff_t find(std::int64_t i) {
        if (i == 0) return -1;
        if (i < 0 || i > n_) throw PositionOutOfRange();
        std::int64_t k = 0;
        size_t u = 0;
        for (;; ++u) {
            ++touched_;
            k += si_[u].len();
            if (k >= i) break;
        }
        const Entry e = si_[u];
        std::int64_t q = i - (k - e.len());
        std::int64_t qp = e.dir == +1 ? e.a + q - 1 : e.b - q + 1;
        Entry pieces[3];
        size_t np = 0;
        if (e.dir == +1) {
            if (q >= 2) pieces[np++] = {e.a, e.a + q - 2, +1};
            size_t mine = np;
            pieces[np++] = {qp, qp, +1};
            if (e.a + q <= e.b) pieces[np++] = {e.a + q, e.b, +1};
            return splice(u, pieces, np, mine);
        }
        if (q >= 2) pieces[np++] = {e.b - q + 2, e.b, -1};
        size_t mine = np;
        pieces[np++] = {qp, qp, -1};
        if (e.a <= e.b - q) pieces[np++] = {e.a, e.b - q, -1};
        return splice(u, pieces, np, mine);
    }

    void reverse(std::int64_t i, std::int64_t j) {
        if (i < 1 || i > j || j > n_) throw PositionOutOfRange();
        std::ptrdiff_t u = find(i);
        std::ptrdiff_t v = find(j);
        touched_ += static_cast<std::uint64_t>(v - u + 1);
        std::reverse(si_.begin() + u, si_.begin() + v + 1);
        for (std::ptrdiff_t t = u; t <= v; ++t) si_[static_cast<size_t>(t)].dir = -si_[static_cast<size_t>(t)].dir;
    }

    // Cuts logical positions i..j and pastes them after position p of the
    // remaining sequence (p = 0: front, p = -1: drop the segment).
    void cut_paste(std::int64_t i, std::int64_t j, std::int64_t p) {
        if (i < 1 || i > j || j > n_) throw PositionOutOfRange();
        std::int64_t cut = j - i + 1;
        if (p != -1 && (p < 0 || p > n_ - cut)) throw BadPasteTarget();
        std::ptrdiff_t u = find(i);
        std::ptrdiff_t v = find(j);
        std::vector<Entry> block(si_.begin() + u, si_.begin() + v + 1);
        touched_ += block.size();
        si_.erase(si_.begin() + u, si_.begin() + v + 1);
        n_ -= cut;
        if (p == -1) return;
        std::ptrdiff_t w = find(p);
        si_.insert(si_.begin() + w + 1, block.begin(), block.end());
        n_ += cut;
    }

    void insert(std::int64_t p, const std::vector<std::int64_t>& values) {
        if (p < 0 || p > n_) throw PositionOutOfRange();
        if (values.empty()) throw EmptyInput();
        for (std::int64_t v : values) base_.push_back(v);
        std::int64_t k = static_cast<std::int64_t>(values.size());
        std::ptrdiff_t w = find(p);
        std::int64_t total = static_cast<std::int64_t>(base_.size());
        si_.insert(si_.begin() + w + 1, Entry{total - k + 1, total, +1});
        n_ += k;
    }

    // Point read; never splits.
    std::int64_t get(std::int64_t i) {
        if (i < 1 || i > n_) throw PositionOutOfRange();
        std::int64_t k = 0;
        for (const Entry& e : si_) {
            ++touched_;
            k += e.len();
            if (k >= i) {
                std::int64_t q = i - (k - e.len());
                return e.dir == +1 ? base_[static_cast<size_t>(e.a + q - 1) - 1]
                                   : base_[static_cast<size_t>(e.b - q + 1) - 1];
            }
        }
        throw PositionOutOfRange();
    }

    std::vector<std::int64_t> materialize() const {
        std::vector<std::int64_t> out;
        out.reserve(static_cast<size_t>(n_));
        for (const Entry& e : si_) {
            if (e.dir == +1)
                for (std::int64_t t = e.a; t <= e.b; ++t) out.push_back(base_[static_cast<size_t>(t - 1)]);
            else
                for (std::int64_t t = e.b; t >= e.a; --t) out.push_back(base_[static_cast<size_t>(t - 1)]);
        }
        return out;
    }

    // Checks the length bookkeeping after an operation.
    bool lengths_consistent() const {
        std::int64_t sum = 0;
        for (const Entry& e : si_) {
            if (e.a < 1 || e.a > e.b || e.b > static_cast<std::int64_t>(base_.size())) return false;
            sum += e.len();
        }
        return sum == n_;
    }

private:
    std::ptrdiff_t splice(size_t u, const Entry* pieces, size_t np, size_t mine) {
        touched_ += np;
        si_.erase(si_.begin() + static_cast<std::ptrdiff_t>(u));
        si_.insert(si_.begin() + static_cast<std::ptrdiff_t>(u), pieces, pieces + np);
        return static_cast<std::ptrdiff_t>(u + mine);
    }

    std::vector<std::int64_t> base_;
    std::vector<Entry> si_;
    std::int64_t n_ = 0;
    std::uint64_t touched_ = 0;
};

// Runs operations in groups of z: within a group the interval list does the
// work; after z operations the sequence is materialized into a fresh base
// snapshot and the list collapses back to one entry. Only the latest
// snapshot is kept.
class GroupedEditor {
public:
    GroupedEditor(std::vector<std::int64_t> initial, std::int64_t z)
        : z_(z), inner_(std::move(initial)) {
        if (z_ < 1) throw Error("group size must be >= 1");
    }

    std::int64_t size() const { return inner_.size(); }

    void reverse(std::int64_t i, std::int64_t j) {
        inner_.reverse(i, j);
        tick();
    }
    void cut_paste(std::int64_t i, std::int64_t j, std::int64_t p) {
        inner_.cut_paste(i, j, p);
        tick();
    }
    void insert(std::int64_t p, const std::vector<std::int64_t>& values) {
        inner_.insert(p, values);
        tick();
    }
    std::int64_t get(std::int64_t i) {
        std::int64_t v = inner_.get(i);
        tick();
        return v;
    }

    std::vector<std::int64_t> materialize() const { return inner_.materialize(); }
    std::uint64_t touched_entries() const { return touched_before_ + inner_.touched_entries(); }

private:
    void tick() {
        if (++ops_in_group_ == z_) {
            touched_before_ += inner_.touched_entries();
            inner_ = IntervalList(inner_.materialize());
            ops_in_group_ = 0;
        }
    }

    std::int64_t z_;
    std::int64_t ops_in_group_ = 0;
    std::uint64_t touched_before_ = 0;
    IntervalList inner_;
};

// Applies a script to either editor; returns the answers to the reads.
template <typename Editor>
std::vector<std::int64_t> run_script(Editor& ed, const std::vector<SeqOp>& ops) {
    std::vector<std::int64_t> answers;
    for (const SeqOp& op : ops) {
        switch (op.kind) {
            case SeqOp::Kind::Reverse: ed.reverse(op.i, op.j); break;
            case SeqOp::Kind::CutPaste: ed.cut_paste(op.i, op.j, op.p); break;
            case SeqOp::Kind::Insert: ed.insert(op.p, op.values); break;
            case SeqOp::Kind::Get: answers.push_back(ed.get(op.i)); break;
        }
    }
    return answers;
}

}  // namespace rangekit
