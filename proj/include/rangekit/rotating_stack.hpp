#pragma once

#include <cstdint>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/errors.hpp"

namespace rangekit {

// Stack with push and reverse-the-topmost-K in O(1) each. Elements live in a
// buffer of capacity 2M walked by two cursors: up marks the top, down the
// K-th element from the top (or the bottom when fewer are present), dir the
// side where the next push lands. A rotation just swaps the cursors and
// flips dir; once more than K elements exist, each push settles the element
// at down onto the output stack F.
class RotStack {
public:
    RotStack(std::int64_t k, std::int64_t max_ops) : k_(k), m_(max_ops) {
        if (k_ < 1) throw Error("window size must be >= 1");
        if (m_ < 0) throw Error("operation budget must be >= 0");
        buf_.assign(static_cast<size_t>(std::max<std::int64_t>(2 * m_, 2)), 0);
        down_ = m_;
        up_ = down_ - 1;
        dir_ = +1;
    }

    void push(Weight x) {
        if (finished_) throw Error("stack already finished");
        if (push_count_ == m_) throw CapacityExceeded();
        last_op_steps_ = 2;
        up_ += dir_;
        buf_[static_cast<size_t>(up_)] = x;
        ++push_count_;
        if (push_count_ >= k_ + 1) {
            settled_.push_back(buf_[static_cast<size_t>(down_)]);
            down_ += dir_;
            last_op_steps_ = 4;
        }
    }

    void rotate() {
        if (finished_) throw Error("stack already finished");
        last_op_steps_ = 3;
        std::int64_t t = up_;
        up_ = down_;
        down_ = t;
        dir_ = -dir_;
    }

    // Bottom-to-top order; consumes the stack.
    std::vector<Weight> finish() {
        if (finished_) throw Error("stack already finished");
        finished_ = true;
        std::vector<Weight> out = settled_;
        if (push_count_ > 0)
            for (std::int64_t t = down_;; t += dir_) {
                out.push_back(buf_[static_cast<size_t>(t)]);
                if (t == up_) break;
            }
        return out;
    }

    std::int64_t pushes() const { return push_count_; }
    // buffer/cursor touches of the most recent push or rotate; constant by construction
    std::uint64_t last_op_steps() const { return last_op_steps_; }
    bool cursors_in_range() const {
        return up_ >= 0 && up_ < static_cast<std::int64_t>(buf_.size()) && down_ >= 0 &&
               down_ < static_cast<std::int64_t>(buf_.size());
    }

private:
    std::int64_t k_, m_;
    std::vector<Weight> buf_;
    std::vector<Weight> settled_;
    std::int64_t up_ = 0, down_ = 0, push_count_ = 0;
    int dir_ = +1;
    bool finished_ = false;
    std::uint64_t last_op_steps_ = 0;
};

}  // namespace rangekit
