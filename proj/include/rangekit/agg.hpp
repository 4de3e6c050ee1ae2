#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "rangekit/errors.hpp"

namespace rangekit {

// Exact 64-bit integer weights. MIN/MAX use the extreme representable
// values as neutral sentinels; by contract data values avoid them.
using Weight = std::int64_t;

inline constexpr Weight kNegInf = std::numeric_limits<Weight>::min();
inline constexpr Weight kPosInf = std::numeric_limits<Weight>::max();

inline Weight checked_add(Weight a, Weight b) {
    Weight r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError();
    return r;
}

inline Weight checked_sub(Weight a, Weight b) {
    Weight r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError();
    return r;
}

inline Weight checked_mul(Weight a, Weight b) {
    Weight r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError();
    return r;
}

enum class AggKind { Sum, Product, Xor, Min, Max };

// An aggregation algebra: associative combine with a neutral element and,
// for SUM/PRODUCT/XOR, an exact inverse. Instances are immutable and
// freely shareable.
class AggregateOp {
public:
    explicit constexpr AggregateOp(AggKind kind) : kind_(kind) {}

    constexpr AggKind kind() const { return kind_; }

    const char* name() const {
        switch (kind_) {
            case AggKind::Sum: return "SUM";
            case AggKind::Product: return "PRODUCT";
            case AggKind::Xor: return "XOR";
            case AggKind::Min: return "MIN";
            case AggKind::Max: return "MAX";
        }
        return "?";
    }

    constexpr Weight neutral() const {
        switch (kind_) {
            case AggKind::Sum: return 0;
            case AggKind::Product: return 1;
            case AggKind::Xor: return 0;
            case AggKind::Min: return kPosInf;
            case AggKind::Max: return kNegInf;
        }
        return 0;
    }

    constexpr bool invertible() const {
        return kind_ == AggKind::Sum || kind_ == AggKind::Product || kind_ == AggKind::Xor;
    }

    Weight combine(Weight a, Weight b) const {
        switch (kind_) {
            case AggKind::Sum: return checked_add(a, b);
            case AggKind::Product: return checked_mul(a, b);
            case AggKind::Xor: return a ^ b;
            case AggKind::Min: return std::min(a, b);
            case AggKind::Max: return std::max(a, b);
        }
        return 0;
    }

    // Returns a with combine(a, b) == c.
    Weight invert(Weight c, Weight b) const {
        switch (kind_) {
            case AggKind::Sum: return checked_sub(c, b);
            case AggKind::Xor: return c ^ b;
            case AggKind::Product:
                if (b == 0) throw DivisionByZero();
                if (c % b != 0) throw NotInvertible("product inverse is not exact");
                return c / b;
            case AggKind::Min:
            case AggKind::Max:
                throw NotInvertible();
        }
        return 0;
    }

    Weight fold(std::span<const Weight> ws) const {
        Weight acc = neutral();
        for (Weight w : ws) acc = combine(acc, w);
        return acc;
    }

    static AggregateOp parse(std::string_view name) {
        std::string up(name);
        std::transform(up.begin(), up.end(), up.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (up == "SUM") return AggregateOp(AggKind::Sum);
        if (up == "PRODUCT") return AggregateOp(AggKind::Product);
        if (up == "XOR") return AggregateOp(AggKind::Xor);
        if (up == "MIN") return AggregateOp(AggKind::Min);
        if (up == "MAX") return AggregateOp(AggKind::Max);
        throw ParseError("unknown aggregate name: " + std::string(name));
    }

private:
    AggKind kind_;
};

inline constexpr AggregateOp kSum{AggKind::Sum};
inline constexpr AggregateOp kProduct{AggKind::Product};
inline constexpr AggregateOp kXor{AggKind::Xor};
inline constexpr AggregateOp kMin{AggKind::Min};
inline constexpr AggregateOp kMax{AggKind::Max};

}  // namespace rangekit
