#pragma once

#include <stdexcept>
#include <string>

namespace rangekit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define RANGEKIT_DEFINE_ERROR(NAME, DEFAULT_MSG)                  \
    struct NAME : Error {                                         \
        NAME() : Error(DEFAULT_MSG) {}                            \
        explicit NAME(const std::string& msg) : Error(msg) {}     \
    }

RANGEKIT_DEFINE_ERROR(OverflowError, "integer overflow");
RANGEKIT_DEFINE_ERROR(NotInvertible, "aggregate has no inverse");
RANGEKIT_DEFINE_ERROR(DivisionByZero, "division by zero");
RANGEKIT_DEFINE_ERROR(EmptyPointSet, "point set is empty");
RANGEKIT_DEFINE_ERROR(UnknownPoint, "no point with these coordinates");
RANGEKIT_DEFINE_ERROR(UnsupportedCombination, "unsupported (aggregate, update) pair");
RANGEKIT_DEFINE_ERROR(BadBox, "malformed box");
RANGEKIT_DEFINE_ERROR(ZeroInProductCube, "product cube requires nonzero cells");
RANGEKIT_DEFINE_ERROR(ZeroUpdateInProductMode, "product-mode update value must be nonzero");
RANGEKIT_DEFINE_ERROR(CycleDetected, "parent links contain a cycle");
RANGEKIT_DEFINE_ERROR(DisconnectedVertex, "vertex not reachable from the root");
RANGEKIT_DEFINE_ERROR(UnknownVertex, "vertex id out of range");
RANGEKIT_DEFINE_ERROR(RankOutOfRange, "rank k out of range");
RANGEKIT_DEFINE_ERROR(BadSubrange, "bad per-sequence subrange");
RANGEKIT_DEFINE_ERROR(EmptyInput, "empty input");
RANGEKIT_DEFINE_ERROR(ZeroTotalWeight, "total weight is zero");
RANGEKIT_DEFINE_ERROR(NegativeWeight, "cell weight would become negative");
RANGEKIT_DEFINE_ERROR(EmptyRange, "range holds no weight");
RANGEKIT_DEFINE_ERROR(PositionOutOfRange, "position out of range");
RANGEKIT_DEFINE_ERROR(BadPasteTarget, "bad paste position");
RANGEKIT_DEFINE_ERROR(CapacityExceeded, "declared operation budget exceeded");
RANGEKIT_DEFINE_ERROR(NoCrossover, "points share an x coordinate, no crossover exists");
RANGEKIT_DEFINE_ERROR(ParseError, "malformed input file");
RANGEKIT_DEFINE_ERROR(CapExceeded, "benchmark size cap exceeded");

#undef RANGEKIT_DEFINE_ERROR

}  // namespace rangekit
