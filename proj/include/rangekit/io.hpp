#pragma once

#include <cctype>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/errors.hpp"
#include "rangekit/median.hpp"
#include "rangekit/points.hpp"
#include "rangekit/prefix_cube.hpp"
#include "rangekit/sequence_editor.hpp"
#include "rangekit/station_collapse.hpp"
#include "rangekit/sweep_select.hpp"
#include "rangekit/tree_queries.hpp"

// Plain-text readers for the file formats the command line accepts. All
// formats are whitespace separated except the points file, which is CSV.
namespace rangekit::io {

inline std::vector<std::string> nonempty_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (!blank) lines.push_back(line);
    }
    return lines;
}

inline std::vector<std::int64_t> parse_ints(const std::string& line, char sep = ' ') {
    std::vector<std::int64_t> out;
    std::string token;
    std::istringstream ss(line);
    if (sep == ' ') {
        std::int64_t v;
        while (ss >> v) out.push_back(v);
        std::string rest;
        if (ss.clear(), ss >> rest) throw ParseError("non-numeric token: " + rest);
    } else {
        while (std::getline(ss, token, sep)) {
            try {
                size_t used = 0;
                out.push_back(std::stoll(token, &used));
                while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
                if (used != token.size()) throw ParseError("trailing characters in: " + token);
            } catch (const std::invalid_argument&) {
                throw ParseError("non-numeric field: " + token);
            } catch (const std::out_of_range&) {
                throw ParseError("number out of range: " + token);
            }
        }
    }
    return out;
}

// `x1,...,xd,w` per line; d inferred from the first line.
inline std::pair<int, std::vector<RawPoint>> load_points_csv(std::istream& in) {
    std::vector<RawPoint> pts;
    int d = -1;
    for (const std::string& line : nonempty_lines(in)) {
        auto vals = parse_ints(line, ',');
        if (vals.size() < 2) throw ParseError("point line needs at least one coordinate and a weight");
        if (d < 0) d = static_cast<int>(vals.size()) - 1;
        if (static_cast<int>(vals.size()) != d + 1) throw ParseError("inconsistent column count");
        RawPoint p;
        p.coords.assign(vals.begin(), vals.end() - 1);
        p.weight = vals.back();
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw EmptyPointSet();
    return {d, std::move(pts)};
}

// one box per line: `xa1 xb1 ... xad xbd`
inline std::vector<Box> load_boxes(std::istream& in, int d) {
    std::vector<Box> out;
    for (const std::string& line : nonempty_lines(in)) {
        auto vals = parse_ints(line);
        if (static_cast<int>(vals.size()) != 2 * d) throw ParseError("box line needs 2d values");
        Box b;
        for (int j = 0; j < d; ++j) b.bounds.emplace_back(vals[static_cast<size_t>(2 * j)],
                                                          vals[static_cast<size_t>(2 * j + 1)]);
        out.push_back(std::move(b));
    }
    return out;
}

// line 1: `d m(1) ... m(d)`; then Np row-major integers.
inline DenseCube load_cube(std::istream& in, AggregateOp op) {
    int d;
    if (!(in >> d) || d < 1) throw ParseError("cube header needs a dimension count");
    std::vector<int> m(static_cast<size_t>(d));
    for (int& mj : m)
        if (!(in >> mj)) throw ParseError("cube header needs d axis sizes");
    DenseCube c(m, op);
    for (Weight& w : c.cells())
        if (!(in >> w)) throw ParseError("cube body is short of cells");
    Weight extra;
    if (in >> extra) throw ParseError("cube body has trailing values");
    return c;
}

// one stamp per line: `xa1 xb1 ... xad xbd u`
inline std::vector<RangeStamp> load_stamps(std::istream& in, int d) {
    std::vector<RangeStamp> out;
    for (const std::string& line : nonempty_lines(in)) {
        auto vals = parse_ints(line);
        if (static_cast<int>(vals.size()) != 2 * d + 1) throw ParseError("stamp line needs 2d+1 values");
        RangeStamp st;
        for (int j = 0; j < d; ++j)
            st.box.emplace_back(static_cast<int>(vals[static_cast<size_t>(2 * j)]),
                                static_cast<int>(vals[static_cast<size_t>(2 * j + 1)]));
        st.u = vals.back();
        out.push_back(std::move(st));
    }
    return out;
}

// line 1: `n root`; n-1 lines `parent child length`; last line n weights.
// Vertices are 1-based in the file.
inline RootedTree load_tree(std::istream& in) {
    auto lines = nonempty_lines(in);
    if (lines.empty()) throw ParseError("empty tree file");
    auto head = parse_ints(lines[0]);
    if (head.size() != 2) throw ParseError("tree header is `n root`");
    RootedTree t;
    t.n = static_cast<int>(head[0]);
    t.root = static_cast<int>(head[1]) - 1;
    if (t.n < 1 || t.root < 0 || t.root >= t.n) throw ParseError("bad vertex count or root");
    if (static_cast<int>(lines.size()) != t.n + 1) throw ParseError("tree file needs n-1 edges and a weight line");
    t.parent.assign(static_cast<size_t>(t.n), -1);
    t.edge_len.assign(static_cast<size_t>(t.n), 0);
    for (int e = 0; e < t.n - 1; ++e) {
        auto vals = parse_ints(lines[static_cast<size_t>(e) + 1]);
        if (vals.size() != 3) throw ParseError("edge line is `parent child length`");
        int p = static_cast<int>(vals[0]) - 1, c = static_cast<int>(vals[1]) - 1;
        if (p < 0 || p >= t.n || c < 0 || c >= t.n || vals[2] < 0) throw ParseError("bad edge");
        t.parent[static_cast<size_t>(c)] = p;
        t.edge_len[static_cast<size_t>(c)] = vals[2];
    }
    auto ws = parse_ints(lines.back());
    if (static_cast<int>(ws.size()) != t.n) throw ParseError("weight line needs n values");
    t.weight = ws;
    return t;
}

// query lines `i d1 d2`, 1-based vertex, d2 = -1 means unbounded.
struct TreeQueryLine {
    int vertex;
    std::int64_t d1, d2;
};

inline std::vector<TreeQueryLine> load_tree_queries(std::istream& in) {
    std::vector<TreeQueryLine> out;
    for (const std::string& line : nonempty_lines(in)) {
        auto vals = parse_ints(line);
        if (vals.size() != 3) throw ParseError("query line is `i d1 d2`");
        out.push_back({static_cast<int>(vals[0]) - 1, vals[1],
                       vals[2] == -1 ? SubtreeIndex::kUnbounded : vals[2]});
    }
    return out;
}

// line 1: `n`; then n lines `s r c`.
inline StationLine load_stations(std::istream& in) {
    auto lines = nonempty_lines(in);
    if (lines.empty()) throw ParseError("empty stations file");
    auto head = parse_ints(lines[0]);
    if (head.size() != 1) throw ParseError("stations header is `n`");
    int n = static_cast<int>(head[0]);
    if (static_cast<int>(lines.size()) != n + 1) throw ParseError("stations file needs n data lines");
    StationLine sl;
    for (int i = 1; i <= n; ++i) {
        auto vals = parse_ints(lines[static_cast<size_t>(i)]);
        if (vals.size() != 3) throw ParseError("station line is `s r c`");
        sl.s.push_back(vals[0]);
        sl.r.push_back(vals[1]);
        sl.c.push_back(vals[2]);
    }
    return sl;
}

// line 1: `n`; then per sequence `b(i) v1 ... vb(i)` ascending.
inline std::vector<std::vector<Weight>> load_sequences(std::istream& in) {
    auto lines = nonempty_lines(in);
    if (lines.empty()) throw ParseError("empty sequences file");
    auto head = parse_ints(lines[0]);
    if (head.size() != 1) throw ParseError("sequences header is `n`");
    int n = static_cast<int>(head[0]);
    if (static_cast<int>(lines.size()) != n + 1) throw ParseError("sequences file needs n sequence lines");
    std::vector<std::vector<Weight>> seqs;
    for (int i = 1; i <= n; ++i) {
        auto vals = parse_ints(lines[static_cast<size_t>(i)]);
        if (vals.empty() || static_cast<std::int64_t>(vals.size()) != vals[0] + 1)
            throw ParseError("sequence line is `b v1 ... vb`");
        seqs.emplace_back(vals.begin() + 1, vals.end());
    }
    return seqs;
}

// line 1: `d m(1) ... m(d)`; d axis-coordinate lines; then Np weights.
inline MedianCube load_median_cube(std::istream& in) {
    int d;
    if (!(in >> d) || d < 1) throw ParseError("median cube header needs a dimension count");
    std::vector<int> m(static_cast<size_t>(d));
    std::int64_t np = 1;
    for (int& mj : m) {
        if (!(in >> mj) || mj < 1) throw ParseError("bad axis size");
        np *= mj;
    }
    std::vector<std::vector<Coord>> axes(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        axes[static_cast<size_t>(j)].resize(static_cast<size_t>(m[static_cast<size_t>(j)]));
        for (Coord& x : axes[static_cast<size_t>(j)])
            if (!(in >> x)) throw ParseError("axis coordinate line is short");
    }
    std::vector<Weight> cells(static_cast<size_t>(np));
    for (Weight& w : cells)
        if (!(in >> w)) throw ParseError("median cube body is short of cells");
    return MedianCube(std::move(axes), std::move(cells));
}

// script lines: `Q clow1 chigh1 ...` | `U c1 ... cd delta` | `RU clow1 chigh1 ... u`
struct MedianScriptLine {
    enum class Kind { Query, PointUpdate, RangeUpdate } kind;
    std::vector<int> cell;
    std::vector<std::pair<int, int>> box;
    Weight value = 0;
};

inline std::vector<MedianScriptLine> load_median_script(std::istream& in, int d) {
    std::vector<MedianScriptLine> out;
    for (const std::string& line : nonempty_lines(in)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        std::vector<std::int64_t> vals;
        std::int64_t v;
        while (ss >> v) vals.push_back(v);
        MedianScriptLine ml;
        if (tag == "Q") {
            ml.kind = MedianScriptLine::Kind::Query;
            if (static_cast<int>(vals.size()) != 2 * d) throw ParseError("Q line needs 2d values");
            for (int j = 0; j < d; ++j)
                ml.box.emplace_back(static_cast<int>(vals[static_cast<size_t>(2 * j)]),
                                    static_cast<int>(vals[static_cast<size_t>(2 * j + 1)]));
        } else if (tag == "U") {
            ml.kind = MedianScriptLine::Kind::PointUpdate;
            if (static_cast<int>(vals.size()) != d + 1) throw ParseError("U line needs d+1 values");
            for (int j = 0; j < d; ++j) ml.cell.push_back(static_cast<int>(vals[static_cast<size_t>(j)]));
            ml.value = vals.back();
        } else if (tag == "RU") {
            ml.kind = MedianScriptLine::Kind::RangeUpdate;
            if (static_cast<int>(vals.size()) != 2 * d + 1) throw ParseError("RU line needs 2d+1 values");
            for (int j = 0; j < d; ++j)
                ml.box.emplace_back(static_cast<int>(vals[static_cast<size_t>(2 * j)]),
                                    static_cast<int>(vals[static_cast<size_t>(2 * j + 1)]));
            ml.value = vals.back();
        } else {
            throw ParseError("unknown median script tag: " + tag);
        }
        out.push_back(std::move(ml));
    }
    return out;
}

// header `n v1 ... vn`; ops `R i j` | `C i j p` | `I p k v1 ... vk` | `Q i`.
struct SeqScript {
    std::vector<std::int64_t> initial;
    std::vector<SeqOp> ops;
};

inline SeqScript load_seq_script(std::istream& in) {
    auto lines = nonempty_lines(in);
    if (lines.empty()) throw ParseError("empty editor script");
    auto head = parse_ints(lines[0]);
    if (head.empty() || static_cast<std::int64_t>(head.size()) != head[0] + 1)
        throw ParseError("editor header is `n v1 ... vn`");
    SeqScript sc;
    sc.initial.assign(head.begin() + 1, head.end());
    for (size_t li = 1; li < lines.size(); ++li) {
        std::istringstream ss(lines[li]);
        std::string tag;
        ss >> tag;
        std::vector<std::int64_t> vals;
        std::int64_t v;
        while (ss >> v) vals.push_back(v);
        SeqOp op;
        if (tag == "R" && vals.size() == 2) {
            op.kind = SeqOp::Kind::Reverse;
            op.i = vals[0];
            op.j = vals[1];
        } else if (tag == "C" && vals.size() == 3) {
            op.kind = SeqOp::Kind::CutPaste;
            op.i = vals[0];
            op.j = vals[1];
            op.p = vals[2];
        } else if (tag == "I" && vals.size() >= 2 &&
                   static_cast<std::int64_t>(vals.size()) == vals[1] + 2) {
            op.kind = SeqOp::Kind::Insert;
            op.p = vals[0];
            op.values.assign(vals.begin() + 2, vals.end());
        } else if (tag == "Q" && vals.size() == 1) {
            op.kind = SeqOp::Kind::Get;
            op.i = vals[0];
        } else {
            throw ParseError("bad editor op: " + lines[li]);
        }
        sc.ops.push_back(std::move(op));
    }
    return sc;
}

// header `K M`; lines `P x` | `ROT`.
struct StackScript {
    std::int64_t k = 1, m = 0;
    std::vector<std::pair<bool, Weight>> ops;  // (is_push, value)
};

inline StackScript load_stack_script(std::istream& in) {
    auto lines = nonempty_lines(in);
    if (lines.empty()) throw ParseError("empty stack script");
    auto head = parse_ints(lines[0]);
    if (head.size() != 2) throw ParseError("stack header is `K M`");
    StackScript sc;
    sc.k = head[0];
    sc.m = head[1];
    for (size_t li = 1; li < lines.size(); ++li) {
        std::istringstream ss(lines[li]);
        std::string tag;
        ss >> tag;
        if (tag == "P") {
            Weight x;
            if (!(ss >> x)) throw ParseError("push line is `P x`");
            sc.ops.emplace_back(true, x);
        } else if (tag == "ROT") {
            sc.ops.emplace_back(false, 0);
        } else {
            throw ParseError("bad stack op: " + lines[li]);
        }
    }
    return sc;
}

// points `x y`; queries `xq k`.
inline std::vector<PlanarPoint> load_planar_points(std::istream& in) {
    std::vector<PlanarPoint> pts;
    for (const std::string& line : nonempty_lines(in)) {
        auto vals = parse_ints(line);
        if (vals.size() != 2) throw ParseError("point line is `x y`");
        pts.push_back({vals[0], vals[1]});
    }
    return pts;
}

inline std::vector<DistanceQuery> load_distance_queries(std::istream& in) {
    std::vector<DistanceQuery> qs;
    for (const std::string& line : nonempty_lines(in)) {
        auto vals = parse_ints(line);
        if (vals.size() != 2) throw ParseError("query line is `xq k`");
        qs.push_back({vals[0], vals[1]});
    }
    return qs;
}

}  // namespace rangekit::io
