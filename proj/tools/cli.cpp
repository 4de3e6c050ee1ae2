#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rangekit/io.hpp"
#include "rangekit/oracles.hpp"
#include "rangekit/selfcheck.hpp"

using namespace rangekit;

namespace {

struct CommonOpts {
    std::string input, queries, updates, agg = "SUM", format = "text";
    std::int64_t z = -1;
    std::uint64_t seed = 0;
};

std::ifstream open_or_die(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open file: " + path);
    return f;
}

// one answer per line; csv mode wraps them under a single `answer` header
void emit(const std::vector<std::string>& lines, const std::string& format) {
    if (format == "csv") std::cout << "answer\n";
    for (const std::string& l : lines) std::cout << l << "\n";
}

std::string weight_str(Weight w) { return std::to_string(w); }

int run_cube_query(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    DenseCube cube = io::load_cube(fin, AggregateOp::parse(o.agg));
    PrefixCube ps = build_prefix_sweep(cube);
    auto fq = open_or_die(o.queries);
    std::vector<std::string> out;
    for (const std::string& line : io::nonempty_lines(fq)) {
        auto vals = io::parse_ints(line);
        if (static_cast<int>(vals.size()) != 2 * cube.dim()) throw ParseError("query needs 2d values: " + line);
        std::vector<std::pair<int, int>> box;
        for (int j = 0; j < cube.dim(); ++j)
            box.emplace_back(static_cast<int>(vals[static_cast<size_t>(2 * j)]),
                             static_cast<int>(vals[static_cast<size_t>(2 * j + 1)]));
        out.push_back(weight_str(prefix_range_query(ps, box)));
    }
    emit(out, o.format);
    return 0;
}

int run_cube_batch_update(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    int d;
    if (!(fin >> d) || d < 1) throw ParseError("shape header needs a dimension count");
    std::vector<int> m(static_cast<size_t>(d));
    for (int& mj : m)
        if (!(fin >> mj)) throw ParseError("shape header needs d axis sizes");
    auto fu = open_or_die(o.updates);
    auto stamps = io::load_stamps(fu, d);
    auto res = batched_range_updates(m, stamps, AggregateOp::parse(o.agg));
    std::ostringstream row;
    const auto& cells = res.cube.cells();
    for (size_t i = 0; i < cells.size(); ++i) row << (i ? " " : "") << cells[i];
    emit({row.str()}, o.format);
    return 0;
}

int run_rtree_query(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    auto [d, raw] = io::load_points_csv(fin);
    AggregateOp op = AggregateOp::parse(o.agg);
    RangeTree tree(PointSet(d, raw, op), op);
    auto fq = open_or_die(o.queries);
    std::vector<std::string> out;
    for (const Box& b : io::load_boxes(fq, d)) out.push_back(weight_str(tree.range_query(b)));
    emit(out, o.format);
    return 0;
}

int run_tree_subtree(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    RootedTree t = io::load_tree(fin);
    SubtreeIndex ix(t, AggregateOp::parse(o.agg));
    auto fq = open_or_die(o.queries);
    std::vector<std::string> out;
    for (const io::TreeQueryLine& q : io::load_tree_queries(fq))
        out.push_back(weight_str(ix.query(q.vertex, q.d1, q.d2)));
    emit(out, o.format);
    return 0;
}

int run_stations(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    StationLine line = io::load_stations(fin);
    auto [effort, start] = min_collapse_effort(line);
    emit({std::to_string(effort) + " " + std::to_string(start)}, o.format);
    return 0;
}

int run_kth_seq(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    auto seqs = io::load_sequences(fin);
    auto fq = open_or_die(o.queries);
    std::vector<std::string> out;
    for (const std::string& line : io::nonempty_lines(fq)) {
        auto vals = io::parse_ints(line);
        SequenceOracle oracle(seqs);
        Weight answer;
        if (vals.size() == 1) {
            answer = kth_smallest(oracle, vals[0]);
        } else if (vals.size() == 1 + 2 * seqs.size()) {
            std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
            for (size_t i = 0; i < seqs.size(); ++i)
                ranges.emplace_back(vals[1 + 2 * i], vals[2 + 2 * i]);
            answer = kth_in_subranges(oracle, std::move(ranges), vals[0]);
        } else {
            throw ParseError("selection query is `k` or `k a1 b1 ... an bn`: " + line);
        }
        out.push_back(weight_str(answer) + " " + std::to_string(oracle.query_count()));
    }
    emit(out, o.format);
    return 0;
}

int run_median(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    MedianCube mc = io::load_median_cube(fin);
    auto fq = open_or_die(o.queries);
    std::vector<std::string> out;
    for (const io::MedianScriptLine& ml : io::load_median_script(fq, mc.dim())) {
        switch (ml.kind) {
            case io::MedianScriptLine::Kind::Query: {
                auto r = mc.range_median(ml.box);
                std::ostringstream row;
                for (Coord x : r.coords) row << x << " ";
                row << r.cost;
                out.push_back(row.str());
                break;
            }
            case io::MedianScriptLine::Kind::PointUpdate: mc.point_update(ml.cell, ml.value); break;
            case io::MedianScriptLine::Kind::RangeUpdate: mc.range_update(ml.box, ml.value); break;
        }
    }
    emit(out, o.format);
    return 0;
}

int run_seqedit(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    io::SeqScript sc = io::load_seq_script(fin);
    std::vector<std::int64_t> answers;
    if (o.z < 0) {
        IntervalList ed(sc.initial);
        answers = run_script(ed, sc.ops);
    } else {
        std::int64_t z = o.z;
        if (z == 0) {
            double base = static_cast<double>(std::max<std::int64_t>(
                {1, static_cast<std::int64_t>(sc.initial.size()), static_cast<std::int64_t>(sc.ops.size())}));
            z = static_cast<std::int64_t>(std::ceil(std::sqrt(base)));
        }
        GroupedEditor ed(sc.initial, z);
        answers = run_script(ed, sc.ops);
    }
    std::vector<std::string> out;
    for (std::int64_t a : answers) out.push_back(std::to_string(a));
    emit(out, o.format);
    return 0;
}

int run_rotstack(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    io::StackScript sc = io::load_stack_script(fin);
    RotStack st(sc.k, sc.m);
    for (auto [is_push, x] : sc.ops) {
        if (is_push)
            st.push(x);
        else
            st.rotate();
    }
    auto order = st.finish();
    std::ostringstream row;
    for (size_t i = 0; i < order.size(); ++i) row << (i ? " " : "") << order[i];
    emit({row.str()}, o.format);
    return 0;
}

int run_sweep_kth(const CommonOpts& o) {
    auto fin = open_or_die(o.input);
    auto pts = io::load_planar_points(fin);
    auto fq = open_or_die(o.queries);
    auto qs = io::load_distance_queries(fq);
    auto res = solve_offline(pts, qs);
    std::vector<std::string> out;
    for (size_t j = 0; j < qs.size(); ++j) {
        if (!res.answers[j].ok) {
            out.push_back("ERR rank");
        } else {
            std::ostringstream row;
            row << std::setprecision(15) << res.answers[j].dist;
            out.push_back(row.str());
        }
    }
    emit(out, o.format);
    return 0;
}

int run_selftest(const CommonOpts& o) {
    using namespace selfcheck;
    std::uint64_t s = o.seed;
    struct Suite {
        const char* name;
        Outcome outcome;
    };
    std::vector<Suite> suites;
    suites.push_back({"prefix-builders", check_prefix_builders(s, 40)});
    suites.push_back({"prefix-queries", check_prefix_queries_exhaustive(s)});
    suites.push_back({"batched-updates", check_batched_updates(s, 16)});
    suites.push_back({"range-tree-1d", check_range_tree_interleaved(s, 1, 48, 300)});
    suites.push_back({"range-tree-2d", check_range_tree_interleaved(s, 2, 64, 300)});
    suites.push_back({"range-tree-3d", check_range_tree_interleaved(s, 3, 48, 200)});
    suites.push_back({"range-tree-counter", check_range_tree_counter(s)});
    suites.push_back({"cascade-index", check_cascade_vs_nested(s, 150)});
    suites.push_back({"tree-queries", check_tree_queries(s, 250)});
    suites.push_back({"stations", check_stations(s, 120)});
    suites.push_back({"kth-selection", check_kth_selection(s, 120)});
    suites.push_back({"median-l1", check_median_l1(s, 300)});
    suites.push_back({"median-lsq", check_median_lsq(s, 120)});
    suites.push_back({"median-cube", check_median_cube(s, 120)});
    suites.push_back({"sequence-editor", check_sequence_editor(s, 400)});
    suites.push_back({"rotating-stack", check_rotating_stack(s, 800)});
    suites.push_back({"sweep-select", check_sweep(s, 8, 80, 80, 40)});
    bool all = true;
    for (const Suite& su : suites) {
        if (su.outcome.pass) {
            std::cout << "ok " << su.name << " (" << su.outcome.cases << " cases)\n";
        } else {
            std::cout << "FAIL " << su.name << ": " << su.outcome.detail << "\n";
            all = false;
        }
    }
    std::cout << (all ? "selftest passed" : "selftest FAILED") << "\n";
    return all ? 0 : 1;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct BenchRow {
    std::string name;
    std::int64_t n = 0, d = 0, param = 0, ops = 0;
    std::uint64_t fast_counter = 0, oracle_counter = 0;
    double fast_ms = 0, oracle_ms = 0;
};

int run_bench(const CommonOpts& o) {
    std::cout << "case,n,d,param,ops,fast_counter,oracle_counter,fast_ms,oracle_ms\n";
    if (o.input.empty()) return 0;
    auto fin = open_or_die(o.input);
    for (const std::string& line : io::nonempty_lines(fin)) {
        std::istringstream ss(line);
        BenchRow row{};
        if (!(ss >> row.name >> row.n >> row.d >> row.param >> row.ops))
            throw ParseError("bench line is `case n d param ops`: " + line);
        if (row.n > 200000 || row.ops > 100000 || row.d > 4 || row.n < 1 || row.ops < 1)
            throw CapExceeded();
        // the row data depends on everything but param, so rows that differ
        // only in param (e.g. the seqedit group size) replay identical inputs
        selfcheck::detail::Rng rng(o.seed ^ std::hash<std::string>{}(row.name) ^
                                   static_cast<std::uint64_t>(row.n) * 0x9e3779b9ULL ^
                                   static_cast<std::uint64_t>(row.d) * 0x85ebca6bULL ^
                                   static_cast<std::uint64_t>(row.ops) * 0xc2b2ae35ULL);
        if (row.name == "rtree-query" || row.name == "fc-query") {
            int d = row.name == "fc-query" ? 2 : static_cast<int>(row.d);
            std::vector<RawPoint> raw;
            for (std::int64_t i = 0; i < row.n; ++i) {
                RawPoint p;
                for (int j = 0; j < d; ++j) p.coords.push_back(rng.range(0, 4 * row.n));
                p.weight = rng.range(-100, 100);
                raw.push_back(std::move(p));
            }
            PointSet ps(d, raw, kSum);
            std::vector<Box> boxes;
            for (std::int64_t q = 0; q < row.ops; ++q) {
                Box b;
                for (int j = 0; j < d; ++j) {
                    Coord a = rng.range(0, 4 * row.n), c = rng.range(0, 4 * row.n);
                    if (a > c) std::swap(a, c);
                    b.bounds.emplace_back(a, c);
                }
                boxes.push_back(std::move(b));
            }
            std::vector<Weight> fast_vals, naive_vals;
            auto t0 = std::chrono::steady_clock::now();
            if (row.name == "fc-query") {
                CascadeIndex2D ix(ps, kSum);
                for (const Box& b : boxes) {
                    fast_vals.push_back(ix.range_query(b));
                    row.fast_counter += ix.last_query_nodes();
                }
            } else {
                RangeTree tree(ps, kSum);
                for (const Box& b : boxes) {
                    fast_vals.push_back(tree.range_query(b));
                    row.fast_counter += tree.last_query_nodes();
                }
            }
            row.fast_ms = ms_since(t0);
            std::vector<std::pair<std::vector<Coord>, Weight>> pts;
            for (const MergedPoint& p : ps.points()) pts.emplace_back(p.coords, p.weight);
            t0 = std::chrono::steady_clock::now();
            for (const Box& b : boxes) {
                naive_vals.push_back(oracles::naive_range_agg(pts, kSum, b));
                row.oracle_counter += pts.size();
            }
            row.oracle_ms = ms_since(t0);
            if (fast_vals != naive_vals) throw Error("bench cross-check failed");
        } else if (row.name == "seqedit") {
            std::vector<std::int64_t> init;
            for (std::int64_t i = 0; i < row.n; ++i) init.push_back(rng.range(-999, 999));
            std::vector<SeqOp> ops;
            std::int64_t n = row.n;
            for (std::int64_t t = 0; t < row.ops; ++t) {
                int kind = static_cast<int>(rng.range(0, 3));
                if (n == 0 && kind != 2) kind = 2;
                SeqOp op;
                if (kind == 0) {
                    op.kind = SeqOp::Kind::Reverse;
                    op.i = rng.range(1, n);
                    op.j = rng.range(op.i, n);
                } else if (kind == 1) {
                    op.kind = SeqOp::Kind::CutPaste;
                    op.i = rng.range(1, n);
                    op.j = rng.range(op.i, n);
                    op.p = rng.range(0, n - (op.j - op.i + 1));
                } else if (kind == 2) {
                    op.kind = SeqOp::Kind::Insert;
                    op.p = rng.range(0, n);
                    op.values.push_back(rng.range(-999, 999));
                    ++n;
                } else {
                    op.kind = SeqOp::Kind::Get;
                    op.i = rng.range(1, n);
                }
                ops.push_back(std::move(op));
            }
            std::vector<std::int64_t> answers;
            auto t0 = std::chrono::steady_clock::now();
            if (row.param > 0) {
                GroupedEditor ed(init, row.param);
                answers = run_script(ed, ops);
                row.fast_counter = ed.touched_entries();
            } else {
                IntervalList ed(init);
                answers = run_script(ed, ops);
                row.fast_counter = ed.touched_entries();
            }
            row.fast_ms = ms_since(t0);
            t0 = std::chrono::steady_clock::now();
            auto naive = oracles::naive_seq_run(init, ops);
            row.oracle_ms = ms_since(t0);
            if (answers != naive) throw Error("bench cross-check failed");
            // answers digest lands in oracle_counter, so rows with different z
            // are comparable at a glance
            std::uint64_t h = 1469598103934665603ULL;
            for (std::int64_t a : answers) {
                h ^= static_cast<std::uint64_t>(a);
                h *= 1099511628211ULL;
            }
            row.oracle_counter = h;
        } else if (row.name == "kth-seq") {
            if (row.param < 1) throw CapExceeded();
            std::vector<std::vector<Weight>> seqs(static_cast<size_t>(row.n));
            for (auto& sq : seqs) {
                Weight v = rng.range(-1000, 0);
                for (std::int64_t j = 0; j < row.param; ++j) {
                    v += rng.range(1, 9);
                    sq.push_back(v);
                }
            }
            std::int64_t total = row.n * row.param;
            auto t0 = std::chrono::steady_clock::now();
            for (std::int64_t q = 0; q < row.ops; ++q) {
                SequenceOracle fresh(seqs);
                kth_smallest(fresh, rng.range(1, total));
                row.fast_counter += fresh.query_count();
            }
            row.fast_ms = ms_since(t0);
            t0 = std::chrono::steady_clock::now();
            for (std::int64_t q = 0; q < row.ops; ++q)
                row.oracle_counter += static_cast<std::uint64_t>(total);
            row.oracle_ms = ms_since(t0);
        } else if (row.name == "sweep-kth") {
            std::vector<PlanarPoint> pts;
            std::vector<DistanceQuery> qs;
            for (std::int64_t i = 0; i < row.n; ++i)
                pts.push_back({rng.range(-1000000, 1000000), rng.range(0, 1000000)});
            for (std::int64_t q = 0; q < row.ops; ++q)
                qs.push_back({rng.range(-1000000, 1000000), rng.range(1, std::max<std::int64_t>(1, row.n))});
            auto t0 = std::chrono::steady_clock::now();
            auto res = solve_offline(pts, qs);
            row.fast_ms = ms_since(t0);
            row.fast_counter = res.events_total;
            t0 = std::chrono::steady_clock::now();
            for (const DistanceQuery& q : qs) {
                auto want = oracles::naive_kth_distance(pts, q.xq, q.k);
                row.oracle_counter += pts.size();
                bool ok = want.has_value();
                (void)ok;
            }
            row.oracle_ms = ms_since(t0);
        } else {
            throw ParseError("unknown bench case: " + row.name);
        }
        std::cout << row.name << "," << row.n << "," << row.d << "," << row.param << "," << row.ops << ","
                  << row.fast_counter << "," << row.oracle_counter << "," << std::setprecision(6)
                  << row.fast_ms << "," << row.oracle_ms << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"range aggregation, selection and set maintenance toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    struct Sub {
        const char* name;
        const char* desc;
        int (*fn)(const CommonOpts&);
        CLI::App* cmd = nullptr;
    };
    std::vector<Sub> subs{
        {"cube-query", "prefix-cube box aggregates over a dense cube file", run_cube_query},
        {"cube-batch-update", "apply a stamp list to a neutral cube and print the cells", run_cube_batch_update},
        {"rtree-query", "range-tree box aggregates over a CSV point file", run_rtree_query},
        {"tree-subtree", "subtree distance-band aggregates on a rooted tree", run_tree_subtree},
        {"stations", "minimum collapse effort for a station line", run_stations},
        {"kth-seq", "k-th smallest across hidden sorted sequences", run_kth_seq},
        {"median", "dynamic weighted-L1 range medians on a grid", run_median},
        {"seqedit", "interval-list sequence editing script", run_seqedit},
        {"rotstack", "stack with O(1) rotate-topmost-K", run_rotstack},
        {"sweep-kth", "offline k-th smallest distances by plane sweep", run_sweep_kth},
        {"selftest", "differential suites against the brute-force oracles", run_selftest},
        {"bench", "counter and timing table for a bench config", run_bench},
    };
    for (Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.desc);
        sub->add_option("--input", o.input, "input file");
        sub->add_option("--queries", o.queries, "query file");
        sub->add_option("--updates", o.updates, "update file");
        sub->add_option("--agg", o.agg, "aggregate name: SUM PRODUCT XOR MIN MAX");
        sub->add_option("--z", o.z, "group size for seqedit (0 = default sqrt rule)");
        sub->add_option("--seed", o.seed, "seed for selftest and bench");
        sub->add_option("--format", o.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
        s.cmd = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 2;
    }

    try {
        for (const Sub& s : subs)
            if (s.cmd->parsed()) return s.fn(o);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
