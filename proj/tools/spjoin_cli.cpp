// Copyright 2026 The spjoin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// spjoin: run, benchmark and tune partition-based spatial joins.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spjoin/dataset_io.hpp"
#include "spjoin/engine.hpp"
#include "spjoin/oracle.hpp"

namespace {

using namespace spjoin;

constexpr std::size_t kMaxVerifySize = 100000;

struct Inputs {
    std::vector<Rect> left;
    std::vector<Rect> right;
    DatasetStats left_stats;
    DatasetStats right_stats;
};

// Loads both files and maps them into one shared [0,1]^2 frame.
Inputs load_inputs(const std::string& left_path, const std::string& right_path) {
    Dataset l = load_dataset(left_path);
    Dataset r = load_dataset(right_path);
    BoundingBox box = l.stats.raw_bbox;
    box.extend(r.stats.raw_bbox);
    const BoundingBox frame = normalization_frame(box);
    Inputs in;
    in.left = normalize(l.rects, frame);
    in.right = normalize(r.rects, frame);
    in.left_stats = compute_stats(l.rects, frame);
    in.right_stats = compute_stats(r.rects, frame);
    return in;
}

double weighted_extent(const Inputs& in, Axis a) {
    const double nl = static_cast<double>(in.left_stats.cardinality);
    const double nr = static_cast<double>(in.right_stats.cardinality);
    if (nl + nr == 0.0) return 0.0;
    auto ext = [a](const DatasetStats& s) { return a == Axis::X ? s.avg_x_extent : s.avg_y_extent; };
    return (nl * ext(in.left_stats) + nr * ext(in.right_stats)) / (nl + nr);
}

std::uint32_t auto_k(const Inputs& in, LayoutKind kind, Axis partition_axis, std::uint32_t k_max) {
    const double avg = kind == LayoutKind::Stripes1D
                           ? weighted_extent(in, partition_axis)
                           : 0.5 * (weighted_extent(in, Axis::X) + weighted_extent(in, Axis::Y));
    if (!(avg > 0.0)) {
        std::cerr << "warning: average extent is zero; using K = " << k_max << "\n";
        return k_max;
    }
    return recommend_k(avg, kind, k_max);
}

LayoutKind parse_layout(const std::string& s) {
    if (s == "1d") return LayoutKind::Stripes1D;
    if (s == "2d") return LayoutKind::Grid2D;
    throw ConfigError("unknown layout '" + s + "' (expected 1d or 2d)");
}

AxisPolicy parse_policy(const std::string& s) {
    if (s == "x") return AxisPolicy::ForcedX;
    if (s == "y") return AxisPolicy::ForcedY;
    if (s == "adaptive") return AxisPolicy::Adaptive;
    if (s == "auto") return AxisPolicy::Auto1D;
    throw ConfigError("unknown axis '" + s + "' (expected x, y, adaptive or auto)");
}

Axis parse_axis(const std::string& s) {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    throw ConfigError("unknown partition axis '" + s + "'");
}

void check_policy(LayoutKind kind, AxisPolicy policy) {
    if (policy == AxisPolicy::Auto1D && kind != LayoutKind::Stripes1D) {
        throw ConfigError("--axis auto applies to 1D stripes only; use --axis adaptive with 2d");
    }
}

std::vector<Point> as_points(const std::vector<Rect>& rects) {
    std::vector<Point> pts;
    pts.reserve(rects.size());
    for (const Rect& r : rects) pts.push_back({r.id, r.x_l, r.y_l});
    return pts;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

constexpr const char* kCsvHeader =
    "layout,k,axis,threads,rep,partition_s,join_s,total_s,result_count";

std::string csv_row(const JoinConfig& cfg, unsigned rep, const JoinReport& r) {
    return std::string(to_string(cfg.layout.kind())) + "," + std::to_string(cfg.layout.k()) + "," +
           to_string(cfg.axis_policy) + "," + std::to_string(cfg.threads) + "," +
           std::to_string(rep) + "," + fixed6(r.partition_time) + "," + fixed6(r.join_time) + "," +
           fixed6(r.total_time) + "," + std::to_string(r.result_count);
}

struct JoinArgs {
    std::string left, right;
    std::string layout = "1d";
    std::string k = "auto";
    std::string axis = "auto";
    std::string partition_axis = "x";
    unsigned threads = 1;
    bool collect = false;
    bool verify = false;
    std::optional<double> epsilon;
    std::string format = "text";
    std::string pairs_out;
    std::uint32_t k_max = kDefaultMaxPartitions;
};

JoinConfig make_config(const Inputs& in, const std::string& layout_s, const std::string& k_s,
                       const std::string& axis_s, const std::string& part_axis_s,
                       unsigned threads, std::uint32_t k_max,
                       std::optional<double> extent_override = std::nullopt) {
    const LayoutKind kind = parse_layout(layout_s);
    const AxisPolicy policy = parse_policy(axis_s);
    check_policy(kind, policy);
    const Axis part_axis = parse_axis(part_axis_s);
    std::uint32_t k = 0;
    if (k_s == "auto" && extent_override) {
        k = recommend_k(*extent_override, kind, k_max);
    } else if (k_s == "auto") {
        k = auto_k(in, kind, part_axis, k_max);
    } else {
        try {
            const long v = std::stol(k_s);
            if (v < 1) throw std::out_of_range("k");
            k = static_cast<std::uint32_t>(v);
        } catch (const std::exception&) {
            throw ConfigError("--k expects a positive integer or 'auto', got '" + k_s + "'");
        }
    }
    JoinConfig cfg;
    cfg.layout = PartitionLayout(kind, k, part_axis);
    cfg.axis_policy = policy;
    cfg.threads = threads;
    cfg.validate();
    return cfg;
}

int cmd_join(const JoinArgs& a) {
    if (a.format != "text" && a.format != "csv") throw ConfigError("--format expects text or csv");
    if (a.epsilon && !(*a.epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
    Inputs in = load_inputs(a.left, a.right);
    if (a.verify && (in.left.size() > kMaxVerifySize || in.right.size() > kMaxVerifySize)) {
        throw ConfigError("--verify is limited to inputs of at most 100000 records each");
    }
    // Points join as side-epsilon squares, so epsilon is their extent.
    JoinConfig cfg = make_config(in, a.layout, a.k, a.axis, a.partition_axis, a.threads, a.k_max,
                                 a.epsilon);
    if (a.collect || a.verify || !a.pairs_out.empty()) cfg.sink_mode = SinkMode::CollectPairs;

    std::vector<Point> lp, rp;
    if (a.epsilon) {
        lp = as_points(in.left);
        rp = as_points(in.right);
    }
    JoinEngine engine(cfg);
    JoinReport report = a.epsilon ? engine.epsilon_distance_join(lp, rp, *a.epsilon)
                                  : engine.join(in.left, in.right);
#ifdef SPJOIN_CLI_FAULT_INJECTION
    if (!report.pairs.empty()) {
        report.pairs.pop_back();
        --report.result_count;
    }
#endif

    if (a.format == "csv") {
        std::cout << kCsvHeader << "\n" << csv_row(cfg, 0, report) << "\n";
    } else {
        std::cout << "layout=" << to_string(cfg.layout.kind()) << " k=" << cfg.layout.k()
                  << " axis=" << to_string(cfg.axis_policy) << " threads=" << cfg.threads << "\n"
                  << "result_count=" << report.result_count << "\n"
                  << "partition_s=" << fixed6(report.partition_time) << "\n"
                  << "sort_s=" << fixed6(report.sort_time) << "\n"
                  << "join_s=" << fixed6(report.join_time) << "\n"
                  << "total_s=" << fixed6(report.total_time) << "\n";
    }
    if (!a.pairs_out.empty()) {
        std::ofstream out(a.pairs_out);
        if (!out) throw Error("cannot write " + a.pairs_out);
        for (const IdPair& p : report.pairs) out << p.r << ',' << p.s << '\n';
    }

    if (a.verify) {
        const auto expected = a.epsilon ? oracle::nested_loop_distance(lp, rp, *a.epsilon)
                                        : oracle::nested_loop_join(in.left, in.right);
        auto got = report.pairs;
        std::sort(got.begin(), got.end());
        const bool ok = got == expected && report.result_count == expected.size();
        std::cerr << "verify: " << (ok ? "OK" : "MISMATCH") << " (engine " << report.result_count
                  << ", oracle " << expected.size() << ")\n";
        if (!ok) return 3;
    }
    return 0;
}

struct BenchArgs {
    std::string left, right;
    std::vector<std::string> k_list{"auto"};
    std::vector<std::string> layout_list{"1d"};
    std::vector<std::string> axis_list{"auto"};
    std::vector<unsigned> threads_list{1};
    std::string partition_axis = "x";
    unsigned reps = 1;
    std::uint32_t k_max = kDefaultMaxPartitions;
};

int cmd_bench(const BenchArgs& a) {
    if (a.reps < 1) throw ConfigError("--reps must be at least 1");
    Inputs in = load_inputs(a.left, a.right);
    std::cout << kCsvHeader << "\n";
    std::optional<std::uint64_t> first_count;
    for (const auto& layout : a.layout_list) {
        for (const auto& k : a.k_list) {
            for (const auto& axis : a.axis_list) {
                if (parse_policy(axis) == AxisPolicy::Auto1D && parse_layout(layout) != LayoutKind::Stripes1D) {
                    std::cerr << "skipping axis=auto for layout=" << layout << "\n";
                    continue;
                }
                for (unsigned threads : a.threads_list) {
                    const JoinConfig cfg =
                        make_config(in, layout, k, axis, a.partition_axis, threads, a.k_max);
                    for (unsigned rep = 0; rep < a.reps; ++rep) {
                        const JoinReport r = join(in.left, in.right, cfg);
                        std::cout << csv_row(cfg, rep, r) << "\n" << std::flush;
                        if (!first_count) first_count = r.result_count;
                        if (*first_count != r.result_count) {
                            std::cerr << "error: result_count " << r.result_count
                                      << " differs from the first configuration's "
                                      << *first_count << "\n";
                            return 3;
                        }
                    }
                }
            }
        }
    }
    return 0;
}

struct TuneArgs {
    std::string left, right;
    bool stats_only = false;
    std::uint32_t k_max = kDefaultMaxPartitions;
};

int cmd_tune(const TuneArgs& a) {
    Inputs in = load_inputs(a.left, a.right);
    std::cout << "dataset,cardinality,avg_x_extent,avg_y_extent\n";
    auto row = [](const std::string& name, const DatasetStats& s) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%s,%zu,%.9f,%.9f\n", name.c_str(), s.cardinality,
                      s.avg_x_extent, s.avg_y_extent);
        std::cout << buf;
    };
    row(a.left, in.left_stats);
    row(a.right, in.right_stats);
    if (a.stats_only) return 0;

    const std::uint32_t k = auto_k(in, LayoutKind::Stripes1D, Axis::X, a.k_max);
    std::cout << "recommended_layout=1d\n"
              << "partition_axis=x\n"
              << "recommended_k=" << k << "\n"
              << "recommended_axis=auto\n"
              << "sweep_axis=y\n";
    return 0;
}

struct GenerateArgs {
    std::size_t n = 0;
    double extent_x = 0.001;
    double extent_y = 0.001;
    std::string distribution = "uniform";
    std::uint64_t seed = 1;
    std::uint64_t first_id = 0;
    std::string out;
    bool binary = false;
};

int cmd_generate(const GenerateArgs& a) {
    SyntheticSpec spec;
    spec.n = a.n;
    spec.mean_x_extent = a.extent_x;
    spec.mean_y_extent = a.extent_y;
    spec.seed = a.seed;
    spec.first_id = a.first_id;
    if (a.distribution == "uniform") {
        spec.distribution = SpatialDistribution::Uniform;
    } else if (a.distribution == "clustered") {
        spec.distribution = SpatialDistribution::GaussianClustered;
    } else {
        throw ConfigError("--distribution expects uniform or clustered");
    }
    const auto rects = generate_synthetic(spec);
    if (a.binary) {
        save_mbr_binary(a.out, rects);
    } else {
        save_mbr_csv(a.out, rects);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spjoin: in-memory partition-based spatial intersection joins"};
    app.require_subcommand(1);

    JoinArgs join_args;
    auto* join_cmd = app.add_subcommand("join", "Join two MBR files and report timings");
    join_cmd->add_option("--left", join_args.left, "Left input (CSV or SJB1)")->required()->check(CLI::ExistingFile);
    join_cmd->add_option("--right", join_args.right, "Right input (CSV or SJB1)")->required()->check(CLI::ExistingFile);
    join_cmd->add_option("--layout", join_args.layout, "1d or 2d")->check(CLI::IsMember({"1d", "2d"}));
    join_cmd->add_option("--k", join_args.k, "Divisions per split axis, or auto");
    join_cmd->add_option("--axis", join_args.axis, "x, y, adaptive or auto (1d only)")
        ->check(CLI::IsMember({"x", "y", "adaptive", "auto"}));
    join_cmd->add_option("--partition-axis", join_args.partition_axis, "Stripe axis for 1d")
        ->check(CLI::IsMember({"x", "y"}));
    join_cmd->add_option("--threads", join_args.threads, "Worker threads")->check(CLI::PositiveNumber);
    join_cmd->add_flag("--collect", join_args.collect, "Materialize result pairs");
    join_cmd->add_option("--pairs-out", join_args.pairs_out, "Write collected pairs as r_id,s_id");
    join_cmd->add_flag("--verify", join_args.verify, "Compare against the nested-loop oracle");
    join_cmd->add_option("--epsilon", join_args.epsilon, "Point distance join with this radius");
    join_cmd->add_option("--format", join_args.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    join_cmd->add_option("--k-max", join_args.k_max, "Cap for --k auto");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Sweep configurations and emit CSV rows");
    bench_cmd->add_option("--left", bench_args.left)->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--right", bench_args.right)->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--k-list", bench_args.k_list)->delimiter(',');
    bench_cmd->add_option("--layout-list", bench_args.layout_list)->delimiter(',')
        ->check(CLI::IsMember({"1d", "2d"}));
    bench_cmd->add_option("--axis-list", bench_args.axis_list)->delimiter(',')
        ->check(CLI::IsMember({"x", "y", "adaptive", "auto"}));
    bench_cmd->add_option("--threads-list", bench_args.threads_list)->delimiter(',')
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--partition-axis", bench_args.partition_axis)->check(CLI::IsMember({"x", "y"}));
    bench_cmd->add_option("--reps", bench_args.reps)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--k-max", bench_args.k_max);

    TuneArgs tune_args;
    auto* tune_cmd = app.add_subcommand("tune", "Recommend layout, K and sweep axis from statistics");
    tune_cmd->add_option("--left", tune_args.left)->required()->check(CLI::ExistingFile);
    tune_cmd->add_option("--right", tune_args.right)->required()->check(CLI::ExistingFile);
    tune_cmd->add_flag("--stats-only", tune_args.stats_only, "Print dataset statistics only");
    tune_cmd->add_option("--k-max", tune_args.k_max);

    GenerateArgs gen_args;
    auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic rectangle dataset");
    gen_cmd->add_option("--n", gen_args.n)->required();
    gen_cmd->add_option("--extent-x", gen_args.extent_x, "Mean normalized x-extent");
    gen_cmd->add_option("--extent-y", gen_args.extent_y, "Mean normalized y-extent");
    gen_cmd->add_option("--distribution", gen_args.distribution)->check(CLI::IsMember({"uniform", "clustered"}));
    gen_cmd->add_option("--seed", gen_args.seed);
    gen_cmd->add_option("--first-id", gen_args.first_id);
    gen_cmd->add_option("--out", gen_args.out)->required();
    gen_cmd->add_flag("--binary", gen_args.binary, "Write SJB1 instead of CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*join_cmd) return cmd_join(join_args);
        if (*bench_cmd) return cmd_bench(bench_args);
        if (*tune_cmd) return cmd_tune(tune_args);
        if (*gen_cmd) return cmd_generate(gen_args);
    } catch (const spjoin::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
