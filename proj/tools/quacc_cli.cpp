// quacc: quantile-specific conditional association tests, PC-style graph
// learning, synthetic data generation, and simulation benchmarks.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 estimation
// failure.
#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "quacc/citest.hpp"
#include "quacc/io.hpp"
#include "quacc/metrics.hpp"
#include "quacc/pc.hpp"
#include "quacc/synth.hpp"

using namespace quacc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitEstimation = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_tau_list(const std::string& s) {
    std::vector<double> taus;
    std::stringstream ss(s);
    std::string item;
    if (s.find(':') != std::string::npos) {
        // lo:hi:step range
        double lo, hi, step;
        char c1, c2;
        std::stringstream rs(s);
        if (!(rs >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
            throw ConfigError("bad range '" + s + "', expected lo:hi:step");
        for (double t = lo; t <= hi + 1e-12; t += step) taus.push_back(t);
    } else {
        while (std::getline(ss, item, ',')) {
            try {
                taus.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("unparseable value '" + item + "'");
            }
        }
    }
    if (taus.empty()) throw ConfigError("empty level list");
    for (double t : taus)
        if (!(t > 0.0 && t < 1.0)) throw ConfigError("tau " + std::to_string(t) + " outside (0,1)");
    return taus;
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

Dataset load_or_die(const std::string& path, const std::vector<std::string>& required) {
    Dataset d;
    try {
        d = load_csv(path);
    } catch (const std::exception& e) {
        throw DataError(std::string(e.what()));
    }
    for (const auto& name : required)
        if (!d.has_column(name)) throw DataError("column '" + name + "' not found in " + path);
    return d;
}

std::size_t worker_count(std::size_t flag_value) {
    if (const char* env = std::getenv("QUACC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    if (flag_value >= 1) return flag_value;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

/// Runs fn(i) for i in [0, n) on a worker pool; exceptions propagate.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << contents;
}

// ---------------------------------------------------------------- commands

struct TestArgs {
    std::string data_path, y, x, z_csv, json_path;
    std::string tau_csv = "0.1,0.5,0.9";
    std::size_t K = 5;
    uint64_t seed = 0;
};

int cmd_test(const TestArgs& a) {
    const auto taus = parse_tau_list(a.tau_csv);
    const auto zs = a.z_csv.empty() ? std::vector<std::string>{} : split_names(a.z_csv);
    std::vector<std::string> required = {a.y, a.x};
    required.insert(required.end(), zs.begin(), zs.end());
    const Dataset d = load_or_die(a.data_path, required);
    if (a.K < 2) throw ConfigError("K must be >= 2");

    json reports = json::array();
    std::printf("%6s %10s %10s %10s %12s\n", "tau", "rho_hat", "rho_star", "z", "p_value");
    for (double tau : taus) {
        Rng rng(splitmix64(a.seed ^ static_cast<uint64_t>(tau * 1e6)));
        QuaccResult r;
        try {
            r = quacc_test(d, a.y, a.x, zs, tau, rng, {a.K, BandwidthRule::hall_sheather});
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        std::printf("%6.3f %10.5f %10.5f %10.4f %12.6g\n", tau, r.rho_hat, r.rho_star, r.z,
                    r.p_value);
        reports.push_back(to_json(r));
    }
    if (!a.json_path.empty()) write_text(a.json_path, reports.dump(2) + "\n");
    return 0;
}

struct GraphArgs {
    std::string data_path, vars_csv, backend = "quacc", out_dir = ".";
    std::string tau_csv = "0.1,0.5,0.9";
    double alpha = 0.05;
    std::size_t K = 5;
    std::size_t max_order = 0;  // 0 -> |vars| - 2
    std::size_t replicates = 0, subsample = 0, threads = 0;
    uint64_t seed = 0;
};

std::unique_ptr<CITest> make_backend(const std::string& backend, double tau, std::size_t K) {
    if (backend == "quacc")
        return std::make_unique<QuaccCITest>(tau, QuaccOptions{K, BandwidthRule::hall_sheather},
                                             true);
    if (backend == "pcorr") return std::make_unique<PartialCorrCITest>();
    throw ConfigError("unknown backend '" + backend + "'");
}

Dataset subsample_rows(const Dataset& d, std::size_t m, Rng& rng) {
    std::vector<std::size_t> idx(d.n_rows);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    idx.resize(std::min(m, idx.size()));
    std::sort(idx.begin(), idx.end());
    Dataset out;
    for (const auto& col : d.columns) {
        std::vector<double> vals;
        vals.reserve(idx.size());
        for (std::size_t i : idx) vals.push_back(col.values[i]);
        out.add_column(col.name, std::move(vals));
    }
    return out;
}

int cmd_graph(const GraphArgs& a) {
    const auto taus = parse_tau_list(a.tau_csv);
    if (!(a.alpha > 0.0 && a.alpha <= 0.5)) throw ConfigError("alpha outside (0, 0.5]");
    const Dataset d = load_or_die(a.data_path, {});
    const auto vars = a.vars_csv.empty() ? d.names() : split_names(a.vars_csv);
    for (const auto& v : vars)
        if (!d.has_column(v)) throw DataError("column '" + v + "' not found");
    const std::size_t max_order = a.max_order ? a.max_order : vars.size() - 2;
    const std::filesystem::path out_dir(a.out_dir);
    std::filesystem::create_directories(out_dir);

    for (double tau : taus) {
        const auto test = make_backend(a.backend, tau, a.K);
        const std::string tag = "tau" + std::to_string(tau).substr(0, 4);
        if (a.replicates == 0) {
            const Skeleton sk = pc_skeleton(d, vars, *test, a.alpha, max_order, a.seed);
            write_text(out_dir / ("skeleton_" + tag + ".json"), to_json(sk).dump(2) + "\n");
            write_text(out_dir / ("skeleton_" + tag + ".dot"), to_dot(sk));
            std::printf("tau=%.3f: %zu edges -> %s\n", tau, sk.edges.size(),
                        (out_dir / ("skeleton_" + tag + ".json")).c_str());
        } else {
            std::vector<Skeleton> reps(a.replicates);
            parallel_for(a.replicates, worker_count(a.threads), [&](std::size_t r) {
                Dataset dr = d;
                if (a.subsample > 0 && a.subsample < d.n_rows) {
                    Rng srng(splitmix64(a.seed ^ (0xabcdef12ULL + r)));
                    dr = subsample_rows(d, a.subsample, srng);
                }
                reps[r] = pc_skeleton(dr, vars, *test, a.alpha, max_order,
                                      splitmix64(a.seed + 31 * r + 7));
            });
            const Skeleton vote = majority_vote(reps);
            for (std::size_t r = 0; r < reps.size(); ++r)
                write_text(out_dir / ("skeleton_" + tag + "_rep" + std::to_string(r) + ".json"),
                           to_json(reps[r]).dump(2) + "\n");
            write_text(out_dir / ("skeleton_" + tag + "_vote.json"),
                       to_json(vote).dump(2) + "\n");
            write_text(out_dir / ("skeleton_" + tag + "_vote.dot"), to_dot(vote));
            std::printf("tau=%.3f: majority vote %zu edges over %zu replicates\n", tau,
                        vote.edges.size(), reps.size());
        }
    }
    return 0;
}

struct PairwiseArgs {
    std::string data_path, vars_csv, mode = "marginal", out_dir = ".";
    std::string tau_csv = "0.1,0.5,0.9";
    std::size_t K = 5;
    uint64_t seed = 0;
};

int cmd_pairwise(const PairwiseArgs& a) {
    const auto taus = parse_tau_list(a.tau_csv);
    if (a.mode != "marginal" && a.mode != "maximal")
        throw ConfigError("mode must be marginal or maximal");
    const Dataset d = load_or_die(a.data_path, {});
    const auto vars = a.vars_csv.empty() ? d.names() : split_names(a.vars_csv);
    for (const auto& v : vars)
        if (!d.has_column(v)) throw DataError("column '" + v + "' not found");
    if (vars.size() < 2) throw ConfigError("need at least 2 variables");
    const std::filesystem::path out_dir(a.out_dir);
    std::filesystem::create_directories(out_dir);

    for (double tau : taus) {
        // rho_star matrix over unordered pairs; diagonal empty.
        std::vector<std::vector<std::string>> cells(vars.size(),
                                                    std::vector<std::string>(vars.size()));
        for (std::size_t i = 0; i < vars.size(); ++i)
            for (std::size_t j = i + 1; j < vars.size(); ++j) {
                std::vector<std::string> Z;
                if (a.mode == "maximal")
                    for (std::size_t k = 0; k < vars.size(); ++k)
                        if (k != i && k != j) Z.push_back(vars[k]);
                Rng rng(splitmix64(a.seed ^ (i * 1000003ULL + j * 10007ULL +
                                             static_cast<uint64_t>(tau * 1e6))));
                try {
                    const QuaccResult r = quacc_test(d, vars[i], vars[j], Z, tau, rng,
                                                     {a.K, BandwidthRule::hall_sheather});
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.6f", r.rho_star);
                    cells[i][j] = cells[j][i] = buf;
                } catch (const std::runtime_error&) {
                    cells[i][j] = cells[j][i] = "";  // insufficient data for this pair
                }
            }
        std::string csv = "variable";
        for (const auto& v : vars) csv += "," + v;
        csv += "\n";
        for (std::size_t i = 0; i < vars.size(); ++i) {
            csv += vars[i];
            for (std::size_t j = 0; j < vars.size(); ++j) csv += "," + cells[i][j];
            csv += "\n";
        }
        const auto path = out_dir / ("pairwise_" + a.mode + "_tau" +
                                     std::to_string(tau).substr(0, 4) + ".csv");
        write_text(path, csv);
        std::printf("tau=%.3f: %zu pairs -> %s\n", tau, vars.size() * (vars.size() - 1) / 2,
                    path.c_str());
    }
    return 0;
}

struct SimulateArgs {
    std::string setting = "S1", out_prefix = "sim";
    std::size_t n = 1000;
    double theta = -1.0;
    bool mean_effects = false;
    uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a) {
    Rng rng(a.seed);
    Dataset d;
    json sidecar;
    if (a.setting == "graph") {
        GraphSample gs = gen_graph(a.n, a.mean_effects, rng);
        gs.spec.seed = a.seed;
        d = std::move(gs.data);
        sidecar = {{"spec", to_json(gs.spec)}, {"truth", to_json(gs.truth)}};
    } else {
        PairwiseSetting setting;
        if (a.setting == "S1")
            setting = PairwiseSetting::S1;
        else if (a.setting == "S2")
            setting = PairwiseSetting::S2;
        else if (a.setting == "S3")
            setting = PairwiseSetting::S3;
        else
            throw ConfigError("setting must be S1, S2, S3, or graph");
        DgpSpec spec;
        d = gen_pairwise(setting, a.n, rng, a.theta, &spec);
        spec.seed = a.seed;
        sidecar = {{"spec", to_json(spec)}};
    }
    std::ofstream csv(a.out_prefix + ".csv");
    if (!csv) throw DataError("cannot write " + a.out_prefix + ".csv");
    write_csv(d, csv);
    write_text(a.out_prefix + ".json", sidecar.dump(2) + "\n");
    std::printf("wrote %s.csv (%zu rows) and %s.json\n", a.out_prefix.c_str(), d.n_rows,
                a.out_prefix.c_str());
    return 0;
}

struct BenchRejectArgs {
    std::string setting = "S1", taus = "0.1,0.5,0.9", thetas, out_path = "reject.csv";
    std::size_t n = 400, replicates = 100, K = 5, threads = 0;
    double alpha = 0.05;
    uint64_t seed = 0;
};

int cmd_bench_reject(const BenchRejectArgs& a) {
    PairwiseSetting setting;
    if (a.setting == "S1")
        setting = PairwiseSetting::S1;
    else if (a.setting == "S2")
        setting = PairwiseSetting::S2;
    else if (a.setting == "S3")
        setting = PairwiseSetting::S3;
    else
        throw ConfigError("setting must be S1, S2, or S3");
    const auto taus = parse_tau_list(a.taus);
    std::vector<double> thetas = {default_theta(setting)};
    if (!a.thetas.empty()) {
        thetas.clear();
        // theta grids allow 0 (independence), so parse without the tau bound
        std::stringstream ss(a.thetas);
        if (a.thetas.find(':') != std::string::npos) {
            double lo, hi, step;
            char c1, c2;
            if (!(ss >> lo >> c1 >> hi >> c2 >> step) || step <= 0.0)
                throw ConfigError("bad theta range, expected lo:hi:step");
            for (double t = lo; t <= hi + 1e-12; t += step) thetas.push_back(t);
        } else {
            std::string item;
            while (std::getline(ss, item, ',')) thetas.push_back(std::stod(item));
        }
    }

    std::string csv = "setting,tau,theta,n,replicates,rejection_rate\n";
    for (double tau : taus) {
        for (double theta : thetas) {
            std::vector<int> rejected(a.replicates, 0);
            parallel_for(a.replicates, worker_count(a.threads), [&](std::size_t r) {
                Rng g(splitmix64(a.seed ^ (r * 0x9e3779b97f4a7c15ULL + 1)) ^
                      static_cast<uint64_t>(theta * 4096) ^ static_cast<uint64_t>(tau * 1e6));
                const Dataset d = gen_pairwise(setting, a.n, g, theta);
                Rng t = g.derive(1);
                try {
                    const QuaccResult res = quacc_test(d, "Y", "X", {"Z1", "Z2"}, tau, t,
                                                       {a.K, BandwidthRule::hall_sheather});
                    rejected[r] = res.p_value < a.alpha ? 1 : 0;
                } catch (const std::runtime_error&) {
                    rejected[r] = 0;  // insufficient tail mass counts as non-rejection
                }
            });
            double rate = 0.0;
            for (int x : rejected) rate += x;
            rate /= static_cast<double>(a.replicates);
            char row[160];
            std::snprintf(row, sizeof row, "%s,%.3f,%.4f,%zu,%zu,%.4f\n", a.setting.c_str(),
                          tau, theta, a.n, a.replicates, rate);
            csv += row;
            std::printf("%s", row);
        }
    }
    write_text(a.out_path, csv);
    return 0;
}

struct BenchGraphArgs {
    std::string backend = "quacc", taus = "0.1,0.5,0.9", out_path = "graph_bench.csv";
    std::size_t n = 5000, replicates = 20, K = 5, max_order = 8, threads = 0;
    double alpha = 0.05;
    bool mean_effects = false;
    uint64_t seed = 0;
};

int cmd_bench_graph(const BenchGraphArgs& a) {
    const auto taus = a.backend == "pcorr" ? std::vector<double>{0.5} : parse_tau_list(a.taus);
    std::string csv = "backend,tau,n,replicates,precision,precision_sd,recall,recall_sd,shd,shd_sd\n";
    for (double tau : taus) {
        std::vector<RecoveryMetrics> ms(a.replicates);
        parallel_for(a.replicates, worker_count(a.threads), [&](std::size_t r) {
            Rng g(splitmix64(a.seed + 1315423911ULL * r));
            const GraphSample gs = gen_graph(a.n, a.mean_effects, g);
            const auto test = make_backend(a.backend, tau, a.K);
            const Skeleton sk = pc_skeleton(gs.data, gs.truth.vertices, *test, a.alpha,
                                            a.max_order, splitmix64(a.seed ^ (r + 17)));
            ms[r] = recovery(sk, gs.truth);
        });
        auto mean_sd = [&](const std::function<double(const RecoveryMetrics&)>& get) {
            double m = 0.0;
            for (const auto& x : ms) m += get(x);
            m /= static_cast<double>(ms.size());
            double s = 0.0;
            for (const auto& x : ms) s += (get(x) - m) * (get(x) - m);
            s = ms.size() > 1 ? std::sqrt(s / static_cast<double>(ms.size() - 1)) : 0.0;
            return std::pair<double, double>{m, s};
        };
        const auto [pm, ps] = mean_sd([](const RecoveryMetrics& m) { return m.precision; });
        const auto [rm, rs] = mean_sd([](const RecoveryMetrics& m) { return m.recall; });
        const auto [sm, ss] = mean_sd([](const RecoveryMetrics& m) { return m.shd_normalized; });
        char row[200];
        std::snprintf(row, sizeof row, "%s,%.3f,%zu,%zu,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n",
                      a.backend.c_str(), tau, a.n, a.replicates, pm, ps, rm, rs, sm, ss);
        csv += row;
        std::printf("%s", row);
    }
    write_text(a.out_path, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QuACC: quantile association via conditional concordance"};
    app.require_subcommand(1);

    TestArgs ta;
    auto* test = app.add_subcommand("test", "Test one pair for conditional tail association");
    test->add_option("data", ta.data_path, "input CSV")->required();
    test->add_option("--y", ta.y, "first variable")->required();
    test->add_option("--x", ta.x, "second variable")->required();
    test->add_option("--z", ta.z_csv, "comma-separated conditioning variables");
    test->add_option("--tau", ta.tau_csv, "comma-separated quantile levels");
    test->add_option("--k", ta.K, "number of cross-fitting folds");
    test->add_option("--seed", ta.seed, "RNG seed")->required();
    test->add_option("--json", ta.json_path, "write full JSON report here");

    GraphArgs ga;
    auto* graph = app.add_subcommand("graph", "Learn an undirected skeleton via PC adjacency");
    graph->add_option("data", ga.data_path, "input CSV")->required();
    graph->add_option("--vars", ga.vars_csv, "comma-separated variables (default: all)");
    graph->add_option("--tau", ga.tau_csv, "comma-separated quantile levels");
    graph->add_option("--alpha", ga.alpha, "significance level");
    graph->add_option("--k", ga.K, "cross-fitting folds");
    graph->add_option("--max-order", ga.max_order, "conditioning-set cap (default |vars|-2)");
    graph->add_option("--backend", ga.backend, "quacc or pcorr");
    graph->add_option("--replicates", ga.replicates, "subsample replicates for majority vote");
    graph->add_option("--subsample", ga.subsample, "rows per replicate");
    graph->add_option("--threads", ga.threads, "worker count (default: hardware)");
    graph->add_option("--seed", ga.seed, "RNG seed")->required();
    graph->add_option("--out", ga.out_dir, "output directory");

    PairwiseArgs pa;
    auto* pairwise = app.add_subcommand("pairwise", "All-pairs QuACC matrices");
    pairwise->add_option("data", pa.data_path, "input CSV")->required();
    pairwise->add_option("--vars", pa.vars_csv, "comma-separated variables (default: all)");
    pairwise->add_option("--tau", pa.tau_csv, "comma-separated quantile levels");
    pairwise->add_option("--mode", pa.mode, "marginal (Z empty) or maximal (Z = rest)");
    pairwise->add_option("--k", pa.K, "cross-fitting folds");
    pairwise->add_option("--seed", pa.seed, "RNG seed")->required();
    pairwise->add_option("--out", pa.out_dir, "output directory");

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
    simulate->add_option("--setting", sa.setting, "S1, S2, S3, or graph");
    simulate->add_option("--n", sa.n, "sample size");
    simulate->add_option("--theta", sa.theta, "copula parameter (default: setting default)");
    simulate->add_flag("--mean-effects", sa.mean_effects, "graph: draw nonzero mean effects");
    simulate->add_option("--seed", sa.seed, "RNG seed")->required();
    simulate->add_option("--out", sa.out_prefix, "output path prefix");

    auto* bench = app.add_subcommand("bench", "Simulation benchmarks");
    bench->require_subcommand(1);

    BenchRejectArgs ra;
    auto* reject = bench->add_subcommand("reject", "Rejection-rate grid on S1-S3");
    reject->add_option("--setting", ra.setting, "S1, S2, or S3");
    reject->add_option("--n", ra.n, "sample size");
    reject->add_option("--replicates", ra.replicates, "replicates per grid point");
    reject->add_option("--taus", ra.taus, "levels, comma list or lo:hi:step");
    reject->add_option("--thetas", ra.thetas, "copula grid, comma list or lo:hi:step");
    reject->add_option("--alpha", ra.alpha, "significance level");
    reject->add_option("--k", ra.K, "cross-fitting folds");
    reject->add_option("--threads", ra.threads, "worker count");
    reject->add_option("--seed", ra.seed, "RNG seed")->required();
    reject->add_option("--out", ra.out_path, "output CSV");

    BenchGraphArgs ba;
    auto* bgraph = bench->add_subcommand("graph", "Skeleton-recovery benchmark");
    bgraph->add_option("--backend", ba.backend, "quacc or pcorr");
    bgraph->add_option("--n", ba.n, "sample size");
    bgraph->add_option("--replicates", ba.replicates, "replicate count");
    bgraph->add_option("--tau", ba.taus, "levels (quacc backend)");
    bgraph->add_option("--alpha", ba.alpha, "significance level");
    bgraph->add_option("--k", ba.K, "cross-fitting folds");
    bgraph->add_option("--max-order", ba.max_order, "conditioning-set cap");
    bgraph->add_flag("--mean-effects", ba.mean_effects, "draw nonzero mean effects");
    bgraph->add_option("--threads", ba.threads, "worker count");
    bgraph->add_option("--seed", ba.seed, "RNG seed")->required();
    bgraph->add_option("--out", ba.out_path, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (test->parsed()) return cmd_test(ta);
        if (graph->parsed()) return cmd_graph(ga);
        if (pairwise->parsed()) return cmd_pairwise(pa);
        if (simulate->parsed()) return cmd_simulate(sa);
        if (reject->parsed()) return cmd_bench_reject(ra);
        if (bgraph->parsed()) return cmd_bench_graph(ba);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "estimation error: " << e.what() << "\n";
        return kExitEstimation;
    }
    return kExitConfig;
}
