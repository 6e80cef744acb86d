// Acceptance suite: `acceptance <n>` checks one criterion, `acceptance all`
// checks every one. Each prints a single "criterion N: PASS|FAIL ..." line and
// the exit status is nonzero if any checked criterion failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "grafl/diffusion.hpp"
#include "grafl/learner.hpp"
#include "grafl/orbits.hpp"
#include "grafl/relational.hpp"
#include "grafl/selection.hpp"
#include "grafl/tasks.hpp"
#include "oracles.hpp"

using namespace grafl;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

// 1. Worked sum example on an edge neighborhood.
Outcome criterion1() {
    // e0 = (0,1); out-neighbors e2, e4 leave an endpoint, in-neighbors e1, e3, e5 enter one.
    const std::vector<Graph::Endpoints> eps{{0, 1}, {3, 0}, {1, 4}, {5, 1}, {0, 6}, {7, 0}};
    const Graph g = Graph::from_edges(8, eps, true);
    FeatureEvaluator eval(g, ElementKind::edge);
    const Eigen::VectorXd x = (Eigen::VectorXd(6) << 0, 4, 3, 5, 4, 3).finished();
    const RelationalOperator sum{OperatorTag::sum};
    const double all = eval.apply_step(sum, {Direction::all, 1}, x)[0];
    const double out = eval.apply_step(sum, {Direction::out, 1}, x)[0];
    const double in = eval.apply_step(sum, {Direction::in, 1}, x)[0];
    return {all == 19 && out == 7 && in == 12,
            "all=" + fmt(all, 0) + " out=" + fmt(out, 0) + " in=" + fmt(in, 0) + " (expected 19/7/12 exactly)"};
}

// 2. Orbit counts against exhaustive enumeration.
Outcome criterion2() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    int mismatches = 0;
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 5 + rng() % 26;
        const double p = 0.05 + 0.35 * double(rng() % 1000) / 1000.0;
        const bool directed = k % 3 == 0;
        const Graph g = oracle::random_graph(n, p, 1000 + std::uint64_t(k), directed, directed ? 0.05 : 0.0);
        const auto want = oracle::brute_force_orbits(g);
        if (node_orbit_counts(g) != want.node) ++mismatches;
        if (edge_orbit_counts(g) != want.edge) ++mismatches;
    }
    const double secs = since(t0);
    return {mismatches == 0 && secs < 60.0,
            std::to_string(mismatches) + " mismatching count tables over 50 graphs (n<=30), " + fmt(secs, 2) +
                " s (limit 60 s)"};
}

// 3. Transfer identity.
Outcome criterion3() {
    int failures = 0, runs = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 20 + seed * 3;
        const Graph g = oracle::random_graph(n, 4.0 / double(n), 300 + seed, seed % 2 == 0, seed % 4 == 0 ? 0.05 : 0.0);
        for (auto kind : {ElementKind::node, ElementKind::edge}) {
            if (g.num_elements(kind) == 0) continue;
            LearnConfig cfg;
            cfg.kind = kind;
            if (seed % 5 == 0) cfg.diffusion = DiffusionConfig{};
            const auto r = learn(g, cfg);
            const FunctionSet reloaded = functions_from_json(functions_to_json(r.functions));
            ++runs;
            if (!(extract(g, r.functions) == r.features) || !(extract(g, reloaded) == r.features)) ++failures;
        }
    }
    return {failures == 0, std::to_string(failures) + " of " + std::to_string(runs) +
                               " learn/extract pairs differ (20 graphs, node and edge kinds, bit-exact)"};
}

// 4. Pruning semantics with injected duplicates.
Outcome criterion4() {
    std::mt19937_64 rng(44);
    int wrong = 0, nondeterministic = 0, injected = 0;
    const EvaluationCriterion crit{CriterionTag::agreement, 0.9};
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 100 + rng() % 200;
        auto random_col = [&] {
            BinVector b{Eigen::Index(rows)};
            for (auto& v : b) v = Bin(rng() % 8);
            return b;
        };
        std::vector<BinVector> hist, fresh;
        for (std::size_t i = 0, h = 1 + rng() % 5; i < h; ++i) hist.push_back(random_col());
        // expected[i]: whether fresh column i should survive
        std::vector<bool> expected;
        for (std::size_t i = 0, f = 2 + rng() % 10; i < f; ++i) {
            const int kind = int(rng() % 4);
            if (kind == 0) {
                fresh.push_back(hist[rng() % hist.size()]);
                expected.push_back(false);
                ++injected;
            } else if (kind == 1 && !fresh.empty()) {
                const std::size_t src = rng() % fresh.size();
                fresh.push_back(fresh[src]);
                expected.push_back(false);
                ++injected;
            } else {
                fresh.push_back(random_col());
                expected.push_back(true);
            }
        }
        // a copy of a dropped column follows its original's fate, which is already false
        const PruneResult one = prune_layer(fresh, hist, crit, 1);
        if (one.keep != expected) ++wrong;
        for (int w : {2, 8}) {
            const PruneResult many = prune_layer(fresh, hist, crit, w);
            if (many.keep != one.keep || many.graph.edges.size() != one.graph.edges.size()) {
                ++nondeterministic;
                continue;
            }
            for (std::size_t e = 0; e < one.graph.edges.size(); ++e) {
                const auto& a = one.graph.edges[e];
                const auto& b = many.graph.edges[e];
                if (a.i != b.i || a.j != b.j || a.weight != b.weight) {
                    ++nondeterministic;
                    break;
                }
            }
        }
    }
    return {wrong == 0 && nondeterministic == 0,
            std::to_string(wrong) + " trials with a wrong keep set, " + std::to_string(nondeterministic) +
                " worker-count differences (100 trials, " + std::to_string(injected) +
                " injected duplicates, workers 1/2/8)"};
}

// 5. Diffusion fixed points.
Outcome criterion5() {
    int violations = 0, cases = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = oracle::random_graph(40, 0.08, 500 + seed, seed % 2 == 0, 0.02);
        for (auto kind : {ElementKind::node, ElementKind::edge}) {
            const auto rows = Eigen::Index(g.num_elements(kind));
            if (rows == 0) continue;
            FeatureEvaluator eval(g, kind);
            DiffusionConfig row;
            row.iterations = 25;
            const double c = 0.1 * double(seed) + 1.0 / 3.0;
            const Eigen::VectorXd constant = Eigen::VectorXd::Constant(rows, c);
            ++cases;
            if (diffuse_values(eval, constant, row) != constant) ++violations;

            DiffusionConfig lap;
            lap.method = DiffusionMethod::laplacian;
            lap.theta = 1.0;
            lap.iterations = 25;
            const Eigen::VectorXd x = Eigen::VectorXd::Random(rows) * 100.0;
            ++cases;
            if (diffuse_values(eval, x, lap) != x) ++violations;
        }
    }
    return {violations == 0, std::to_string(violations) + " of " + std::to_string(cases) +
                                 " cases changed (constant under row-stochastic, theta=1 Laplacian; exact)"};
}

LearnConfig bench_config(int workers) {
    LearnConfig cfg;
    cfg.workers = workers;
    return cfg;
}

// 6. Learning time grows linearly with the edge count.
Outcome criterion6() {
    const std::size_t sizes[] = {10000, 100000, 1000000};
    double secs[3], edges[3];
    std::string detail;
    for (int k = 0; k < 3; ++k) {
        const Graph g = erdos_renyi(sizes[k], 10, 7);
        edges[k] = double(g.num_edges());
        const auto t0 = Clock::now();
        const auto r = learn(g, bench_config(1));
        secs[k] = since(t0);
        detail += "n=" + std::to_string(sizes[k]) + ": " + fmt(secs[k], 2) + " s, ";
    }
    bool pass = secs[2] < 1800.0;
    for (int k = 1; k < 3; ++k) {
        const double time_ratio = secs[k] / secs[k - 1], edge_ratio = edges[k] / edges[k - 1];
        detail += "ratio " + fmt(time_ratio, 2) + " vs limit " + fmt(2 * edge_ratio, 1) + ", ";
        pass = pass && time_ratio <= 2 * edge_ratio;
    }
    detail += "1 worker, largest run limit 1800 s";
    return {pass, detail};
}

// 7. Parallel speedup with identical outputs.
Outcome criterion7() {
    const Graph g = erdos_renyi(100000, 10, 7);
    auto t0 = Clock::now();
    const auto one = learn(g, bench_config(1));
    const double t1 = since(t0);
    t0 = Clock::now();
    const auto eight = learn(g, bench_config(8));
    const double t8 = since(t0);
    const bool same = one.features == eight.features && one.functions == eight.functions;
    const double speedup = t1 / t8;
    return {same && speedup >= 2.5,
            "speedup " + fmt(speedup, 2) + "x at 8 workers (need >= 2.5x), outputs " +
                (same ? "identical" : "DIFFERENT") + ", hardware threads available: " +
                std::to_string(std::thread::hardware_concurrency())};
}

// 8. Density of learned node representations.
Outcome criterion8() {
    double lo = 1, hi = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = preferential_attachment(1000 + 200 * seed, 1 + seed % 4, 800 + seed);
        LearnConfig cfg;
        cfg.alpha = 0.5;
        const double d = stats(learn(g, cfg).features).density;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo > 0.05 && hi < 0.60,
            "density range [" + fmt(lo) + ", " + fmt(hi) + "] over 10 preferential-attachment graphs (band (0.05, 0.60))"};
}

// 9. Link prediction on a two-block stochastic block model.
Outcome criterion9() {
    std::vector<double> aucs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = stochastic_block_model({100, 100}, {{0.2, 0.005}, {0.005, 0.05}}, 900 + seed);
        TaskConfig cfg;
        cfg.seed = seed;
        cfg.pair_ops = {PairOperator::mean};
        aucs.push_back(run_link_prediction(g, "sbm", cfg).front().auc);
    }
    const double mean = std::accumulate(aucs.begin(), aucs.end(), 0.0) / double(aucs.size());
    double var = 0;
    for (double a : aucs) var += (a - mean) * (a - mean);
    const double sd = std::sqrt(var / double(aucs.size() - 1));
    return {mean >= 0.65 && mean >= 0.5 + 3 * sd,
            "mean AUC " + fmt(mean) + " (need >= 0.65), sd " + fmt(sd) + ", 0.5+3sd = " + fmt(0.5 + 3 * sd) +
                ", min " + fmt(*std::min_element(aucs.begin(), aucs.end())) + " over 10 seeds, mean pair operator"};
}

// 10. Supervised selection with beta = 0 ranks by mutual information.
Outcome criterion10() {
    std::mt19937_64 rng(10);
    int wrong = 0, toys = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 8 + rng() % 60, f = 1 + rng() % 6;
        const int classes = 2 + int(rng() % 3);
        std::vector<int> y(n);
        for (auto& v : y) v = int(rng() % std::uint64_t(classes));
        std::vector<BinVector> cols;
        for (std::size_t j = 0; j < f; ++j) {
            BinVector b{Eigen::Index(n)};
            const int levels = 1 + int(rng() % 5);
            // some columns copy the labels with noise so scores spread out
            for (std::size_t i = 0; i < n; ++i)
                b[Eigen::Index(i)] = Bin(rng() % 3 == 0 ? y[i] % levels : int(rng() % std::uint64_t(levels)));
            cols.push_back(b);
        }
        std::vector<double> mi(f);
        for (std::size_t j = 0; j < f; ++j) mi[j] = oracle::histogram_mi(y, cols[j], n);
        std::vector<std::size_t> want(f);
        std::iota(want.begin(), want.end(), 0);
        // exact ties (within rounding) go to the lower index
        std::stable_sort(want.begin(), want.end(), [&](std::size_t a, std::size_t b) { return mi[a] > mi[b] + 1e-12; });
        ++toys;
        if (supervised_select(cols, y, 0.0, f) != want) ++wrong;
    }
    return {wrong == 0, std::to_string(wrong) + " of " + std::to_string(toys) +
                            " toys (<= 6 features) ranked differently from the brute-force histogram oracle"};
}

const std::function<Outcome()> kCriteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                              criterion6, criterion7, criterion8, criterion9, criterion10};

}  // namespace

int main(int argc, char** argv) {
    const std::string which = argc > 1 ? argv[1] : "all";
    std::vector<int> ids;
    if (which == "all") {
        for (int i = 1; i <= 10; ++i) ids.push_back(i);
    } else {
        const int id = std::atoi(which.c_str());
        if (id < 1 || id > 10) {
            std::cerr << "usage: acceptance <1-10|all>\n";
            return 2;
        }
        ids.push_back(id);
    }
    bool ok = true;
    for (int id : ids) {
        Outcome o;
        try {
            o = kCriteria[id - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
        ok = ok && o.pass;
    }
    return ok ? 0 : 1;
}
