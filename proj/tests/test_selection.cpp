#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "grafl/error.hpp"
#include "grafl/selection.hpp"
#include "oracles.hpp"

using namespace grafl;

namespace {

BinVector bins(std::initializer_list<int> v) {
    BinVector b{Eigen::Index(v.size())};
    Eigen::Index i = 0;
    for (int x : v) b[i++] = Bin(x);
    return b;
}

BinVector random_bins(std::mt19937_64& rng, std::size_t n, int levels) {
    BinVector b{Eigen::Index(n)};
    for (auto& x : b) x = Bin(rng() % std::uint64_t(levels));
    return b;
}

std::vector<std::size_t> kept_ids(const PruneResult& r) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < r.keep.size(); ++i)
        if (r.keep[i]) ids.push_back(i);
    return ids;
}

}  // namespace

TEST_CASE("agreement examples") {
    CHECK(agreement_score(bins({0, 1, 1, 2}), bins({0, 1, 2, 2})) == 0.75);
    CHECK(agreement_score(bins({0, 1, 1, 2}), bins({0, 1, 2, 1})) == 0.5);
    const BinVector x = bins({3, 1, 4, 1, 5});
    CHECK(agreement_score(x, x) == 1.0);
    CHECK(agreement_score(bins({0, 0}), bins({1, 1})) == 0.0);
    CHECK(agreement_score(BinVector(0), BinVector(0)) == 1.0);
    CHECK_THROWS_AS(agreement_score(bins({0}), bins({0, 1})), Error);
}

TEST_CASE("agreement is symmetric and 1 only for identical vectors") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const BinVector a = random_bins(rng, 8, 2), b = random_bins(rng, 8, 2);
        CHECK(agreement_score(a, b) == agreement_score(b, a));
        CHECK((agreement_score(a, b) == 1.0) == (a == b));
    }
}

TEST_CASE("pruning examples") {
    const EvaluationCriterion crit{CriterionTag::agreement, 0.9};
    std::mt19937_64 rng(2);
    const BinVector h = random_bins(rng, 50, 4), a = random_bins(rng, 50, 4), b = random_bins(rng, 50, 4);

    SUBCASE("copy of a historical feature is dropped") {
        const std::vector<BinVector> hist{h}, fresh{a, h};
        const auto r = prune_layer(fresh, hist, crit);
        CHECK(kept_ids(r) == std::vector<std::size_t>{0});
    }
    SUBCASE("earliest of two identical new features survives") {
        const std::vector<BinVector> hist{h}, fresh{a, b, a};
        const auto r = prune_layer(fresh, hist, crit);
        CHECK(kept_ids(r) == std::vector<std::size_t>{0, 1});
    }
    SUBCASE("nothing similar keeps everything") {
        const std::vector<BinVector> hist{h}, fresh{a, b};
        const auto r = prune_layer(fresh, hist, crit);
        CHECK(kept_ids(r) == std::vector<std::size_t>{0, 1});
        CHECK(r.graph.edges.empty());
    }
    SUBCASE("transitive merges through a historical feature") {
        // a ~ h via a near copy, and a2 ~ a: the whole component goes.
        BinVector a1 = h;
        a1[0] = Bin(a1[0] + 1);
        BinVector a2 = a1;
        a2[1] = Bin(a2[1] + 1);
        const std::vector<BinVector> hist{h}, fresh{a2, a1};
        const auto r = prune_layer(fresh, hist, EvaluationCriterion{CriterionTag::agreement, 0.97});
        CHECK(kept_ids(r).empty());
    }
}

TEST_CASE("each dependence component keeps exactly one representative") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<BinVector> hist, fresh;
        for (int i = 0; i < 3; ++i) hist.push_back(random_bins(rng, 20, 2));
        for (int i = 0; i < 8; ++i) fresh.push_back(random_bins(rng, 20, 2));
        const EvaluationCriterion crit{CriterionTag::agreement, 0.6};
        const auto r = prune_layer(fresh, hist, crit, 1 + trial % 3);
        const auto label = r.graph.components();
        const std::size_t h = hist.size();
        for (const auto& e : r.graph.edges) {
            CHECK(e.weight > 0.6);
            CHECK(e.i < e.j);
            const BinVector& xi = e.i < h ? hist[e.i] : fresh[e.i - h];
            CHECK(e.weight == agreement_score(xi, fresh[e.j - h]));
        }
        std::vector<int> reps(h + fresh.size(), 0);
        for (std::size_t v = 0; v < h; ++v) ++reps[label[v]];
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            if (r.keep[i]) ++reps[label[h + i]];
            // historical vertices are each their own representative; new keeps only in purely new components
            if (label[h + i] < h) CHECK_FALSE(r.keep[i]);
        }
        for (std::size_t v = 0; v < reps.size(); ++v)
            if (label[v] == v && v >= h) CHECK(reps[v] == 1);
    }
}

TEST_CASE("mutual information matches the histogram oracle") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        const BinVector a = random_bins(rng, 40, 4), b = random_bins(rng, 40, 3);
        CHECK(mutual_information(a, b) == doctest::Approx(oracle::histogram_mi(a, b, 40)).epsilon(1e-12));
    }
    const BinVector c = bins({0, 0, 1, 1});
    CHECK(mutual_information(c, c) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("supervised selection examples") {
    const std::vector<int> y{0, 0, 1, 1, 2, 2, 0, 1};
    const BinVector exact = bins({0, 0, 1, 1, 2, 2, 0, 1});
    const BinVector noise = bins({0, 1, 0, 1, 0, 1, 0, 1});
    const BinVector partial = bins({0, 0, 1, 1, 1, 1, 0, 1});
    const std::vector<BinVector> cols{noise, partial, exact};
    CHECK(supervised_select(cols, y, 0.0, 2) == std::vector<std::size_t>{2, 1});
    CHECK(supervised_select(cols, y, 0.0, 10).size() == 3);

    // A copy of the seed is ranked last once redundancy is weighted heavily.
    const std::vector<BinVector> dup{exact, noise, partial, exact};
    const auto order = supervised_select(dup, y, 5.0, 4);
    CHECK(order.front() == 0);
    CHECK(order.back() == 3);
}

TEST_CASE("supervised selection equals brute-force evaluation of the greedy objective") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 30; ++t) {
        std::vector<int> y(30);
        for (auto& v : y) v = int(rng() % 3);
        std::vector<BinVector> cols;
        for (int j = 0; j < 4; ++j) cols.push_back(random_bins(rng, 30, 3));
        const double beta = 0.5;
        const auto got = supervised_select(cols, y, beta, 4);
        // recompute each greedy step directly
        std::vector<std::size_t> chosen;
        std::vector<bool> used(4, false);
        while (chosen.size() < 4) {
            std::size_t best = 4;
            double best_score = 0;
            for (std::size_t i = 0; i < 4; ++i) {
                if (used[i]) continue;
                double s = oracle::histogram_mi(y, cols[i], 30);
                for (auto j : chosen) s -= beta * oracle::histogram_mi(cols[i], cols[j], 30);
                if (best == 4 || s > best_score + 1e-12) {
                    best = i;
                    best_score = s;
                }
            }
            used[best] = true;
            chosen.push_back(best);
        }
        CHECK(got == chosen);
    }
}
