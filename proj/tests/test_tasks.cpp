#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "grafl/error.hpp"
#include "grafl/relational.hpp"
#include "grafl/tasks.hpp"
#include "oracles.hpp"

using namespace grafl;

namespace {

std::set<std::pair<NodeId, NodeId>> edge_pairs(const Graph& g) {
    std::set<std::pair<NodeId, NodeId>> s;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const auto ep = g.endpoints(e);
        s.insert({std::min(ep.src, ep.dst), std::max(ep.src, ep.dst)});
    }
    return s;
}

Graph complete_graph(std::size_t n) {
    std::vector<Graph::Endpoints> eps;
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b) eps.push_back({a, b});
    return Graph::from_edges(n, eps, false);
}

}  // namespace

TEST_CASE("link prediction split contract") {
    std::vector<Graph::Endpoints> eps;
    for (NodeId v = 0; v < 10; ++v) eps.push_back({v, NodeId((v + 1) % 12)});
    const Graph g = Graph::from_edges(12, eps, false);
    const LinkPredSplit s = make_linkpred_split(g, 0.5, 3);
    CHECK(s.positives.size() == 5);
    CHECK(s.negatives.size() == 5);
    CHECK(s.train.num_edges() == 5);

    const auto all = edge_pairs(g), train = edge_pairs(s.train);
    std::set<std::pair<NodeId, NodeId>> neg;
    for (const auto& p : s.positives) {
        const std::pair<NodeId, NodeId> k{std::min(p.src, p.dst), std::max(p.src, p.dst)};
        CHECK(all.count(k) == 1);
        CHECK(train.count(k) == 0);
    }
    for (const auto& p : s.negatives) {
        const std::pair<NodeId, NodeId> k{std::min(p.src, p.dst), std::max(p.src, p.dst)};
        CHECK(p.src != p.dst);
        CHECK(all.count(k) == 0);
        CHECK(neg.insert(k).second);
    }

    const LinkPredSplit again = make_linkpred_split(g, 0.5, 3);
    CHECK(again.positives == s.positives);
    CHECK(again.negatives == s.negatives);
    CHECK(edge_pairs(again.train) == train);
}

TEST_CASE("link prediction split errors") {
    CHECK_THROWS_WITH_AS(make_linkpred_split(complete_graph(6), 0.5, 1), doctest::Contains("non-adjacent"), Error);
    const Graph one = Graph::from_edges(3, std::vector<Graph::Endpoints>{{0, 1}}, false);
    CHECK_THROWS_AS(make_linkpred_split(one, 0.5, 1), Error);
}

TEST_CASE("keep_connected leaves every non-isolated node with an edge") {
    const Graph g = erdos_renyi(200, 4, 5);
    const LinkPredSplit s = make_linkpred_split(g, 0.5, 9, true);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (g.out_degree(v) > 0) CHECK(s.train.out_degree(v) > 0);
}

TEST_CASE("pair feature examples and symmetry") {
    const Eigen::Vector2d a(1, 2), b(3, 4);
    CHECK(pair_features(a, b, PairOperator::mean) == Eigen::VectorXd(Eigen::Vector2d(2, 3)));
    CHECK(pair_features(a, b, PairOperator::product) == Eigen::VectorXd(Eigen::Vector2d(3, 8)));
    CHECK(pair_features(a, b, PairOperator::weighted_l1) == Eigen::VectorXd(Eigen::Vector2d(2, 2)));
    CHECK(pair_features(a, b, PairOperator::weighted_l2) == Eigen::VectorXd(Eigen::Vector2d(4, 4)));
    CHECK_THROWS_AS(pair_features(a, Eigen::Vector3d(1, 2, 3), PairOperator::mean), Error);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd x(6), y(6);
        for (int i = 0; i < 6; ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
        }
        for (auto op : kPairOperators) CHECK(pair_features(x, y, op) == pair_features(y, x, op));
    }
    for (auto op : kPairOperators) CHECK(parse_pair_operator(to_string(op)) == op);
    CHECK_THROWS_AS(parse_pair_operator("cosine"), ConfigError);
}

TEST_CASE("auc examples") {
    const std::vector<double> s{0.9, 0.8, 0.3};
    CHECK(auc(s, std::vector<int>{1, 1, 0}) == 1.0);
    CHECK(auc(s, std::vector<int>{0, 0, 1}) == 0.0);
    CHECK(auc(std::vector<double>{1, 1, 1, 1}, std::vector<int>{1, 0, 1, 0}) == 0.5);
    CHECK(auc(std::vector<double>{0.1, 0.5, 0.5, 0.9}, std::vector<int>{0, 0, 1, 1}) == 0.875);
    CHECK_THROWS_AS(auc(s, std::vector<int>{1, 1, 1}), Error);
}

TEST_CASE("auc of random scores averages one half") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    double sum = 0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> s(100);
        std::vector<int> y(100);
        for (int i = 0; i < 100; ++i) {
            s[std::size_t(i)] = u(rng);
            y[std::size_t(i)] = i % 2;
        }
        sum += auc(s, y);
    }
    CHECK(std::abs(sum / 1000 - 0.5) <= 0.05);
}

TEST_CASE("total auc averages one-vs-rest") {
    Eigen::MatrixXd scores(4, 3);
    scores << 0.9, 0.05, 0.05, 0.1, 0.8, 0.1, 0.2, 0.2, 0.6, 0.7, 0.2, 0.1;
    const std::vector<int> labels{0, 1, 2, 0};
    CHECK(total_auc(scores, {0, 1, 2}, labels) == 1.0);
}

TEST_CASE("classifiers on a separable toy") {
    Eigen::MatrixXd x(8, 2);
    x << 0, 0, 0, 1, 1, 0, 1, 1, 5, 5, 5, 6, 6, 5, 6, 6;
    const std::vector<int> y{0, 0, 0, 0, 1, 1, 1, 1};
    for (auto kind : {ClassifierKind::logistic, ClassifierKind::rsm}) {
        const Classifier c = train_classifier(x, y, kind);
        CHECK(c.predict(x) == y);
        CHECK(c.scores(x).cols() == 2);
    }
    CHECK_THROWS_AS(train_classifier(x, std::vector<int>(8, 1), ClassifierKind::logistic), Error);
    CHECK_THROWS_AS(train_classifier(x, std::vector<int>(8, 1), ClassifierKind::rsm), Error);
    CHECK(parse_classifier_kind(to_string(ClassifierKind::rsm)) == ClassifierKind::rsm);
}

TEST_CASE("logistic one-vs-rest on three classes") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0, 0.3);
    const double cx[3] = {0, 4, 0}, cy[3] = {0, 0, 4};
    Eigen::MatrixXd x(60, 2);
    std::vector<int> y(60);
    for (int i = 0; i < 60; ++i) {
        const int c = i % 3;
        x(i, 0) = cx[c] + noise(rng);
        x(i, 1) = cy[c] + noise(rng);
        y[std::size_t(i)] = c + 10;
    }
    const Classifier c = train_classifier(x, y, ClassifierKind::logistic);
    CHECK(c.classes == std::vector<int>{10, 11, 12});
    CHECK(c.predict(x) == y);
}

TEST_CASE("rsm matches a training vector to its own class") {
    Eigen::MatrixXd x(3, 2);
    x << 0, 0, 1, 0, 0, 1;
    const std::vector<int> y{4, 7, 9};
    const Classifier c = train_classifier(x, y, ClassifierKind::rsm);
    CHECK(c.predict(x) == y);
}

TEST_CASE("rsm predictions ignore rank-preserving rescaling after binning") {
    const Graph g = stochastic_block_model({30, 30}, {{0.3, 0.02}, {0.02, 0.1}}, 4);
    const LearnConfig cfg;
    const auto base = base_features(g, ElementKind::node, cfg.families, cfg.operators);
    FeatureMatrix plain(ElementKind::node, g.num_nodes()), scaled(ElementKind::node, g.num_nodes());
    for (const auto& col : base) {
        plain.add_column({}, log_bin_transform(col.values, cfg.alpha), 1);
        scaled.add_column({}, log_bin_transform(((col.values.array() + 1).sqrt() * 7 - 2).matrix(), cfg.alpha), 1);
    }
    std::vector<int> y(g.num_nodes());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i < 30 ? 0 : 1;
    const Classifier a = train_classifier(plain.to_dense(), y, ClassifierKind::rsm);
    const Classifier b = train_classifier(scaled.to_dense(), y, ClassifierKind::rsm);
    CHECK(a.predict(plain.to_dense()) == b.predict(scaled.to_dense()));
}

TEST_CASE("labels files") {
    std::istringstream edges("a b\nb c\nc a\n");
    const Graph g = read_edge_list(edges, false, false);
    std::istringstream node_labels("a 1\nc 0\n");
    const auto nl = read_labels(node_labels, g, ElementKind::node);
    CHECK(nl == std::vector<int>{1, -1, 0});
    std::istringstream edge_labels("a b 3\nb:c 4\n");
    const auto el = read_labels(edge_labels, g, ElementKind::edge);
    CHECK(el == std::vector<int>{3, 4, -1});
    std::istringstream bad("zz 1\n");
    CHECK_THROWS_AS(read_labels(bad, g, ElementKind::node), ParseError);
}

TEST_CASE("generators are seeded") {
    const Graph a = erdos_renyi(500, 10, 7), b = erdos_renyi(500, 10, 7);
    CHECK(a.num_edges() == 2500);
    CHECK(edge_pairs(a) == edge_pairs(b));
    CHECK(edge_pairs(a).size() == 2500);
    std::vector<int> block;
    const Graph s = stochastic_block_model({10, 20}, {{0.5, 0.1}, {0.1, 0.5}}, 3, &block);
    CHECK(s.num_nodes() == 30);
    CHECK(block.size() == 30);
    CHECK(block[9] == 0);
    CHECK(block[10] == 1);
    const Graph pa = preferential_attachment(100, 2, 5);
    CHECK(pa.num_nodes() == 100);
    CHECK(edge_pairs(pa) == edge_pairs(preferential_attachment(100, 2, 5)));
}

TEST_CASE("degenerate transfer equals within-network evaluation") {
    std::vector<int> block;
    const Graph g = stochastic_block_model({40, 40}, {{0.25, 0.02}, {0.02, 0.08}}, 6, &block);
    const LabeledGraph train{"sbm", g, block};
    TaskConfig cfg;
    const auto rows = run_transfer_experiment(train, {train, train}, cfg, false);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].auc == rows[1].auc);
    CHECK(rows[0].graph == "sbm");

    const auto r = learn(g, cfg.learn);
    const Eigen::MatrixXd x = r.features.to_dense();
    const Classifier c = train_classifier(x, block, cfg.classifier, cfg.params);
    const Eigen::MatrixXd s = c.scores(x);
    std::vector<double> p(s.rows());
    for (Eigen::Index i = 0; i < s.rows(); ++i) p[std::size_t(i)] = s(i, 1);
    CHECK(rows[0].auc == auc(p, block));
}

TEST_CASE("transfer to a graph without any training node") {
    std::vector<int> b1, b2;
    const LabeledGraph train{"a", stochastic_block_model({30, 30}, {{0.3, 0.02}, {0.02, 0.1}}, 1, &b1), b1};
    const LabeledGraph test{"b", stochastic_block_model({25, 45}, {{0.3, 0.02}, {0.02, 0.1}}, 2, &b2), b2};
    const auto rows = run_transfer_experiment(train, {test}, TaskConfig{}, false);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].auc >= 0.0);
    CHECK(rows[0].auc <= 1.0);
}

TEST_CASE("experiments are deterministic and report one row per method") {
    const Graph g = stochastic_block_model({50, 50}, {{0.2, 0.01}, {0.01, 0.05}}, 8);
    TaskConfig cfg;
    const auto a = run_link_prediction(g, "sbm", cfg);
    const auto b = run_link_prediction(g, "sbm", cfg);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].method == to_string(kPairOperators[i]));
        CHECK(a[i].auc == b[i].auc);
    }

    std::vector<int> labels(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const auto ep = g.endpoints(e);
        labels[e] = (ep.src < 50) == (ep.dst < 50) ? 1 : 0;
    }
    const LabeledGraph data{"sbm", g, labels};
    CHECK(run_link_classification(data, cfg).size() == 4);
    TaskConfig edge_cfg = cfg;
    edge_cfg.learn.kind = ElementKind::edge;
    CHECK(run_link_classification(data, edge_cfg).size() == 1);

    std::vector<int> node_labels(100);
    for (int i = 0; i < 100; ++i) node_labels[std::size_t(i)] = i < 50 ? 0 : 1;
    TaskConfig sel = cfg;
    sel.select = 5;
    sel.classifier = ClassifierKind::rsm;
    const auto nc = run_node_classification({"sbm", g, node_labels}, sel);
    REQUIRE(nc.size() == 1);
    CHECK(nc[0].method == "rsm");
}

TEST_CASE("reports and sidecars") {
    std::ostringstream os;
    write_report(os, "operator", {{"g", "mean", 0.75}});
    CHECK(os.str() == "graph,operator,auc\ng,mean,0.750000\n");
    const std::string path = (std::filesystem::temp_directory_path() / "grafl_test_report.csv").string();
    save_report(path, "classifier", {{"g", "rsm", 0.5}}, {{"seed", "3"}});
    CHECK(std::filesystem::exists(path));
    std::ifstream meta(path + ".meta.json");
    std::stringstream ss;
    ss << meta.rdbuf();
    CHECK(ss.str().find("\"seed\"") != std::string::npos);
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".meta.json");
}
