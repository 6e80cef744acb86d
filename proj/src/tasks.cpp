#include "grafl/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "grafl/error.hpp"
#include "grafl/matrix_io.hpp"
#include "grafl/selection.hpp"

namespace grafl {

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw Error("auc: scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (double s : scores)
        if (std::isnan(s)) throw Error("auc: NaN score");
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double pos_rank = 0;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid = (double(i + 1) + double(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]]) {
                pos_rank += mid;
                ++pos;
            }
        i = j;
    }
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0) throw Error("auc needs both positive and negative examples");
    return (pos_rank - double(pos) * double(pos + 1) / 2.0) / (double(pos) * double(neg));
}

double total_auc(const Eigen::MatrixXd& scores, const std::vector<int>& classes, std::span<const int> labels) {
    if (std::size_t(scores.cols()) != classes.size() || std::size_t(scores.rows()) != labels.size())
        throw Error("total_auc: score matrix does not match classes/labels");
    double sum = 0;
    std::size_t used = 0;
    std::vector<int> bin(labels.size());
    std::vector<double> col(labels.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) pos += bin[i] = labels[i] == classes[c];
        if (pos == 0 || pos == labels.size()) continue;
        for (std::size_t i = 0; i < labels.size(); ++i) col[i] = scores(Eigen::Index(i), Eigen::Index(c));
        sum += auc(col, bin);
        ++used;
    }
    if (used == 0) throw Error("total_auc: no class has both positive and negative examples");
    return sum / double(used);
}

std::string to_string(PairOperator op) {
    switch (op) {
        case PairOperator::mean: return "mean";
        case PairOperator::product: return "product";
        case PairOperator::weighted_l1: return "weighted-l1";
        case PairOperator::weighted_l2: return "weighted-l2";
    }
    return "?";
}

PairOperator parse_pair_operator(const std::string& s) {
    for (auto op : kPairOperators)
        if (to_string(op) == s) return op;
    throw ConfigError("unknown pair operator '" + s + "' (expected mean, product, weighted-l1 or weighted-l2)");
}

Eigen::VectorXd pair_features(const Eigen::VectorXd& a, const Eigen::VectorXd& b, PairOperator op) {
    if (a.size() != b.size()) throw Error("pair_features: vectors differ in length");
    switch (op) {
        case PairOperator::mean: return (a + b) / 2.0;
        case PairOperator::product: return a.cwiseProduct(b);
        case PairOperator::weighted_l1: return (a - b).cwiseAbs();
        case PairOperator::weighted_l2: return (a - b).array().square().matrix();
    }
    return {};
}

Graph edge_subgraph(const Graph& g, const std::vector<EdgeId>& keep) {
    std::vector<Graph::Endpoints> eps;
    std::vector<double> w;
    eps.reserve(keep.size());
    for (EdgeId e : keep) {
        eps.push_back(g.endpoints(e));
        if (g.weighted()) w.push_back(g.weight(e));
    }
    Graph out = Graph::from_edges(g.num_nodes(), eps, g.directed(), w);
    if (!g.node_names().empty()) out.set_node_names(g.node_names());
    out.set_node_attributes(g.node_attributes());
    AttributeTable ea;
    ea.names = g.edge_attributes().names;
    for (const auto& col : g.edge_attributes().columns) {
        Eigen::VectorXd c(Eigen::Index(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) c[Eigen::Index(i)] = col[keep[i]];
        ea.columns.push_back(std::move(c));
    }
    out.set_edge_attributes(std::move(ea));
    return out;
}

LinkPredSplit make_linkpred_split(const Graph& g, double fraction, std::uint64_t seed, bool keep_connected) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("removed edge fraction must lie in (0,1)");
    const std::size_t m = g.num_edges(), n = g.num_nodes();
    if (m < 2) throw Error("link prediction needs at least 2 edges, graph has " + std::to_string(m));
    const auto k = std::size_t(std::floor(fraction * double(m)));
    if (k == 0) throw Error("removed edge fraction selects no edges");

    std::mt19937_64 rng(seed);
    std::vector<EdgeId> perm(m);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<bool> removed(m, false);
    LinkPredSplit split;
    if (!keep_connected) {
        for (std::size_t i = 0; i < k; ++i) removed[perm[i]] = true;
    } else {
        std::vector<std::size_t> deg(n, 0);
        for (EdgeId e = 0; e < m; ++e) {
            const auto ep = g.endpoints(e);
            if (ep.src == ep.dst) continue;
            ++deg[ep.src];
            ++deg[ep.dst];
        }
        std::size_t taken = 0;
        for (std::size_t i = 0; i < m && taken < k; ++i) {
            const auto ep = g.endpoints(perm[i]);
            if (ep.src == ep.dst || deg[ep.src] < 2 || deg[ep.dst] < 2) continue;
            --deg[ep.src];
            --deg[ep.dst];
            removed[perm[i]] = true;
            ++taken;
        }
        if (taken < k)
            throw Error("cannot remove " + std::to_string(k) + " edges while keeping every node covered (only " +
                        std::to_string(taken) + " removable)");
    }
    std::vector<EdgeId> keep;
    for (std::size_t i = 0; i < m; ++i)
        if (removed[perm[i]]) split.positives.push_back(g.endpoints(perm[i]));
    for (EdgeId e = 0; e < m; ++e)
        if (!removed[e]) keep.push_back(e);
    split.train = edge_subgraph(g, keep);

    auto key = [&](NodeId a, NodeId b) {
        if (!g.directed() && a > b) std::swap(a, b);
        return std::uint64_t(a) * n + b;
    };
    std::unordered_set<std::uint64_t> taken;
    for (EdgeId e = 0; e < m; ++e) {
        const auto ep = g.endpoints(e);
        if (ep.src != ep.dst) taken.insert(key(ep.src, ep.dst));
    }
    const double all_pairs = g.directed() ? double(n) * double(n - 1) : double(n) * double(n - 1) / 2.0;
    const double free_pairs = all_pairs - double(taken.size());
    if (free_pairs < double(k))
        throw Error("cannot sample " + std::to_string(k) + " negative pairs: graph has only " +
                    std::to_string(std::size_t(free_pairs)) + " non-adjacent node pairs");

    if (free_pairs <= 4.0 * double(k)) {
        // Dense graph: enumerate every non-edge and draw without replacement.
        std::vector<Graph::Endpoints> pool;
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = g.directed() ? 0 : a + 1; b < n; ++b)
                if (a != b && !taken.count(key(a, b))) pool.push_back({a, b});
        std::shuffle(pool.begin(), pool.end(), rng);
        split.negatives.assign(pool.begin(), pool.begin() + std::ptrdiff_t(k));
    } else {
        std::uniform_int_distribution<NodeId> pick(0, NodeId(n - 1));
        while (split.negatives.size() < k) {
            const NodeId a = pick(rng), b = pick(rng);
            if (a == b || !taken.insert(key(a, b)).second) continue;
            split.negatives.push_back({a, b});
        }
    }
    return split;
}

std::vector<int> read_labels(std::istream& in, const Graph& g, ElementKind kind) {
    std::vector<int> labels(g.num_elements(kind), -1);
    auto node = [&](const std::string& t, std::size_t line) -> NodeId {
        if (auto v = g.find_node(t)) return *v;
        if (g.node_names().empty()) {
            try {
                std::size_t used = 0;
                const unsigned long v = std::stoul(t, &used);
                if (used == t.size() && v < g.num_nodes()) return NodeId(v);
            } catch (const std::exception&) {
            }
        }
        throw ParseError("unknown node '" + t + "'", line);
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '#') continue;
        int label = 0;
        try {
            std::size_t used = 0;
            label = std::stoi(tok.back(), &used);
            if (used != tok.back().size()) throw std::invalid_argument("label");
        } catch (const std::exception&) {
            throw ParseError("label '" + tok.back() + "' is not an integer", lineno);
        }
        if (label < 0) throw ParseError("labels must be non-negative", lineno);
        if (kind == ElementKind::node) {
            if (tok.size() != 2) throw ParseError("expected 'node label'", lineno);
            labels[node(tok[0], lineno)] = label;
            continue;
        }
        std::string a, b;
        if (tok.size() == 3) {
            a = tok[0];
            b = tok[1];
        } else if (tok.size() == 2 && tok[0].find(':') != std::string::npos) {
            a = tok[0].substr(0, tok[0].find(':'));
            b = tok[0].substr(tok[0].find(':') + 1);
        } else {
            throw ParseError("expected 'src dst label' or 'src:dst label'", lineno);
        }
        const auto e = g.find_edge(node(a, lineno), node(b, lineno));
        if (!e) throw ParseError("no edge " + a + " -> " + b, lineno);
        labels[*e] = label;
    }
    return labels;
}

std::vector<int> load_labels(const std::string& path, const Graph& g, ElementKind kind) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open label file '" + path + "'");
    return read_labels(in, g, kind);
}

Graph erdos_renyi(std::size_t n, double avg_degree, std::uint64_t seed) {
    if (n < 2) throw ConfigError("erdos_renyi needs at least 2 nodes");
    const double max_edges = double(n) * double(n - 1) / 2.0;
    const auto m = std::size_t(std::llround(std::min(max_edges, double(n) * avg_degree / 2.0)));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
    std::vector<std::uint64_t> keys;
    keys.reserve(m + m / 8 + 16);
    while (keys.size() < m) {
        const std::size_t want = m - keys.size();
        for (std::size_t i = 0; i < want + want / 16 + 8; ++i) {
            std::uint64_t a = pick(rng), b = pick(rng);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            keys.push_back(a * n + b);
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    }
    // Every pair is equally likely to be among the distinct draws, so a
    // uniformly random m-subset of them is a uniform G(n, m) edge set.
    std::shuffle(keys.begin(), keys.end(), rng);
    keys.resize(m);
    std::sort(keys.begin(), keys.end());
    std::vector<Graph::Endpoints> eps(m);
    for (std::size_t i = 0; i < m; ++i) eps[i] = {NodeId(keys[i] / n), NodeId(keys[i] % n)};
    return Graph::from_edges(n, eps, false);
}

Graph stochastic_block_model(const std::vector<std::size_t>& sizes, const std::vector<std::vector<double>>& p,
                             std::uint64_t seed, std::vector<int>* block_of) {
    if (p.size() != sizes.size()) throw ConfigError("block probability matrix does not match block count");
    std::vector<int> block;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        if (p[b].size() != sizes.size()) throw ConfigError("block probability matrix must be square");
        block.insert(block.end(), sizes[b], int(b));
    }
    const std::size_t n = block.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Graph::Endpoints> eps;
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
            if (u(rng) < p[std::size_t(block[a])][std::size_t(block[b])]) eps.push_back({a, b});
    if (block_of) *block_of = block;
    return Graph::from_edges(n, eps, false);
}

Graph preferential_attachment(std::size_t n, std::size_t links, std::uint64_t seed) {
    if (links < 1 || n <= links) throw ConfigError("preferential attachment needs 1 <= links < n");
    std::mt19937_64 rng(seed);
    std::vector<Graph::Endpoints> eps;
    std::vector<NodeId> ends;  // every edge endpoint once, so draws follow degree
    for (NodeId a = 0; a <= links; ++a)
        for (NodeId b = a + 1; b <= links; ++b) {
            eps.push_back({a, b});
            ends.push_back(a);
            ends.push_back(b);
        }
    std::vector<NodeId> chosen;
    for (NodeId v = NodeId(links + 1); v < n; ++v) {
        chosen.clear();
        std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
        while (chosen.size() < links) {
            const NodeId t = ends[pick(rng)];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }
        for (NodeId t : chosen) {
            eps.push_back({t, v});
            ends.push_back(t);
            ends.push_back(v);
        }
    }
    return Graph::from_edges(n, eps, false);
}

namespace {

/// Per class, a `fraction` share of the examples (at least one, and at most
/// all but one when possible) goes to training.
std::vector<bool> stratified_split(const std::vector<int>& y, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("train fraction must lie in (0,1)");
    std::mt19937_64 rng(seed);
    std::vector<int> classes = y;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::vector<bool> train(y.size(), false);
    for (int c : classes) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == c) idx.push_back(i);
        std::shuffle(idx.begin(), idx.end(), rng);
        auto take = std::size_t(std::llround(fraction * double(idx.size())));
        take = std::clamp<std::size_t>(take, 1, idx.size() > 1 ? idx.size() - 1 : 1);
        for (std::size_t i = 0; i < take; ++i) train[idx[i]] = true;
    }
    return train;
}

double score_auc(const Classifier& c, const Eigen::MatrixXd& x, const std::vector<int>& y) {
    const Eigen::MatrixXd s = c.scores(x);
    if (c.classes.size() == 2) {
        std::vector<double> col(y.size());
        std::vector<int> pos(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            col[i] = s(Eigen::Index(i), 1);
            pos[i] = y[i] == c.classes[1];
        }
        return auc(col, pos);
    }
    return total_auc(s, c.classes, y);
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<bool>& mask, bool want) {
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i] == want) idx.push_back(Eigen::Index(i));
    return x(idx, Eigen::all);
}

std::vector<int> take(const std::vector<int>& y, const std::vector<bool>& mask, bool want) {
    std::vector<int> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i] == want) out.push_back(y[i]);
    return out;
}

double fit_and_score(const Eigen::MatrixXd& x, const std::vector<int>& y, const std::vector<bool>& train,
                     const TaskConfig& cfg) {
    const Classifier c = train_classifier(take_rows(x, train, true), take(y, train, true), cfg.classifier, cfg.params);
    return score_auc(c, take_rows(x, train, false), take(y, train, false));
}

Eigen::MatrixXd pair_rows(const Eigen::MatrixXd& nodes, const std::vector<Graph::Endpoints>& pairs, PairOperator op) {
    Eigen::MatrixXd out(Eigen::Index(pairs.size()), nodes.cols());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out.row(Eigen::Index(i)) =
            pair_features(nodes.row(pairs[i].src).transpose(), nodes.row(pairs[i].dst).transpose(), op).transpose();
    return out;
}

struct Labeled {
    std::vector<std::uint32_t> ids;
    std::vector<int> y;
};

Labeled labeled_elements(const std::vector<int>& labels) {
    Labeled l;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] >= 0) {
            l.ids.push_back(std::uint32_t(i));
            l.y.push_back(labels[i]);
        }
    return l;
}

std::vector<Graph::Endpoints> endpoints_of(const Graph& g, const std::vector<std::uint32_t>& edges) {
    std::vector<Graph::Endpoints> eps;
    for (auto e : edges) eps.push_back(g.endpoints(e));
    return eps;
}

LearnConfig with_kind(LearnConfig c, ElementKind kind) {
    c.kind = kind;
    return c;
}

/// Feature rows for the labeled elements: one matrix per method.
std::vector<std::pair<std::string, Eigen::MatrixXd>> labeled_features(const Graph& g, const FeatureMatrix& x,
                                                                      const Labeled& l, bool edge_labels,
                                                                      const TaskConfig& cfg) {
    const Eigen::MatrixXd dense = x.to_dense();
    std::vector<std::pair<std::string, Eigen::MatrixXd>> out;
    std::vector<Eigen::Index> rows(l.ids.begin(), l.ids.end());
    if (!edge_labels) {
        out.emplace_back(to_string(cfg.classifier), dense(rows, Eigen::all));
    } else if (x.kind() == ElementKind::edge) {
        out.emplace_back("edge-features", dense(rows, Eigen::all));
    } else {
        const auto eps = endpoints_of(g, l.ids);
        for (auto op : cfg.pair_ops) out.emplace_back(to_string(op), pair_rows(dense, eps, op));
    }
    return out;
}

}  // namespace

std::vector<ReportRow> run_link_prediction(const Graph& g, const std::string& name, const TaskConfig& cfg,
                                           double removed_fraction, bool keep_connected) {
    const LinkPredSplit split = make_linkpred_split(g, removed_fraction, cfg.seed, keep_connected);
    const LearnResult learned = learn(split.train, with_kind(cfg.learn, ElementKind::node));
    const Eigen::MatrixXd nodes = learned.features.to_dense();

    std::vector<Graph::Endpoints> pairs = split.positives;
    pairs.insert(pairs.end(), split.negatives.begin(), split.negatives.end());
    std::vector<int> y(split.positives.size(), 1);
    y.resize(pairs.size(), 0);
    const auto train = stratified_split(y, cfg.train_fraction, cfg.seed + 1);

    std::vector<ReportRow> rows;
    for (auto op : cfg.pair_ops) rows.push_back({name, to_string(op), fit_and_score(pair_rows(nodes, pairs, op), y, train, cfg)});
    return rows;
}

std::vector<ReportRow> run_node_classification(const LabeledGraph& data, const TaskConfig& cfg) {
    if (data.labels.size() != data.graph.num_nodes()) throw Error("node labels do not match the graph");
    const LearnResult learned = learn(data.graph, with_kind(cfg.learn, ElementKind::node));
    const Labeled l = labeled_elements(data.labels);
    const auto train = stratified_split(l.y, cfg.train_fraction, cfg.seed + 1);

    FeatureMatrix x = learned.features;
    if (cfg.select > 0) {
        std::vector<int> train_labels(data.labels.size(), -1);
        for (std::size_t i = 0; i < l.ids.size(); ++i)
            if (train[i]) train_labels[l.ids[i]] = l.y[i];
        std::vector<BinVector> cols;
        for (std::size_t j = 0; j < x.cols(); ++j) cols.push_back(x.column(j));
        const auto chosen = supervised_select(cols, train_labels, cfg.beta, cfg.select);
        std::vector<bool> drop(x.cols(), true);
        for (auto j : chosen) drop[j] = false;
        x.remove_columns(drop);
    }
    const auto feats = labeled_features(data.graph, x, l, false, cfg);
    return {{data.name, feats[0].first, fit_and_score(feats[0].second, l.y, train, cfg)}};
}

std::vector<ReportRow> run_link_classification(const LabeledGraph& data, const TaskConfig& cfg) {
    if (data.labels.size() != data.graph.num_edges()) throw Error("edge labels do not match the graph");
    const LearnResult learned = learn(data.graph, cfg.learn);
    const Labeled l = labeled_elements(data.labels);
    const auto train = stratified_split(l.y, cfg.train_fraction, cfg.seed + 1);
    std::vector<ReportRow> rows;
    for (const auto& [method, x] : labeled_features(data.graph, learned.features, l, true, cfg))
        rows.push_back({data.name, method, fit_and_score(x, l.y, train, cfg)});
    return rows;
}

std::vector<ReportRow> run_transfer_experiment(const LabeledGraph& train, const std::vector<LabeledGraph>& tests,
                                               const TaskConfig& cfg, bool edge_labels) {
    const ElementKind label_kind = edge_labels ? ElementKind::edge : ElementKind::node;
    const LearnConfig lc = edge_labels ? cfg.learn : with_kind(cfg.learn, ElementKind::node);
    if (train.labels.size() != train.graph.num_elements(label_kind))
        throw Error("training labels do not match graph '" + train.name + "'");
    const LearnResult learned = learn(train.graph, lc);
    const Labeled tl = labeled_elements(train.labels);
    const auto train_feats = labeled_features(train.graph, learned.features, tl, edge_labels, cfg);
    std::vector<Classifier> models;
    for (const auto& [method, x] : train_feats) models.push_back(train_classifier(x, tl.y, cfg.classifier, cfg.params));

    std::vector<ReportRow> rows;
    for (const auto& test : tests) {
        if (test.labels.size() != test.graph.num_elements(label_kind))
            throw Error("test labels do not match graph '" + test.name + "'");
        const FeatureMatrix x = extract(test.graph, learned.functions, lc.workers);
        const Labeled l = labeled_elements(test.labels);
        const auto feats = labeled_features(test.graph, x, l, edge_labels, cfg);
        for (std::size_t k = 0; k < feats.size(); ++k)
            rows.push_back({test.name, feats[k].first, score_auc(models[k], feats[k].second, l.y)});
    }
    return rows;
}

void write_report(std::ostream& os, const std::string& method_column, const std::vector<ReportRow>& rows) {
    os << "graph," << method_column << ",auc\n" << std::setprecision(6) << std::fixed;
    for (const auto& r : rows) os << r.graph << ',' << r.method << ',' << r.auc << '\n';
}

void save_report(const std::string& path, const std::string& method_column, const std::vector<ReportRow>& rows,
                 const std::vector<std::pair<std::string, std::string>>& meta) {
    write_atomic(path, [&](std::ostream& os) { write_report(os, method_column, rows); });
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : meta) j[k] = v;
    write_atomic(path + ".meta.json", [&](std::ostream& os) { os << j.dump(1) << '\n'; });
}

}  // namespace grafl
