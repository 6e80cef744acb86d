#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "grafl/classifiers.hpp"
#include "grafl/feature_matrix.hpp"
#include "grafl/graph.hpp"
#include "grafl/learner.hpp"

namespace grafl {

// ---- metrics ----

/// Rank AUC of binary labels (nonzero = positive), ties counted by midranks.
/// Throws if either class is absent.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Uniform average of one-vs-rest AUCs. `scores` has one column per entry of
/// `classes`; classes absent from `labels` (or covering every label) are skipped.
double total_auc(const Eigen::MatrixXd& scores, const std::vector<int>& classes, std::span<const int> labels);

// ---- pair features ----

enum class PairOperator { mean, product, weighted_l1, weighted_l2 };

std::string to_string(PairOperator op);
PairOperator parse_pair_operator(const std::string& s);
inline constexpr PairOperator kPairOperators[] = {PairOperator::mean, PairOperator::product,
                                                  PairOperator::weighted_l1, PairOperator::weighted_l2};

/// (a+b)/2, a*b, |a-b| or (a-b)^2, element-wise.
Eigen::VectorXd pair_features(const Eigen::VectorXd& a, const Eigen::VectorXd& b, PairOperator op);

// ---- datasets ----

struct LinkPredSplit {
    Graph train;  // the input graph minus the positives
    std::vector<Graph::Endpoints> positives;
    std::vector<Graph::Endpoints> negatives;
};

/// Removes floor(fraction*m) edges uniformly at random as positives and
/// samples as many non-adjacent node pairs as negatives. With
/// `keep_connected`, an edge is only removed if both endpoints keep at least
/// one edge. Throws if the graph has fewer than two edges or too few
/// non-adjacent pairs.
LinkPredSplit make_linkpred_split(const Graph& g, double fraction, std::uint64_t seed, bool keep_connected = false);

/// Copy of `g` restricted to the listed edge ids, keeping node names and
/// attributes.
Graph edge_subgraph(const Graph& g, const std::vector<EdgeId>& keep);

/// Labels per element (node or edge) of `g`; -1 where no label is given.
/// Lines are `element_id label`; edges may also be written `src dst label`.
std::vector<int> read_labels(std::istream& in, const Graph& g, ElementKind kind);
std::vector<int> load_labels(const std::string& path, const Graph& g, ElementKind kind);

// ---- generators ----

/// G(n, m) with m = round(n*avg_degree/2) distinct undirected edges.
Graph erdos_renyi(std::size_t n, double avg_degree, std::uint64_t seed);

/// Undirected stochastic block model; `block_of` receives each node's block.
Graph stochastic_block_model(const std::vector<std::size_t>& sizes, const std::vector<std::vector<double>>& p,
                             std::uint64_t seed, std::vector<int>* block_of = nullptr);

/// Undirected preferential attachment: each new node links to `links`
/// existing nodes chosen proportionally to degree.
Graph preferential_attachment(std::size_t n, std::size_t links, std::uint64_t seed);

// ---- experiments ----

struct ReportRow {
    std::string graph;
    std::string method;  // pair operator or classifier
    double auc = 0;
};

struct TaskConfig {
    LearnConfig learn;
    ClassifierKind classifier = ClassifierKind::logistic;
    ClassifierParams params;
    std::vector<PairOperator> pair_ops{std::begin(kPairOperators), std::end(kPairOperators)};
    double train_fraction = 0.5;
    std::uint64_t seed = 1;
    std::size_t select = 0;  // supervised selection budget, 0 = use all features
    double beta = 0.0;
};

struct LabeledGraph {
    std::string name;
    Graph graph;
    std::vector<int> labels;  // per node or per edge, -1 = unlabeled
};

/// Link prediction: split, learn node features on the training graph, build
/// pair features per operator, fit on a stratified share of the examples and
/// report test AUC per operator.
std::vector<ReportRow> run_link_prediction(const Graph& g, const std::string& name, const TaskConfig& cfg,
                                           double removed_fraction = 0.5, bool keep_connected = false);

/// Node classification with a stratified train/test split of the labeled nodes.
std::vector<ReportRow> run_node_classification(const LabeledGraph& data, const TaskConfig& cfg);

/// Edge classification with a stratified split of the labeled edges. With
/// node features, one row per pair operator; with edge features (learn.kind
/// = edge), a single row.
std::vector<ReportRow> run_link_classification(const LabeledGraph& data, const TaskConfig& cfg);

/// Learns on `train`, extracts the same functions on every test graph, fits
/// the classifier once on all labeled training elements and scores every
/// test graph. `edge_labels` selects link classification.
std::vector<ReportRow> run_transfer_experiment(const LabeledGraph& train, const std::vector<LabeledGraph>& tests,
                                               const TaskConfig& cfg, bool edge_labels);

/// `graph,<method_column>,auc` CSV.
void write_report(std::ostream& os, const std::string& method_column, const std::vector<ReportRow>& rows);

/// Report plus a `<path>.meta.json` sidecar holding the given key/value pairs.
void save_report(const std::string& path, const std::string& method_column, const std::vector<ReportRow>& rows,
                 const std::vector<std::pair<std::string, std::string>>& meta);

}  // namespace grafl
