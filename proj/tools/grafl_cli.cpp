#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grafl/diffusion.hpp"
#include "grafl/error.hpp"
#include "grafl/learner.hpp"
#include "grafl/matrix_io.hpp"
#include "grafl/parallel.hpp"
#include "grafl/relational.hpp"
#include "grafl/tasks.hpp"

using namespace grafl;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// "mean,sum,weighted-lp:2,rbf:0.5"
std::vector<RelationalOperator> parse_operators(const std::string& list) {
    std::vector<RelationalOperator> ops;
    for (const auto& item : split(list, ',')) {
        const auto colon = item.find(':');
        RelationalOperator op;
        op.tag = parse_operator_tag(item.substr(0, colon));
        if (colon != std::string::npos) {
            const double v = std::stod(item.substr(colon + 1));
            if (op.tag == OperatorTag::weighted_lp)
                op.p = v;
            else if (op.tag == OperatorTag::rbf)
                op.sigma = v;
            else
                throw ConfigError("operator '" + item.substr(0, colon) + "' takes no parameter");
        }
        op.validate();
        ops.push_back(op);
    }
    if (ops.empty()) throw ConfigError("operator list is empty");
    return ops;
}

BaseFamilies parse_families(const std::string& list) {
    BaseFamilies f{false, false, false, false, false};
    for (const auto& item : split(list, ',')) {
        if (item == "degree")
            f.degree = true;
        else if (item == "kcore")
            f.kcore = true;
        else if (item == "egonet")
            f.egonet = true;
        else if (item == "orbit")
            f.orbit = true;
        else if (item == "attributes")
            f.attributes = true;
        else
            throw ConfigError("unknown base feature family '" + item + "'");
    }
    return f;
}

DiffusionMethod parse_method(const std::string& s) {
    if (s == "row-stochastic") return DiffusionMethod::row_stochastic;
    if (s == "laplacian") return DiffusionMethod::laplacian;
    throw ConfigError("unknown diffusion method '" + s + "'");
}

DiffusionAttach parse_attach(const std::string& s) {
    if (s == "append") return DiffusionAttach::append;
    if (s == "replace") return DiffusionAttach::replace;
    throw ConfigError("unknown diffusion attach mode '" + s + "'");
}

// ---- option groups shared by several subcommands ----

struct Common {
    std::uint64_t seed = 1;
    int workers = 1;
    std::string config;
    std::string manifest;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "Random seed");
    app->add_option("--workers", c.workers, "Worker threads (GRAFL_WORKERS overrides)");
    app->add_option("--config", c.config, "key=value file; command-line flags take precedence");
    app->add_option("--manifest", c.manifest, "Run manifest path");
}

struct GraphInput {
    std::string path;
    bool directed = false;
    bool weighted = false;
    std::string node_attrs;
    std::string edge_attrs;

    Graph load() const {
        Graph g = load_edge_list(path, directed, weighted);
        if (!node_attrs.empty()) load_node_attributes(g, node_attrs);
        if (!edge_attrs.empty()) load_edge_attributes(g, edge_attrs);
        return g;
    }
};

void add_graph(CLI::App* app, GraphInput& in, bool required = true) {
    auto* opt = app->add_option("--graph", in.path, "Edge list (src dst [weight] per line)");
    if (required) opt->required();
    app->add_flag("--directed", in.directed, "Treat edges as directed");
    app->add_flag("--weighted", in.weighted, "Read a third weight column");
    app->add_option("--node-attrs", in.node_attrs, "Node attribute CSV");
    app->add_option("--edge-attrs", in.edge_attrs, "Edge attribute CSV");
}

struct LearnFlags {
    std::string kind = "node";
    double alpha = 0.5;
    double lambda = 0.7;
    int layers = 3;
    int hops = 1;
    std::string operators = "mean,sum,max";
    std::string criterion = "agreement";
    std::string families = "degree,kcore,egonet,orbit,attributes";
    std::string diffusion = "none";
    double theta = 0.5;
    int diffusion_iterations = 10;
    double diffusion_tolerance = 0.0;
    std::string diffusion_attach = "append";

    LearnConfig config(int workers) const {
        LearnConfig c;
        c.kind = parse_element_kind(kind);
        c.alpha = alpha;
        c.lambda = lambda;
        c.max_layers = layers;
        c.hops = hops;
        c.operators = parse_operators(operators);
        if (criterion == "agreement")
            c.criterion = CriterionTag::agreement;
        else if (criterion == "mutual-information")
            c.criterion = CriterionTag::mutual_information;
        else
            throw ConfigError("unknown criterion '" + criterion + "'");
        c.families = parse_families(families);
        if (diffusion != "none") {
            DiffusionConfig d;
            d.method = parse_method(diffusion);
            d.theta = theta;
            d.iterations = diffusion_iterations;
            d.tolerance = diffusion_tolerance;
            d.attach = parse_attach(diffusion_attach);
            c.diffusion = d;
        }
        c.workers = workers;
        c.validate();
        return c;
    }
};

void add_learn_flags(CLI::App* app, LearnFlags& f) {
    app->add_option("--kind", f.kind, "Element kind: node or edge");
    app->add_option("--alpha", f.alpha, "Log-binning fraction in (0,1)");
    app->add_option("--lambda", f.lambda, "Pruning threshold");
    app->add_option("--layers", f.layers, "Maximum number of feature layers");
    app->add_option("--hops", f.hops, "Neighborhood distance");
    app->add_option("--operators", f.operators, "Relational operators, e.g. mean,sum,max,weighted-lp:2,rbf:0.5");
    app->add_option("--criterion", f.criterion, "agreement or mutual-information");
    app->add_option("--families", f.families, "Base feature families");
    app->add_option("--diffusion", f.diffusion, "none, row-stochastic or laplacian");
    app->add_option("--theta", f.theta, "Laplacian retention weight");
    app->add_option("--diffusion-iterations", f.diffusion_iterations, "Diffusion steps");
    app->add_option("--diffusion-tolerance", f.diffusion_tolerance, "Early stop on max change");
    app->add_option("--diffusion-attach", f.diffusion_attach, "append or replace");
}

struct TaskFlags {
    std::string classifier = "logistic";
    std::string pair_ops = "mean,product,weighted-l1,weighted-l2";
    double train_fraction = 0.5;
    std::size_t select = 0;
    double beta = 0.0;
    std::string name;
    std::vector<std::string> test_graphs;
    std::vector<std::string> test_labels;
    std::string out;

    TaskConfig config(const LearnConfig& learn, std::uint64_t seed) const {
        TaskConfig c;
        c.learn = learn;
        c.classifier = parse_classifier_kind(classifier);
        c.params.seed = seed;
        c.pair_ops.clear();
        for (const auto& s : split(pair_ops, ',')) c.pair_ops.push_back(parse_pair_operator(s));
        if (c.pair_ops.empty()) throw ConfigError("pair operator list is empty");
        c.train_fraction = train_fraction;
        c.seed = seed;
        c.select = select;
        c.beta = beta;
        return c;
    }
};

void add_task_flags(CLI::App* app, TaskFlags& f) {
    app->add_option("--classifier", f.classifier, "logistic or rsm");
    app->add_option("--pair-ops", f.pair_ops, "Pair operators for node-pair examples");
    app->add_option("--train-fraction", f.train_fraction, "Share of labeled examples used for training");
    app->add_option("--select", f.select, "Keep the top-k features by supervised selection (0 = all)");
    app->add_option("--beta", f.beta, "Redundancy weight for supervised selection");
    app->add_option("--name", f.name, "Graph name in the report (default: file stem)");
    app->add_option("--test-graph", f.test_graphs, "Transfer test graph (repeatable)");
    app->add_option("--test-labels", f.test_labels, "Labels for the matching --test-graph");
    app->add_option("--out", f.out, "Report CSV")->required();
}

// ---- manifest ----

struct Manifest {
    std::string command;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    json timings = json::object();
};

json option_values(const CLI::App* app) {
    json cfg = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config" || name == "manifest") continue;
        if (opt->get_expected_min() == 0) {
            cfg[name] = opt->count() > 0;
        } else if (opt->count() > 0) {
            const auto r = opt->reduced_results();
            if (r.size() == 1)
                cfg[name] = r.front();
            else
                cfg[name] = r;
        } else {
            cfg[name] = opt->get_default_str();
        }
    }
    return cfg;
}

void write_manifest(const std::string& path, const Manifest& m, const CLI::App* app, const Common& c, int workers) {
    json j{{"command", m.command},
           {"config", option_values(app)},
           {"config_file", c.config},
           {"seed", c.seed},
           {"workers", workers},
           {"inputs", m.inputs},
           {"outputs", m.outputs},
           {"timings", m.timings}};
    write_atomic(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

std::string manifest_path(const Common& c, const std::string& primary, const std::string& command) {
    if (!c.manifest.empty()) return c.manifest;
    if (!primary.empty()) return primary + ".manifest.json";
    return "grafl-" + command + ".manifest.json";
}

json timings_json(const PhaseTimings& t) {
    return {{"base", t.base}, {"search", t.search}, {"pruning", t.pruning}, {"diffusion", t.diffusion}};
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

/// Reorders a value table's rows into element order of `g`.
Eigen::MatrixXd align_rows(const ValueTable& t, const Graph& g, ElementKind kind) {
    const std::size_t n = g.num_elements(kind);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[element_label(g, kind, std::uint32_t(i))] = i;
    if (t.ids.size() != n)
        throw Error("feature file has " + std::to_string(t.ids.size()) + " rows but the graph has " + std::to_string(n) +
                    " " + to_string(kind) + "s");
    Eigen::MatrixXd x(Eigen::Index(n), t.values.cols());
    std::vector<bool> seen(n, false);
    for (std::size_t r = 0; r < t.ids.size(); ++r) {
        auto it = index.find(t.ids[r]);
        if (it == index.end()) throw Error("feature file row '" + t.ids[r] + "' is not a " + to_string(kind) + " of the graph");
        if (seen[it->second]) throw Error("feature file repeats row '" + t.ids[r] + "'");
        seen[it->second] = true;
        x.row(Eigen::Index(it->second)) = t.values.row(Eigen::Index(r));
    }
    return x;
}

std::string stats_csv(const MatrixStats& s) {
    std::ostringstream os;
    os << "rows,cols,nonzeros,density,sparse_bytes,dense_bytes\n"
       << s.rows << ',' << s.cols << ',' << s.nonzeros << ',' << std::setprecision(6) << s.density << ','
       << s.sparse_bytes << ',' << s.dense_bytes << '\n';
    return os.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_atomic(path, [&](std::ostream& os) { os << text; });
}

/// Splices `--config` file entries in front of the command-line flags so the
/// latter win. Lines are `key = value`; `#` starts a comment.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty() || args.size() < 2) return args;
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    std::vector<std::string> injected;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("config file '" + path + "': expected key=value", lineno);
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("config file '" + path + "': empty key", lineno);
        injected.push_back("--" + key + "=" + value);
    }
    std::vector<std::string> out{args[0], args[1]};
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + 2, args.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layer-wise relational graph feature learning"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    GraphInput graph;
    LearnFlags lf;
    TaskFlags tf;

    // learn
    std::string out_funcs, out_feats, format = "csv";
    auto* learn_cmd = app.add_subcommand("learn", "Learn a function set and its feature matrix");
    add_common(learn_cmd, common);
    add_graph(learn_cmd, graph);
    add_learn_flags(learn_cmd, lf);
    learn_cmd->add_option("--out-funcs", out_funcs, "Function file (JSON)")->required();
    learn_cmd->add_option("--out-feats", out_feats, "Feature matrix output")->required();
    learn_cmd->add_option("--format", format, "csv or triplet");

    // extract
    std::string funcs;
    auto* extract_cmd = app.add_subcommand("extract", "Evaluate a learned function set on a graph");
    add_common(extract_cmd, common);
    add_graph(extract_cmd, graph);
    extract_cmd->add_option("--funcs", funcs, "Function file")->required();
    extract_cmd->add_option("--out-feats", out_feats, "Feature matrix output (default stdout)");
    extract_cmd->add_option("--format", format, "csv or triplet");

    // diffuse
    std::string feats, out;
    auto* diffuse_cmd = app.add_subcommand("diffuse", "Smooth feature columns over the graph");
    add_common(diffuse_cmd, common);
    add_graph(diffuse_cmd, graph);
    diffuse_cmd->add_option("--feats", feats, "Feature CSV with an element_id column")->required();
    diffuse_cmd->add_option("--kind", lf.kind, "Element kind: node or edge");
    diffuse_cmd->add_option("--method", lf.diffusion, "row-stochastic or laplacian");
    diffuse_cmd->add_option("--theta", lf.theta, "Laplacian retention weight");
    diffuse_cmd->add_option("--iterations", lf.diffusion_iterations, "Diffusion steps");
    diffuse_cmd->add_option("--tolerance", lf.diffusion_tolerance, "Early stop on max change");
    diffuse_cmd->add_option("--attach", lf.diffusion_attach, "append or replace");
    diffuse_cmd->add_option("--out", out, "Output CSV")->required();

    // linkpred
    std::string labels;
    double removed = 0.5;
    bool keep_connected = false;
    auto* linkpred_cmd = app.add_subcommand("linkpred", "Link prediction, or link classification with --labels");
    add_common(linkpred_cmd, common);
    add_graph(linkpred_cmd, graph);
    add_learn_flags(linkpred_cmd, lf);
    add_task_flags(linkpred_cmd, tf);
    linkpred_cmd->add_option("--labels", labels, "Edge labels; switches to link classification");
    linkpred_cmd->add_option("--removed", removed, "Fraction of edges held out as positives");
    linkpred_cmd->add_flag("--keep-connected", keep_connected, "Never isolate a node when removing edges");

    // nodeclass
    auto* nodeclass_cmd = app.add_subcommand("nodeclass", "Node classification within or across graphs");
    add_common(nodeclass_cmd, common);
    add_graph(nodeclass_cmd, graph);
    add_learn_flags(nodeclass_cmd, lf);
    add_task_flags(nodeclass_cmd, tf);
    nodeclass_cmd->add_option("--labels", labels, "Node labels (id label per line)")->required();

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Density and storage of a feature matrix");
    add_common(stats_cmd, common);
    add_graph(stats_cmd, graph, false);
    stats_cmd->add_option("--funcs", funcs, "Function file to extract on --graph");
    stats_cmd->add_option("--feats", feats, "Feature CSV to measure instead");
    stats_cmd->add_option("--out", out, "Report CSV (default stdout)");

    // bench
    std::string sizes = "1000,10000";
    double degree = 10;
    auto* bench_cmd = app.add_subcommand("bench", "Time learning on seeded Erdos-Renyi graphs");
    add_common(bench_cmd, common);
    add_learn_flags(bench_cmd, lf);
    bench_cmd->add_option("--sizes", sizes, "Comma-separated node counts");
    bench_cmd->add_option("--degree", degree, "Average degree");
    bench_cmd->add_option("--out", out, "Timing CSV (default stdout)");

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = expand_config(args);
        std::vector<const char*> cargs;
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(int(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "grafl: error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "grafl: error: " << e.what() << '\n';
        return 2;
    }

    const CLI::App* cmd = app.get_subcommands().front();
    Manifest m;
    m.command = cmd->get_name();
    try {
        const int workers = resolve_workers(common.workers);
        const auto t0 = Clock::now();
        std::string primary;

        if (cmd == learn_cmd) {
            const MatrixFormat fmt = parse_matrix_format(format);
            const LearnConfig cfg = lf.config(workers);
            const Graph g = graph.load();
            m.inputs = {graph.path};
            const LearnResult r = learn(g, cfg);
            save_functions(r.functions, out_funcs);
            save_matrix(out_feats, g, r.features, fmt);
            m.outputs = {out_funcs, out_feats};
            m.timings = timings_json(r.timings);
            primary = out_funcs;
        } else if (cmd == extract_cmd) {
            const MatrixFormat fmt = parse_matrix_format(format);
            const FunctionSet fs = load_functions(funcs);
            const Graph g = graph.load();
            m.inputs = {graph.path, funcs};
            const FeatureMatrix x = extract(g, fs, workers);
            if (out_feats.empty()) {
                if (fmt == MatrixFormat::csv)
                    write_matrix_csv(std::cout, g, x);
                else
                    write_matrix_triplets(std::cout, g, x);
            } else {
                save_matrix(out_feats, g, x, fmt);
                m.outputs = {out_feats};
            }
            m.timings = {{"extract", seconds_since(t0)}};
            primary = out_feats;
        } else if (cmd == diffuse_cmd) {
            const ElementKind kind = parse_element_kind(lf.kind);
            DiffusionConfig d;
            d.method = parse_method(lf.diffusion == "none" ? "row-stochastic" : lf.diffusion);
            d.theta = lf.theta;
            d.iterations = lf.diffusion_iterations;
            d.tolerance = lf.diffusion_tolerance;
            d.attach = parse_attach(lf.diffusion_attach);
            d.validate();
            const Graph g = graph.load();
            const ValueTable t = load_values_csv(feats);
            m.inputs = {graph.path, feats};
            const Eigen::MatrixXd x = align_rows(t, g, kind);
            FeatureEvaluator eval(g, kind, workers);
            const Eigen::MatrixXd y = diffuse_values(eval, x, d);
            ValueTable res;
            for (std::size_t i = 0; i < g.num_elements(kind); ++i) res.ids.push_back(element_label(g, kind, std::uint32_t(i)));
            if (d.attach == DiffusionAttach::append) {
                res.columns = t.columns;
                for (const auto& c : t.columns) res.columns.push_back(c + "_diffused");
                res.values.resize(x.rows(), 2 * x.cols());
                res.values << x, y;
            } else {
                res.columns = t.columns;
                res.values = y;
            }
            write_atomic(out, [&](std::ostream& os) { write_values_csv(os, res); });
            m.outputs = {out};
            m.timings = {{"diffusion", seconds_since(t0)}};
            primary = out;
        } else if (cmd == linkpred_cmd || cmd == nodeclass_cmd) {
            const bool node_task = cmd == nodeclass_cmd;
            const TaskConfig cfg = tf.config(lf.config(workers), common.seed);
            if (tf.test_graphs.size() != tf.test_labels.size())
                throw ConfigError("each --test-graph needs a matching --test-labels");
            if (!tf.test_graphs.empty() && labels.empty())
                throw ConfigError("transfer experiments need --labels for the training graph");
            const ElementKind label_kind = node_task ? ElementKind::node : ElementKind::edge;
            const Graph g = graph.load();
            m.inputs = {graph.path};
            const std::string name = tf.name.empty() ? stem(graph.path) : tf.name;
            std::vector<ReportRow> rows;
            std::string column = node_task ? "classifier" : "operator";
            if (!tf.test_graphs.empty()) {
                const LabeledGraph train{name, g, load_labels(labels, g, label_kind)};
                m.inputs.push_back(labels);
                std::vector<LabeledGraph> tests;
                for (std::size_t k = 0; k < tf.test_graphs.size(); ++k) {
                    GraphInput gi = graph;
                    gi.path = tf.test_graphs[k];
                    gi.node_attrs.clear();
                    gi.edge_attrs.clear();
                    Graph tg = gi.load();
                    std::vector<int> tl = load_labels(tf.test_labels[k], tg, label_kind);
                    tests.push_back({stem(gi.path), std::move(tg), std::move(tl)});
                    m.inputs.push_back(tf.test_graphs[k]);
                    m.inputs.push_back(tf.test_labels[k]);
                }
                rows = run_transfer_experiment(train, tests, cfg, !node_task);
                if (!node_task && cfg.learn.kind == ElementKind::node) column = "operator";
            } else if (node_task) {
                rows = run_node_classification({name, g, load_labels(labels, g, ElementKind::node)}, cfg);
                m.inputs.push_back(labels);
            } else if (!labels.empty()) {
                rows = run_link_classification({name, g, load_labels(labels, g, ElementKind::edge)}, cfg);
                m.inputs.push_back(labels);
            } else {
                rows = run_link_prediction(g, name, cfg, removed, keep_connected);
            }
            std::vector<std::pair<std::string, std::string>> meta{{"command", m.command},
                                                                  {"seed", std::to_string(common.seed)}};
            const json values = option_values(cmd);
            for (const auto& [k, v] : values.items()) meta.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
            save_report(tf.out, column, rows, meta);
            m.outputs = {tf.out, tf.out + ".meta.json"};
            m.timings = {{"total", seconds_since(t0)}};
            primary = tf.out;
        } else if (cmd == stats_cmd) {
            MatrixStats s;
            if (!feats.empty()) {
                const ValueTable t = load_values_csv(feats);
                m.inputs = {feats};
                s.rows = std::size_t(t.values.rows());
                s.cols = std::size_t(t.values.cols());
                s.nonzeros = std::size_t((t.values.array() != 0).count());
                const double size = double(s.rows) * double(s.cols);
                s.density = size > 0 ? double(s.nonzeros) / size : 0.0;
                s.sparse_bytes = 2 * s.nonzeros;
                s.dense_bytes = 8 * s.rows * s.cols;
            } else {
                if (graph.path.empty() || funcs.empty()) throw ConfigError("stats needs --feats, or --graph with --funcs");
                const Graph g = graph.load();
                m.inputs = {graph.path, funcs};
                s = stats(extract(g, load_functions(funcs), workers));
            }
            emit(out, stats_csv(s));
            if (!out.empty() && out != "-") m.outputs = {out};
            m.timings = {{"total", seconds_since(t0)}};
            primary = out == "-" ? "" : out;
        } else if (cmd == bench_cmd) {
            const LearnConfig cfg = lf.config(workers);
            std::ostringstream csv;
            csv << "n,m,seconds,base_seconds,search_seconds,pruning_seconds,diffusion_seconds\n";
            json runs = json::array();
            for (const auto& s : split(sizes, ',')) {
                const std::size_t n = std::stoul(s);
                const Graph g = erdos_renyi(n, degree, common.seed);
                const auto t1 = Clock::now();
                const LearnResult r = learn(g, cfg);
                const double secs = seconds_since(t1);
                csv << n << ',' << g.num_edges() << ',' << secs << ',' << r.timings.base << ',' << r.timings.search
                    << ',' << r.timings.pruning << ',' << r.timings.diffusion << '\n';
                json row = timings_json(r.timings);
                row["n"] = n;
                row["m"] = g.num_edges();
                row["seconds"] = secs;
                runs.push_back(row);
                if (out.empty() || out == "-") {
                    std::cout << csv.str() << std::flush;
                    csv.str("");
                }
            }
            if (!out.empty() && out != "-") {
                emit(out, csv.str());
                m.outputs = {out};
            }
            m.timings = {{"runs", runs}, {"total", seconds_since(t0)}};
            primary = out == "-" ? "" : out;
        }

        write_manifest(manifest_path(common, primary, m.command), m, cmd, common, workers);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (auto& ch : msg)
            if (ch == '\n') ch = ' ';
        std::cerr << "grafl: error: " << msg << '\n';
        return 1;
    }
    return 0;
}
