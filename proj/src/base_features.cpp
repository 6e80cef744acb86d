#include "grafl/base_features.hpp"

#include <algorithm>
#include <array>

#include "grafl/error.hpp"
#include "grafl/orbits.hpp"
#include "grafl/parallel.hpp"

namespace grafl {

namespace {

BaseColumn make_column(BaseFamily family, std::string variant, Eigen::VectorXd values) {
    return {{family, std::move(variant)}, std::move(values)};
}

struct NodeDegrees {
    Eigen::VectorXd out, in;
};

NodeDegrees degrees(const Graph& g, bool weighted) {
    const auto n = Eigen::Index(g.num_nodes());
    NodeDegrees d{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (weighted) {
            for (EdgeId e : g.out_edges(v)) d.out[v] += g.weight(e);
            for (EdgeId e : g.in_edges(v)) d.in[v] += g.weight(e);
        } else {
            d.out[v] = double(g.out_degree(v));
            d.in[v] = double(g.in_degree(v));
        }
    }
    return d;
}

Eigen::VectorXd total_degree(const Graph& g, const NodeDegrees& d) {
    return g.directed() ? Eigen::VectorXd(d.out + d.in) : d.out;
}

double aggregate(OperatorTag tag, std::span<const double> values) {
    if (values.empty()) return 0.0;
    double acc = 0.0;
    switch (tag) {
        case OperatorTag::sum:
        case OperatorTag::mean:
            for (double v : values) acc += v;
            return tag == OperatorTag::mean ? acc / double(values.size()) : acc;
        case OperatorTag::max:
            return *std::max_element(values.begin(), values.end());
        case OperatorTag::hadamard:
            acc = 1.0;
            for (double v : values) {
                if (v == 0.0) return 0.0;
                acc *= v;
            }
            return acc;
        default:
            return 0.0;
    }
}

bool lifts(OperatorTag tag) {
    return tag == OperatorTag::hadamard || tag == OperatorTag::mean || tag == OperatorTag::sum ||
           tag == OperatorTag::max;
}

}  // namespace

std::vector<BaseColumn> node_degree_features(const Graph& g) {
    std::vector<BaseColumn> cols;
    const NodeDegrees d = degrees(g, false);
    cols.push_back(make_column(BaseFamily::degree, "in", d.in));
    cols.push_back(make_column(BaseFamily::degree, "out", d.out));
    cols.push_back(make_column(BaseFamily::degree, "total", total_degree(g, d)));
    if (g.weighted()) {
        const NodeDegrees w = degrees(g, true);
        cols.push_back(make_column(BaseFamily::degree, "weighted-in", w.in));
        cols.push_back(make_column(BaseFamily::degree, "weighted-out", w.out));
        cols.push_back(make_column(BaseFamily::degree, "weighted-total", total_degree(g, w)));
    }
    const auto core = kcore_numbers(g);
    Eigen::VectorXd kc(Eigen::Index(core.size()));
    for (std::size_t v = 0; v < core.size(); ++v) kc[Eigen::Index(v)] = core[v];
    cols.push_back(make_column(BaseFamily::kcore, "core", std::move(kc)));
    return cols;
}

std::vector<BaseColumn> edge_degree_features(const Graph& g) {
    std::vector<BaseColumn> cols;
    const auto m = Eigen::Index(g.num_edges());

    auto add_family = [&](const NodeDegrees& d, const std::string& prefix) {
        for (const char* comb : {"sum", "product"}) {
            const bool plus = comb[0] == 's';
            auto op = [plus](double a, double b) { return plus ? a + b : a * b; };
            std::array<Eigen::VectorXd, 5> c;
            for (auto& v : c) v.resize(m);
            for (EdgeId e = 0; e < g.num_edges(); ++e) {
                const auto [v, u] = g.endpoints(e);
                const double ov = d.out[v], iv = d.in[v], ou = d.out[u], iu = d.in[u];
                c[0][e] = op(ov, ou);
                c[1][e] = op(iv, iu);
                c[2][e] = op(iv, ou);
                c[3][e] = op(ov, iu);
                c[4][e] = op(op(ov, iv), op(ou, iu));
            }
            const std::array<const char*, 5> names{"out-out", "in-in", "in-out", "out-in", "total-total"};
            for (int k = 0; k < 5; ++k)
                cols.push_back(make_column(BaseFamily::degree, prefix + comb + ":" + names[std::size_t(k)],
                                           std::move(c[std::size_t(k)])));
        }
    };
    add_family(degrees(g, false), "");
    if (g.weighted()) add_family(degrees(g, true), "weighted-");

    const auto core = kcore_numbers(g);
    Eigen::VectorXd kc(m);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const auto [v, u] = g.endpoints(e);
        kc[e] = std::min(core[v], core[u]);
    }
    cols.push_back(make_column(BaseFamily::kcore, "core", std::move(kc)));
    return cols;
}

std::vector<BaseColumn> egonet_features(const Graph& g, ElementKind kind, int workers) {
    const std::size_t count = g.num_elements(kind);
    const auto rows = Eigen::Index(count);
    // within-in, within-out, within-among, external-out, external-in
    Eigen::Matrix<double, Eigen::Dynamic, 5> acc = Eigen::Matrix<double, Eigen::Dynamic, 5>::Zero(rows, 5);
    const std::size_t n = g.num_nodes();
    const int nthreads = std::max(1, workers);

#pragma omp parallel num_threads(nthreads) if (nthreads > 1)
    {
        // 0 = outside, 1 = egonet member, 2 = ego center
        std::vector<std::uint8_t> mark(n, 0);
        std::vector<NodeId> members;
#pragma omp for schedule(dynamic, 256)
        for (std::int64_t i = 0; i < std::int64_t(count); ++i) {
            members.clear();
            auto add = [&](NodeId v, std::uint8_t level) {
                if (mark[v] == 0) members.push_back(v);
                mark[v] = std::max(mark[v], level);
            };
            std::array<NodeId, 2> centers{};
            std::size_t ncenters = 1;
            if (kind == ElementKind::node) {
                centers[0] = NodeId(i);
            } else {
                const auto ep = g.endpoints(EdgeId(i));
                centers = {ep.src, ep.dst};
                ncenters = ep.src == ep.dst ? 1 : 2;
            }
            for (std::size_t c = 0; c < ncenters; ++c) add(centers[c], 2);
            for (std::size_t c = 0; c < ncenters; ++c) {
                for (NodeId u : g.out_neighbors(centers[c])) add(u, 1);
                for (NodeId u : g.in_neighbors(centers[c])) add(u, 1);
            }
            double within_in = 0, within_out = 0, among = 0, leaving = 0, entering = 0;
            for (NodeId a : members) {
                for (NodeId b : g.out_neighbors(a)) {
                    if (a == b) continue;
                    if (mark[b] == 0) {
                        leaving += 1;
                    } else if (mark[a] == 2) {
                        within_out += 1;
                    } else if (mark[b] == 2) {
                        within_in += 1;
                    } else {
                        among += 1;
                    }
                }
                for (NodeId b : g.in_neighbors(a))
                    if (mark[b] == 0) entering += 1;
            }
            if (!g.directed()) among /= 2;
            acc.row(i) << within_in, within_out, among, leaving, entering;
            for (NodeId v : members) mark[v] = 0;
        }
    }

    std::vector<BaseColumn> cols;
    const std::array<const char*, 5> names{"within-in", "within-out", "within-among", "external-out",
                                           "external-in"};
    for (int k = 0; k < 5; ++k) cols.push_back(make_column(BaseFamily::egonet, names[std::size_t(k)], acc.col(k)));
    return cols;
}

std::vector<BaseColumn> orbit_features(const Graph& g, ElementKind kind, int workers) {
    const OrbitCounts counts =
        kind == ElementKind::node ? node_orbit_counts(g, workers) : edge_orbit_counts(g, workers);
    std::vector<BaseColumn> cols;
    for (Eigen::Index k = 0; k < counts.cols(); ++k)
        cols.push_back(make_column(BaseFamily::orbit, std::to_string(k), counts.col(k).cast<double>()));
    return cols;
}

std::vector<BaseColumn> lift_attributes(const Graph& g, ElementKind kind,
                                        const std::vector<RelationalOperator>& ops) {
    std::vector<BaseColumn> cols;
    const AttributeTable& same = kind == ElementKind::node ? g.node_attributes() : g.edge_attributes();
    const AttributeTable& other = kind == ElementKind::node ? g.edge_attributes() : g.node_attributes();

    for (std::size_t a = 0; a < same.names.size(); ++a)
        cols.push_back(make_column(BaseFamily::attribute, same.names[a], same.columns[a]));

    std::vector<OperatorTag> tags;
    for (const auto& op : ops)
        if (lifts(op.tag) && std::find(tags.begin(), tags.end(), op.tag) == tags.end()) tags.push_back(op.tag);

    const auto rows = Eigen::Index(g.num_elements(kind));
    std::vector<double> buf;
    std::vector<EdgeId> incident;
    for (std::size_t a = 0; a < other.names.size(); ++a) {
        const Eigen::VectorXd& src = other.columns[a];
        for (OperatorTag tag : tags) {
            Eigen::VectorXd col(rows);
            for (Eigen::Index i = 0; i < rows; ++i) {
                buf.clear();
                if (kind == ElementKind::edge) {
                    const auto [v, u] = g.endpoints(EdgeId(i));
                    buf = {src[v], src[u]};
                } else {
                    incident.assign(g.out_edges(NodeId(i)).begin(), g.out_edges(NodeId(i)).end());
                    incident.insert(incident.end(), g.in_edges(NodeId(i)).begin(), g.in_edges(NodeId(i)).end());
                    std::sort(incident.begin(), incident.end());
                    incident.erase(std::unique(incident.begin(), incident.end()), incident.end());
                    for (EdgeId e : incident) buf.push_back(src[e]);
                }
                col[i] = aggregate(tag, buf);
            }
            cols.push_back(make_column(BaseFamily::lifted_attribute, other.names[a] + ":" + to_string(tag),
                                       std::move(col)));
        }
    }
    return cols;
}

std::vector<BaseColumn> base_features(const Graph& g, ElementKind kind, const BaseFamilies& families,
                                      const std::vector<RelationalOperator>& lift_ops, int workers) {
    std::vector<BaseColumn> cols;
    auto append = [&](std::vector<BaseColumn>&& more) {
        for (auto& c : more) cols.push_back(std::move(c));
    };
    if (families.degree || families.kcore) {
        auto deg = kind == ElementKind::node ? node_degree_features(g) : edge_degree_features(g);
        for (auto& c : deg) {
            const bool is_core = c.descriptor.family == BaseFamily::kcore;
            if ((is_core && families.kcore) || (!is_core && families.degree)) cols.push_back(std::move(c));
        }
    }
    if (families.egonet) append(egonet_features(g, kind, workers));
    if (families.orbit) append(orbit_features(g, kind, workers));
    if (families.attributes) append(lift_attributes(g, kind, lift_ops));
    return cols;
}

const Eigen::VectorXd& BaseFeatureCache::get(const BaseFeatureDescriptor& d) {
    auto key = std::make_pair(d.family, d.variant);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    if (std::find(loaded_.begin(), loaded_.end(), d.family) == loaded_.end()) load_family(d.family, d);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    std::string why;
    if (d.variant.rfind("weighted-", 0) == 0 && !g_.weighted())
        why = "requires edge weights";
    else if (d.family == BaseFamily::attribute || d.family == BaseFamily::lifted_attribute)
        why = "attribute not present on this graph";
    else
        why = "unknown variant for " + to_string(kind_) + " features";
    throw TransferError("base feature family '" + to_string(d.family) + "' variant '" + d.variant +
                        "' unavailable: " + why);
}

void BaseFeatureCache::load_family(BaseFamily family, const BaseFeatureDescriptor& d) {
    std::vector<BaseColumn> cols;
    switch (family) {
        case BaseFamily::degree:
        case BaseFamily::kcore:
            cols = kind_ == ElementKind::node ? node_degree_features(g_) : edge_degree_features(g_);
            break;
        case BaseFamily::egonet:
            cols = egonet_features(g_, kind_, workers_);
            break;
        case BaseFamily::orbit:
            cols = orbit_features(g_, kind_, workers_);
            break;
        case BaseFamily::attribute:
            cols = lift_attributes(g_, kind_, {});
            break;
        case BaseFamily::lifted_attribute: {
            const auto colon = d.variant.rfind(':');
            std::vector<RelationalOperator> ops;
            if (colon != std::string::npos) {
                try {
                    ops.push_back({parse_operator_tag(d.variant.substr(colon + 1))});
                } catch (const Error&) {
                }
            }
            cols = lift_attributes(g_, kind_, ops);
            break;
        }
    }
    for (auto& c : cols) cache_.try_emplace({c.descriptor.family, c.descriptor.variant}, std::move(c.values));
    if (family == BaseFamily::degree || family == BaseFamily::kcore) {
        loaded_.push_back(BaseFamily::degree);
        loaded_.push_back(BaseFamily::kcore);
    } else if (family != BaseFamily::lifted_attribute) {
        loaded_.push_back(family);
    }
}

}  // namespace grafl
