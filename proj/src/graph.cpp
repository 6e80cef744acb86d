#include "grafl/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "grafl/error.hpp"
#include "grafl/parallel.hpp"

namespace grafl {

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) { return (std::uint64_t(a) << 32) | b; }

void split_ws(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
}

bool is_skippable(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

double parse_real(std::string_view tok, std::size_t line_no) {
    std::string s(tok);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ParseError("invalid number '" + s + "'", line_no);
    return v;
}

Adjacency build_csr(std::size_t n, std::span<const Graph::Endpoints> arcs,
                    std::span<const EdgeId> arc_edge) {
    Adjacency adj;
    adj.offsets.assign(n + 1, 0);
    for (const auto& a : arcs) ++adj.offsets[a.src + 1];
    std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
    adj.targets.resize(arcs.size());
    adj.edges.resize(arcs.size());
    std::vector<std::size_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const std::size_t slot = fill[arcs[i].src]++;
        adj.targets[slot] = arcs[i].dst;
        adj.edges[slot] = arc_edge[i];
    }
    std::vector<std::pair<NodeId, EdgeId>> buf;
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t lo = adj.offsets[v], hi = adj.offsets[v + 1];
        if (hi - lo < 2) continue;
        buf.clear();
        for (std::size_t k = lo; k < hi; ++k) buf.emplace_back(adj.targets[k], adj.edges[k]);
        std::sort(buf.begin(), buf.end());
        for (std::size_t k = lo; k < hi; ++k) {
            adj.targets[k] = buf[k - lo].first;
            adj.edges[k] = buf[k - lo].second;
        }
    }
    return adj;
}

/// Reusable BFS state for neighborhood queries.
class NeighborhoodScanner {
public:
    explicit NeighborhoodScanner(const Graph& g) : g_(g) {}

    void collect(GraphElement e, NeighborhoodSelector sel, std::vector<std::uint32_t>& out) {
        out.clear();
        const std::size_t count = g_.num_elements(e.kind);
        if (stamp_.size() != count) stamp_.assign(count, 0);
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        stamp_[e.index] = epoch_;
        frontier_.assign(1, e.index);
        for (int h = 0; h < sel.hops && !frontier_.empty(); ++h) {
            next_.clear();
            for (std::uint32_t x : frontier_) {
                if (e.kind == ElementKind::node)
                    expand_node(x, sel.direction);
                else
                    expand_edge(x, sel.direction);
            }
            frontier_.swap(next_);
        }
        std::sort(out_buffer_.begin(), out_buffer_.end());
        out.swap(out_buffer_);
        out_buffer_.clear();
    }

private:
    void visit(std::uint32_t y) {
        if (stamp_[y] == epoch_) return;
        stamp_[y] = epoch_;
        next_.push_back(y);
        out_buffer_.push_back(y);
    }

    void expand_node(NodeId v, Direction d) {
        if (d != Direction::in)
            for (NodeId u : g_.out_neighbors(v)) visit(u);
        if (d != Direction::out)
            for (NodeId u : g_.in_neighbors(v)) visit(u);
    }

    void visit_edges(std::span<const EdgeId> es) {
        for (EdgeId f : es) {
            const auto ep = g_.endpoints(f);
            if (ep.src != ep.dst) visit(f);
        }
    }

    void expand_edge(EdgeId e, Direction d) {
        const auto ep = g_.endpoints(e);
        for (NodeId v : {ep.src, ep.dst}) {
            if (d != Direction::in) visit_edges(g_.out_edges(v));
            if (d != Direction::out) visit_edges(g_.in_edges(v));
            if (ep.src == ep.dst) break;
        }
    }

    const Graph& g_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<std::uint32_t> frontier_, next_, out_buffer_;
};

}  // namespace

const Eigen::VectorXd* AttributeTable::find(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return &columns[i];
    return nullptr;
}

Graph Graph::from_edges(std::size_t n, std::span<const Endpoints> edges, bool directed,
                        std::span<const double> weights) {
    if (!weights.empty() && weights.size() != edges.size())
        throw Error("weight count does not match edge count");
    Graph g;
    g.n_ = n;
    g.directed_ = directed;

    std::unordered_map<std::uint64_t, EdgeId> seen;
    seen.reserve(edges.size() * 2);
    g.endpoints_.reserve(edges.size());
    if (!weights.empty()) g.weights_.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [s, d] = edges[i];
        if (s >= n || d >= n) throw Error("edge endpoint out of range");
        const std::uint64_t key = directed ? pair_key(s, d) : pair_key(std::min(s, d), std::max(s, d));
        auto [it, inserted] = seen.try_emplace(key, EdgeId(g.endpoints_.size()));
        if (inserted) {
            g.endpoints_.push_back({s, d});
            if (!weights.empty()) g.weights_.push_back(weights[i]);
        } else if (!weights.empty()) {
            g.weights_[it->second] += weights[i];
        }
    }

    const std::size_t m = g.endpoints_.size();
    std::vector<Endpoints> arcs;
    std::vector<EdgeId> arc_edge;
    arcs.reserve(directed ? m : 2 * m);
    arc_edge.reserve(arcs.capacity());
    for (EdgeId e = 0; e < m; ++e) {
        arcs.push_back(g.endpoints_[e]);
        arc_edge.push_back(e);
        if (!directed && g.endpoints_[e].src != g.endpoints_[e].dst) {
            arcs.push_back({g.endpoints_[e].dst, g.endpoints_[e].src});
            arc_edge.push_back(e);
        }
    }
    g.out_ = build_csr(n, arcs, arc_edge);
    if (directed) {
        for (auto& a : arcs) std::swap(a.src, a.dst);
        g.in_ = build_csr(n, arcs, arc_edge);
    } else {
        g.in_ = g.out_;
    }
    return g;
}

std::optional<EdgeId> Graph::find_edge(NodeId src, NodeId dst) const {
    if (src >= n_ || dst >= n_) return std::nullopt;
    auto row = out_.row(src);
    auto it = std::lower_bound(row.begin(), row.end(), dst);
    if (it == row.end() || *it != dst) return std::nullopt;
    return out_.edges[out_.offsets[src] + std::size_t(it - row.begin())];
}

std::optional<NodeId> Graph::find_node(const std::string& name) const {
    auto it = name_index_.find(name);
    if (it == name_index_.end()) return std::nullopt;
    return it->second;
}

void Graph::set_node_names(std::vector<std::string> names) {
    if (names.size() != n_) throw Error("node name count does not match node count");
    names_ = std::move(names);
    name_index_.clear();
    for (NodeId v = 0; v < names_.size(); ++v) name_index_.emplace(names_[v], v);
}

void Graph::set_node_attributes(AttributeTable attrs) {
    for (const auto& c : attrs.columns)
        if (std::size_t(c.size()) != n_) throw Error("node attribute column has wrong length");
    node_attrs_ = std::move(attrs);
}

void Graph::set_edge_attributes(AttributeTable attrs) {
    for (const auto& c : attrs.columns)
        if (std::size_t(c.size()) != num_edges()) throw Error("edge attribute column has wrong length");
    edge_attrs_ = std::move(attrs);
}

Graph read_edge_list(std::istream& in, bool directed, bool weighted) {
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> names;
    std::vector<Graph::Endpoints> edges;
    std::vector<double> weights;
    std::vector<std::string_view> tok;
    std::string line;
    std::size_t line_no = 0;

    auto intern = [&](std::string_view t) {
        auto [it, inserted] = ids.try_emplace(std::string(t), NodeId(names.size()));
        if (inserted) names.emplace_back(t);
        return it->second;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (is_skippable(line)) continue;
        split_ws(line, tok);
        if (tok.size() < 2) throw ParseError("expected 'src dst" + std::string(weighted ? " weight'" : "'"), line_no);
        if (weighted && tok.size() < 3) throw ParseError("missing weight column", line_no);
        if (tok.size() > 3 || (!weighted && tok.size() > 2))
            throw ParseError("unexpected extra columns", line_no);
        const NodeId s = intern(tok[0]);
        const NodeId d = intern(tok[1]);
        edges.push_back({s, d});
        if (weighted) weights.push_back(parse_real(tok[2], line_no));
    }
    Graph g = Graph::from_edges(names.size(), edges, directed, weights);
    g.set_node_names(std::move(names));
    return g;
}

Graph load_edge_list(const std::string& path, bool directed, bool weighted) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list '" + path + "'");
    return read_edge_list(in, directed, weighted);
}

namespace {

void read_attributes(Graph& g, std::istream& in, ElementKind kind) {
    const std::size_t key_cols = kind == ElementKind::node ? 1 : 2;
    std::vector<std::string_view> tok;
    std::string line;
    std::size_t line_no = 0;
    AttributeTable table;
    std::vector<std::string> header;
    bool resolved = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (is_skippable(line)) continue;
        split_ws(line, tok);
        if (header.empty()) {
            header.assign(tok.begin(), tok.end());
            continue;
        }
        if (!resolved) {
            // The header may or may not name the key columns.
            const std::size_t values = tok.size() > key_cols ? tok.size() - key_cols : 0;
            const std::size_t skip = header.size() == values + key_cols ? key_cols : 0;
            if (values == 0 || header.size() - skip != values)
                throw ParseError("row has " + std::to_string(tok.size()) + " columns but the header names " +
                                     std::to_string(header.size()),
                                 line_no);
            table.names.assign(header.begin() + std::ptrdiff_t(skip), header.end());
            table.columns.assign(table.names.size(), Eigen::VectorXd::Zero(Eigen::Index(g.num_elements(kind))));
            resolved = true;
        }
        if (tok.size() != key_cols + table.names.size())
            throw ParseError("expected " + std::to_string(key_cols + table.names.size()) + " columns", line_no);
        auto lookup = [&](std::string_view t) {
            auto v = g.find_node(std::string(t));
            if (!v) throw ParseError("unknown node '" + std::string(t) + "'", line_no);
            return *v;
        };
        std::size_t row;
        if (kind == ElementKind::node) {
            row = lookup(tok[0]);
        } else {
            auto e = g.find_edge(lookup(tok[0]), lookup(tok[1]));
            if (!e) throw ParseError("no edge '" + std::string(tok[0]) + " " + std::string(tok[1]) + "'", line_no);
            row = *e;
        }
        for (std::size_t c = 0; c < table.names.size(); ++c)
            table.columns[c][Eigen::Index(row)] = parse_real(tok[key_cols + c], line_no);
    }
    if (!resolved && !header.empty()) {
        table.names = header;
        table.columns.assign(table.names.size(), Eigen::VectorXd::Zero(Eigen::Index(g.num_elements(kind))));
    }
    if (kind == ElementKind::node)
        g.set_node_attributes(std::move(table));
    else
        g.set_edge_attributes(std::move(table));
}

}  // namespace

void read_node_attributes(Graph& g, std::istream& in) { read_attributes(g, in, ElementKind::node); }
void read_edge_attributes(Graph& g, std::istream& in) { read_attributes(g, in, ElementKind::edge); }

void load_node_attributes(Graph& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open attribute file '" + path + "'");
    read_node_attributes(g, in);
}

void load_edge_attributes(Graph& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open attribute file '" + path + "'");
    read_edge_attributes(g, in);
}

std::vector<std::uint32_t> neighbors(const Graph& g, GraphElement e, NeighborhoodSelector sel) {
    if (e.index >= g.num_elements(e.kind))
        throw Error("graph element " + std::to_string(e.index) + " out of range");
    if (sel.hops < 1) throw ConfigError("neighborhood hops must be >= 1");
    NeighborhoodScanner scan(g);
    std::vector<std::uint32_t> out;
    scan.collect(e, sel, out);
    return out;
}

NeighborhoodIndex build_neighborhoods(const Graph& g, ElementKind kind, NeighborhoodSelector sel,
                                      int workers) {
    if (sel.hops < 1) throw ConfigError("neighborhood hops must be >= 1");
    const std::size_t count = g.num_elements(kind);
    NeighborhoodIndex idx;
    idx.offsets.assign(count + 1, 0);

    // Node 1-hop neighborhoods are CSR rows (minus self-loops); skip the BFS.
    if (kind == ElementKind::node && sel.hops == 1 && (sel.direction != Direction::all || !g.directed())) {
        const Adjacency& adj = sel.direction == Direction::in ? g.in_adjacency() : g.out_adjacency();
        for (NodeId v = 0; v < count; ++v) {
            std::size_t d = 0;
            for (NodeId u : adj.row(v)) d += (u != v);
            idx.offsets[v + 1] = idx.offsets[v] + d;
        }
        idx.ids.resize(idx.offsets[count]);
        parallel_for(std::int64_t(count), workers, [&](std::int64_t i) {
            const NodeId v = NodeId(i);
            std::size_t k = idx.offsets[v];
            for (NodeId u : adj.row(v))
                if (u != v) idx.ids[k++] = u;
        });
        return idx;
    }

    std::vector<std::vector<std::uint32_t>> rows(count);
    const int nthreads = std::max(1, workers);
    const std::int64_t chunk = (std::int64_t(count) + nthreads - 1) / nthreads;
    parallel_for(nthreads, nthreads, [&](std::int64_t t) {
        NeighborhoodScanner scan(g);
        const std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(std::int64_t(count), lo + chunk);
        for (std::int64_t i = lo; i < hi; ++i) scan.collect({kind, std::uint32_t(i)}, sel, rows[std::size_t(i)]);
    });
    for (std::size_t i = 0; i < count; ++i) idx.offsets[i + 1] = idx.offsets[i] + rows[i].size();
    idx.ids.reserve(idx.offsets[count]);
    for (auto& r : rows) {
        idx.ids.insert(idx.ids.end(), r.begin(), r.end());
        std::vector<std::uint32_t>().swap(r);
    }
    return idx;
}

bool Skeleton::adjacent(NodeId a, NodeId b) const {
    if (degree(a) > degree(b)) std::swap(a, b);
    auto r = row(a);
    return std::binary_search(r.begin(), r.end(), b);
}

Skeleton build_skeleton(const Graph& g) {
    Skeleton s;
    s.n = g.num_nodes();
    s.edge_of.assign(g.num_edges(), -1);
    std::unordered_map<std::uint64_t, std::uint32_t> ids;
    if (g.directed()) ids.reserve(g.num_edges() * 2);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        auto [a, b] = g.endpoints(e);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!g.directed()) {
            s.edge_of[e] = std::int64_t(s.edges.size());
            s.edges.push_back({a, b});
            continue;
        }
        auto [it, inserted] = ids.try_emplace(pair_key(a, b), std::uint32_t(s.edges.size()));
        if (inserted) s.edges.push_back({a, b});
        s.edge_of[e] = it->second;
    }
    std::vector<Graph::Endpoints> arcs;
    std::vector<EdgeId> arc_edge;
    arcs.reserve(2 * s.edges.size());
    arc_edge.reserve(2 * s.edges.size());
    for (std::uint32_t k = 0; k < s.edges.size(); ++k) {
        arcs.push_back(s.edges[k]);
        arcs.push_back({s.edges[k].dst, s.edges[k].src});
        arc_edge.push_back(k);
        arc_edge.push_back(k);
    }
    Adjacency adj = build_csr(s.n, arcs, arc_edge);
    s.offsets = std::move(adj.offsets);
    s.adj = std::move(adj.targets);
    s.inc = std::move(adj.edges);
    return s;
}

std::vector<std::uint32_t> kcore_numbers(const Graph& g) {
    const Skeleton s = build_skeleton(g);
    const std::size_t n = s.n;
    std::vector<std::uint32_t> deg(n), core(n, 0);
    std::size_t max_deg = 0;
    for (NodeId v = 0; v < n; ++v) {
        deg[v] = std::uint32_t(s.degree(v));
        max_deg = std::max<std::size_t>(max_deg, deg[v]);
    }
    // Bucket peeling (Batagelj-Zaversnik).
    std::vector<std::size_t> bin(max_deg + 2, 0), pos(n);
    std::vector<NodeId> vert(n);
    for (NodeId v = 0; v < n; ++v) ++bin[deg[v]];
    std::size_t start = 0;
    for (std::size_t d = 0; d <= max_deg; ++d) {
        const std::size_t c = bin[d];
        bin[d] = start;
        start += c;
    }
    for (NodeId v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        vert[pos[v]] = v;
    }
    for (std::size_t d = max_deg + 1; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const NodeId v = vert[i];
        core[v] = deg[v];
        for (NodeId u : s.row(v)) {
            if (deg[u] > deg[v]) {
                const std::uint32_t du = deg[u];
                const std::size_t pu = pos[u], pw = bin[du];
                const NodeId w = vert[pw];
                if (u != w) {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    return core;
}

}  // namespace grafl
