#include <fstream>
#include <sstream>

#include <json.hpp>

#include "grafl/error.hpp"
#include "grafl/learner.hpp"
#include "grafl/matrix_io.hpp"

namespace grafl {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json operator_json(const RelationalOperator& op) {
    json j{{"tag", to_string(op.tag)}};
    if (op.tag == OperatorTag::weighted_lp) j["p"] = op.p;
    if (op.tag == OperatorTag::rbf) j["sigma"] = op.sigma;
    return j;
}

json diffusion_json(const DiffusionConfig& d) {
    return {{"method", d.method == DiffusionMethod::row_stochastic ? "row-stochastic" : "laplacian"},
            {"theta", d.theta},
            {"iterations", d.iterations},
            {"tolerance", d.tolerance},
            {"attach", d.attach == DiffusionAttach::append ? "append" : "replace"}};
}

json function_json(const RelationalFunction& f) {
    json leaf{{"family", to_string(f.leaf.family)}, {"variant", f.leaf.variant}};
    if (f.leaf_diffusion) leaf["diffuse"] = diffusion_json(*f.leaf_diffusion);
    json chain = json::array();
    for (const auto& s : f.chain) {
        json step{{"op", operator_json(s.op)},
                  {"sel", {{"dir", to_string(s.sel.direction)}, {"hops", s.sel.hops}}}};
        if (s.diffusion) step["diffuse"] = diffusion_json(*s.diffusion);
        chain.push_back(std::move(step));
    }
    json j{{"leaf", std::move(leaf)}, {"chain", std::move(chain)}, {"transform", {{"alpha", f.alpha}, {"bins", f.bins}}}};
    if (f.combinator && f.combinator->other)
        j["combinator"] = {{"kind", f.combinator->kind == CombinatorKind::plus ? "plus" : "times"},
                           {"ref", function_json(*f.combinator->other)}};
    return j;
}

/// Field access that reports the full path of whatever is missing or mistyped.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    Reader at(const std::string& key) const {
        if (!j_.is_object() || !j_.contains(key)) throw SchemaError(join(key) + ": missing required field");
        return {j_.at(key), join(key)};
    }
    Reader at(std::size_t i) const { return {j_.at(i), path_ + "[" + std::to_string(i) + "]"}; }
    bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

    std::size_t array_size() const {
        if (!j_.is_array()) fail("expected an array");
        return j_.size();
    }
    std::string str() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }
    double number() const {
        if (!j_.is_number()) fail("expected a number");
        return j_.get<double>();
    }
    long long integer() const {
        if (!j_.is_number_integer()) fail("expected an integer");
        return j_.get<long long>();
    }
    bool boolean() const {
        if (!j_.is_boolean()) fail("expected a boolean");
        return j_.get<bool>();
    }

    /// Runs a parser for an enum-like string and rewraps its error with the path.
    template <typename Parse>
    auto parse(Parse&& p) const {
        const std::string s = str();
        try {
            return p(s);
        } catch (const ConfigError& e) {
            fail(std::string(e.what()) + " (schema version " + std::to_string(kSchemaVersion) + ")");
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw SchemaError(path_ + ": " + msg); }

private:
    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& j_;
    std::string path_;
};

RelationalOperator read_operator(const Reader& r) {
    RelationalOperator op;
    op.tag = r.at("tag").parse(parse_operator_tag);
    if (op.tag == OperatorTag::weighted_lp) op.p = r.at("p").number();
    if (op.tag == OperatorTag::rbf) op.sigma = r.at("sigma").number();
    try {
        op.validate();
    } catch (const ConfigError& e) {
        r.fail(e.what());
    }
    return op;
}

DiffusionConfig read_diffusion(const Reader& r) {
    DiffusionConfig d;
    d.method = r.at("method").parse([](const std::string& s) {
        if (s == "row-stochastic") return DiffusionMethod::row_stochastic;
        if (s == "laplacian") return DiffusionMethod::laplacian;
        throw ConfigError("unknown diffusion method '" + s + "'");
    });
    d.theta = r.at("theta").number();
    d.iterations = int(r.at("iterations").integer());
    d.tolerance = r.at("tolerance").number();
    d.attach = r.at("attach").parse([](const std::string& s) {
        if (s == "append") return DiffusionAttach::append;
        if (s == "replace") return DiffusionAttach::replace;
        throw ConfigError("unknown diffusion attach mode '" + s + "'");
    });
    try {
        d.validate();
    } catch (const ConfigError& e) {
        r.fail(e.what());
    }
    return d;
}

RelationalFunction read_function(const Reader& r) {
    RelationalFunction f;
    const Reader leaf = r.at("leaf");
    f.leaf.family = leaf.at("family").parse(parse_family);
    f.leaf.variant = leaf.at("variant").str();
    if (leaf.has("diffuse")) f.leaf_diffusion = read_diffusion(leaf.at("diffuse"));
    const Reader chain = r.at("chain");
    for (std::size_t k = 0; k < chain.array_size(); ++k) {
        const Reader s = chain.at(k);
        ChainStep step;
        step.op = read_operator(s.at("op"));
        step.sel.direction = s.at("sel").at("dir").parse(parse_direction);
        step.sel.hops = int(s.at("sel").at("hops").integer());
        if (step.sel.hops < 1) s.at("sel").at("hops").fail("hops must be >= 1");
        if (s.has("diffuse")) step.diffusion = read_diffusion(s.at("diffuse"));
        f.chain.push_back(std::move(step));
    }
    if (r.has("combinator")) {
        const Reader c = r.at("combinator");
        Combinator comb;
        comb.kind = c.at("kind").parse([](const std::string& s) {
            if (s == "plus") return CombinatorKind::plus;
            if (s == "times") return CombinatorKind::times;
            throw ConfigError("unknown combinator '" + s + "'");
        });
        comb.other = std::make_shared<const RelationalFunction>(read_function(c.at("ref")));
        f.combinator = std::move(comb);
    }
    const Reader t = r.at("transform");
    f.alpha = t.at("alpha").number();
    if (!(f.alpha > 0.0 && f.alpha < 1.0)) t.at("alpha").fail("alpha must lie in (0,1)");
    f.bins = std::uint32_t(t.at("bins").integer());
    return f;
}

}  // namespace

std::string functions_to_json(const FunctionSet& fs) {
    const LearnConfig& c = fs.config;
    json ops = json::array();
    for (const auto& op : c.operators) ops.push_back(operator_json(op));
    json config{{"alpha", c.alpha},
                {"lambda", c.lambda},
                {"ell", c.hops},
                {"operators", std::move(ops)},
                {"criterion", c.criterion == CriterionTag::agreement ? "agreement" : "mutual-information"},
                {"max_layers", c.max_layers},
                {"families",
                 {{"degree", c.families.degree},
                  {"kcore", c.families.kcore},
                  {"egonet", c.families.egonet},
                  {"orbit", c.families.orbit},
                  {"attributes", c.families.attributes}}}};
    if (c.diffusion) config["diffusion"] = diffusion_json(*c.diffusion);

    json layers = json::array();
    for (const auto& layer : fs.layers) {
        json l = json::array();
        for (const auto& f : layer) l.push_back(function_json(f));
        layers.push_back(std::move(l));
    }
    json doc{{"version", kSchemaVersion}, {"kind", to_string(fs.kind)}, {"config", std::move(config)},
             {"layers", std::move(layers)}};
    return doc.dump(1) + "\n";
}

FunctionSet functions_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("function file is not valid JSON: ") + e.what());
    }
    const Reader root(doc, "");
    const long long version = root.at("version").integer();
    if (version != kSchemaVersion)
        root.at("version").fail("unsupported schema version " + std::to_string(version) + " (expected " +
                                std::to_string(kSchemaVersion) + ")");

    FunctionSet fs;
    fs.kind = root.at("kind").parse(parse_element_kind);
    LearnConfig& c = fs.config;
    c.kind = fs.kind;
    c.workers = 0;
    const Reader cfg = root.at("config");
    c.alpha = cfg.at("alpha").number();
    c.lambda = cfg.at("lambda").number();
    c.hops = int(cfg.at("ell").integer());
    const Reader ops = cfg.at("operators");
    c.operators.clear();
    for (std::size_t i = 0; i < ops.array_size(); ++i) c.operators.push_back(read_operator(ops.at(i)));
    if (cfg.has("criterion"))
        c.criterion = cfg.at("criterion").parse([](const std::string& s) {
            if (s == "agreement") return CriterionTag::agreement;
            if (s == "mutual-information") return CriterionTag::mutual_information;
            throw ConfigError("unknown criterion '" + s + "'");
        });
    if (cfg.has("max_layers")) c.max_layers = int(cfg.at("max_layers").integer());
    if (cfg.has("families")) {
        const Reader fam = cfg.at("families");
        c.families.degree = fam.at("degree").boolean();
        c.families.kcore = fam.at("kcore").boolean();
        c.families.egonet = fam.at("egonet").boolean();
        c.families.orbit = fam.at("orbit").boolean();
        c.families.attributes = fam.at("attributes").boolean();
    }
    if (cfg.has("diffusion")) c.diffusion = read_diffusion(cfg.at("diffusion"));

    const Reader layers = root.at("layers");
    for (std::size_t k = 0; k < layers.array_size(); ++k) {
        const Reader layer = layers.at(k);
        std::vector<RelationalFunction> fns;
        for (std::size_t i = 0; i < layer.array_size(); ++i) fns.push_back(read_function(layer.at(i)));
        if (fns.empty()) layer.fail("a retained layer must not be empty");
        fs.layers.push_back(std::move(fns));
    }
    return fs;
}

void save_functions(const FunctionSet& f, const std::string& path) {
    const std::string text = functions_to_json(f);
    write_atomic(path, [&](std::ostream& os) { os << text; });
}

FunctionSet load_functions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open function file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return functions_from_json(ss.str());
}

}  // namespace grafl
