#include "grafl/function.hpp"

#include <sstream>

#include "grafl/error.hpp"

namespace grafl {

void RelationalOperator::validate() const {
    if (tag == OperatorTag::weighted_lp && !(p >= 1.0))
        throw ConfigError("weighted-lp exponent p must be >= 1, got " + std::to_string(p));
    if (tag == OperatorTag::rbf && !(sigma > 0.0))
        throw ConfigError("rbf bandwidth sigma must be > 0, got " + std::to_string(sigma));
}

void DiffusionConfig::validate() const {
    if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("diffusion theta must lie in [0,1]");
    if (iterations < 1) throw ConfigError("diffusion iterations must be >= 1");
    if (!(tolerance >= 0.0)) throw ConfigError("diffusion tolerance must be >= 0");
}

void RelationalFunction::attach_diffusion(const DiffusionConfig& cfg) {
    if (chain.empty())
        leaf_diffusion = cfg;
    else
        chain.back().diffusion = cfg;
}

std::string to_string(BaseFamily f) {
    switch (f) {
        case BaseFamily::degree: return "degree";
        case BaseFamily::kcore: return "kcore";
        case BaseFamily::egonet: return "egonet";
        case BaseFamily::orbit: return "orbit";
        case BaseFamily::attribute: return "attribute";
        case BaseFamily::lifted_attribute: return "lifted-attribute";
    }
    return "?";
}

std::string to_string(OperatorTag t) {
    switch (t) {
        case OperatorTag::hadamard: return "hadamard";
        case OperatorTag::mean: return "mean";
        case OperatorTag::sum: return "sum";
        case OperatorTag::max: return "max";
        case OperatorTag::weighted_lp: return "weighted-lp";
        case OperatorTag::rbf: return "rbf";
    }
    return "?";
}

std::string to_string(Direction d) {
    switch (d) {
        case Direction::out: return "out";
        case Direction::in: return "in";
        case Direction::all: return "all";
    }
    return "?";
}

std::string to_string(ElementKind k) { return k == ElementKind::node ? "node" : "edge"; }

BaseFamily parse_family(const std::string& s) {
    for (auto f : {BaseFamily::degree, BaseFamily::kcore, BaseFamily::egonet, BaseFamily::orbit,
                   BaseFamily::attribute, BaseFamily::lifted_attribute})
        if (to_string(f) == s) return f;
    throw ConfigError("unknown base feature family '" + s + "'");
}

OperatorTag parse_operator_tag(const std::string& s) {
    for (auto t : {OperatorTag::hadamard, OperatorTag::mean, OperatorTag::sum, OperatorTag::max,
                   OperatorTag::weighted_lp, OperatorTag::rbf})
        if (to_string(t) == s) return t;
    throw ConfigError("unknown operator '" + s + "'");
}

Direction parse_direction(const std::string& s) {
    for (auto d : {Direction::out, Direction::in, Direction::all})
        if (to_string(d) == s) return d;
    throw ConfigError("unknown direction '" + s + "'");
}

ElementKind parse_element_kind(const std::string& s) {
    if (s == "node") return ElementKind::node;
    if (s == "edge") return ElementKind::edge;
    throw ConfigError("unknown element kind '" + s + "' (expected node or edge)");
}

std::string describe(const RelationalFunction& f) {
    std::string s = to_string(f.leaf.family) + ":" + f.leaf.variant;
    if (f.leaf_diffusion) s = "diffuse(" + s + ")";
    for (const auto& step : f.chain) {
        std::string op = to_string(step.op.tag);
        if (step.op.tag == OperatorTag::weighted_lp) op += "<p=" + std::to_string(step.op.p) + ">";
        if (step.op.tag == OperatorTag::rbf) op += "<sigma=" + std::to_string(step.op.sigma) + ">";
        s = op + "[" + to_string(step.sel.direction) + "," + std::to_string(step.sel.hops) + "](" + s + ")";
        if (step.diffusion) s = "diffuse(" + s + ")";
    }
    if (f.combinator && f.combinator->other)
        s = "(" + s + (f.combinator->kind == CombinatorKind::plus ? " + " : " * ") +
            describe(*f.combinator->other) + ")";
    return s;
}

}  // namespace grafl
