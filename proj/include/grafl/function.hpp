#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grafl/graph.hpp"

namespace grafl {

enum class BaseFamily { degree, kcore, egonet, orbit, attribute, lifted_attribute };

/// Identifies one base feature: a family plus a variant tag within it, e.g.
/// (degree, "out"), (orbit, "3"), (lifted_attribute, "age:mean").
struct BaseFeatureDescriptor {
    BaseFamily family = BaseFamily::degree;
    std::string variant;

    friend bool operator==(const BaseFeatureDescriptor&, const BaseFeatureDescriptor&) = default;
};

enum class OperatorTag { hadamard, mean, sum, max, weighted_lp, rbf };

/// A relational feature operator summarizing a feature over a set of related
/// elements. `p` is used by weighted-Lp only, `sigma` by RBF only.
struct RelationalOperator {
    OperatorTag tag = OperatorTag::sum;
    double p = 1.0;
    double sigma = 1.0;

    /// Throws ConfigError when p < 1 or sigma <= 0.
    void validate() const;

    friend bool operator==(const RelationalOperator& a, const RelationalOperator& b) {
        if (a.tag != b.tag) return false;
        if (a.tag == OperatorTag::weighted_lp) return a.p == b.p;
        if (a.tag == OperatorTag::rbf) return a.sigma == b.sigma;
        return true;
    }
};

enum class DiffusionMethod { row_stochastic, laplacian };
enum class DiffusionAttach { replace, append };

struct DiffusionConfig {
    DiffusionMethod method = DiffusionMethod::row_stochastic;
    double theta = 0.5;      // retention weight, laplacian only
    int iterations = 10;     // T
    double tolerance = 0.0;  // stop once the max column change drops below this
    DiffusionAttach attach = DiffusionAttach::append;

    void validate() const;

    friend bool operator==(const DiffusionConfig&, const DiffusionConfig&) = default;
};

/// One composition step: aggregate with `op` over `sel`, then optionally
/// smooth the result.
struct ChainStep {
    RelationalOperator op;
    NeighborhoodSelector sel;
    std::optional<DiffusionConfig> diffusion;

    friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

struct RelationalFunction;

enum class CombinatorKind { plus, times };

struct Combinator {
    CombinatorKind kind = CombinatorKind::plus;
    std::shared_ptr<const RelationalFunction> other;

    friend bool operator==(const Combinator& a, const Combinator& b);
};

/// A transferable feature definition: a base feature, an ordered chain of
/// operator applications, and an optional element-wise sum/product with
/// another function. Every intermediate vector is log-binned with `alpha`.
struct RelationalFunction {
    BaseFeatureDescriptor leaf;
    std::optional<DiffusionConfig> leaf_diffusion;
    std::vector<ChainStep> chain;
    std::optional<Combinator> combinator;
    double alpha = 0.5;
    std::uint32_t bins = 0;  // bin count observed when learned; informational

    int depth() const { return int(chain.size()) + 1; }

    /// Smooth the function's current output: attaches to the last chain step,
    /// or to the leaf when the chain is empty.
    void attach_diffusion(const DiffusionConfig& cfg);

    friend bool operator==(const RelationalFunction&, const RelationalFunction&) = default;
};

inline bool operator==(const Combinator& a, const Combinator& b) {
    if (a.kind != b.kind) return false;
    if (!a.other || !b.other) return a.other == b.other;
    return *a.other == *b.other;
}

std::string to_string(BaseFamily f);
std::string to_string(OperatorTag t);
std::string to_string(Direction d);
std::string to_string(ElementKind k);
BaseFamily parse_family(const std::string& s);
OperatorTag parse_operator_tag(const std::string& s);
Direction parse_direction(const std::string& s);
ElementKind parse_element_kind(const std::string& s);

/// Compact human-readable form, e.g. "sum[all,1](mean[out,1](degree:total))".
std::string describe(const RelationalFunction& f);

}  // namespace grafl
