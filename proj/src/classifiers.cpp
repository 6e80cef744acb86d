#include "grafl/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "grafl/error.hpp"

namespace grafl {

ClassifierKind parse_classifier_kind(const std::string& s) {
    if (s == "logistic") return ClassifierKind::logistic;
    if (s == "rsm") return ClassifierKind::rsm;
    throw ConfigError("unknown classifier '" + s + "' (expected logistic or rsm)");
}

std::string to_string(ClassifierKind k) { return k == ClassifierKind::logistic ? "logistic" : "rsm"; }

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
    return z.unaryExpr([](double v) { return v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v)); });
}

void fit_logistic(Classifier& c, const Eigen::MatrixXd& x, const std::vector<int>& cls, const ClassifierParams& p) {
    const Eigen::Index n = x.rows(), d = x.cols();
    c.mean = x.colwise().mean();
    c.scale = ((x.rowwise() - c.mean).array().square().colwise().sum() / double(std::max<Eigen::Index>(n, 1)))
                  .sqrt()
                  .matrix();
    for (Eigen::Index j = 0; j < d; ++j)
        if (!(c.scale[j] > 1e-12)) c.scale[j] = 1.0;
    const Eigen::MatrixXd z = (x.rowwise() - c.mean).array().rowwise() / c.scale.array();

    const std::size_t k = c.classes.size();
    const std::size_t models = k == 2 ? 1 : k;
    c.weights = Eigen::MatrixXd::Zero(d, Eigen::Index(models));
    c.bias = Eigen::RowVectorXd::Zero(Eigen::Index(models));
    for (std::size_t m = 0; m < models; ++m) {
        const int positive = k == 2 ? 1 : int(m);
        Eigen::VectorXd target(n);
        for (Eigen::Index i = 0; i < n; ++i) target[i] = cls[std::size_t(i)] == positive ? 1.0 : 0.0;
        Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
        double b = 0.0;
        for (int it = 0; it < p.iterations; ++it) {
            const Eigen::VectorXd r = sigmoid((z * w).array() + b) - target;
            const Eigen::VectorXd grad = z.transpose() * r / double(n) + p.l2 * w;
            w -= p.learning_rate * grad;
            b -= p.learning_rate * r.mean();
        }
        c.weights.col(Eigen::Index(m)) = w;
        c.bias[Eigen::Index(m)] = b;
    }
}

/// log(mean_t exp(-|x - x_t|^2 / sigma^2)) per class, computed stably.
Eigen::MatrixXd rsm_scores(const Eigen::MatrixXd& train, const std::vector<int>& train_class, std::size_t k,
                           double sigma, const Eigen::MatrixXd& x) {
    const double inv = 1.0 / (sigma * sigma);
    Eigen::MatrixXd out(x.rows(), Eigen::Index(k));
    std::vector<double> peak(k), acc(k);
    std::vector<std::size_t> count(k, 0);
    for (int c : train_class) ++count[std::size_t(c)];
    const Eigen::VectorXd train_sq = train.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Eigen::VectorXd d2 =
            ((train_sq.array() - 2.0 * (train * x.row(i).transpose()).array()) + x.row(i).squaredNorm()).max(0.0);
        std::fill(peak.begin(), peak.end(), -std::numeric_limits<double>::infinity());
        std::fill(acc.begin(), acc.end(), 0.0);
        for (Eigen::Index t = 0; t < train.rows(); ++t) {
            const auto c = std::size_t(train_class[std::size_t(t)]);
            peak[c] = std::max(peak[c], -d2[t] * inv);
        }
        for (Eigen::Index t = 0; t < train.rows(); ++t) {
            const auto c = std::size_t(train_class[std::size_t(t)]);
            acc[c] += std::exp(-d2[t] * inv - peak[c]);
        }
        for (std::size_t c = 0; c < k; ++c)
            out(i, Eigen::Index(c)) = count[c] ? peak[c] + std::log(acc[c] / double(count[c]))
                                               : -std::numeric_limits<double>::infinity();
    }
    return out;
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& s) {
    std::vector<int> out(std::size_t(s.rows()));
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        Eigen::Index best = 0;
        s.row(i).maxCoeff(&best);
        out[std::size_t(i)] = int(best);
    }
    return out;
}

double cross_validated_accuracy(const Eigen::MatrixXd& x, const std::vector<int>& cls, std::size_t k, double sigma,
                                int folds, std::uint64_t seed) {
    const std::size_t n = cls.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t correct = 0, total = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<Eigen::Index> tr, te;
        for (std::size_t i = 0; i < n; ++i) (int(i % std::size_t(folds)) == f ? te : tr).push_back(Eigen::Index(order[i]));
        if (tr.empty() || te.empty()) continue;
        std::vector<int> tr_cls;
        for (auto i : tr) tr_cls.push_back(cls[std::size_t(i)]);
        const Eigen::MatrixXd s = rsm_scores(x(tr, Eigen::all), tr_cls, k, sigma, x(te, Eigen::all));
        const auto pred = argmax_rows(s);
        for (std::size_t i = 0; i < te.size(); ++i) correct += pred[i] == cls[std::size_t(te[i])];
        total += te.size();
    }
    return total ? double(correct) / double(total) : 0.0;
}

}  // namespace

Classifier train_classifier(const Eigen::MatrixXd& x, const std::vector<int>& y, ClassifierKind kind,
                            const ClassifierParams& params) {
    if (std::size_t(x.rows()) != y.size()) throw Error("classifier: feature rows and labels differ in length");
    Classifier c;
    c.kind = kind;
    c.classes = y;
    std::sort(c.classes.begin(), c.classes.end());
    c.classes.erase(std::unique(c.classes.begin(), c.classes.end()), c.classes.end());
    if (c.classes.size() < 2)
        throw Error("classifier needs at least two classes in the training labels, found " +
                    std::to_string(c.classes.size()));
    std::vector<int> cls(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        cls[i] = int(std::lower_bound(c.classes.begin(), c.classes.end(), y[i]) - c.classes.begin());

    if (kind == ClassifierKind::logistic) {
        fit_logistic(c, x, cls, params);
        return c;
    }
    if (params.sigma_grid.empty()) throw ConfigError("rsm sigma grid must not be empty");
    c.train = x;
    c.train_class = cls;
    double best = -1.0;
    for (double s : params.sigma_grid) {
        if (!(s > 0)) throw ConfigError("rsm sigma must be > 0");
        const double acc = cross_validated_accuracy(x, cls, c.classes.size(), s, std::max(2, params.folds), params.seed);
        if (acc > best) {
            best = acc;
            c.sigma = s;
        }
    }
    return c;
}

Eigen::MatrixXd Classifier::scores(const Eigen::MatrixXd& x) const {
    const std::size_t k = classes.size();
    if (kind == ClassifierKind::rsm) return rsm_scores(train, train_class, k, sigma, x);
    const Eigen::MatrixXd z = (x.rowwise() - mean).array().rowwise() / scale.array();
    Eigen::MatrixXd out(x.rows(), Eigen::Index(k));
    for (Eigen::Index m = 0; m < weights.cols(); ++m) {
        const Eigen::VectorXd p = sigmoid((z * weights.col(m)).array() + bias[m]);
        if (k == 2) {
            out.col(0) = 1.0 - p.array();
            out.col(1) = p;
        } else {
            out.col(m) = p;
        }
    }
    return out;
}

std::vector<int> Classifier::predict(const Eigen::MatrixXd& x) const {
    auto idx = argmax_rows(scores(x));
    for (auto& i : idx) i = classes[std::size_t(i)];
    return idx;
}

}  // namespace grafl
