#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace grafl {

enum class ClassifierKind { logistic, rsm };

ClassifierKind parse_classifier_kind(const std::string& s);
std::string to_string(ClassifierKind k);

struct ClassifierParams {
    // logistic: full-batch gradient descent on standardized features
    double l2 = 1e-3;
    double learning_rate = 0.5;
    int iterations = 500;
    // rsm: bandwidth grid searched by k-fold cross-validation
    std::vector<double> sigma_grid{0.001, 0.01, 0.1, 1.0};
    int folds = 3;
    std::uint64_t seed = 1;
};

/// A trained classifier. Rows of every feature matrix are examples.
struct Classifier {
    ClassifierKind kind = ClassifierKind::logistic;
    std::vector<int> classes;  // ascending

    // logistic
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd scale;
    Eigen::MatrixXd weights;  // features x models (one model when binary)
    Eigen::RowVectorXd bias;

    // rsm
    Eigen::MatrixXd train;
    std::vector<int> train_class;  // index into classes
    double sigma = 1.0;

    /// Per-class scores, one column per entry of `classes`; higher means more
    /// likely. Logistic scores are probabilities; rsm scores are the log of the
    /// mean RBF similarity to that class's training vectors.
    Eigen::MatrixXd scores(const Eigen::MatrixXd& x) const;
    std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

/// Throws Error unless at least two classes are present.
Classifier train_classifier(const Eigen::MatrixXd& x, const std::vector<int>& y, ClassifierKind kind,
                            const ClassifierParams& params = {});

}  // namespace grafl
