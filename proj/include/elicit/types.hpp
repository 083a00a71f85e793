#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace elicit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct DimensionOverflow : std::runtime_error {
    explicit DimensionOverflow(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidDistribution : std::runtime_error {
    explicit InvalidDistribution(const std::string& what) : std::runtime_error(what) {}
};
struct RedundantReport : std::runtime_error {
    int report;
    explicit RedundantReport(int r)
        : std::runtime_error("report " + std::to_string(r) + " is never the unique minimizer"),
          report(r) {}
};
struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};
struct NonDifferentiable : std::runtime_error {
    explicit NonDifferentiable(const std::string& what) : std::runtime_error(what) {}
};
struct NotOrderable : std::runtime_error {
    explicit NotOrderable(const std::string& what) : std::runtime_error(what) {}
};
struct ScalingInfeasible : std::runtime_error {
    explicit ScalingInfeasible(const std::string& what) : std::runtime_error(what) {}
};
struct BoundaryLevelSetMismatch : std::runtime_error {
    explicit BoundaryLevelSetMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct StrongIERequired : std::runtime_error {
    explicit StrongIERequired(const std::string& what) : std::runtime_error(what) {}
};
struct CertificateFailure : std::runtime_error {
    explicit CertificateFailure(const std::string& what) : std::runtime_error(what) {}
};
struct SearchBudgetExceeded : std::runtime_error {
    explicit SearchBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Point in the probability simplex over n outcomes. Construction renormalizes
/// mass mismatches up to 1e-9 and rejects anything worse.
class Distribution {
  public:
    explicit Distribution(Vec probs) {
        const double kSumSlack = 1e-9;
        for (Eigen::Index i = 0; i < probs.size(); ++i) {
            if (!std::isfinite(probs[i]) || probs[i] < -1e-12)
                throw InvalidDistribution("negative or non-finite probability mass");
            if (probs[i] < 0) probs[i] = 0.0;
        }
        double s = probs.sum();
        if (std::abs(s - 1.0) > kSumSlack)
            throw InvalidDistribution("mass sums to " + std::to_string(s));
        probs_ = probs / s;
    }
    Distribution(std::initializer_list<double> vals) : Distribution(from_list(vals)) {}

    const Vec& probs() const { return probs_; }
    int n() const { return static_cast<int>(probs_.size()); }
    double operator[](int i) const { return probs_[i]; }

    static Distribution barycenter(int n) { return Distribution(Vec::Constant(n, 1.0 / n)); }
    static Distribution vertex(int n, int y) {
        Vec p = Vec::Zero(n);
        p[y] = 1.0;
        return Distribution(p);
    }

  private:
    static Vec from_list(std::initializer_list<double> vals) {
        Vec v(static_cast<Eigen::Index>(vals.size()));
        Eigen::Index i = 0;
        for (double x : vals) v[i++] = x;
        return v;
    }
    Vec probs_;
};

/// Linear map acting on distributions, stored as the n x d matrix whose
/// transpose is applied: p -> m^T p.
struct LinearMapOnSimplex {
    Mat matrix;  // n x d

    LinearMapOnSimplex() = default;
    explicit LinearMapOnSimplex(Mat m) : matrix(std::move(m)) {
        if (!matrix.allFinite()) throw std::invalid_argument("non-finite linear map");
    }
    int n() const { return static_cast<int>(matrix.rows()); }
    int d() const { return static_cast<int>(matrix.cols()); }
    Vec apply_transpose(const Vec& p) const { return matrix.transpose() * p; }
};

}  // namespace elicit
