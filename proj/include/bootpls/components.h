#pragma once

#include "bootpls/dataset.h"
#include "bootpls/pls.h"

#include <Eigen/Dense>

#include <memory>
#include <string>

namespace bootpls {

/// How the response is regressed on fixed components when testing their
/// significance.
enum class ComponentRegression { Linear, Logistic };

/// Lazily grown sequence of components on one dataset. Prefix models are
/// read off without refitting.
class ComponentPath {
 public:
  virtual ~ComponentPath() = default;

  virtual bool extend() = 0;
  virtual int size() const = 0;
  virtual int max_components() const = 0;
  /// n x size() score matrix.
  virtual Eigen::MatrixXd scores() const = 0;
  /// Raw-scale coefficient vector of the k-component model (zeros for k = 0).
  virtual Eigen::VectorXd coefficients(int k) const = 0;
  virtual double intercept(int k) const = 0;
  /// False when the k-component fit is unusable (e.g. IRLS did not converge).
  virtual bool usable(int k) const { return k <= size(); }

  bool extend_to(int k) {
    while (size() < k) {
      if (!extend()) return false;
    }
    return true;
  }
};

/// A component-based regression family (PLS, PLS-logistic).
class ComponentModel {
 public:
  virtual ~ComponentModel() = default;

  virtual std::unique_ptr<ComponentPath> start(const Dataset& data) const = 0;
  virtual ComponentRegression regression() const = 0;
  virtual std::string name() const = 0;
  /// Replicate filter applied to bootstrap coefficient vectors. The default
  /// keeps any finite vector.
  virtual bool keep(const Eigen::VectorXd& replicate, const Eigen::VectorXd& reference) const;
};

class PlsComponentPath final : public ComponentPath {
 public:
  explicit PlsComponentPath(const Dataset& data) : path_(data) {}

  bool extend() override { return path_.extend(); }
  int size() const override { return path_.size(); }
  int max_components() const override { return path_.max_components(); }
  Eigen::MatrixXd scores() const override { return path_.scores(); }
  Eigen::VectorXd coefficients(int k) const override;
  double intercept(int k) const override;

  const PlsPath& path() const { return path_; }

 private:
  PlsPath path_;
};

class PlsModel final : public ComponentModel {
 public:
  std::unique_ptr<ComponentPath> start(const Dataset& data) const override {
    return std::make_unique<PlsComponentPath>(data);
  }
  ComponentRegression regression() const override { return ComponentRegression::Linear; }
  std::string name() const override { return "pls"; }
};

}  // namespace bootpls
