#include "bootpls/components.h"

namespace bootpls {

bool ComponentModel::keep(const Eigen::VectorXd& replicate, const Eigen::VectorXd&) const {
  return replicate.allFinite();
}

Eigen::VectorXd PlsComponentPath::coefficients(int k) const { return path_.fit(k).beta; }

double PlsComponentPath::intercept(int k) const { return path_.fit(k).intercept; }

}  // namespace bootpls
