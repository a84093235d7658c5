#pragma once

#include <array>
#include <vector>

namespace encl::detail {

/// Lagrange basis on [0,1] with equispaced nodes 0, 1/r, ..., 1.
class Lagrange1D {
 public:
  explicit Lagrange1D(int order) : order_(order) {
    for (int i = 0; i <= order; ++i) nodes_.push_back(static_cast<double>(i) / order);
  }

  std::vector<double> values(double x) const {
    std::vector<double> out(nodes_.size(), 1.0);
    for (std::size_t a = 0; a < nodes_.size(); ++a)
      for (std::size_t k = 0; k < nodes_.size(); ++k)
        if (k != a) out[a] *= (x - nodes_[k]) / (nodes_[a] - nodes_[k]);
    return out;
  }

  std::vector<double> derivatives(double x) const {
    std::vector<double> out(nodes_.size(), 0.0);
    for (std::size_t a = 0; a < nodes_.size(); ++a) {
      for (std::size_t m = 0; m < nodes_.size(); ++m) {
        if (m == a) continue;
        double term = 1.0 / (nodes_[a] - nodes_[m]);
        for (std::size_t k = 0; k < nodes_.size(); ++k)
          if (k != a && k != m) term *= (x - nodes_[k]) / (nodes_[a] - nodes_[k]);
        out[a] += term;
      }
    }
    return out;
  }

 private:
  int order_;
  std::vector<double> nodes_;
};

}  // namespace encl::detail
