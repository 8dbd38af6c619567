#pragma once

// Shared grid fixtures for the unit tests. Both grids keep the node count low
// so dense Eigen oracles stay fast:
//   small_spec: 41 box nodes, 19 interior, 6 measurement nodes (3 per window)
//   tiny_spec:  21 box nodes,  9 interior, 4 measurement nodes (2 per window)

#include "fracmono/discretize.hpp"
#include "fracmono/linalg.hpp"

#include <Eigen/Dense>

namespace testsupport {

inline fracmono::GridSpec small_spec(double order = 0.5) {
    fracmono::GridSpec spec;
    spec.order = order;
    spec.box_radius = 2.0;
    spec.spacing = 0.1;
    spec.windows = {{1.05, 1.35}, {-1.35, -1.05}};
    return spec;
}

inline fracmono::GridSpec tiny_spec(double order = 0.5) {
    fracmono::GridSpec spec;
    spec.order = order;
    spec.box_radius = 2.0;
    spec.spacing = 0.2;
    spec.windows = {{1.05, 1.45}, {-1.45, -1.05}};
    return spec;
}

inline Eigen::MatrixXd to_eigen(const fracmono::linalg::Matrix& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return m;
}

} // namespace testsupport
