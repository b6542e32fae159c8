#ifndef SPECFLOW_TEST_HELPERS_HPP
#define SPECFLOW_TEST_HELPERS_HPP

#include <vector>

#include "specflow/algebra.hpp"
#include "specflow/instance.hpp"

namespace specflow::testing {

inline BlockOperator diag_op(const ContextPtr& ctx, const std::vector<std::vector<double>>& values) {
    std::vector<Eigen::VectorXd> per_block;
    for (const auto& v : values) {
        per_block.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(),
                                                              static_cast<Eigen::Index>(v.size())));
    }
    return BlockOperator::diagonal(ctx, per_block);
}

/// Single-block operator from a dense complex matrix.
inline BlockOperator single(const Matrix& m, double weight = 1.0) {
    return BlockOperator(make_simple_context(m.rows(), weight), {m});
}

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

}  // namespace specflow::testing

#endif
