// expm.hpp — Matrix exponential by scaling and squaring with Pade approximants

#pragma once

#include <Eigen/Dense>

namespace effham {

// exp(A) for a dense complex matrix. Pade degree (3, 5, 7, 9 or 13) and the
// number of squarings are chosen from the 1-norm of A so that the backward
// error stays at double-precision unit roundoff.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A);

} // namespace effham
