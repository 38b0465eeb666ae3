#include "effham/expm.hpp"

#include <array>
#include <cmath>

namespace effham {

namespace {

using Mat = Eigen::MatrixXcd;

// Largest 1-norm for which the [m/m] approximant meets unit roundoff.
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                          2.097847961257068e0, 5.371920351148152e0};

void pade_low(const Mat& A, int degree, Mat& U, Mat& V) {
    static constexpr double b3[] = {120.0, 60.0, 12.0, 1.0};
    static constexpr double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    static constexpr double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
    static constexpr double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                    2162160.0, 110880.0, 3960.0, 90.0, 1.0};
    const double* b = degree == 3 ? b3 : degree == 5 ? b5 : degree == 7 ? b7 : b9;
    const auto n = A.rows();
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A;
    Mat odd = b[1] * I;
    Mat even = b[0] * I;
    Mat power = A2;
    for (int k = 1; 2 * k <= degree; ++k) {
        odd += b[2 * k + 1] * power;
        even += b[2 * k] * power;
        if (2 * (k + 1) <= degree) power = power * A2;
    }
    U.noalias() = A * odd;
    V = even;
}

void pade13(const Mat& A, Mat& U, Mat& V) {
    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    const auto n = A.rows();
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    Mat inner = b[13] * A6 + b[11] * A4 + b[9] * A2;
    Mat tmp = A6 * inner;
    tmp += b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I;
    U.noalias() = A * tmp;
    inner = b[12] * A6 + b[10] * A4 + b[8] * A2;
    V = A6 * inner;
    V += b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

} // namespace

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A) {
    const auto n = A.rows();
    if (n == 0) return A;
    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();

    Mat U, V;
    int squarings = 0;
    if (norm1 <= kTheta[0]) {
        pade_low(A, 3, U, V);
    } else if (norm1 <= kTheta[1]) {
        pade_low(A, 5, U, V);
    } else if (norm1 <= kTheta[2]) {
        pade_low(A, 7, U, V);
    } else if (norm1 <= kTheta[3]) {
        pade_low(A, 9, U, V);
    } else {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta[4]))));
        const Mat scaled = A * std::ldexp(1.0, -squarings);
        pade13(scaled, U, V);
    }
    // r = (V - U)^{-1} (V + U)
    Mat result = (V - U).partialPivLu().solve(V + U);
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

} // namespace effham
