// hilbert.hpp — Composite Hilbert spaces and the sparse complex operator algebra
//
// Basis ordering is row-major over factors with the last factor varying
// fastest. Within a qubit leg |g> = 0 and |e> = 1; within a boson leg the
// index is the Fock occupation.

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace effham {

using Complex = std::complex<double>;

// Entries with magnitude at or below this are never stored.
inline constexpr double kPruneTolerance = 1e-15;

enum class FactorKind { kQubit, kBoson };

struct Factor {
    FactorKind kind{FactorKind::kQubit};
    int dim{2};

    static Factor qubit() { return {FactorKind::kQubit, 2}; }
    static Factor boson(int cutoff) { return {FactorKind::kBoson, cutoff}; }

    bool operator==(const Factor&) const = default;
};

class SpaceSpec {
public:
    explicit SpaceSpec(std::vector<Factor> factors);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t num_factors() const noexcept { return factors_.size(); }
    const Factor& factor(std::size_t leg) const;
    const std::vector<Factor>& factors() const noexcept { return factors_; }

    // Distance in the flat index between consecutive levels of `leg`.
    std::size_t stride(std::size_t leg) const;
    int level(std::size_t index, std::size_t leg) const;

    std::size_t index_of(std::span<const int> levels) const;
    std::vector<int> levels_of(std::size_t index) const;

    // Labels group consecutive qubits into one token of g/e letters and give
    // each boson its own integer token, e.g. "gg,1" or "g,3". A fully
    // comma-separated form ("g,g,1") is accepted as well.
    std::size_t parse_label(std::string_view label) const;
    std::string format_label(std::size_t index) const;

    bool operator==(const SpaceSpec& other) const { return factors_ == other.factors_; }

private:
    std::vector<Factor> factors_;
    std::vector<std::size_t> strides_;
    std::size_t dim_{1};
};

using SpacePtr = std::shared_ptr<const SpaceSpec>;

SpacePtr make_space(std::vector<Factor> factors);

class Operator {
public:
    using Matrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

    explicit Operator(SpacePtr space);
    Operator(SpacePtr space, Matrix matrix);

    static Operator zero(SpacePtr space) { return Operator(std::move(space)); }
    static Operator identity(SpacePtr space);
    static Operator from_dense(SpacePtr space, const Eigen::MatrixXcd& dense);

    const SpaceSpec& space() const noexcept { return *space_; }
    const SpacePtr& space_ptr() const noexcept { return space_; }
    std::size_t dim() const noexcept { return space_->dim(); }
    const Matrix& matrix() const noexcept { return matrix_; }
    std::size_t nnz() const noexcept { return static_cast<std::size_t>(matrix_.nonZeros()); }
    bool is_zero() const noexcept { return matrix_.nonZeros() == 0; }

    Complex coeff(std::size_t row, std::size_t col) const;
    Eigen::MatrixXcd dense() const;

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(Complex c);

    friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
    friend Operator operator*(const Operator& lhs, const Operator& rhs);
    friend Operator operator*(Complex c, Operator op) { return op *= c; }
    friend Operator operator*(Operator op, Complex c) { return op *= c; }
    friend Operator operator-(Operator op) { return op *= Complex{-1.0, 0.0}; }

    // Structural equality: same space and identical stored entries.
    bool operator==(const Operator& other) const;

private:
    void prune();
    void require_same_space(const Operator& other, const char* what) const;

    SpacePtr space_;
    Matrix matrix_;
};

enum class QubitOp { kSp, kSm, kSz, kId };
enum class BosonOp { kA, kAdag, kN, kId };

Operator qubit_op(const SpacePtr& space, std::size_t leg, QubitOp which);
Operator boson_op(const SpacePtr& space, std::size_t leg, BosonOp which);

Operator mul(const Operator& a, const Operator& b);
Operator add(const Operator& a, const Operator& b);
Operator scale(Complex c, const Operator& a);
Operator dagger(const Operator& a);
Operator commutator(const Operator& a, const Operator& b);

// Largest entry magnitude of A - A^dagger.
double hermitian_defect(const Operator& a);

// Compresses an operator onto a space with the same factor kinds and boson
// cutoffs no larger than the source's, keeping the retained block.
Operator restrict_to(const Operator& a, const SpacePtr& target);

// Largest entrywise magnitude of A - B.
double max_abs_diff(const Operator& a, const Operator& b);

} // namespace effham
