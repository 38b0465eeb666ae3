#include "effham/hilbert.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "effham/errors.hpp"

namespace effham {

SpaceSpec::SpaceSpec(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
        throw InvalidArgument("SpaceSpec: at least one factor is required");
    }
    for (const auto& f : factors_) {
        if (f.kind == FactorKind::kQubit && f.dim != 2) {
            throw InvalidArgument("SpaceSpec: qubit factor must have dimension 2");
        }
        if (f.kind == FactorKind::kBoson && f.dim < 2) {
            throw InvalidArgument("SpaceSpec: boson cutoff must be >= 2");
        }
    }
    strides_.assign(factors_.size(), 1);
    dim_ = 1;
    for (std::size_t leg = factors_.size(); leg-- > 0;) {
        strides_[leg] = dim_;
        const auto d = static_cast<std::size_t>(factors_[leg].dim);
        if (dim_ > std::numeric_limits<std::size_t>::max() / d) {
            throw InvalidArgument("SpaceSpec: total dimension overflows");
        }
        dim_ *= d;
    }
}

const Factor& SpaceSpec::factor(std::size_t leg) const {
    if (leg >= factors_.size()) {
        throw InvalidArgument("SpaceSpec: leg " + std::to_string(leg) + " out of range");
    }
    return factors_[leg];
}

std::size_t SpaceSpec::stride(std::size_t leg) const {
    factor(leg);
    return strides_[leg];
}

int SpaceSpec::level(std::size_t index, std::size_t leg) const {
    return static_cast<int>((index / stride(leg)) % static_cast<std::size_t>(factors_[leg].dim));
}

std::size_t SpaceSpec::index_of(std::span<const int> levels) const {
    if (levels.size() != factors_.size()) {
        throw InvalidLabel("basis label has " + std::to_string(levels.size()) +
                           " entries, space has " + std::to_string(factors_.size()) + " factors");
    }
    std::size_t index = 0;
    for (std::size_t leg = 0; leg < levels.size(); ++leg) {
        if (levels[leg] < 0 || levels[leg] >= factors_[leg].dim) {
            throw InvalidLabel("level " + std::to_string(levels[leg]) + " out of range on leg " +
                               std::to_string(leg));
        }
        index += static_cast<std::size_t>(levels[leg]) * strides_[leg];
    }
    return index;
}

std::vector<int> SpaceSpec::levels_of(std::size_t index) const {
    if (index >= dim_) {
        throw InvalidLabel("basis index " + std::to_string(index) + " out of range");
    }
    std::vector<int> levels(factors_.size());
    for (std::size_t leg = 0; leg < factors_.size(); ++leg) {
        levels[leg] = level(index, leg);
    }
    return levels;
}

std::size_t SpaceSpec::parse_label(std::string_view label) const {
    const auto bad = [&](const std::string& why) {
        return InvalidLabel("basis label '" + std::string(label) + "': " + why);
    };
    std::vector<int> levels;
    std::size_t leg = 0;
    std::size_t pos = 0;
    while (true) {
        const auto comma = label.find(',', pos);
        const auto end = comma == std::string_view::npos ? label.size() : comma;
        auto token = label.substr(pos, end - pos);
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
        if (token.empty()) throw bad("empty token");
        if (std::all_of(token.begin(), token.end(), [](char c) { return c == 'g' || c == 'e'; })) {
            for (char c : token) {
                if (leg >= factors_.size() || factors_[leg].kind != FactorKind::kQubit) {
                    throw bad("qubit level where the space has no qubit");
                }
                levels.push_back(c == 'e' ? 1 : 0);
                ++leg;
            }
        } else if (std::all_of(token.begin(), token.end(),
                               [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            if (leg >= factors_.size() || factors_[leg].kind != FactorKind::kBoson) {
                throw bad("occupation where the space has no boson");
            }
            if (token.size() > 9) throw bad("occupation too large");
            levels.push_back(std::stoi(std::string(token)));
            ++leg;
        } else {
            throw bad("unrecognised token '" + std::string(token) + "'");
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (levels.size() != factors_.size()) throw bad("wrong number of factors");
    return index_of(levels);
}

std::string SpaceSpec::format_label(std::size_t index) const {
    const auto levels = levels_of(index);
    std::string out;
    bool in_qubit_run = false;
    for (std::size_t leg = 0; leg < factors_.size(); ++leg) {
        if (factors_[leg].kind == FactorKind::kQubit) {
            if (!in_qubit_run && !out.empty()) out.push_back(',');
            out.push_back(levels[leg] == 1 ? 'e' : 'g');
            in_qubit_run = true;
        } else {
            if (!out.empty()) out.push_back(',');
            out += std::to_string(levels[leg]);
            in_qubit_run = false;
        }
    }
    return out;
}

SpacePtr make_space(std::vector<Factor> factors) {
    return std::make_shared<const SpaceSpec>(std::move(factors));
}

Operator::Operator(SpacePtr space) : space_(std::move(space)) {
    if (!space_) throw InvalidArgument("Operator: null space");
    const auto n = static_cast<Eigen::Index>(space_->dim());
    matrix_.resize(n, n);
}

Operator::Operator(SpacePtr space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (!space_) throw InvalidArgument("Operator: null space");
    const auto n = static_cast<Eigen::Index>(space_->dim());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw SpaceMismatch("Operator: matrix shape does not match space dimension");
    }
    prune();
}

Operator Operator::identity(SpacePtr space) {
    const auto n = static_cast<Eigen::Index>(space->dim());
    Matrix m(n, n);
    m.setIdentity();
    return Operator(std::move(space), std::move(m));
}

Operator Operator::from_dense(SpacePtr space, const Eigen::MatrixXcd& dense) {
    Matrix m = dense.sparseView();
    return Operator(std::move(space), std::move(m));
}

Complex Operator::coeff(std::size_t row, std::size_t col) const {
    if (row >= dim() || col >= dim()) {
        throw InvalidArgument("Operator::coeff: index out of range");
    }
    return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

Eigen::MatrixXcd Operator::dense() const { return Eigen::MatrixXcd(matrix_); }

void Operator::prune() {
    matrix_.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return std::abs(v) > kPruneTolerance; });
    matrix_.makeCompressed();
}

void Operator::require_same_space(const Operator& other, const char* what) const {
    if (space_ != other.space_ && !(*space_ == *other.space_)) {
        throw SpaceMismatch(std::string(what) + ": operands live on different spaces");
    }
}

Operator& Operator::operator+=(const Operator& rhs) {
    require_same_space(rhs, "add");
    matrix_ = matrix_ + rhs.matrix_;
    prune();
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    require_same_space(rhs, "subtract");
    matrix_ = matrix_ - rhs.matrix_;
    prune();
    return *this;
}

Operator& Operator::operator*=(Complex c) {
    matrix_ *= c;
    prune();
    return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
    lhs.require_same_space(rhs, "mul");
    Operator::Matrix product = lhs.matrix_ * rhs.matrix_;
    return Operator(lhs.space_, std::move(product));
}

bool Operator::operator==(const Operator& other) const {
    if (!(*space_ == *other.space_)) return false;
    if (matrix_.nonZeros() != other.matrix_.nonZeros()) return false;
    for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
        Matrix::InnerIterator a(matrix_, r);
        Matrix::InnerIterator b(other.matrix_, r);
        for (; a && b; ++a, ++b) {
            if (a.col() != b.col() || a.value() != b.value()) return false;
        }
        if (a || b) return false;
    }
    return true;
}

namespace {

// Embeds a local leg operator given as (row, col, value) entries.
struct LocalEntry {
    int row;
    int col;
    Complex value;
};

Operator embed(const SpacePtr& space, std::size_t leg, const std::vector<LocalEntry>& local) {
    const auto stride = space->stride(leg);
    const auto n = space->dim();
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(n * local.size() / 2 + 1);
    for (std::size_t col = 0; col < n; ++col) {
        const int lvl = space->level(col, leg);
        for (const auto& e : local) {
            if (e.col != lvl) continue;
            const auto row = static_cast<std::ptrdiff_t>(col) +
                             static_cast<std::ptrdiff_t>(e.row - e.col) * static_cast<std::ptrdiff_t>(stride);
            triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), e.value);
        }
    }
    Operator::Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(triplets.begin(), triplets.end());
    return Operator(space, std::move(m));
}

} // namespace

Operator qubit_op(const SpacePtr& space, std::size_t leg, QubitOp which) {
    if (space->factor(leg).kind != FactorKind::kQubit) {
        throw InvalidArgument("qubit_op: leg " + std::to_string(leg) + " is not a qubit");
    }
    std::vector<LocalEntry> local;
    switch (which) {
    case QubitOp::kSp: local = {{1, 0, 1.0}}; break;
    case QubitOp::kSm: local = {{0, 1, 1.0}}; break;
    case QubitOp::kSz: local = {{0, 0, -1.0}, {1, 1, 1.0}}; break;
    case QubitOp::kId: local = {{0, 0, 1.0}, {1, 1, 1.0}}; break;
    }
    return embed(space, leg, local);
}

Operator boson_op(const SpacePtr& space, std::size_t leg, BosonOp which) {
    const auto& f = space->factor(leg);
    if (f.kind != FactorKind::kBoson) {
        throw InvalidArgument("boson_op: leg " + std::to_string(leg) + " is not bosonic");
    }
    std::vector<LocalEntry> local;
    for (int k = 0; k < f.dim; ++k) {
        switch (which) {
        case BosonOp::kA:
            if (k >= 1) local.push_back({k - 1, k, std::sqrt(static_cast<double>(k))});
            break;
        case BosonOp::kAdag:
            if (k >= 1) local.push_back({k, k - 1, std::sqrt(static_cast<double>(k))});
            break;
        case BosonOp::kN:
            if (k >= 1) local.push_back({k, k, static_cast<double>(k)});
            break;
        case BosonOp::kId: local.push_back({k, k, 1.0}); break;
        }
    }
    return embed(space, leg, local);
}

Operator mul(const Operator& a, const Operator& b) { return a * b; }
Operator add(const Operator& a, const Operator& b) { return a + b; }
Operator scale(Complex c, const Operator& a) { return c * a; }

Operator dagger(const Operator& a) {
    Operator::Matrix adj = a.matrix().adjoint();
    return Operator(a.space_ptr(), std::move(adj));
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double hermitian_defect(const Operator& a) {
    Operator::Matrix diff = a.matrix() - Operator::Matrix(a.matrix().adjoint());
    double worst = 0.0;
    for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
        for (Operator::Matrix::InnerIterator it(diff, r); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

Operator restrict_to(const Operator& a, const SpacePtr& target) {
    const auto& src = a.space();
    if (src.num_factors() != target->num_factors()) {
        throw SpaceMismatch("restrict_to: factor counts differ");
    }
    for (std::size_t leg = 0; leg < src.num_factors(); ++leg) {
        const auto& f = src.factor(leg);
        const auto& g = target->factor(leg);
        if (f.kind != g.kind || g.dim > f.dim) {
            throw SpaceMismatch("restrict_to: target is not a truncation of the source space");
        }
    }
    // Source index -> target index, or -1 when the state is cut away.
    std::vector<std::ptrdiff_t> map(src.dim(), -1);
    std::vector<int> levels(src.num_factors());
    for (std::size_t i = 0; i < src.dim(); ++i) {
        bool kept = true;
        for (std::size_t leg = 0; leg < src.num_factors(); ++leg) {
            levels[leg] = src.level(i, leg);
            kept = kept && levels[leg] < target->factor(leg).dim;
        }
        if (kept) map[i] = static_cast<std::ptrdiff_t>(target->index_of(levels));
    }
    std::vector<Eigen::Triplet<Complex>> triplets;
    const auto& m = a.matrix();
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (Operator::Matrix::InnerIterator it(m, r); it; ++it) {
            const auto tr = map[static_cast<std::size_t>(it.row())];
            const auto tc = map[static_cast<std::size_t>(it.col())];
            if (tr >= 0 && tc >= 0) triplets.emplace_back(static_cast<int>(tr), static_cast<int>(tc), it.value());
        }
    }
    const auto n = static_cast<Eigen::Index>(target->dim());
    Operator::Matrix out(n, n);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return Operator(target, std::move(out));
}

double max_abs_diff(const Operator& a, const Operator& b) {
    if (!(a.space() == b.space())) throw SpaceMismatch("max_abs_diff: operands live on different spaces");
    Operator::Matrix diff = a.matrix() - b.matrix();
    double worst = 0.0;
    for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
        for (Operator::Matrix::InnerIterator it(diff, r); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

} // namespace effham
