#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subriem/group.hpp"
#include "subriem/jet.hpp"
#include "subriem/rng.hpp"

namespace subriem {

/// Thrown when a derived field would need jets deeper than kMaxJetDepth.
/// The second-order bilinear forms need exactly depth three; a fourth nested
/// derivative has no consumer and is treated as a usage bug.
class DepthBudgetError : public std::runtime_error {
public:
    explicit DepthBudgetError(const std::string& what) : std::runtime_error(what) {}
};

class FieldNode {
public:
    virtual ~FieldNode() = default;
    virtual double eval(std::span<const double> x) const = 0;
    virtual Dual1 eval(std::span<const Dual1> x) const = 0;
    virtual Dual2 eval(std::span<const Dual2> x) const = 0;
    virtual Dual3 eval(std::span<const Dual3> x) const = 0;
};

using FieldPtr = std::shared_ptr<const FieldNode>;

/// Smooth function of the ambient matrix coordinates of one model, evaluable on
/// plain reals and on jets up to the remaining depth budget.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(Model m, FieldPtr node, int depth_budget, bool positive)
        : model_(m), node_(std::move(node)), depth_budget_(depth_budget), positive_(positive) {}

    Model model() const { return model_; }
    int depth_budget() const { return depth_budget_; }
    bool positive() const { return positive_; }
    const FieldPtr& node() const { return node_; }

    double operator()(const GroupElement& g) const {
        if (g.model != model_) throw std::invalid_argument("field evaluated on a different model's element");
        return node_->eval(g.coords());
    }

    template <class T>
    T eval(std::span<const T> x) const {
        return node_->eval(x);
    }

private:
    Model model_ = Model::Heisenberg;
    FieldPtr node_;
    int depth_budget_ = kMaxJetDepth;
    bool positive_ = false;
};

// --- constructors -----------------------------------------------------------

ScalarField coordinate(Model m, int index);
ScalarField constant(Model m, double value);

/// Sparse polynomial in the coordinates; one term is coef * prod_i x[idx[i]].
struct PolyTerm {
    double coef = 0.0;
    std::array<std::int8_t, 4> idx{};
    std::int8_t degree = 0;
};
ScalarField polynomial(Model m, std::vector<PolyTerm> terms);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator*(double c, const ScalarField& a);
ScalarField operator+(const ScalarField& a, double c);
ScalarField exp(const ScalarField& a);
ScalarField log(const ScalarField& a);  // requires a.positive()
ScalarField pow_int(const ScalarField& a, int n);

/// Derivative along the left-invariant extension of A:
/// (Af)(g) = d/dt f(g (I + tA)) at t=0, which equals d/dt f(g exp(tA)) at 0.
/// Consumes one unit of depth budget; throws DepthBudgetError when none is left.
ScalarField apply_field(const AlgebraElement& A, const ScalarField& f);

inline constexpr AlgebraElement kX{1, 0, 0};
inline constexpr AlgebraElement kY{0, 1, 0};
inline constexpr AlgebraElement kZ{0, 0, 1};

inline ScalarField dX(const ScalarField& f) { return apply_field(kX, f); }
inline ScalarField dY(const ScalarField& f) { return apply_field(kY, f); }
inline ScalarField dZ(const ScalarField& f) { return apply_field(kZ, f); }

// --- test-function suite ----------------------------------------------------

/// Random sparse polynomials of total degree <= 4 plus the positive family
/// exp(0.3 * polynomial). Deterministic per (model, seed, count).
std::vector<ScalarField> test_function_suite(Model m, std::uint64_t seed, int count);

/// Deterministic sample points for identity checks (algebra coefficients
/// N(0, sigma^2), sigma = 0.75 to keep derivative magnitudes tame).
std::vector<GroupElement> test_point_suite(Model m, std::uint64_t seed, int count, double sigma = 0.75);

/// Named coordinate symbols for the expression grammar (x/y/z on Heisenberg,
/// mIJ on SL2, mIJre/mIJim on SU2).
const std::vector<std::pair<std::string, int>>& field_symbols(Model m);

}  // namespace subriem
