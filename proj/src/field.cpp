#include "subriem/field.hpp"

#include <algorithm>
#include <cmath>

namespace subriem {

namespace {

template <class D>
class NodeBase : public FieldNode {
public:
    double eval(std::span<const double> x) const final { return self().template ev<double>(x); }
    Dual1 eval(std::span<const Dual1> x) const final { return self().template ev<Dual1>(x); }
    Dual2 eval(std::span<const Dual2> x) const final { return self().template ev<Dual2>(x); }
    Dual3 eval(std::span<const Dual3> x) const final { return self().template ev<Dual3>(x); }

private:
    const D& self() const { return static_cast<const D&>(*this); }
};

class CoordNode final : public NodeBase<CoordNode> {
public:
    explicit CoordNode(int k) : k_(k) {}
    template <class T>
    T ev(std::span<const T> x) const {
        return x[static_cast<std::size_t>(k_)];
    }

private:
    int k_;
};

class ConstNode final : public NodeBase<ConstNode> {
public:
    explicit ConstNode(double c) : c_(c) {}
    template <class T>
    T ev(std::span<const T>) const {
        return T(c_);
    }

private:
    double c_;
};

enum class BinOp { Add, Sub, Mul, Div };

class BinNode final : public NodeBase<BinNode> {
public:
    BinNode(BinOp op, FieldPtr a, FieldPtr b) : op_(op), a_(std::move(a)), b_(std::move(b)) {}
    template <class T>
    T ev(std::span<const T> x) const {
        const T u = a_->eval(x);
        const T v = b_->eval(x);
        switch (op_) {
            case BinOp::Add: return u + v;
            case BinOp::Sub: return u - v;
            case BinOp::Mul: return u * v;
            case BinOp::Div: return u / v;
        }
        return u;
    }

private:
    BinOp op_;
    FieldPtr a_, b_;
};

enum class UnOp { Neg, Exp, Log, Sqrt };

class UnNode final : public NodeBase<UnNode> {
public:
    UnNode(UnOp op, FieldPtr a) : op_(op), a_(std::move(a)) {}
    template <class T>
    T ev(std::span<const T> x) const {
        const T u = a_->eval(x);
        switch (op_) {
            case UnOp::Neg: return -u;
            case UnOp::Exp: return exp(u);
            case UnOp::Log: return log(u);
            case UnOp::Sqrt: return sqrt(u);
        }
        return u;
    }

private:
    UnOp op_;
    FieldPtr a_;
};

class ScaleNode final : public NodeBase<ScaleNode> {
public:
    ScaleNode(double c, FieldPtr a) : c_(c), a_(std::move(a)) {}
    template <class T>
    T ev(std::span<const T> x) const {
        return a_->eval(x) * c_;
    }

private:
    double c_;
    FieldPtr a_;
};

class ShiftNode final : public NodeBase<ShiftNode> {
public:
    ShiftNode(double c, FieldPtr a) : c_(c), a_(std::move(a)) {}
    template <class T>
    T ev(std::span<const T> x) const {
        return a_->eval(x) + c_;
    }

private:
    double c_;
    FieldPtr a_;
};

class IpowNode final : public NodeBase<IpowNode> {
public:
    IpowNode(FieldPtr a, int n) : a_(std::move(a)), n_(n) {}
    template <class T>
    T ev(std::span<const T> x) const {
        return ipow(a_->eval(x), n_);
    }

private:
    FieldPtr a_;
    int n_;
};

class PolyNode final : public NodeBase<PolyNode> {
public:
    explicit PolyNode(std::vector<PolyTerm> terms) : terms_(std::move(terms)) {}
    template <class T>
    T ev(std::span<const T> x) const {
        T acc(0.0);
        for (const PolyTerm& t : terms_) {
            T p(t.coef);
            for (int i = 0; i < t.degree; ++i) p = p * x[static_cast<std::size_t>(t.idx[static_cast<std::size_t>(i)])];
            acc = acc + p;
        }
        return acc;
    }

private:
    std::vector<PolyTerm> terms_;
};

class DirectionalNode final : public NodeBase<DirectionalNode> {
public:
    DirectionalNode(Model m, const AlgebraElement& A, FieldPtr inner)
        : model_(m), amat_(embed(m, A)), inner_(std::move(inner)) {}

    template <class T>
    T ev(std::span<const T> x) const {
        if constexpr (jet_depth_v<T> >= kMaxJetDepth) {
            throw DepthBudgetError("directional derivative would need jets deeper than depth 3");
        } else {
            using D = Dual<T>;
            const int n = coord_count(model_);
            // Entries of g (I + tA) are linear in t: g + t (g A).
            std::array<T, kMaxCoords> b{};
            mul_coords_right(model_, x.data(), amat_.data(), b.data());
            std::array<D, kMaxCoords> lifted;
            for (int k = 0; k < n; ++k) lifted[k] = D{x[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(k)]};
            const D r = inner_->eval(std::span<const D>(lifted.data(), static_cast<std::size_t>(n)));
            return r.du;
        }
    }

private:
    Model model_;
    Coords amat_;
    FieldPtr inner_;
};

void require_same_model(const ScalarField& a, const ScalarField& b) {
    if (a.model() != b.model()) throw std::invalid_argument("fields belong to different models");
}

}  // namespace

ScalarField coordinate(Model m, int index) {
    if (index < 0 || index >= coord_count(m)) throw std::invalid_argument("coordinate index out of range");
    return {m, std::make_shared<CoordNode>(index), kMaxJetDepth, false};
}

ScalarField constant(Model m, double value) {
    return {m, std::make_shared<ConstNode>(value), kMaxJetDepth, value > 0.0};
}

ScalarField polynomial(Model m, std::vector<PolyTerm> terms) {
    for (const auto& t : terms) {
        if (t.degree < 0 || t.degree > 4) throw std::invalid_argument("polynomial term degree out of range");
        for (int i = 0; i < t.degree; ++i)
            if (t.idx[static_cast<std::size_t>(i)] < 0 || t.idx[static_cast<std::size_t>(i)] >= coord_count(m))
                throw std::invalid_argument("polynomial term coordinate out of range");
    }
    return {m, std::make_shared<PolyNode>(std::move(terms)), kMaxJetDepth, false};
}

namespace {
ScalarField bin(BinOp op, const ScalarField& a, const ScalarField& b, bool positive) {
    require_same_model(a, b);
    return {a.model(), std::make_shared<BinNode>(op, a.node(), b.node()),
            std::min(a.depth_budget(), b.depth_budget()), positive};
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return bin(BinOp::Add, a, b, a.positive() && b.positive());
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return bin(BinOp::Sub, a, b, false); }
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return bin(BinOp::Mul, a, b, a.positive() && b.positive());
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
    return bin(BinOp::Div, a, b, a.positive() && b.positive());
}
ScalarField operator-(const ScalarField& a) { return {a.model(), std::make_shared<UnNode>(UnOp::Neg, a.node()), a.depth_budget(), false}; }
ScalarField operator*(double c, const ScalarField& a) {
    return {a.model(), std::make_shared<ScaleNode>(c, a.node()), a.depth_budget(), a.positive() && c > 0.0};
}
ScalarField operator+(const ScalarField& a, double c) {
    return {a.model(), std::make_shared<ShiftNode>(c, a.node()), a.depth_budget(), a.positive() && c >= 0.0};
}
ScalarField exp(const ScalarField& a) {
    return {a.model(), std::make_shared<UnNode>(UnOp::Exp, a.node()), a.depth_budget(), true};
}
ScalarField log(const ScalarField& a) {
    if (!a.positive()) throw std::invalid_argument("log of a field not marked positive");
    return {a.model(), std::make_shared<UnNode>(UnOp::Log, a.node()), a.depth_budget(), false};
}
ScalarField pow_int(const ScalarField& a, int n) {
    if (n < 0) throw std::invalid_argument("pow_int wants n >= 0");
    return {a.model(), std::make_shared<IpowNode>(a.node(), n), a.depth_budget(), a.positive()};
}

ScalarField apply_field(const AlgebraElement& A, const ScalarField& f) {
    if (f.depth_budget() <= 0)
        throw DepthBudgetError("depth budget exhausted: a fourth nested derivative was requested");
    return {f.model(), std::make_shared<DirectionalNode>(f.model(), A, f.node()), f.depth_budget() - 1, false};
}

std::vector<ScalarField> test_function_suite(Model m, std::uint64_t seed, int count) {
    if (count < 0) throw std::invalid_argument("suite count must be >= 0");
    std::vector<ScalarField> out;
    out.reserve(static_cast<std::size_t>(count));
    Rng rng = Rng::stream(seed, 0xf1e1d5);
    const int nc = coord_count(m);
    auto random_poly = [&]() {
        const int nterm = 3 + static_cast<int>(rng.below(6));
        std::vector<PolyTerm> terms;
        terms.reserve(static_cast<std::size_t>(nterm) + 1);
        for (int i = 0; i < nterm; ++i) {
            PolyTerm t;
            t.coef = 2.0 * rng.uniform() - 1.0;
            t.degree = static_cast<std::int8_t>(rng.below(5));
            for (int d = 0; d < t.degree; ++d)
                t.idx[static_cast<std::size_t>(d)] = static_cast<std::int8_t>(rng.below(static_cast<std::uint64_t>(nc)));
            terms.push_back(t);
        }
        return polynomial(m, std::move(terms));
    };
    for (int i = 0; i < count; ++i) {
        if (i % 2 == 0) {
            out.push_back(random_poly());
        } else {
            out.push_back(exp(0.3 * random_poly()));
        }
    }
    return out;
}

std::vector<GroupElement> test_point_suite(Model m, std::uint64_t seed, int count, double sigma) {
    Rng rng = Rng::stream(seed, 0x9a17b0);
    std::vector<GroupElement> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pts.push_back(random_element(m, rng, sigma));
    return pts;
}

const std::vector<std::pair<std::string, int>>& field_symbols(Model m) {
    static const std::vector<std::pair<std::string, int>> heis = {
        {"x", 1}, {"y", 5}, {"z", 2},
        {"m00", 0}, {"m01", 1}, {"m02", 2}, {"m10", 3}, {"m11", 4}, {"m12", 5}, {"m20", 6}, {"m21", 7}, {"m22", 8}};
    static const std::vector<std::pair<std::string, int>> su2 = {
        {"m00re", 0}, {"m00im", 1}, {"m01re", 2}, {"m01im", 3},
        {"m10re", 4}, {"m10im", 5}, {"m11re", 6}, {"m11im", 7}};
    static const std::vector<std::pair<std::string, int>> sl2 = {
        {"m00", 0}, {"m01", 1}, {"m10", 2}, {"m11", 3}};
    switch (m) {
        case Model::Heisenberg: return heis;
        case Model::SU2: return su2;
        case Model::SL2: return sl2;
    }
    return heis;
}

}  // namespace subriem
