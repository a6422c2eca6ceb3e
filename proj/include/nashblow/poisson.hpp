/**
 * @file poisson.hpp
 * @brief Bivector fields, their sharp maps and cotangent algebroids.
 */
#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "algebroid.hpp"
#include "errors.hpp"

namespace nashblow {

/// Skew d x d matrix of polynomials, pi(i,j) = pi^{ij}.
class Bivector {
public:
    Bivector() = default;
    Bivector(VarList vars, PolyMatrix pi) : vars_(std::move(vars)), pi_(std::move(pi)) {
        std::size_t d = vars_.size();
        if (pi_.rows() != d || pi_.cols() != d) throw SizeError("bivector matrix must be d x d");
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j)
                if (!(pi_(i, j) == -pi_(j, i))) throw NotSkew("bivector matrix is not skew-symmetric");
    }
    /// Upper-triangle entries only; the rest follows by skewness.
    static Bivector from_entries(VarList vars, const std::map<std::pair<std::size_t, std::size_t>, Poly>& upper) {
        std::size_t d = vars.size();
        PolyMatrix m(d, d, Poly(d));
        for (const auto& [ij, p] : upper) {
            auto [i, j] = ij;
            if (i >= d || j >= d) throw IndexError("bivector index out of range");
            if (i >= j) throw IndexError("bivector keys must have i < j");
            m(i, j) = p;
            m(j, i) = -p;
        }
        return Bivector(std::move(vars), std::move(m));
    }

    const VarList& vars() const { return vars_; }
    std::size_t dim() const { return vars_.size(); }
    const PolyMatrix& matrix() const { return pi_; }
    const Poly& operator()(std::size_t i, std::size_t j) const { return pi_(i, j); }

private:
    VarList vars_;
    PolyMatrix pi_;
};

/// Anchor R(i,j) = pi^{ij}; column j is pi#(dx_j).
inline AnchoredBundle pi_sharp(const Bivector& pi) { return AnchoredBundle(pi.vars(), pi.matrix()); }

inline VectorField gradient(const Poly& f) {
    VectorField g(f.arity(), f.arity());
    for (std::size_t k = 0; k < f.arity(); ++k) g[k] = f.diff(k);
    return g;
}

/**
 * @brief Cotangent algebroid of pi in the frame dx_1..dx_d.
 *
 * [dx_i, dx_j] = d(pi^{ji}), the sign that makes pi# a bracket morphism for
 * the anchor R(i,j) = pi^{ij}.
 */
inline AlmostLieAlgebroid cotangent_algebroid(const Bivector& pi) {
    std::map<AlmostLieAlgebroid::Pair, Section> br;
    for (std::size_t i = 0; i < pi.dim(); ++i)
        for (std::size_t j = i + 1; j < pi.dim(); ++j)
            if (!pi(i, j).is_zero()) br[{i, j}] = Section(gradient(pi(j, i)).components());
    return AlmostLieAlgebroid(pi_sharp(pi), br);
}

/// X_h = pi#(dh), so X_h[f] = {f, h}.
inline VectorField hamiltonian_vf(const Bivector& pi, const Poly& h) {
    if (h.arity() != pi.dim()) throw ArityMismatch("function arity differs from bivector base");
    return VectorField(pi.matrix() * gradient(h).components());
}

/// {f, g} = sum pi^{ij} d_i f d_j g.
inline Poly poisson_bracket(const Bivector& pi, const Poly& f, const Poly& g) {
    return apply(hamiltonian_vf(pi, g), f);
}

struct DualityCertificate {
    bool holds = false;
    Subspace kernel;       ///< ker M
    Subspace annihilator;  ///< annihilator of Im M, i.e. ker M^T
};

/// ker M against the annihilator of Im M, for any square matrix.
inline DualityCertificate annihilator_duality_check(const QMatrix& m) {
    DualityCertificate c;
    c.kernel = kernel(m);
    c.annihilator = kernel(m.transpose());
    c.holds = c.kernel == c.annihilator;
    return c;
}

inline DualityCertificate annihilator_duality_check(const Bivector& pi, const Point& x) {
    if (x.size() != pi.dim()) throw ArityMismatch("point dimension differs from bivector base");
    return annihilator_duality_check(eval(pi.matrix(), x));
}

/// Components [pi,pi]^{ijk} for i < j < k, in lexicographic order of (i,j,k).
inline std::vector<Poly> schouten_self_bracket(const Bivector& pi) {
    std::size_t d = pi.dim();
    std::vector<Poly> out;
    for (const auto& t : combinations(d, 3)) {
        std::size_t i = t[0], j = t[1], k = t[2];
        Poly s(d);
        for (std::size_t l = 0; l < d; ++l) {
            s += pi(i, l) * pi(j, k).diff(l);
            s += pi(j, l) * pi(k, i).diff(l);
            s += pi(k, l) * pi(i, j).diff(l);
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline bool is_poisson(const Bivector& pi) {
    for (const auto& c : schouten_self_bracket(pi))
        if (!c.is_zero()) return false;
    return true;
}

}  // namespace nashblow
