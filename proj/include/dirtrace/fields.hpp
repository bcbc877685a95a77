#pragma once

#include "dirtrace/geometry.hpp"
#include "dirtrace/quadrature.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dirtrace {

enum class Regularity { Smooth, PiecewiseSmooth, Singular };

// Scalar function with its gradient.  Library fields may be discontinuous or
// singular only on sets that lie outside the domains they are meant for.
class ScalarField {
public:
    using Eval = std::function<double(Vec2)>;
    using Grad = std::function<Vec2(Vec2)>;

    ScalarField(std::string label, Eval eval, Grad grad,
                Regularity regularity = Regularity::Smooth, std::string singular_locus = {});

    double operator()(Vec2 p) const { return eval_(p); }
    Vec2 grad(Vec2 p) const { return grad_(p); }
    double derivative(Vec2 p, const Direction& dir) const { return dot(grad_(p), dir.vec()); }

    const std::string& label() const { return label_; }
    Regularity regularity() const { return regularity_; }
    const std::string& singular_locus() const { return locus_; }

    // Closed support, when the field is a compactly supported bump.
    const std::optional<Box>& support() const { return support_; }
    ScalarField& with_support(Box box);

    Integrand as_integrand() const { return eval_; }

private:
    std::string label_;
    Eval eval_;
    Grad grad_;
    Regularity regularity_;
    std::string locus_;
    std::optional<Box> support_;
};

ScalarField constant_field(double value);
ScalarField coordinate_field(int index);
// x^-alpha in the second coordinate.
ScalarField cusp_power(double alpha);
ScalarField sign_y();
// x on ]0,1[ and x - 1 on ]1,2[.
ScalarField crack_1d();
// Antisymmetric across the slit {1/2} x [0,1]; zero below the x-axis.
ScalarField crack_slit();
// Tensor product of C^1 polynomial bumps, peak value 1.
ScalarField tensor_bump(Box support);

// "name" or "name:key=value,key=value".
ScalarField field_from_name(std::string_view spec);
std::vector<std::string> field_names();

// Six smooth pairs used as a default test matrix.
std::vector<std::pair<ScalarField, ScalarField>> smooth_field_pairs();

// (int u^2 + (d_theta u)^2)^(1/2)
IntegralResult norm_theta(const ScalarField& u, const Domain& domain, const Direction& dir,
                          const QuadratureSpec& spec);
IntegralResult h1_norm(const ScalarField& u, const Domain& domain, const QuadratureSpec& spec);
IntegralResult l2_norm(const ScalarField& u, const Domain& domain, const QuadratureSpec& spec);

} // namespace dirtrace
