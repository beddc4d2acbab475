#pragma once

#include <array>
#include <memory>

#include "splashwave/curve.hpp"
#include "splashwave/types.hpp"

namespace splashwave {

/// Anchors the sign of the square root in P(w) = (tan(w/2))^{1/2}.
///
/// The cut of the root is fixed along the ray arg(tan(w/2)) = pi/2, the ray
/// through the splash images; the only remaining freedom is a global sign,
/// which the anchor pins down. Values on the cut itself are continued from
/// the Re tan(w/2) < 0 side.
struct BranchSpec {
    Vec2 reference_point;  // point in the water region
    Vec2 anchor_value;     // the chosen root of tan(w/2) there

    /// Deep-water anchor: P(x + iy) -> (-sqrt2/2, +sqrt2/2) as y -> -inf.
    static BranchSpec canonical();
};

/// The five excluded tilde points: q^0 is a pole of Q^2, q^1..q^4 are its
/// zeros and the log singularities of the height P2^{-1}.
struct SingularPointSet {
    std::array<Vec2, 5> points;

    static const SingularPointSet& standard();
    double min_distance(Vec2 z) const;
};

/// Inputs closer than this to a singular point raise SingularPointInput.
inline constexpr double kSingularTol = 1e-8;

/// tan(w/2) evaluated stably for large |Im w|; PoleInput at w = pi mod 2pi.
Complex tan_half(Complex w);

Vec2 map_to_tilde(Complex w, const BranchSpec& branch = BranchSpec::canonical());

/// Inverse map 2*atan(z^2), canonical representative with Re w in [-pi, pi).
Complex map_from_tilde(Vec2 z);

/// |dP/dw|^2 at the pre-image: (1/16) |(1 + z^4)/z|^2 with z = z1 + i z2.
double q_squared(Vec2 z);

/// Physical height of the pre-image: ln |(i + z^2)/(i - z^2)| = Im P^{-1}(z).
double p2_inverse(Vec2 z);

Vec2 grad_q(Vec2 z);
Vec2 grad_p2_inverse(Vec2 z);

enum class MapDirection { to_tilde, from_tilde };

/// Node-wise map of a curve with the branch sign continued along alpha.
/// to_tilde takes a physical_periodic curve to a closed tilde contour;
/// from_tilde inverts it, unwrapping Re w by continuity.
PeriodicCurve map_curve(const PeriodicCurve& curve, MapDirection direction,
                        const BranchSpec& branch = BranchSpec::canonical());

/// Conformal weights entering the transformed interface equations. TildeMap
/// is the production map; FlatMap (Q = 1, height = z2) recovers the
/// untransformed water-wave system and backs the Q == 1 test hook.
class DomainMap {
  public:
    virtual ~DomainMap() = default;
    virtual double q_squared_at(Vec2 z) const = 0;
    virtual double height_at(Vec2 z) const = 0;
    virtual Vec2 grad_q_at(Vec2 z) const = 0;
    virtual Vec2 grad_height_at(Vec2 z) const = 0;
    virtual bool is_identity() const { return false; }
};

class TildeMap final : public DomainMap {
  public:
    double q_squared_at(Vec2 z) const override { return q_squared(z); }
    double height_at(Vec2 z) const override { return p2_inverse(z); }
    Vec2 grad_q_at(Vec2 z) const override { return grad_q(z); }
    Vec2 grad_height_at(Vec2 z) const override { return grad_p2_inverse(z); }
};

class FlatMap final : public DomainMap {
  public:
    double q_squared_at(Vec2) const override { return 1.0; }
    double height_at(Vec2 z) const override { return z.y; }
    Vec2 grad_q_at(Vec2) const override { return {0.0, 0.0}; }
    Vec2 grad_height_at(Vec2) const override { return {0.0, 1.0}; }
    bool is_identity() const override { return true; }
};

}  // namespace splashwave
