#ifndef MAHYP_JET_HPP
#define MAHYP_JET_HPP

#include <cmath>

namespace mahyp {

/// The five first-order jet coordinates. Order is load-bearing: it indexes
/// partial-derivative arrays throughout.
enum class Var : int { x = 0, y = 1, z = 2, p = 3, q = 4 };

inline constexpr int kNumVars = 5;

constexpr const char* var_name(Var v) {
    constexpr const char* names[kNumVars] = {"x", "y", "z", "p", "q"};
    return names[static_cast<int>(v)];
}

/// A point (x, y, z, p, q) of first-order jet space; p and q carry the
/// meaning z_x and z_y.
struct JetPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double p = 0.0;
    double q = 0.0;

    double operator[](Var v) const {
        switch (v) {
            case Var::x: return x;
            case Var::y: return y;
            case Var::z: return z;
            case Var::p: return p;
            case Var::q: return q;
        }
        return 0.0;
    }

    double& operator[](Var v) {
        switch (v) {
            case Var::x: return x;
            case Var::y: return y;
            case Var::z: return z;
            case Var::p: return p;
            case Var::q: return q;
        }
        return x;
    }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(p) &&
               std::isfinite(q);
    }
};

}  // namespace mahyp

#endif
