#pragma once

namespace chns {

/// Quartic double-well F(s) = (s^2 - 1)^2 with wells at s = +-1.
///
/// F'' >= -4 everywhere. `stabilization` is the constant S of the linear
/// stabilizing term used by the semi-implicit Cahn-Hilliard step; the default
/// 2 equals max|F''| on [-1, 1] divided by 4. `enabled = false` replaces F by
/// zero (test-only toggle that makes the phase equation linear).
struct Potential {
    double stabilization = 2.0;
    bool enabled = true;

    double f_val(double s) const noexcept {
        if (!enabled) return 0.0;
        const double a = s * s - 1.0;
        return a * a;
    }
    double f_d1(double s) const noexcept { return enabled ? 4.0 * s * s * s - 4.0 * s : 0.0; }
    double f_d2(double s) const noexcept { return enabled ? 12.0 * s * s - 4.0 : 0.0; }
    double f_d3(double s) const noexcept { return enabled ? 24.0 * s : 0.0; }
};

}  // namespace chns
