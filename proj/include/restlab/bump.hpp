#pragma once

namespace restlab {

// Compactly supported smooth cutoffs. `cutoff` is 1 on [-1,1] and 0 outside
// [-2,2]; `window` is the positive bump on (-1,1) with peak 1; `annulus` is 1
// on 1/4 <= |t| <= 1/2 and vanishes outside 1/8 <= |t| <= 1.
class BumpFunction {
public:
    enum class Kind { cutoff, window, annulus };

    static const BumpFunction& cutoff();
    static const BumpFunction& window();
    static const BumpFunction& annulus();

    Kind kind() const { return kind_; }
    double support_radius() const { return radius_; }
    double operator()(double y) const;

    // Cached integral over the real line.
    double integral() const;

    // Real transform: integral of bump(u) * cos(2 pi z u) du over the line
    // (the bumps are even, so this is the full Fourier transform).
    double transform(double z) const;

private:
    explicit BumpFunction(Kind kind, double radius) : kind_(kind), radius_(radius) {}
    Kind kind_;
    double radius_;
    mutable double integral_ = -1.0;
};

} // namespace restlab
