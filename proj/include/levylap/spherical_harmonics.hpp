#pragma once

#include <vector>

namespace levylap {

/// Value and derivatives of a real spherical harmonic Y_{l,m} at (theta, phi),
/// normalized over the unit sphere. The basis convention is
///   m = 0:  N_{l0} P_l(cos theta)
///   m > 0:  sqrt(2) N_{lm} P_l^m(cos theta) cos(m phi)
///   m < 0:  sqrt(2) N_{l|m|} P_l^{|m|}(cos theta) sin(|m| phi)
/// with N_{lm} = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) and Condon-Shortley
/// phases inside P_l^m.
struct SphHarmJet {
    double y = 0.0;    // Y
    double yt = 0.0;   // dY/dtheta
    double ytt = 0.0;  // d2Y/dtheta2
    double yp = 0.0;   // dY/dphi
    double ypp = 0.0;  // d2Y/dphi2
    double ytp = 0.0;  // d2Y/dtheta dphi
};

SphHarmJet real_sph_harm_jet(int l, int m, double theta, double phi);

double real_sph_harm(int l, int m, double theta, double phi);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace levylap
