#pragma once

// Thin wrappers around Eigen's FFT for 1-periodic real sequences.
// Convention: coefficients c_k = (1/N) sum_j v_j e^{-2 pi i j k / N},
// so v(s) = sum_k c_k e^{2 pi i k s} on the grid s_j = j/N.

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "slb/errors.hpp"

namespace slb::fft {

using Cd = std::complex<double>;

/// signed mode number of FFT bin m in a length-N transform
inline long mode_of_bin(std::size_t m, std::size_t n) {
    return m <= n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

inline std::vector<Cd> forward(const std::vector<double>& v) {
    Eigen::FFT<double> fft;
    std::vector<Cd> out;
    std::vector<Cd> in(v.begin(), v.end());
    fft.fwd(out, in);
    const double inv = 1.0 / static_cast<double>(v.size());
    for (auto& c : out) c *= inv;
    return out;
}

inline std::vector<double> inverse(const std::vector<Cd>& c) {
    Eigen::FFT<double> fft;
    std::vector<Cd> out;
    std::vector<Cd> in(c);
    for (auto& x : in) x *= static_cast<double>(c.size());
    fft.inv(out, in);
    std::vector<double> v(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) v[i] = out[i].real();
    return v;
}

/// per-component spectra of a sampled R^3-valued periodic function
inline std::array<std::vector<Cd>, 3> forward3(const std::vector<Eigen::Vector3d>& v) {
    std::array<std::vector<Cd>, 3> out;
    std::vector<double> comp(v.size());
    for (int d = 0; d < 3; ++d) {
        for (std::size_t i = 0; i < v.size(); ++i) comp[i] = v[i][d];
        out[d] = forward(comp);
    }
    return out;
}

inline std::vector<Eigen::Vector3d> inverse3(const std::array<std::vector<Cd>, 3>& c) {
    std::vector<Eigen::Vector3d> v(c[0].size());
    for (int d = 0; d < 3; ++d) {
        const auto comp = inverse(c[d]);
        for (std::size_t i = 0; i < comp.size(); ++i) v[i][d] = comp[i];
    }
    return v;
}

/// evaluate a spectrum at an arbitrary point (trigonometric interpolation);
/// the Nyquist bin of even-length transforms is split symmetrically
inline double eval_spectrum(const std::vector<Cd>& c, double s) {
    const std::size_t n = c.size();
    double acc = c[0].real();
    for (std::size_t m = 1; m < n; ++m) {
        const long k = mode_of_bin(m, n);
        const Cd ph = std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) * s);
        double w = 1.0;
        if (n % 2 == 0 && m == n / 2) w = 0.5;  // split Nyquist with its mirror
        acc += w * (c[m] * ph).real();
        if (n % 2 == 0 && m == n / 2) acc += w * (std::conj(c[m]) * std::conj(ph)).real();
    }
    return acc;
}

} // namespace slb::fft
