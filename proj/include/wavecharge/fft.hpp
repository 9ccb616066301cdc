#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "wavecharge/grid.hpp"

namespace wavecharge {

using Complex = std::complex<double>;

// FFTW-backed trigonometric transforms on one BoxGrid.
//
// Real fields use the half-spectrum layout kx-fastest,
//   idx = kx + (n/2+1)*(ky + n*kz),  kx in [0, n/2], ky/kz in [0, n),
// with coefficients normalized as a trigonometric series:
//   f(x) = sum_k c_k exp(i k.(x + L/2))      (grid point j has x+L/2 = j*h).
// Complex fields (half-wave variable) use the full n^3 spectrum.
//
// A transform owns its FFTW plans and scratch buffers; one instance per
// worker, never shared mutably across threads. Plan creation takes a global
// lock (the FFTW planner is not thread-safe), execution does not.
class SpectralTransform {
public:
    explicit SpectralTransform(const BoxGrid& grid);
    ~SpectralTransform();
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    const BoxGrid& grid() const { return grid_; }
    std::size_t spectrum_size() const { return spec_size_; }
    std::size_t full_size() const { return grid_.size(); }

    void forward(const ScalarField& f, std::vector<Complex>& spec);
    void inverse(const std::vector<Complex>& spec, ScalarField& out);

    void forward_complex(const std::vector<Complex>& in, std::vector<Complex>& spec);
    void inverse_complex(const std::vector<Complex>& spec, std::vector<Complex>& out);

    // Signed lattice frequency in physical units 2*pi*m/L.
    double freq(int index) const { return two_pi_over_length_ * signed_mode(index); }
    int signed_mode(int index) const { return index <= grid_.n() / 2 ? index : index - grid_.n(); }

    // |k| per half-spectrum index (zero at k=0).
    const std::vector<double>& k_abs() const { return k_abs_; }
    // |k| per full-spectrum index (for complex transforms).
    const std::vector<double>& k_abs_full() const { return k_abs_full_; }
    // Conjugate-symmetry multiplicity (1 or 2) per half-spectrum index.
    const std::vector<double>& fold_weight() const { return fold_weight_; }

    // integral |grad f|^2 dx via Parseval.
    double h1_seminorm_sq(const ScalarField& f);
    // integral f^2 dx via Parseval of a precomputed spectrum.
    double l2_sq_from_spectrum(const std::vector<Complex>& spec) const;

    // -Delta f, spectral symbol |k|^2.
    void laplacian_neg(const ScalarField& f, ScalarField& out);
    // d/dx1 alone (boost resampling needs only this component).
    void d_dx1(const ScalarField& f, ScalarField& out);
    // components of grad f (Nyquist modes zeroed on the derivative axis).
    void gradient(const ScalarField& f, std::array<ScalarField, 3>& out);
    // sqrt(-Delta) f and its pseudo-inverse (k=0 mode mapped to zero).
    void sqrt_laplacian(const ScalarField& f, ScalarField& out);
    void inv_sqrt_laplacian(const ScalarField& f, ScalarField& out);

    // Trigonometric-series evaluation of f at arbitrary points (exact for
    // grid-band-limited data). O(n^3) per point.
    std::vector<double> evaluate_points(const ScalarField& f, const std::vector<Vec3>& pts);

private:
    BoxGrid grid_;
    std::size_t spec_size_;
    double two_pi_over_length_;
    std::vector<double> k_abs_;
    std::vector<double> k_abs_full_;
    std::vector<double> fold_weight_;

    struct Plans;
    std::unique_ptr<Plans> plans_;
};

}  // namespace wavecharge
