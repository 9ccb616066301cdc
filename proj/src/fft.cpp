#include "wavecharge/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace wavecharge {

namespace {
std::mutex planner_mutex;
}

struct SpectralTransform::Plans {
    double* real_buf = nullptr;
    fftw_complex* half_buf = nullptr;
    fftw_complex* full_in = nullptr;
    fftw_complex* full_out = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    fftw_plan c2c_fwd = nullptr;
    fftw_plan c2c_bwd = nullptr;

    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex);
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
        if (c2c_fwd) fftw_destroy_plan(c2c_fwd);
        if (c2c_bwd) fftw_destroy_plan(c2c_bwd);
        fftw_free(real_buf);
        fftw_free(half_buf);
        fftw_free(full_in);
        fftw_free(full_out);
    }
};

SpectralTransform::SpectralTransform(const BoxGrid& grid)
    : grid_(grid),
      spec_size_(std::size_t(grid.n()) * grid.n() * (grid.n() / 2 + 1)),
      two_pi_over_length_(2.0 * M_PI / grid.length()),
      plans_(std::make_unique<Plans>()) {
    const int n = grid_.n();
    const int nh = n / 2 + 1;
    plans_->real_buf = fftw_alloc_real(grid_.size());
    plans_->half_buf = fftw_alloc_complex(spec_size_);
    plans_->full_in = fftw_alloc_complex(grid_.size());
    plans_->full_out = fftw_alloc_complex(grid_.size());
    {
        // FFTW_ESTIMATE keeps plans deterministic across runs.
        std::lock_guard<std::mutex> lock(planner_mutex);
        plans_->r2c = fftw_plan_dft_r2c_3d(n, n, n, plans_->real_buf, plans_->half_buf, FFTW_ESTIMATE);
        plans_->c2r = fftw_plan_dft_c2r_3d(n, n, n, plans_->half_buf, plans_->real_buf, FFTW_ESTIMATE);
        plans_->c2c_fwd =
            fftw_plan_dft_3d(n, n, n, plans_->full_in, plans_->full_out, FFTW_FORWARD, FFTW_ESTIMATE);
        plans_->c2c_bwd =
            fftw_plan_dft_3d(n, n, n, plans_->full_in, plans_->full_out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    k_abs_.resize(spec_size_);
    fold_weight_.resize(spec_size_);
    for (int kz = 0; kz < n; ++kz) {
        double fz = freq(kz);
        for (int ky = 0; ky < n; ++ky) {
            double fy = freq(ky);
            for (int kx = 0; kx < nh; ++kx) {
                double fx = two_pi_over_length_ * kx;
                std::size_t idx = std::size_t(kx) + std::size_t(nh) * (ky + std::size_t(n) * kz);
                k_abs_[idx] = std::sqrt(fx * fx + fy * fy + fz * fz);
                fold_weight_[idx] = (kx == 0 || kx == n / 2) ? 1.0 : 2.0;
            }
        }
    }
    k_abs_full_.resize(grid_.size());
    for (int kz = 0; kz < n; ++kz) {
        double fz = freq(kz);
        for (int ky = 0; ky < n; ++ky) {
            double fy = freq(ky);
            for (int kx = 0; kx < n; ++kx) {
                double fx = freq(kx);
                k_abs_full_[std::size_t(kx) + std::size_t(n) * (ky + std::size_t(n) * kz)] =
                    std::sqrt(fx * fx + fy * fy + fz * fz);
            }
        }
    }
}

SpectralTransform::~SpectralTransform() = default;

void SpectralTransform::forward(const ScalarField& f, std::vector<Complex>& spec) {
    if (f.grid() != grid_) throw std::invalid_argument("SpectralTransform::forward: grid mismatch");
    spec.resize(spec_size_);
    std::memcpy(plans_->real_buf, f.values().data(), grid_.size() * sizeof(double));
    fftw_execute(plans_->r2c);
    const double scale = 1.0 / double(grid_.size());
    for (std::size_t i = 0; i < spec_size_; ++i)
        spec[i] = Complex(plans_->half_buf[i][0], plans_->half_buf[i][1]) * scale;
}

void SpectralTransform::inverse(const std::vector<Complex>& spec, ScalarField& out) {
    if (spec.size() != spec_size_) throw std::invalid_argument("SpectralTransform::inverse: bad spectrum size");
    if (out.grid() != grid_) out = ScalarField(grid_);
    // multi-d c2r destroys its input; work from the scratch copy
    for (std::size_t i = 0; i < spec_size_; ++i) {
        plans_->half_buf[i][0] = spec[i].real();
        plans_->half_buf[i][1] = spec[i].imag();
    }
    fftw_execute(plans_->c2r);
    std::memcpy(out.values().data(), plans_->real_buf, grid_.size() * sizeof(double));
}

void SpectralTransform::forward_complex(const std::vector<Complex>& in, std::vector<Complex>& spec) {
    if (in.size() != grid_.size()) throw std::invalid_argument("forward_complex: bad field size");
    spec.resize(grid_.size());
    std::memcpy(plans_->full_in, in.data(), grid_.size() * sizeof(fftw_complex));
    fftw_execute(plans_->c2c_fwd);
    const double scale = 1.0 / double(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i)
        spec[i] = Complex(plans_->full_out[i][0], plans_->full_out[i][1]) * scale;
}

void SpectralTransform::inverse_complex(const std::vector<Complex>& spec, std::vector<Complex>& out) {
    if (spec.size() != grid_.size()) throw std::invalid_argument("inverse_complex: bad spectrum size");
    out.resize(grid_.size());
    std::memcpy(plans_->full_in, spec.data(), grid_.size() * sizeof(fftw_complex));
    fftw_execute(plans_->c2c_bwd);
    for (std::size_t i = 0; i < grid_.size(); ++i)
        out[i] = Complex(plans_->full_out[i][0], plans_->full_out[i][1]);
}

double SpectralTransform::h1_seminorm_sq(const ScalarField& f) {
    std::vector<Complex> spec;
    forward(f, spec);
    double s = 0.0;
    for (std::size_t i = 0; i < spec_size_; ++i)
        s += fold_weight_[i] * k_abs_[i] * k_abs_[i] * std::norm(spec[i]);
    return s * grid_.length() * grid_.length() * grid_.length();
}

double SpectralTransform::l2_sq_from_spectrum(const std::vector<Complex>& spec) const {
    double s = 0.0;
    for (std::size_t i = 0; i < spec_size_; ++i) s += fold_weight_[i] * std::norm(spec[i]);
    return s * grid_.length() * grid_.length() * grid_.length();
}

void SpectralTransform::laplacian_neg(const ScalarField& f, ScalarField& out) {
    std::vector<Complex> spec;
    forward(f, spec);
    for (std::size_t i = 0; i < spec_size_; ++i) spec[i] *= k_abs_[i] * k_abs_[i];
    inverse(spec, out);
}

void SpectralTransform::gradient(const ScalarField& f, std::array<ScalarField, 3>& out) {
    const int n = grid_.n();
    const int nh = n / 2 + 1;
    std::vector<Complex> spec, dspec(spec_size_);
    forward(f, spec);
    for (int axis = 0; axis < 3; ++axis) {
        for (int kz = 0; kz < n; ++kz) {
            for (int ky = 0; ky < n; ++ky) {
                for (int kx = 0; kx < nh; ++kx) {
                    std::size_t idx = std::size_t(kx) + std::size_t(nh) * (ky + std::size_t(n) * kz);
                    int m = axis == 0 ? kx : (axis == 1 ? ky : kz);
                    // Nyquist mode has no well-defined odd derivative; drop it.
                    double k = (m == n / 2) ? 0.0 : two_pi_over_length_ * signed_mode(m);
                    dspec[idx] = Complex(0.0, k) * spec[idx];
                }
            }
        }
        if (out[axis].grid() != grid_) out[axis] = ScalarField(grid_);
        inverse(dspec, out[axis]);
    }
}

void SpectralTransform::d_dx1(const ScalarField& f, ScalarField& out) {
    const int n = grid_.n();
    const int nh = n / 2 + 1;
    std::vector<Complex> spec;
    forward(f, spec);
    for (int kz = 0; kz < n; ++kz)
        for (int ky = 0; ky < n; ++ky)
            for (int kx = 0; kx < nh; ++kx) {
                std::size_t idx = std::size_t(kx) + std::size_t(nh) * (ky + std::size_t(n) * kz);
                double k = (kx == n / 2) ? 0.0 : two_pi_over_length_ * kx;
                spec[idx] *= Complex(0.0, k);
            }
    if (out.grid() != grid_) out = ScalarField(grid_);
    inverse(spec, out);
}

void SpectralTransform::sqrt_laplacian(const ScalarField& f, ScalarField& out) {
    std::vector<Complex> spec;
    forward(f, spec);
    for (std::size_t i = 0; i < spec_size_; ++i) spec[i] *= k_abs_[i];
    inverse(spec, out);
}

void SpectralTransform::inv_sqrt_laplacian(const ScalarField& f, ScalarField& out) {
    std::vector<Complex> spec;
    forward(f, spec);
    for (std::size_t i = 0; i < spec_size_; ++i)
        spec[i] = k_abs_[i] > 0.0 ? spec[i] / k_abs_[i] : Complex(0.0);
    inverse(spec, out);
}

std::vector<double> SpectralTransform::evaluate_points(const ScalarField& f, const std::vector<Vec3>& pts) {
    const int n = grid_.n();
    const int nh = n / 2 + 1;
    std::vector<Complex> spec;
    forward(f, spec);

    std::vector<double> result(pts.size(), 0.0);
    std::vector<Complex> px(nh), py(n), pz(n);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        // coefficients are phased against x + L/2 (see class comment)
        Vec3 s = {pts[p][0] + 0.5 * grid_.length(), pts[p][1] + 0.5 * grid_.length(),
                  pts[p][2] + 0.5 * grid_.length()};
        for (int kx = 0; kx < nh; ++kx)
            px[kx] = std::exp(Complex(0.0, two_pi_over_length_ * kx * s[0]));
        for (int m = 0; m < n; ++m) {
            py[m] = std::exp(Complex(0.0, freq(m) * s[1]));
            pz[m] = std::exp(Complex(0.0, freq(m) * s[2]));
        }
        Complex acc(0.0);
        for (int kz = 0; kz < n; ++kz) {
            Complex rowz(0.0);
            for (int ky = 0; ky < n; ++ky) {
                Complex rowy(0.0);
                const std::size_t base = std::size_t(nh) * (ky + std::size_t(n) * kz);
                for (int kx = 0; kx < nh; ++kx)
                    rowy += fold_weight_[base + kx] * spec[base + kx] * px[kx];
                rowz += rowy * py[ky];
            }
            acc += rowz * pz[kz];
        }
        result[p] = acc.real();
    }
    return result;
}

}  // namespace wavecharge
