#include "wavecharge/grid.hpp"

#include <algorithm>

namespace wavecharge {

namespace {
// FFT-friendly sizes: 2^a 3^b 5^c (covers 16, 32, 48, 64, ...)
bool is_fft_friendly(int n) {
    if (n <= 0) return false;
    for (int p : {2, 3, 5})
        while (n % p == 0) n /= p;
    return n == 1;
}
}  // namespace

BoxGrid::BoxGrid(int n_per_axis, double box_length)
    : n_(n_per_axis), length_(box_length), spacing_(box_length / n_per_axis) {
    if (n_per_axis < 16 || n_per_axis % 2 != 0 || !is_fft_friendly(n_per_axis))
        throw std::invalid_argument(
            "BoxGrid: n_per_axis must be an even FFT-friendly size >= 16 (factors 2/3/5), got " +
            std::to_string(n_per_axis));
    if (!(box_length > 0.0))
        throw std::invalid_argument("BoxGrid: box_length must be positive");
}

ScalarField::ScalarField(const BoxGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("ScalarField: value count does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(*this, o, "ScalarField::operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(*this, o, "ScalarField::operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

void ScalarField::axpy(double s, const ScalarField& x) {
    require_same_grid(*this, x, "ScalarField::axpy");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * x.values_[i];
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double ScalarField::interpolate(const Vec3& x) const {
    const int n = grid_.n();
    const double h = grid_.spacing();
    double fx[3];
    int i0[3];
    for (int d = 0; d < 3; ++d) {
        double s = (x[d] + 0.5 * grid_.length()) / h;
        double fl = std::floor(s);
        fx[d] = s - fl;
        i0[d] = grid_.wrap_index(int(fl));
    }
    double acc = 0.0;
    for (int dz = 0; dz < 2; ++dz) {
        int iz = dz ? (i0[2] + 1) % n : i0[2];
        double wz = dz ? fx[2] : 1.0 - fx[2];
        for (int dy = 0; dy < 2; ++dy) {
            int iy = dy ? (i0[1] + 1) % n : i0[1];
            double wy = dy ? fx[1] : 1.0 - fx[1];
            for (int dx = 0; dx < 2; ++dx) {
                int ix = dx ? (i0[0] + 1) % n : i0[0];
                double wx = dx ? fx[0] : 1.0 - fx[0];
                acc += wx * wy * wz * values_[grid_.index(ix, iy, iz)];
            }
        }
    }
    return acc;
}

double ScalarField::interpolate_cubic_x1(double x1, int iy, int iz) const {
    const int n = grid_.n();
    double s = (x1 + 0.5 * grid_.length()) / grid_.spacing();
    double fl = std::floor(s);
    double t = s - fl;
    int i1 = grid_.wrap_index(int(fl));
    if (t == 0.0) return values_[grid_.index(i1, iy, iz)];  // exact grid hit
    int im = (i1 + n - 1) % n;
    int i2 = (i1 + 1) % n;
    int i3 = (i1 + 2) % n;
    double pm = values_[grid_.index(im, iy, iz)];
    double p0 = values_[grid_.index(i1, iy, iz)];
    double p1 = values_[grid_.index(i2, iy, iz)];
    double p2 = values_[grid_.index(i3, iy, iz)];
    // Catmull-Rom
    double a = -0.5 * pm + 1.5 * p0 - 1.5 * p1 + 0.5 * p2;
    double b = pm - 2.5 * p0 + 2.0 * p1 - 0.5 * p2;
    double c = 0.5 * (p1 - pm);
    return ((a * t + b) * t + c) * t + p0;
}

double inner(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "inner");
    double s = 0.0;
    const auto& av = a.values();
    const auto& bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
    return s * a.grid().cell_volume();
}

double l2_norm_sq(const ScalarField& a) {
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return s * a.grid().cell_volume();
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where) {
    if (a.grid() != b.grid())
        throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

WaveState::WaveState(ScalarField u_, ScalarField ut_, double t)
    : u(std::move(u_)), ut(std::move(ut_)), time(t) {
    if (u.grid() != ut.grid())
        throw std::invalid_argument("WaveState: u and ut must share one grid");
}

}  // namespace wavecharge
