#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavecharge {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

// Periodic cube [-L/2, L/2)^3 sampled on n points per axis, n a power of two.
// Grid point i maps to coordinate -L/2 + i*h with h = L/n; cell volume h^3.
class BoxGrid {
public:
    BoxGrid(int n_per_axis, double box_length);

    int n() const { return n_; }
    double length() const { return length_; }
    double spacing() const { return spacing_; }
    double cell_volume() const { return spacing_ * spacing_ * spacing_; }
    std::size_t size() const { return std::size_t(n_) * n_ * n_; }

    std::size_t index(int ix, int iy, int iz) const {
        return std::size_t(ix) + std::size_t(n_) * (std::size_t(iy) + std::size_t(n_) * iz);
    }
    double coord(int i) const { return -0.5 * length_ + spacing_ * i; }
    Vec3 point(int ix, int iy, int iz) const { return {coord(ix), coord(iy), coord(iz)}; }

    // Minimum-image displacement component, folded into [-L/2, L/2).
    double wrap(double dx) const {
        dx -= length_ * std::round(dx / length_);
        return dx;
    }
    Vec3 wrap(const Vec3& d) const { return {wrap(d[0]), wrap(d[1]), wrap(d[2])}; }

    int wrap_index(int i) const {
        i %= n_;
        return i < 0 ? i + n_ : i;
    }

    bool operator==(const BoxGrid& o) const { return n_ == o.n_ && length_ == o.length_; }
    bool operator!=(const BoxGrid& o) const { return !(*this == o); }

private:
    int n_;
    double length_;
    double spacing_;
};

// Real scalar field sampled at the grid points, x-fastest storage.
class ScalarField {
public:
    explicit ScalarField(const BoxGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}
    ScalarField(const BoxGrid& grid, std::vector<double> values);

    const BoxGrid& grid() const { return grid_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(int ix, int iy, int iz) { return values_[grid_.index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return values_[grid_.index(ix, iy, iz)]; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

    // y += s*x
    void axpy(double s, const ScalarField& x);

    double max_abs() const;
    bool all_finite() const;

    // Trilinear periodic interpolation at an arbitrary point.
    double interpolate(const Vec3& x) const;
    // Catmull-Rom (cubic) interpolation along x1 only, trilinear would lose
    // too much on boosted resampling; x2/x3 stay on-grid.
    double interpolate_cubic_x1(double x1, int iy, int iz) const;

private:
    BoxGrid grid_;
    std::vector<double> values_;
};

// L2-type reductions with the cell-volume weight.
double inner(const ScalarField& a, const ScalarField& b);
double l2_norm_sq(const ScalarField& a);
inline double l2_norm(const ScalarField& a) { return std::sqrt(l2_norm_sq(a)); }

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where);

// The pair (u, u_t) at one time.
struct WaveState {
    ScalarField u;
    ScalarField ut;
    double time = 0.0;

    explicit WaveState(const BoxGrid& grid) : u(grid), ut(grid) {}
    WaveState(ScalarField u_, ScalarField ut_, double t);
    const BoxGrid& grid() const { return u.grid(); }
};

}  // namespace wavecharge
