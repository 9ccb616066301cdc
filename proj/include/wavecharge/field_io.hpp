#pragma once

#include <cstdint>
#include <string>

#include "wavecharge/bound_states.hpp"
#include "wavecharge/grid.hpp"

namespace wavecharge {

// Flat little-endian snapshot: magic "WCL1", n_per_axis u32, box_length f64,
// time f64, then n^3 f64 values in x-fastest order.
void save_field(const std::string& path, const ScalarField& f, double time);

struct LoadedField {
    ScalarField field;
    double time = 0.0;
    LoadedField(ScalarField f, double t) : field(std::move(f)), time(t) {}
};
LoadedField load_field(const std::string& path);

struct FieldInfo {
    std::uint32_t n = 0;
    double box_length = 0.0;
    double time = 0.0;
};
FieldInfo field_info(const std::string& path);

// Write-temp-then-rename, so concurrent sweep workers never expose a torn file.
void write_text_atomic(const std::string& path, const std::string& content);

// Fixed shortest-round-trip float formatting shared by every report writer.
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    void add_row(const std::vector<double>& cells);
    std::string str() const;
    void save(const std::string& path) const;

private:
    std::string body_;
    std::size_t columns_ = 0;
};

std::uint64_t fnv1a_hash(const std::string& data);

// Eigenvalue/residual manifest plus one field file per eigenfunction.
void save_bound_state_set(const std::string& dir, const std::string& name, const BoundStateSet& set);

}  // namespace wavecharge
