#include "wavecharge/field_io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace wavecharge {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) out.push_back(char((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

double get_f64(const char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void save_field(const std::string& path, const ScalarField& f, double time) {
    std::string out;
    out.reserve(24 + f.values().size() * 8);
    out += "WCL1";
    put_u32(out, std::uint32_t(f.grid().n()));
    put_f64(out, f.grid().length());
    put_f64(out, time);
    for (double v : f.values()) put_f64(out, v);
    write_text_atomic(path, out);
}

FieldInfo field_info(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("field_info: cannot open " + path);
    char header[24];
    in.read(header, 24);
    if (!in || std::memcmp(header, "WCL1", 4) != 0)
        throw std::runtime_error("field_info: " + path + " is not a WCL1 field file");
    FieldInfo info;
    info.n = get_u32(header + 4);
    info.box_length = get_f64(header + 8);
    info.time = get_f64(header + 16);
    return info;
}

LoadedField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    char header[24];
    in.read(header, 24);
    if (!in || std::memcmp(header, "WCL1", 4) != 0)
        throw std::runtime_error("load_field: " + path + " is not a WCL1 field file");
    const std::uint32_t n = get_u32(header + 4);
    const double length = get_f64(header + 8);
    const double time = get_f64(header + 16);
    BoxGrid grid(int(n), length);
    std::vector<char> raw(grid.size() * 8);
    in.read(raw.data(), std::streamsize(raw.size()));
    if (!in) throw std::runtime_error("load_field: " + path + " is truncated");
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = get_f64(raw.data() + 8 * i);
    return LoadedField(ScalarField(grid, std::move(values)), time);
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("write_text_atomic: cannot open " + tmp.string());
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw std::runtime_error("write_text_atomic: short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) body_ += ',';
        body_ += header[i];
    }
    body_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& cells) {
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (double v : cells) text.push_back(format_double(v));
    add_row(text);
}

std::string CsvWriter::str() const { return body_; }

void CsvWriter::save(const std::string& path) const { write_text_atomic(path, body_); }

std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void save_bound_state_set(const std::string& dir, const std::string& name,
                          const BoundStateSet& set) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["hamiltonian"] = set.hamiltonian_tag;
    manifest["threshold"] = set.threshold;
    manifest["eigenvalues"] = nlohmann::json::array();
    manifest["residuals"] = nlohmann::json::array();
    manifest["fields"] = nlohmann::json::array();
    for (std::size_t i = 0; i < set.size(); ++i) {
        manifest["eigenvalues"].push_back(set[i].eigenvalue);
        manifest["residuals"].push_back(set[i].residual);
        const std::string field_name = name + "_w" + std::to_string(i) + ".wcl";
        manifest["fields"].push_back(field_name);
        save_field((fs::path(dir) / field_name).string(), set[i].w, 0.0);
    }
    write_text_atomic((fs::path(dir) / (name + "_manifest.json")).string(), manifest.dump(2) + "\n");
}

}  // namespace wavecharge
