#include "litenet/common.hpp"

#include <cstdio>

namespace litenet {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw SizeError("from_rows: ragged row lengths");
        for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double noise_normal(std::uint64_t seed, std::uint64_t row, std::uint64_t col) {
    std::uint64_t a = splitmix64(seed ^ (row * 0xd6e8feb86659fd93ULL));
    std::uint64_t b = splitmix64(a ^ (col * 0xca01f9dd57c9f685ULL));
    std::uint64_t c = splitmix64(b);
    double u1 = ((b >> 11) * 0x1.0p-53);
    double u2 = ((c >> 11) * 0x1.0p-53);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace litenet
