#pragma once

// File formats of the CLI contract: curve and field JSON, CSV tables with a
// metadata comment block, and a content hash for reproducibility headers.
// Numbers are written as scientific with 17 significant digits so reruns
// diff bit-identically.

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slb/errors.hpp"
#include "slb/fields.hpp"
#include "slb/geometry.hpp"

namespace slb::io {

using nlohmann::json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Curve and field JSON

inline json curve_to_json(const geometry::FourierCurve& c) {
    json coeffs = json::array();
    for (int k = -c.mode_count(); k <= c.mode_count(); ++k) {
        json triple = json::array();
        for (int d = 0; d < 3; ++d)
            triple.push_back({c.coeff(k)[d].real(), c.coeff(k)[d].imag()});
        coeffs.push_back(triple);
    }
    return json{{"modes", c.mode_count()}, {"eps", c.eps()}, {"coeffs", coeffs}};
}

inline geometry::FourierCurve curve_from_json(const json& j) {
    if (!j.contains("modes") || !j.contains("eps") || !j.contains("coeffs"))
        throw DomainError("curve json: required fields are modes, eps, coeffs");
    const int modes = j.at("modes").get<int>();
    const double eps = j.at("eps").get<double>();
    const auto& coeffs = j.at("coeffs");
    if (coeffs.size() != static_cast<std::size_t>(2 * modes + 1))
        throw DomainError("curve json: coeffs must have 2*modes+1 entries");
    std::vector<Eigen::Vector3cd> c(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        for (int d = 0; d < 3; ++d)
            c[i][d] = std::complex<double>(coeffs[i][d][0].get<double>(),
                                           coeffs[i][d][1].get<double>());
    return geometry::FourierCurve(modes, std::move(c), eps);
}

inline json field_to_json(const fields::PeriodicVectorField& f) {
    json values = json::array();
    for (std::size_t i = 0; i < f.size(); ++i)
        values.push_back({f[i][0], f[i][1], f[i][2]});
    return json{{"n", f.size()}, {"values", values}};
}

inline fields::PeriodicVectorField field_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("values"))
        throw DomainError("field json: required fields are n, values");
    const std::size_t n = j.at("n").get<std::size_t>();
    const auto& values = j.at("values");
    if (values.size() != n) throw DomainError("field json: values size does not match n");
    fields::PeriodicVectorField f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = Eigen::Vector3d(values[i][0].get<double>(), values[i][1].get<double>(),
                               values[i][2].get<double>());
    return f;
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// SHA-1 (for the reproducibility header of every output file)

namespace detail {

inline std::uint32_t rol(std::uint32_t v, int n) { return (v << n) | (v >> (32 - n)); }

} // namespace detail

inline std::string sha1_hex(const std::string& data) {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
    std::string msg = data;
    const std::uint64_t bits = static_cast<std::uint64_t>(msg.size()) * 8;
    msg.push_back(static_cast<char>(0x80));
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    for (std::size_t off = 0; off < msg.size(); off += 64) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (static_cast<std::uint8_t>(msg[off + 4 * i]) << 24) |
                   (static_cast<std::uint8_t>(msg[off + 4 * i + 1]) << 16) |
                   (static_cast<std::uint8_t>(msg[off + 4 * i + 2]) << 8) |
                   static_cast<std::uint8_t>(msg[off + 4 * i + 3]);
        for (int i = 16; i < 80; ++i)
            w[i] = detail::rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t tmp = detail::rol(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = detail::rol(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }
    char out[41];
    std::snprintf(out, sizeof(out), "%08x%08x%08x%08x%08x", h[0], h[1], h[2], h[3], h[4]);
    return out;
}

inline std::string sha1_of_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha1_hex(ss.str());
}

// ---------------------------------------------------------------------------
// CSV with a metadata comment block

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& metadata,
              const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw DomainError("cannot write " + path);
        for (const auto& m : metadata) out_ << "# " << m << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }

  private:
    std::ofstream out_;
};

} // namespace slb::io
