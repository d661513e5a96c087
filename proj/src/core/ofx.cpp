#include "ofx.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

#include "spectral.hpp"

static_assert(std::endian::native == std::endian::little,
              "OFX1 I/O assumes a little-endian host");

namespace fluxdiag {

using nlohmann::ordered_json;

void write_ofx(const std::string& path, const VelocityField& u) {
    const Grid& g = u.grid;
    ordered_json hdr;
    hdr["format"] = "OFX1";
    hdr["kind"] = to_string(g.domain.kind);
    hdr["lengths"] = {g.domain.L[0], g.domain.L[1], g.domain.L[2]};
    hdr["resolution"] = {g.N[0], g.N[1], g.N[2]};
    hdr["components"] = 3;
    hdr["dtype"] = "f64-le";
    hdr["layout"] = "x3-fastest";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot open for writing: " + path);
    out << hdr.dump() << '\n';
    for (int c = 0; c < 3; ++c)
        out.write(reinterpret_cast<const char*>(u.c[c].data()),
                  std::streamsize(u.c[c].size() * sizeof(double)));
    if (!out) throw IOError("write failed: " + path);
}

VelocityField read_ofx(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IOError("missing OFX1 header: " + path);
    ordered_json hdr;
    try {
        hdr = ordered_json::parse(line);
    } catch (const std::exception& e) {
        throw IOError("bad OFX1 header in " + path + ": " + e.what());
    }
    if (hdr.value("format", "") != "OFX1")
        throw IOError("not an OFX1 file: " + path);
    if (hdr.value("dtype", "") != "f64-le" || hdr.value("layout", "") != "x3-fastest" ||
        hdr.value("components", 0) != 3)
        throw IOError("unsupported OFX1 variant in " + path);
    Domain d;
    d.kind = domain_kind_from_string(hdr.at("kind").get<std::string>());
    const auto lens = hdr.at("lengths");
    const auto res = hdr.at("resolution");
    if (lens.size() != 3 || res.size() != 3)
        throw IOError("bad OFX1 dimensions in " + path);
    for (int a = 0; a < 3; ++a) d.L[a] = lens[a].get<double>();
    Grid g;
    g.domain = d;
    for (int a = 0; a < 3; ++a) g.N[a] = res[a].get<int>();
    try {
        g.validate();
    } catch (const Error& e) {
        throw IOError("invalid OFX1 grid in " + path + ": " + e.what());
    }
    VelocityField u(g);
    for (int c = 0; c < 3; ++c) {
        in.read(reinterpret_cast<char*>(u.c[c].data()),
                std::streamsize(u.c[c].size() * sizeof(double)));
        if (std::size_t(in.gcount()) != u.c[c].size() * sizeof(double))
            throw IOError("truncated OFX1 payload: " + path);
    }
    return u;
}

}  // namespace fluxdiag
