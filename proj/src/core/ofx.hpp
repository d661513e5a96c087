#pragma once
// OFX1 velocity-field file format: one UTF-8 JSON header line, then
// 3·N1·N2·N3 little-endian float64 values (component-major, x3-fastest).

#include <string>

#include "types.hpp"

namespace fluxdiag {

void write_ofx(const std::string& path, const VelocityField& u);
VelocityField read_ofx(const std::string& path);

}  // namespace fluxdiag
