#pragma once

#include "flowlab/instance.hpp"

#include <iosfwd>
#include <string>

namespace flowlab {

// On-disk instance format:
//   {"meta": {string: string}, "jobs": [{"id", "release", "p_true", "p_est"}]}
// Rationals are canonical strings ("17", "-3/4"); parse(write(x)) is
// byte-identical to write(x). The adaptive oracle rides in meta under the
// "adaptive*" keys and is reconstructed on load.
std::string write_instance(const Instance& inst);
void write_instance(const Instance& inst, std::ostream& out);
Instance read_instance(std::istream& in);
Instance read_instance_str(const std::string& text);

// FNV-1a 64 over the canonical serialization, as 16 lowercase hex digits.
std::string instance_hash(const Instance& inst);

}  // namespace flowlab
