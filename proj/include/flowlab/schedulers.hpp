#pragma once

#include "flowlab/engine.hpp"

#include <memory>
#include <string_view>
#include <vector>

namespace flowlab {

// "srpt"   shortest remaining (true) processing time; clairvoyant baseline
// "sept"   shortest estimated class, preferring the partial job in a class
// "sr"     sept plus completion-protection via two full lower-class witnesses
// "zigzag" estimate-oblivious alternating marks (zig/zag/zigzag)
// "dl"     class windows driven by a learned distortion exponent sigma-hat
std::unique_ptr<Scheduler> make_scheduler(std::string_view key);

const std::vector<std::string_view>& scheduler_keys();

}  // namespace flowlab
