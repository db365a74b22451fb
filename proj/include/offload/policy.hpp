#pragma once

#include <functional>
#include <string>

#include "offload/model.hpp"

namespace offload {

/// A decision rule queried once per slot. Table policies and the online
/// heuristics share this shape so the simulator and the exact evaluator can
/// treat them alike.
struct Policy {
    std::string name;
    std::function<Action(Epoch, const State&)> decide;
};

}  // namespace offload
