#include "gridprobe/fault_types.hpp"

#include <stdexcept>

namespace gridprobe {

PhaseSet faulted_phases(FaultType t) {
    switch (t) {
        case FaultType::NoFault: return {};
        case FaultType::AG:  return {true, false, false};
        case FaultType::BG:  return {false, true, false};
        case FaultType::CG:  return {false, false, true};
        case FaultType::AB:  return {true, true, false};
        case FaultType::BC:  return {false, true, true};
        case FaultType::CA:  return {true, false, true};
        case FaultType::ABG: return {true, true, false};
        case FaultType::BCG: return {false, true, true};
        case FaultType::CAG: return {true, false, true};
        case FaultType::ABC: return {true, true, true};
    }
    throw std::invalid_argument("faulted_phases: bad fault type");
}

bool involves_ground(FaultType t) {
    switch (t) {
        case FaultType::AG:
        case FaultType::BG:
        case FaultType::CG:
        case FaultType::ABG:
        case FaultType::BCG:
        case FaultType::CAG:
            return true;
        default:
            return false;
    }
}

std::string_view fault_type_name(FaultType t) {
    switch (t) {
        case FaultType::NoFault: return "NoFault";
        case FaultType::AG:  return "AG";
        case FaultType::BG:  return "BG";
        case FaultType::CG:  return "CG";
        case FaultType::AB:  return "AB";
        case FaultType::BC:  return "BC";
        case FaultType::CA:  return "CA";
        case FaultType::ABG: return "ABG";
        case FaultType::BCG: return "BCG";
        case FaultType::CAG: return "CAG";
        case FaultType::ABC: return "ABC";
    }
    return "?";
}

FaultType fault_type_from_name(std::string_view name) {
    for (int i = 0; i < kNumFaultClasses; ++i) {
        const auto t = static_cast<FaultType>(i);
        if (fault_type_name(t) == name) return t;
    }
    throw std::invalid_argument("unknown fault type name: " + std::string(name));
}

FaultType fault_type_from_index(int idx) {
    if (idx < 0 || idx >= kNumFaultClasses)
        throw std::invalid_argument("fault class index out of range: " + std::to_string(idx));
    return static_cast<FaultType>(idx);
}

}  // namespace gridprobe
