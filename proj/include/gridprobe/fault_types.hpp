#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace gridprobe {

// 10 short-circuit types plus the no-fault class. The enumerator order fixes
// the class indices used by the classifier and the results files.
enum class FaultType : std::uint8_t {
    NoFault = 0,
    AG = 1,
    BG = 2,
    CG = 3,
    AB = 4,
    BC = 5,
    CA = 6,
    ABG = 7,
    BCG = 8,
    CAG = 9,
    ABC = 10,
};

inline constexpr int kNumFaultClasses = 11;

inline constexpr std::array<FaultType, 10> kShortCircuitTypes = {
    FaultType::AG,  FaultType::BG,  FaultType::CG, FaultType::AB,
    FaultType::BC,  FaultType::CA,  FaultType::ABG,
    FaultType::BCG, FaultType::CAG, FaultType::ABC,
};

struct PhaseSet {
    bool a = false;
    bool b = false;
    bool c = false;

    bool has(int phase) const { return phase == 0 ? a : (phase == 1 ? b : c); }
    int count() const { return int(a) + int(b) + int(c); }
};

PhaseSet faulted_phases(FaultType t);
bool involves_ground(FaultType t);

std::string_view fault_type_name(FaultType t);
// throws std::invalid_argument on unknown names
FaultType fault_type_from_name(std::string_view name);

inline int fault_class_index(FaultType t) { return static_cast<int>(t); }
FaultType fault_type_from_index(int idx);

}  // namespace gridprobe
