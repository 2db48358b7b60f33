#pragma once

#include <array>
#include <cstdint>

namespace gridprobe {

enum class Quantity : std::uint8_t { Current = 0, Voltage = 1 };

// Maps (relay, quantity, phase) onto the 48 recorded channels and carries the
// relay-to-line and relay-to-substation wiring of the double-line grid:
//
//   S1 ==[line 1]== S2 ==[line 3]== S3
//   S1 ==[line 2]== S2 ==[line 4]== S3
//
// Relays 1,2 sit at substation 1, relays 3..6 at substation 2, relays 7,8 at
// substation 3. Each line is monitored by one relay per terminal; terminal 1
// is the end at the lower-numbered substation, which is also the reference
// end for fault location fractions.
class ChannelLayout {
public:
    static constexpr int kRelayCount = 8;
    static constexpr int kChannelsPerRelay = 6;
    static constexpr int kChannelCount = 48;
    static constexpr int kLineCount = 4;
    static constexpr int kSubstationCount = 3;

    struct LineEnds {
        int terminal1_relay;
        int terminal2_relay;
    };

    static ChannelLayout standard();

    // relay 1..8, phase 0..2 (A,B,C) -> channel 0..47
    int channel(int relay, Quantity q, int phase) const;

    int relay_line(int relay) const { return relay_line_[check_relay(relay) - 1]; }
    int relay_terminal(int relay) const { return relay_terminal_[check_relay(relay) - 1]; }
    int relay_substation(int relay) const { return relay_substation_[check_relay(relay) - 1]; }
    LineEnds line_relays(int line) const;

    // substations joined by a line, as {lower, higher}
    std::array<int, 2> line_substations(int line) const;

private:
    static int check_relay(int relay);

    std::array<int, kRelayCount> relay_line_{};
    std::array<int, kRelayCount> relay_terminal_{};
    std::array<int, kRelayCount> relay_substation_{};
    std::array<LineEnds, kLineCount> line_relays_{};
};

}  // namespace gridprobe
