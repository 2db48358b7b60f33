#include "gridprobe/channel_layout.hpp"

#include <stdexcept>
#include <string>

namespace gridprobe {

ChannelLayout ChannelLayout::standard() {
    ChannelLayout l;
    l.relay_line_ = {1, 2, 1, 2, 3, 4, 3, 4};
    l.relay_terminal_ = {1, 1, 2, 2, 1, 1, 2, 2};
    l.relay_substation_ = {1, 1, 2, 2, 2, 2, 3, 3};
    l.line_relays_ = {LineEnds{1, 3}, LineEnds{2, 4}, LineEnds{5, 7}, LineEnds{6, 8}};
    return l;
}

int ChannelLayout::check_relay(int relay) {
    if (relay < 1 || relay > kRelayCount)
        throw std::invalid_argument("relay out of range 1..8: " + std::to_string(relay));
    return relay;
}

int ChannelLayout::channel(int relay, Quantity q, int phase) const {
    check_relay(relay);
    if (phase < 0 || phase > 2)
        throw std::invalid_argument("phase out of range 0..2: " + std::to_string(phase));
    return (relay - 1) * kChannelsPerRelay + (q == Quantity::Voltage ? 3 : 0) + phase;
}

ChannelLayout::LineEnds ChannelLayout::line_relays(int line) const {
    if (line < 1 || line > kLineCount)
        throw std::invalid_argument("line out of range 1..4: " + std::to_string(line));
    return line_relays_[line - 1];
}

std::array<int, 2> ChannelLayout::line_substations(int line) const {
    const LineEnds ends = line_relays(line);
    return {relay_substation(ends.terminal1_relay), relay_substation(ends.terminal2_relay)};
}

}  // namespace gridprobe
