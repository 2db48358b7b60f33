#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "gridprobe/channel_layout.hpp"
#include "gridprobe/grid_sim.hpp"

using namespace gridprobe;

namespace {

const ChannelLayout& layout() {
    static const ChannelLayout l = ChannelLayout::standard();
    return l;
}

double rms(const Episode& ep, int channel, int begin, int end) {
    double s = 0.0;
    for (int c = begin; c < end; ++c) {
        const double v = ep.signals.at(channel, c);
        s += v * v;
    }
    return std::sqrt(s / (end - begin));
}

// 50 Hz quadrature amplitude over an integer number of cycles
double fundamental_amp(const Episode& ep, int channel, int begin, int n_samples) {
    const double w = 2.0 * 3.14159265358979323846 * 50.0 / ep.sample_rate_hz;
    double a = 0.0, b = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double x = ep.signals.at(channel, begin + i);
        a += x * std::sin(w * (begin + i));
        b += x * std::cos(w * (begin + i));
    }
    return 2.0 / n_samples * std::sqrt(a * a + b * b);
}

int inception_sample(const Episode& ep) {
    return static_cast<int>(std::lround(ep.t_inception * ep.sample_rate_hz));
}

int clearing_sample(const Episode& ep) {
    return static_cast<int>(std::lround(ep.t_clearing * ep.sample_rate_hz));
}

// a window well inside the fault, past the inception transient
std::pair<int, int> steady_fault_span(const Episode& ep) {
    const int begin = inception_sample(ep) + 128;
    const int end = std::min(clearing_sample(ep) - 32, begin + 256);
    return {begin, end};
}

Episode episode(FaultType type, int line, double loc, std::uint64_t seed) {
    return synthesize_episode(GridConfig{}, layout(), type, line, loc, seed);
}

}  // namespace

TEST_CASE("synthesis is deterministic in the seed") {
    const Episode a = episode(FaultType::AG, 1, 0.4, 1234);
    const Episode b = episode(FaultType::AG, 1, 0.4, 1234);
    const Episode c = episode(FaultType::AG, 1, 0.4, 1235);
    CHECK(a.signals.data == b.signals.data);
    CHECK(a.t_inception == b.t_inception);
    CHECK(a.signals.data != c.signals.data);
}

TEST_CASE("episodes satisfy their structural invariants") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const Episode ep = episode(FaultType::BCG, 2, 0.7, seed);
        ep.validate();
        CHECK(ep.signals.rows == 48);
        CHECK(ep.signals.cols == 6400);
        CHECK(ep.faulted_line == 2);
        CHECK(ep.location_frac == doctest::Approx(0.7));
        CHECK(ep.t_inception >= 0.08);
        CHECK(ep.t_inception <= 0.92);
        CHECK(ep.t_clearing > ep.t_inception);

        // inception snaps to the fundamental-cycle grid
        const double cycles = ep.t_inception * 50.0;
        CHECK(std::fabs(cycles - std::round(cycles)) < 1e-9);
    }
}

TEST_CASE("pre-fault state is the nominal sinusoid plus faint noise") {
    const Episode ep = episode(FaultType::ABC, 3, 0.5, 99);
    const int pre_end = inception_sample(ep) - 64;
    const int pre_begin = pre_end - 512;  // whole cycles

    for (int relay = 1; relay <= 8; ++relay)
        for (int phase = 0; phase < 3; ++phase) {
            // voltages at 1 pu RMS
            const double v = rms(ep, layout().channel(relay, Quantity::Voltage, phase),
                                 pre_begin, pre_end);
            CHECK(v == doctest::Approx(1.0).epsilon(0.01));
            // load currents well below fault levels, but present
            const double i = rms(ep, layout().channel(relay, Quantity::Current, phase),
                                 pre_begin, pre_end);
            CHECK(i > 0.02);
            CHECK(i < 0.6);
        }

    // spectral purity: the fundamental carries the pre-fault voltage
    const int ch = layout().channel(1, Quantity::Voltage, 0);
    const double amp = fundamental_amp(ep, ch, pre_begin, 512);
    CHECK(amp == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
}

TEST_CASE("measurement noise sits at the configured SNR") {
    GridConfig quiet;
    quiet.snr_db = 200.0;
    GridConfig noisy;
    noisy.snr_db = 60.0;

    const Episode a = synthesize_episode(quiet, layout(), FaultType::AG, 1, 0.5, 7);
    const Episode b = synthesize_episode(noisy, layout(), FaultType::AG, 1, 0.5, 7);

    // identical draws, so the difference is exactly the added noise
    const int ch = layout().channel(2, Quantity::Voltage, 1);
    double noise_sq = 0.0, signal_sq = 0.0;
    for (int c = 0; c < 6400; ++c) {
        const double d = b.signals.at(ch, c) - a.signals.at(ch, c);
        noise_sq += d * d;
        const double s = a.signals.at(ch, c);
        signal_sq += s * s;
    }
    const double measured_snr_db = 10.0 * std::log10(signal_sq / noise_sq);
    CHECK(measured_snr_db == doctest::Approx(60.0).epsilon(0.02));
}

TEST_CASE("faulted phases sag deeply while healthy phases hold") {
    const Episode ep = episode(FaultType::AG, 1, 0.3, 404);
    const auto [fb, fe] = steady_fault_span(ep);
    REQUIRE(fe - fb >= 128);

    const auto ends = layout().line_relays(1);
    for (int relay : {ends.terminal1_relay, ends.terminal2_relay}) {
        const double va = rms(ep, layout().channel(relay, Quantity::Voltage, 0), fb, fe);
        const double vb = rms(ep, layout().channel(relay, Quantity::Voltage, 1), fb, fe);
        const double vc = rms(ep, layout().channel(relay, Quantity::Voltage, 2), fb, fe);
        CHECK(va < 0.5);   // deep sag on the faulted phase
        CHECK(vb > 0.9);   // healthy phases stay near nominal
        CHECK(vc > 0.9);
    }

    // voltage recovers after clearing
    const int post = clearing_sample(ep) + 256;
    if (post + 256 <= 6400) {
        const double va_post =
            rms(ep, layout().channel(ends.terminal1_relay, Quantity::Voltage, 0), post, post + 256);
        CHECK(va_post > 0.9);
    }
}

TEST_CASE("fault current fades with distance and sag deepens toward the fault") {
    // one seed, three locations: identical randomization, only the fault moves
    const Episode near = episode(FaultType::AG, 1, 0.1, 555);
    const Episode mid = episode(FaultType::AG, 1, 0.5, 555);
    const Episode far = episode(FaultType::AG, 1, 0.9, 555);

    const auto ends = layout().line_relays(1);
    const int i1 = layout().channel(ends.terminal1_relay, Quantity::Current, 0);
    const int v1 = layout().channel(ends.terminal1_relay, Quantity::Voltage, 0);
    const int v2 = layout().channel(ends.terminal2_relay, Quantity::Voltage, 0);

    auto steady_rms = [&](const Episode& ep, int ch) {
        const auto [b, e] = steady_fault_span(ep);
        return rms(ep, ch, b, e);
    };

    // terminal 1: current magnitude decreasing in distance
    CHECK(steady_rms(near, i1) > steady_rms(mid, i1));
    CHECK(steady_rms(mid, i1) > steady_rms(far, i1));

    // terminal 1 voltage: retained fraction grows with distance
    CHECK(steady_rms(near, v1) < steady_rms(mid, v1));
    CHECK(steady_rms(mid, v1) < steady_rms(far, v1));

    // terminal 2 sees the mirror image
    CHECK(steady_rms(near, v2) > steady_rms(mid, v2));
    CHECK(steady_rms(mid, v2) > steady_rms(far, v2));
}

TEST_CASE("the voltage-to-current ratio reads the fault distance") {
    for (double loc : {0.2, 0.5, 0.8}) {
        const Episode ep = episode(FaultType::AG, 1, loc, 777);

        // measure at the tail of the fault, whole cycles, so the decaying DC
        // offset in the current has mostly died away
        const int avail = clearing_sample(ep) - 32 - (inception_sample(ep) + 128);
        const int n = (std::min(avail, 256) / 128) * 128;
        REQUIRE(n >= 128);
        const int begin = clearing_sample(ep) - 32 - n;

        const auto ends = layout().line_relays(1);
        const double v = fundamental_amp(
            ep, layout().channel(ends.terminal1_relay, Quantity::Voltage, 0), begin, n);
        const double i = fundamental_amp(
            ep, layout().channel(ends.terminal1_relay, Quantity::Current, 0), begin, n);

        const double z_line = 0.01 * ep.randomization.line_length_km[0];
        const double expected = loc * z_line;
        CHECK(v / i == doctest::Approx(expected).epsilon(0.06));
    }
}

TEST_CASE("ungrounded faults carry no zero-sequence voltage") {
    const auto zero_seq_rms = [&](const Episode& ep, int relay) {
        const auto [fb, fe] = steady_fault_span(ep);
        double s = 0.0;
        for (int c = fb; c < fe; ++c) {
            double sum = 0.0;
            for (int phase = 0; phase < 3; ++phase)
                sum += ep.signals.at(layout().channel(relay, Quantity::Voltage, phase), c);
            s += sum * sum;
        }
        return std::sqrt(s / (fe - fb));
    };

    for (FaultType t : {FaultType::AB, FaultType::BC, FaultType::CA, FaultType::ABC}) {
        const Episode ep = episode(t, 1, 0.4, 88);
        CHECK(zero_seq_rms(ep, 1) < 0.02);
    }
    for (FaultType t : {FaultType::AG, FaultType::ABG, FaultType::BCG}) {
        const Episode ep = episode(t, 1, 0.4, 88);
        CHECK(zero_seq_rms(ep, 1) > 0.1);
    }
}

TEST_CASE("relays off the faulted line see a weaker disturbance") {
    const Episode ep = episode(FaultType::ABC, 1, 0.5, 31);
    const auto [fb, fe] = steady_fault_span(ep);

    const int pre_end = inception_sample(ep) - 64;
    const int pre_begin = pre_end - 256;
    auto change = [&](int ch) {
        return std::fabs(rms(ep, ch, fb, fe) - rms(ep, ch, pre_begin, pre_end));
    };

    // faulted line 1 terminal relay vs. its parallel-line neighbor (line 2)
    const double on_line = change(layout().channel(1, Quantity::Current, 0));
    const double off_line = change(layout().channel(2, Quantity::Current, 0));
    CHECK(on_line > off_line);

    // voltage sag shallows with bus distance: S3 retains more than S2
    const double v_s2 = rms(ep, layout().channel(3, Quantity::Voltage, 0), fb, fe);
    const double v_s3 = rms(ep, layout().channel(7, Quantity::Voltage, 0), fb, fe);
    CHECK(v_s3 > v_s2);
}

TEST_CASE("bus distances route around the fault through healthy paths") {
    // line 1 fault: S1 reaches it directly, S3 goes through S2 over the
    // parallel pair of healthy S2-S3 lines (0.5 || 0.5 = 0.25)
    const std::array<double, 4> z = {0.4, 0.4, 0.5, 0.5};
    const auto d = bus_fault_distances(layout(), z, 1, 0.25);
    CHECK(d[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(d[2] == doctest::Approx(0.55).epsilon(1e-12));

    // line 3 fault near S3; S1 adds the parallel S1-S2 pair (0.3 || 0.3)
    const std::array<double, 4> z2 = {0.3, 0.3, 0.6, 0.6};
    const auto d2 = bus_fault_distances(layout(), z2, 3, 0.8);
    CHECK(d2[1] == doctest::Approx(0.48).epsilon(1e-12));
    CHECK(d2[2] == doctest::Approx(0.12).epsilon(1e-12));
    CHECK(d2[0] == doctest::Approx(0.63).epsilon(1e-12));

    // a mid-line fault is never closer through the detour than directly
    const auto d3 = bus_fault_distances(layout(), z, 2, 0.5);
    CHECK(d3[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(d3[1] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(d3[2] == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("dataset generation is order-independent and parallel-safe") {
    const GridConfig cfg;
    const auto seq = generate_dataset(cfg, 12, 42, 1);
    const auto par = generate_dataset(cfg, 12, 42, 4);
    REQUIRE(seq.size() == 12);
    REQUIRE(par.size() == 12);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(seq[i].episode_id == par[i].episode_id);
        CHECK(seq[i].signals.data == par[i].signals.data);
        CHECK(seq[i].seed == episode_seed(42, i));
    }

    // different master seeds give different corpora
    const auto other = generate_dataset(cfg, 12, 43, 1);
    CHECK(other[0].signals.data != seq[0].signals.data);

    // the fault mix covers all ten short-circuit types over a modest corpus
    const auto many = generate_dataset(cfg, 120, 7, 1);
    std::array<int, 11> type_counts{};
    for (const Episode& ep : many) {
        ++type_counts[static_cast<std::size_t>(fault_class_index(ep.fault_type))];
        CHECK(ep.faulted_line >= 1);
        CHECK(ep.faulted_line <= 4);
        CHECK(ep.location_frac >= 0.01);
        CHECK(ep.location_frac <= 0.99);
    }
    CHECK(type_counts[0] == 0);  // every episode carries a fault
    for (std::size_t t = 1; t < type_counts.size(); ++t) CHECK(type_counts[t] > 0);
}

TEST_CASE("config validation rejects degenerate ranges") {
    GridConfig bad;
    bad.load_level = {0.5, 0.4};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    GridConfig bad_snr;
    bad_snr.snr_db = 0.0;
    CHECK_THROWS_AS(bad_snr.validate(), std::invalid_argument);

    CHECK_NOTHROW(GridConfig{}.validate());
}
