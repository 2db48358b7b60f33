#pragma once

namespace gridprobe {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

// Simulation constants and per-episode randomization bounds. Signals are in
// per-unit: currents of the nominal load scale, voltages of the 90 kV base.
struct GridConfig {
    double nominal_voltage_kv = 90.0;
    double frequency_hz = 50.0;
    double sample_rate_hz = 6400.0;
    double duration_s = 1.0;

    Range line_length_km{40.0, 55.0};
    Range load_level{0.10, 0.35};
    // per-unit Thevenin impedance behind the terminal buses; the weak-infeed
    // regime (source above total line impedance) keeps fault currents
    // source-dominated, so current magnitude is a weak distance proxy while
    // the voltage sag profile stays nearly linear in fault position
    Range source_impedance{1.20, 1.80};
    Range fault_duration_s{0.06, 0.20};
    // inception window keeps the +-80 ms crop inside [0, 1] s
    Range inception_time_s{0.08, 0.92};
    // long DC decay keeps the exponential offset visible across several
    // windows, which adds current-side variance without touching voltages
    Range dc_time_constant_s{0.10, 0.25};
    // short-circuit loop impedance angle, ~70..88 degrees
    Range impedance_angle_rad{1.2217, 1.5359};
    // disturbance echo seen by relays away from the faulted line
    Range echo_attenuation{0.2, 0.6};

    double line_impedance_per_km = 0.01;  // per-unit per km
    double snr_db = 60.0;
    double clearing_recovery_s = 0.02;

    // throws std::invalid_argument when a range is empty or the SNR is not positive
    void validate() const;
};

}  // namespace gridprobe
