// params.hpp — device parameters and their reduction to the canonical
// dimensionless working frame (hbar = 1, all energies angular frequencies)

#pragma once

#include <cmath>
#include <numbers>

#include "cpbspec/errors.hpp"

namespace cpbspec {

// Raw junction/cavity device constants. Only canonicalize() consumes this
// type; everything downstream works with CanonicalParams.
struct DeviceParams {
    double junction_capacitance = 0.0; // C_J
    double gate_capacitance = 0.0;     // C_g
    double josephson_energy = 0.0;     // E_J, angular frequency scale
    double cavity_frequency = 0.0;     // omega
    double electron_charge = 0.0;      // e
    double hbar = 1.0;

    // Charging energy e^2 / (2 (C_g + C_J)).
    double charging_energy() const {
        return electron_charge * electron_charge /
               (2.0 * (gate_capacitance + junction_capacitance));
    }

    void validate() const {
        if (!(junction_capacitance > 0.0))
            throw domain_error("DeviceParams: junction_capacitance must be > 0");
        if (!(gate_capacitance > 0.0))
            throw domain_error("DeviceParams: gate_capacitance must be > 0");
        if (!(josephson_energy > 0.0))
            throw domain_error("DeviceParams: josephson_energy must be > 0");
        if (!(cavity_frequency > 0.0))
            throw domain_error("DeviceParams: cavity_frequency must be > 0");
        if (!(electron_charge > 0.0))
            throw domain_error("DeviceParams: electron_charge must be > 0");
        if (!(hbar > 0.0))
            throw domain_error("DeviceParams: hbar must be > 0");
    }
};

// Canonical working frame: cavity frequency omega, qubit-cavity detuning
// delta = E_J - omega, and the coupling g defined so that the doublet
// splitting obeys mu_n^2 = delta^2/4 + g^2 (n+1).
//
// A second axis scale lambda = g / sqrt(2) is kept for plot comparability
// ("paper axis"); all internal math uses g.
struct CanonicalParams {
    double omega = 0.0; // cavity frequency, > 0
    double delta = 0.0; // detuning, any sign
    double g = 0.0;     // coupling, > 0

    double paper_lambda() const { return g / std::numbers::sqrt2; }

    void validate() const {
        if (!(omega > 0.0))
            throw domain_error("CanonicalParams: omega must be > 0");
        if (!(g > 0.0))
            throw domain_error("CanonicalParams: coupling g must be > 0 (bare states carry no dressing)");
        if (!std::isfinite(delta))
            throw domain_error("CanonicalParams: delta must be finite");
    }

    bool operator==(const CanonicalParams&) const = default;
};

// Reduce device constants to the canonical frame:
//   delta = E_J - omega
//   g^2   = e^2 C_J omega / (4 hbar (C_J + C_g)^2)
inline CanonicalParams canonicalize(const DeviceParams& raw) {
    raw.validate();
    const double csum = raw.junction_capacitance + raw.gate_capacitance;
    const double g2 = raw.electron_charge * raw.electron_charge *
                      raw.junction_capacitance * raw.cavity_frequency /
                      (4.0 * raw.hbar * csum * csum);
    CanonicalParams p{raw.cavity_frequency, raw.josephson_energy - raw.cavity_frequency,
                      std::sqrt(g2)};
    p.validate();
    return p;
}

} // namespace cpbspec
