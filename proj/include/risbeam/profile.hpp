// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risbeam/types.hpp"

#include <iosfwd>
#include <string>

namespace risbeam {

/// RIS configuration w = [exp(j omega_1), ..., exp(j omega_N)]. Unit modulus
/// holds by construction: only the phases are stored.
class PhaseProfile {
public:
    PhaseProfile() = default;
    explicit PhaseProfile(RVector omegas) : omegas_(std::move(omegas)) {}

    static PhaseProfile zeros(int n) { return PhaseProfile(RVector::Zero(n)); }

    /// Entrywise projection onto the unit circle, omega_n = arg(x_n).
    static PhaseProfile from_weights(const CVector& x);

    int size() const { return static_cast<int>(omegas_.size()); }
    const RVector& omegas() const { return omegas_; }
    CVector weights() const;

    /// Phases wrapped to (-pi, pi].
    PhaseProfile wrapped() const;

    /// Largest entrywise phase difference after removing the best global phase
    /// offset (circular mean of the differences). Radians, in [0, pi].
    double max_phase_deviation(const PhaseProfile& other) const;

private:
    RVector omegas_;
};

double wrap_phase(double x);

/// CSV with header `index,omega_rad`, preceded by a schema comment line.
void write_profile_csv(std::ostream& os, const PhaseProfile& w);
PhaseProfile read_profile_csv(std::istream& is);

}  // namespace risbeam
