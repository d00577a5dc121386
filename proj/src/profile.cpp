// SPDX-License-Identifier: Apache-2.0
#include "risbeam/profile.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace risbeam {

double wrap_phase(double x) {
    double y = std::remainder(x, kTwoPi);
    if (y <= -kPi) y += kTwoPi;
    return y;
}

PhaseProfile PhaseProfile::from_weights(const CVector& x) {
    RVector om(x.size());
    for (Eigen::Index n = 0; n < x.size(); ++n) om[n] = std::arg(x[n]);
    return PhaseProfile(std::move(om));
}

CVector PhaseProfile::weights() const {
    CVector w(omegas_.size());
    for (Eigen::Index n = 0; n < omegas_.size(); ++n) w[n] = std::polar(1.0, omegas_[n]);
    return w;
}

PhaseProfile PhaseProfile::wrapped() const {
    RVector om = omegas_.unaryExpr([](double v) { return wrap_phase(v); });
    return PhaseProfile(std::move(om));
}

double PhaseProfile::max_phase_deviation(const PhaseProfile& other) const {
    if (other.size() != size()) throw ShapeError("phase profiles differ in length");
    cd acc{0.0, 0.0};
    for (int n = 0; n < size(); ++n) acc += std::polar(1.0, omegas_[n] - other.omegas_[n]);
    const double offset = std::abs(acc) > 0.0 ? std::arg(acc) : 0.0;
    double worst = 0.0;
    for (int n = 0; n < size(); ++n) {
        worst = std::max(worst, std::abs(wrap_phase(omegas_[n] - other.omegas_[n] - offset)));
    }
    return worst;
}

void write_profile_csv(std::ostream& os, const PhaseProfile& w) {
    os << "# risbeam-csv v1 phase_profile\n";
    os << "index,omega_rad\n";
    os << std::setprecision(17);
    for (int n = 0; n < w.size(); ++n) os << n << ',' << w.omegas()[n] << '\n';
}

PhaseProfile read_profile_csv(std::istream& is) {
    std::string line;
    bool header_seen = false;
    std::vector<double> values;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "index,omega_rad") {
                throw std::runtime_error("profile CSV: expected header 'index,omega_rad'");
            }
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        long index = 0;
        char comma = 0;
        double omega = 0.0;
        if (!(row >> index >> comma >> omega) || comma != ',') {
            throw std::runtime_error("profile CSV: malformed row at line " + std::to_string(line_no));
        }
        if (index != static_cast<long>(values.size())) {
            throw std::runtime_error("profile CSV: non-consecutive index at line " +
                                     std::to_string(line_no));
        }
        values.push_back(omega);
    }
    if (values.empty()) throw std::runtime_error("profile CSV: no rows");
    return PhaseProfile(Eigen::Map<RVector>(values.data(), static_cast<Eigen::Index>(values.size())));
}

}  // namespace risbeam
