#pragma once

#include <cvdyn/lindblad.hpp>

#include <string>
#include <vector>

namespace cvdyn::gravity {

// Two trapped particles of mass m at separation d, released and coupled
// through their mutual attraction. Three couplings are available: the bare
// quadratic expansion of the pair potential (newton), the same expansion
// with collapse-style correlated diffusion added (naive), and the
// thermally regulated channel whose coupling and diffusion both depend on
// the regularization length r0 (td).

struct Constants {
    double newton_g = 6.67430e-11; // m^3 / (kg s^2)
    double hbar = 1.054571817e-34; // J s
};

enum class Model { newton, naive, td };

struct Scenario {
    double mass_kg = 1e-7;
    double distance_m = 3e-4;
    double trap_frequency_rad_s = 1e5;
    double r0_m = 5e-4;
    Model model = Model::td;
    Constants constants;
};

// curvature of the pair potential at the working point: 2 G m^2 / d^3, kg/s^2
double newton_coupling(double mass_kg, double distance_m, const Constants& c = {});

// dimensionless reduction factor of the regulated coupling at x = d / r0;
// behaves as x^3 / (12 sqrt(pi)) for small x
double td_reduction(double x);

// regulated coupling strength, kg/s^2 (can change sign at large d / r0)
double td_coupling(double k_newton, double distance_m, double r0_m);

// 2x2 diffusion matrices in physical units (kg/s^2)
Eigen::Matrix2d td_kossakowski(double k_newton, double distance_m, double r0_m);
Eigen::Matrix2d naive_kossakowski(double mass_kg, double distance_m, const Constants& c = {});

struct ScaledGenerator {
    QuadraticGenerator gen; // dimensionless, time unit 1/omega
    double x0_m = 0.0;      // ground-state length sqrt(hbar / (m omega))
    double t0_s = 0.0;      // time unit 1 / omega
    double coupling_c = 0.0; // dimensionless position-position coupling
    std::vector<std::string> warnings;
};

// Dimensionless generator for free fall after release from the traps.
// Soft regime violations (quadratic expansion or spreading marginal by
// t_max) are reported as warnings; clear violations throw RegimeError.
ScaledGenerator build_generator(const Scenario& s, double t_max_s = 10.0);

// separation-to-r0 ratio at which entanglement generation switches off
double critical_ratio();

// smallest r0 still generating at separation d
double critical_r0(double distance_m);

} // namespace cvdyn::gravity
