#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fisheye/plasmon.hpp"
#include "fisheye/qed.hpp"

namespace fisheye::cli {

enum ExitCode { kOk = 0, kValidationFailed = 1, kBadArguments = 2, kNoConvergence = 3 };

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Header line, then one line per row with 12 significant digits, LF endings.
std::string format_csv(const Table& t);

// Sort rows lexicographically so that output never depends on worker scheduling.
void sort_rows(Table& t);

// Runs fn(i) for i in [0, n) on up to `threads` workers; the first exception is rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

// Radii for the diameter sweep: order parameters 30.5, 50.5, 70.5, 90.5.
std::vector<double> default_ddi_radii();
// Radii used for the loss sweeps: 10.5, 20.5, 50.5, 90.5.
std::vector<double> default_loss_radii();

// delta_omega / Gamma0 along the diameter: atom 1 sits `offset` from the mirror at
// x = -(R0 - offset), atom 2 runs over x in [-R0, R0]. The coincident point is skipped.
Table ddi_sweep(const std::vector<double>& radii, double b, double offset, int n_points, int threads);

struct PeakStats {
    double x_peak = 0.0;
    double height = 0.0;  // signed delta_omega / Gamma0 at the peak
    double fwhm = 0.0;    // full width at half of |height|, units of lambda0
};
// Peak of |delta_omega| near the image point x = R0 - offset on a fine grid.
PeakStats antipodal_peak(double R0, double b, double offset, int n_points = 4001);

struct DynamicsParams {
    double R0 = 0.0;
    double alpha = 5e-4;
    double rho = 0.27;
    double t_max = 0.0;  // 0: ten exchange half-periods 10 pi / |delta_omega|
    int samples = 2000;
    bool simulate = false;
    int l_max = 0;
};
Table dynamics(const DynamicsParams& p);

struct FidelityParams {
    std::vector<double> radii;
    double alpha = 5e-4;
    double alpha_min = 1e-5;
    double alpha_max = 1e-2;
    double detuning_max = 0.45;
    double nu_center = 20.5;
    double nu_min = 10.5;
    double nu_max = 90.5;
    double rho = 0.27;
    int samples = 13;
    bool simulate = false;
    int l_max = 0;
    int threads = 1;
};
Table fidelity_vs_loss(const FidelityParams& p);
Table fidelity_vs_detuning(const FidelityParams& p);
// Radii at every half-integer order parameter in [nu_min, nu_max].
Table fidelity_vs_radius(const FidelityParams& p);

Table plasmon_index_sweep(const plasmon::PlasmonStack& stack, double d_max_nm, double step_nm);

struct EstimateParams {
    double R0 = 1.749;
    double reflectivity_sq = 0.95;
    double eta = 3.0;
    int samples = 1000;
    bool recomputed_mirror_loss = false;
};
// Named quantities of the loss budget; the headline F uses the quoted total loss unless
// recomputed_mirror_loss is set, in which case it uses alpha_abs + the mirror formula.
using KeyValues = std::vector<std::pair<std::string, double>>;
KeyValues plasmon_estimate(const plasmon::PlasmonStack& stack, const EstimateParams& p);
std::string format_key_values(const KeyValues& kv);

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // worst observed quantity
    double threshold = 0.0;
    std::string detail;
};

using GreensFn = std::function<specfun::cplx(const lens::LensConfig&, lens::DiskPoint, lens::DiskPoint, specfun::cplx)>;

// Closed form vs mode sum over a 5x5 grid of point pairs per radius (radii at nu = 10.5,
// 20.5, 50.5 unless given). The closed form can be replaced to check that the test bites.
CheckResult check_fredholm(const std::vector<double>& radii, int grid, int threads, const GreensFn& closed_form = {});
CheckResult check_integer_degree(int l_max = 8, int points = 50);
CheckResult check_orthonormality(int l_max = 8);
CheckResult check_unitarity(double nu = 20.5, double rho = 0.27);
CheckResult check_parity_isolation(double nu = 20.5, double rho = 0.27);
CheckResult check_lossy_oracle();

struct ValidateOptions {
    bool quick = false;
    int threads = 1;
    GreensFn closed_form;  // empty: greens::greens_zz
};
std::vector<CheckResult> run_validation(const ValidateOptions& opts);
std::string format_checks(const std::vector<CheckResult>& checks);

// Full command-line entry point. Output goes to `out` unless --out is given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fisheye::cli
