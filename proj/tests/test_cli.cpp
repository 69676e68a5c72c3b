#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "fisheye/greens.hpp"

using namespace fisheye;
using namespace fisheye::cli;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run call(std::vector<std::string> args) {
    args.insert(args.begin(), "fisheye");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

double value_of(const std::string& kv, const std::string& key) {
    for (const auto& l : lines(kv))
        if (l.rfind(key + ",", 0) == 0) return std::stod(l.substr(key.size() + 1));
    return NAN;
}

}  // namespace

TEST_CASE("csv formatting") {
    Table t{{"a", "b"}, {{1.0 / 3.0, 2.0}, {-1e-20, 12345678901234.0}}};
    CHECK(format_csv(t) == "a,b\n0.333333333333,2\n-1e-20,1.23456789012e+13\n");
    Table u{{"x"}, {{3.0}, {1.0}, {2.0}}};
    sort_rows(u);
    CHECK(u.rows[0][0] == 1.0);
    CHECK(u.rows[2][0] == 3.0);
}

TEST_CASE("sweeps do not depend on the thread count") {
    const auto radii = std::vector<double>{lens::radius_for_degree(30.5), lens::radius_for_degree(50.5)};
    const std::string one = format_csv(ddi_sweep(radii, 0.1, 1.0, 201, 1));
    const std::string many = format_csv(ddi_sweep(radii, 0.1, 1.0, 201, 8));
    CHECK(one == many);
    CHECK(first_line(one) == "R0_over_lambda,x_over_lambda,ddi_over_Gamma0");

    FidelityParams p;
    p.radii = {3.34};
    p.samples = 5;
    p.threads = 1;
    const std::string a = format_csv(fidelity_vs_loss(p));
    p.threads = 4;
    CHECK(format_csv(fidelity_vs_loss(p)) == a);
}

TEST_CASE("antipodal peak width") {
    const PeakStats s = antipodal_peak(lens::radius_for_degree(50.5), 0.1, 1.0);
    CHECK(s.fwhm >= 0.4);
    CHECK(s.fwhm <= 0.6);
    CHECK(std::abs(s.x_peak - (lens::radius_for_degree(50.5) - 1.0)) < 0.2);
}

TEST_CASE("validation passes and catches a broken closed form") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto quick = run_validation({true, 2, {}});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 10.0);
    for (const auto& c : quick) {
        CAPTURE(c.name);
        CHECK(c.pass);
    }
    GreensFn broken = [](const lens::LensConfig& cfg, lens::DiskPoint a, lens::DiskPoint b, specfun::cplx w) {
        return -greens::greens_zz(cfg, a, b, w).value;
    };
    CHECK(!check_fredholm({}, 3, 1, broken).pass);
    bool any_fail = false;
    for (const auto& c : run_validation({true, 1, broken})) any_fail |= !c.pass;
    CHECK(any_fail);
    CHECK(format_checks(quick).find("FAIL") == std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(call({"validate", "--quick"}).code == kOk);
    CHECK(call({"--help"}).code == kOk);
    CHECK(call({}).code == kBadArguments);
    CHECK(call({"no-such-command"}).code == kBadArguments);
    CHECK(call({"fidelity", "vs-nothing"}).code == kBadArguments);
    CHECK(call({"dynamics", "--R0", "3.34", "--alpha", "-1"}).code == kBadArguments);
    CHECK(call({"dynamics", "--R0", "3.34", "--rho", "abc"}).code == kBadArguments);
    const Run bad = call({"plasmon", "index-sweep", "--d-step", "150", "--d-max", "300"});
    CHECK(bad.code == kNoConvergence);
    CHECK(bad.err.find("error") != std::string::npos);
}

TEST_CASE("config file and flag precedence") {
    const std::string path = "test_cli_config.ini";
    {
        std::ofstream f(path);
        f << "# loss sweep\nsamples = 3\nalpha-min = 1e-4\nR0 = 3.34\n";
    }
    const Run a = call({"fidelity", "vs-loss", "--config", path});
    REQUIRE(a.code == kOk);
    CHECK(lines(a.out).size() == 4);
    CHECK(lines(a.out)[1].rfind("3.34,0.0001,", 0) == 0);
    const Run b = call({"fidelity", "vs-loss", "--config", path, "--samples", "5"});
    CHECK(lines(b.out).size() == 6);
    std::remove(path.c_str());
}

TEST_CASE("command headers") {
    CHECK(first_line(call({"dynamics", "--R0", "3.34", "--samples", "5"}).out) ==
          "t_Gamma0,pop1,pop2,bell_fidelity,t0_marker");
    CHECK(first_line(call({"dynamics", "--R0", "3.34", "--samples", "5", "--simulate"}).out) ==
          "t_Gamma0,pop1,pop2,bell_fidelity,t0_marker,sim_pop1,sim_pop2,sim_bell_fidelity");
    CHECK(first_line(call({"fidelity", "vs-detuning", "--samples", "3"}).out) ==
          "x,one_minus_F_analytic,F_approx");
    CHECK(first_line(call({"fidelity", "vs-radius", "--nu-max", "12.5"}).out) ==
          "x,one_minus_F_analytic,F_approx");
    CHECK(first_line(call({"plasmon", "index-sweep", "--d-max", "10"}).out) == "d_nm,n_eff,chi");
    CHECK(first_line(call({"plasmon", "estimate"}).out) == "quantity,value");
}

TEST_CASE("plasmon estimate output") {
    const Run quoted = call({"plasmon", "estimate"});
    REQUIRE(quoted.code == kOk);
    CHECK(std::abs(value_of(quoted.out, "F") - 0.806) < 0.005);
    CHECK(value_of(quoted.out, "alpha_mirror_quoted") == doctest::Approx(4e-4));
    const Run recomputed = call({"plasmon", "estimate", "--recomputed-mirror-loss"});
    CHECK(std::abs(value_of(recomputed.out, "F") - 0.7474) < 1e-3);
}

TEST_CASE("lossless dynamics oscillate without decay") {
    DynamicsParams p;
    p.R0 = lens::radius_for_degree(20.5);
    p.alpha = 0.0;
    p.samples = 4001;
    const Table t = dynamics(p);
    int maxima = 0;
    double lo = 1.0;
    for (size_t i = 1; i + 1 < t.rows.size(); ++i) {
        const double y = t.rows[i][2];
        if (y > t.rows[i - 1][2] && y >= t.rows[i + 1][2] && y > 0.99) ++maxima;
        lo = std::min(lo, t.rows[i][1] + t.rows[i][2]);
    }
    CHECK(lo > 1.0 - 1e-12);  // pop1 + pop2 stays at one
    CHECK(maxima == 10);  // ten half-periods: five full round trips
}

TEST_CASE("installed binary") {
    const char* bin = std::getenv("FISHEYE_BIN");
    REQUIRE(bin != nullptr);
    const std::string out = "test_cli_bin.csv";
    const std::string cmd = std::string(bin) + " plasmon index-sweep --d-max 5 --out " + out;
    CHECK(std::system(cmd.c_str()) == 0);
    std::ifstream f(out);
    std::string header;
    std::getline(f, header);
    CHECK(header == "d_nm,n_eff,chi");
    std::remove(out.c_str());
    CHECK(std::system((std::string(bin) + " bogus 2>/dev/null").c_str()) != 0);
}
