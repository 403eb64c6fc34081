#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvc/cli.hpp"

namespace {

struct RunResult {
    int status;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = mvc::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

double csv_value(const std::string& csv, const std::string& column, std::size_t row = 0) {
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    while (!line.empty() && line[0] == '#') std::getline(ss, line);
    std::vector<std::string> cols;
    std::stringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) cols.push_back(tok);
    std::size_t idx = cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == column) idx = i;
    REQUIRE(idx < cols.size());
    for (std::size_t r = 0; r <= row; ++r) REQUIRE(static_cast<bool>(std::getline(ss, line)));
    std::stringstream rs(line);
    std::vector<std::string> vals;
    while (std::getline(rs, tok, ',')) vals.push_back(tok);
    return std::stod(vals.at(idx));
}

}  // namespace

TEST_CASE("chernoff command with unit conversion") {
    const auto nats = run({"chernoff", "--channel", "bsc:0.1"});
    CHECK(nats.status == 0);
    CHECK(csv_value(nats.out, "chernoff_nats") == doctest::Approx(0.5108256237659907).epsilon(1e-11));

    const auto bits = run({"chernoff", "--channel", "bsc:0.1", "--unit", "bits"});
    CHECK(csv_value(bits.out, "chernoff_bits") ==
          doctest::Approx(0.5108256237659907 / M_LN2).epsilon(1e-11));

    // byte-identical across runs
    const auto again = run({"chernoff", "--channel", "bsc:0.1"});
    CHECK(again.out == nats.out);
}

TEST_CASE("json reports re-parse to equal values") {
    const auto res = run({"mvinfo", "--channel", "bec:0.5", "--d", "2", "--format", "json"});
    REQUIRE(res.status == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("command") == "mvinfo");
    const auto& row = doc.at("rows").at(0);
    const double h = row.at("cond_entropy_nats").get<double>();
    CHECK(h == doctest::Approx(0.25 * std::log(2.0)).epsilon(1e-12));

    // the same number must round trip through the serialized form exactly
    const auto reparsed = nlohmann::json::parse(doc.dump());
    CHECK(reparsed.at("rows").at(0).at("cond_entropy_nats").get<double>() == h);
}

TEST_CASE("poi-sandwich emits the pinned figure csv") {
    const auto res = run({"poi-sandwich", "--d", "3", "--p-grid", "0:1:0.25"});
    REQUIRE(res.status == 0);
    std::istringstream ss(res.out);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "d,p,c_bin_nats,c_poi_nats,gap,thm3_bound");
    int rows = 0;
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 5);
    CHECK(csv_value(res.out, "c_bin_nats", 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(csv_value(res.out, "gap", 2) == doctest::Approx(0.0).epsilon(1e-12));  // p = 0.5
}

TEST_CASE("del-rho report and trace file") {
    const auto res = run({"del-rho", "--n", "1", "--delta", "0.5", "--format", "json"});
    REQUIRE(res.status == 0);
    const auto doc = nlohmann::json::parse(res.out);
    const auto& row = doc.at("rows").at(0);
    CHECK(row.at("rho_exact_nats").get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(row.contains("bound_naive_nats"));
    CHECK(row.contains("bound_alternating_nats"));
    CHECK(row.contains("bound_fractional_nats"));
    CHECK(row.at("argmin_x") == "0");
    CHECK(row.at("argmin_x_tilde") == "1");

    const std::string trace_path = "/tmp/mvchan_trace_test.csv";
    const auto traced =
        run({"del-rho", "--n", "3", "--delta", "0.4", "--trace-file", trace_path});
    REQUIRE(traced.status == 0);
    std::ifstream tf(trace_path);
    REQUIRE(static_cast<bool>(tf));
    std::string header;
    std::getline(tf, header);
    CHECK(header == "x,x_tilde,rho_pair_nats");
    int rows = 0;
    std::string line;
    while (std::getline(tf, line))
        if (!line.empty()) ++rows;
    CHECK(rows > 0);
    std::remove(trace_path.c_str());
}

TEST_CASE("sanov command") {
    const auto res = run({"sanov", "--base", "0.9,0.1", "--alt", "0.1,0.9", "--v", "0",
                          "--grid-resolution", "2000"});
    REQUIRE(res.status == 0);
    CHECK(csv_value(res.out, "e_dual_nats") == doctest::Approx(0.5108256237659907).epsilon(1e-9));
    CHECK(std::abs(csv_value(res.out, "gap_nats")) <= 1e-3);

    // randomized sweeps are seeded and reproducible; the seed is in the header
    const std::vector<std::string> rand_args{"sanov", "--random-profiles", "3", "--alphabet",
                                             "2",     "--v-count",         "2", "--seed", "42"};
    const auto a = run(rand_args);
    const auto b = run(rand_args);
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("# seed=42", 0) == 0);
    auto c_args = rand_args;
    c_args.back() = "43";
    CHECK(run(c_args).out != a.out);
}

TEST_CASE("fbl and rate-fit commands") {
    const auto fbl = run({"fbl", "--channel", "bsc:0.1", "--d", "4", "--n-list", "100,1000",
                          "--eps-list", "0.01"});
    REQUIRE(fbl.status == 0);
    CHECK(csv_value(fbl.out, "rate_nats", 1) > csv_value(fbl.out, "rate_nats", 0));

    const auto fit = run({"rate-fit", "--channel", "bec:0.3", "--d-min", "20", "--d-max", "40"});
    REQUIRE(fit.status == 0);
    CHECK(csv_value(fit.out, "fitted_rate_nats") ==
          doctest::Approx(-std::log(0.3)).epsilon(1e-9));
}

TEST_CASE("file channels flow through commands") {
    const std::string path = "/tmp/mvchan_test_channel.txt";
    {
        std::ofstream f(path);
        f << "2 3\n0.7 0 0.3\n0 0.7 0.3\n";  // erasure channel, eps = 0.3
    }
    const auto res = run({"chernoff", "--channel", "file:" + path});
    REQUIRE(res.status == 0);
    CHECK(csv_value(res.out, "chernoff_nats") == doctest::Approx(-std::log(0.3)).epsilon(1e-10));
    std::remove(path.c_str());
}

TEST_CASE("bits output is the nats output divided by log 2, once") {
    const auto nats = run({"mvinfo", "--channel", "bsc:0.2", "--d", "3", "--format", "json"});
    const auto bits = run({"mvinfo", "--channel", "bsc:0.2", "--d", "3", "--format", "json",
                           "--unit", "bits"});
    REQUIRE(nats.status == 0);
    REQUIRE(bits.status == 0);
    const auto rn = nlohmann::json::parse(nats.out).at("rows").at(0);
    const auto rb = nlohmann::json::parse(bits.out).at("rows").at(0);
    CHECK(rb.at("mutual_info_bits").get<double>() ==
          doctest::Approx(rn.at("mutual_info_nats").get<double>() / M_LN2).epsilon(1e-15));
    CHECK(rb.at("cond_entropy_bits").get<double>() ==
          doctest::Approx(rn.at("cond_entropy_nats").get<double>() / M_LN2).epsilon(1e-15));
    // second-order quantities convert by the squared factor
    CHECK(rb.at("dispersion_bits2").get<double>() ==
          doctest::Approx(rn.at("dispersion_nats2").get<double>() / (M_LN2 * M_LN2))
              .epsilon(1e-15));
}

TEST_CASE("del-bounds scales past the exact-table range") {
    const auto res = run({"del-bounds", "--n", "200", "--delta", "0.3"});
    REQUIRE(res.status == 0);
    // naive and fractional bounds present; the alternating column is empty
    CHECK(csv_value(res.out, "bound_naive_nats") ==
          doctest::Approx(-200.0 * std::log(0.3)).epsilon(1e-12));
    CHECK(csv_value(res.out, "bound_fractional_nats") <= -std::log(0.3) + 0.3);
    std::istringstream ss(res.out);
    std::string header, line;
    std::getline(ss, header);
    std::getline(ss, line);
    CHECK(line.find(",,") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({"chernoff", "--channel", "nonsense"}).status == 2);
    CHECK(run({"chernoff"}).status == 2);  // missing required option
    CHECK(run({"mvinfo", "--channel", "bec:0.5", "--d", "40", "--budget-types", "10"}).status ==
          3);
    CHECK(run({"del-rho", "--n", "12", "--delta", "0.5"}).status == 3);  // over the pair gate
    CHECK(run({"--help"}).status == 0);
}
